"""The unit moved through search: a tree, its optimal order, its objective."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import SpanningTree
from .model import EdgeSchedule, ProblemInstance, evaluate
from .tree_solvers import optimal_schedule


@dataclass(frozen=True)
class Solution:
    tree: SpanningTree
    schedule: EdgeSchedule
    objective: int


def solve_tree(inst: ProblemInstance, tree: SpanningTree) -> Solution:
    """ES(T) plus its objective, wrapped as a Solution."""
    sched = optimal_schedule(inst, tree)
    obj, _ = evaluate(inst, sched)
    return Solution(tree, sched, obj)
