"""Solution improvement, first-improvement local search, and the MST heuristics."""
from __future__ import annotations

from .graph import cached_oracle, minimum_spanning_tree
from .model import (
    IT_VARIANTS,
    ProblemInstance,
    pairs_connection_sequence,
    vertex_recovery_sequence,
)
from .neighborhoods import a_et, a_it, neighbors
from .solution import Solution, solve_tree

__all__ = ["Solution", "solve_tree", "impr", "loc", "mst_heuristic", "mst_loc"]


def impr(inst: ProblemInstance, s0: Solution) -> Solution:
    """Rebuild the tree from the solution's own recovery / connection sequence
    and keep iterating while that strictly improves the objective.

    The rebuilt solution is never worse than the input; internal
    transportation variants use the vertex recovery sequence, the external
    variant the full pairs connection sequence.
    """
    cur = s0
    while True:
        if inst.variant in IT_VARIANTS:
            seq = vertex_recovery_sequence(inst, cur.schedule)
            tree = a_it(inst.net, cached_oracle(inst.net), seq)
        else:
            seq = pairs_connection_sequence(inst, cur.schedule, reduced=False)
            tree = a_et(inst.net, seq, cached_oracle(inst.net))
        cand = solve_tree(inst, tree)
        if cand.objective < cur.objective:
            cur = cand
        else:
            return cur


def loc(inst: ProblemInstance, a: Solution, kind: str) -> Solution:
    """First-improvement descent; every accepted neighbor passes through impr."""
    improved = True
    while improved:
        improved = False
        for _, sol in neighbors(inst, a, kind):
            if sol.objective < a.objective:
                a = impr(inst, sol)
                improved = True
                break
    return a


def mst_heuristic(inst: ProblemInstance) -> Solution:
    """Minimum spanning tree with its optimal construction order."""
    return solve_tree(inst, minimum_spanning_tree(inst.net))


def mst_loc(inst: ProblemInstance, kind: str) -> Solution:
    """MST start followed by local search with the given neighborhood kind."""
    return loc(inst, mst_heuristic(inst), kind)
