"""Tabu Search and Iterated Local Search over both neighborhood kinds."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, replace

from .graph import SpanningTree, _UnionFind, cached_oracle
from .model import (
    IT_VARIANTS,
    ProblemInstance,
    VSequence,
    pairs_connection_sequence,
    vertex_recovery_sequence,
)
from .neighborhoods import (
    NET,
    SCH,
    EdgeExchange,
    PairShift,
    VertexShift,
    a_et,
    a_it,
    apply_pair_shift,
    apply_vertex_shift,
    enumerate_pair_shifts,
    neighbors,
)
from .local_search import impr, loc, mst_loc
from .solution import Solution, solve_tree

ILS = "ILS"
TS = "TS"

# Recommended control parameters per variant:
# (ILS-NET shake, ILS-SCH shake, TS-NET tenure limits, TS-SCH tenure limits)
DEFAULT_PARAMS: dict[str, dict[str, object]] = {
    "USRT": {"ils_net": 0.11, "ils_sch": 0.36, "ts_net": (5, 17), "ts_sch": (4, 12)},
    "SWRT": {"ils_net": 0.24, "ils_sch": 0.35, "ts_net": (6, 16), "ts_sch": (5, 11)},
    "L": {"ils_net": 0.23, "ils_sch": 0.46, "ts_net": (7, 14), "ts_sch": (7, 17)},
    "L_ETPC": {"ils_net": 0.03, "ils_sch": 0.14, "ts_net": (7, 14), "ts_sch": (5, 17)},
}


@dataclass(frozen=True)
class SearchConfig:
    algorithm: str  # ILS or TS
    kind: str  # NET or SCH
    time_limit: float = 600.0
    seed: int = 0
    shake_p: float | None = None  # ILS
    tenure_min: int | None = None  # TS
    tenure_max: int | None = None  # TS
    max_iters: int | None = None  # optional deterministic stopping point
    target_objective: int | None = None  # stop early once reached
    accept: str = "always"  # ILS acceptance: "always" or "better"

    def __post_init__(self):
        if self.algorithm not in (ILS, TS):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.kind not in (NET, SCH):
            raise ValueError(f"unknown neighborhood kind {self.kind!r}")
        if self.shake_p is not None and not 0.0 <= self.shake_p <= 1.0:
            raise ValueError("shake_p must be within [0, 1]")
        if (
            self.tenure_min is not None
            and self.tenure_max is not None
            and not 0 < self.tenure_min <= self.tenure_max
        ):
            raise ValueError("need 0 < tenure_min <= tenure_max")
        if self.accept not in ("always", "better"):
            raise ValueError(f"unknown acceptance rule {self.accept!r}")


def default_config(variant: str, algorithm: str, kind: str, **overrides) -> SearchConfig:
    """Config populated with the recommended parameters for the variant."""
    params = DEFAULT_PARAMS[variant]
    key = f"{algorithm.lower()}_{kind.lower()}"
    cfg = SearchConfig(algorithm=algorithm, kind=kind)
    if algorithm == ILS:
        cfg = replace(cfg, shake_p=params[key])
    else:
        lo, hi = params[key]
        cfg = replace(cfg, tenure_min=lo, tenure_max=hi)
    return replace(cfg, **overrides)


class TabuList:
    """Items (edge or vertex ids) with expiry iterations."""

    def __init__(self):
        self.entries: dict[int, int] = {}

    def add(self, item: int, until: int):
        self.entries[item] = max(until, self.entries.get(item, -1))

    def active(self, item: int, iteration: int) -> bool:
        return self.entries.get(item, -1) >= iteration

    def clear(self):
        self.entries.clear()


def _move_items(move) -> tuple[int, ...]:
    if isinstance(move, EdgeExchange):
        return (move.add, move.remove)
    if isinstance(move, VertexShift):
        return (move.vertex,)
    return move.pair


def _is_tabu(move, tabu: TabuList, iteration: int) -> bool:
    return any(tabu.active(item, iteration) for item in _move_items(move))


class _Deadline:
    def __init__(self, seconds: float):
        self.end = time.monotonic() + seconds

    def reached(self) -> bool:
        return time.monotonic() >= self.end


def shake(inst: ProblemInstance, s: Solution, kind: str, p: float, rng: random.Random) -> Solution:
    """Random perturbation of a solution, controlled by p."""
    if kind == NET:
        return _shake_net(inst, s, p, rng)
    if inst.variant in IT_VARIANTS:
        return _shake_vertex(inst, s, p, rng)
    return _shake_pair(inst, s, p, rng)


def _shake_net(inst, s, p, rng) -> Solution:
    net = inst.net
    kept = [eid for eid in s.tree.edge_ids if rng.random() >= p]
    uf = _UnionFind(net.n)
    for eid in kept:
        a, b, _ = net.edges[eid]
        uf.union(a, b)
    candidates = list(range(net.m))
    rng.shuffle(candidates)
    ids = set(kept)
    for eid in candidates:
        if len(ids) == net.n - 1:
            break
        a, b, _ = net.edges[eid]
        if uf.union(a, b):
            ids.add(eid)
    return solve_tree(inst, SpanningTree.from_edges(net, ids))


def _shake_vertex(inst, s, p, rng) -> Solution:
    net = inst.net
    seq = vertex_recovery_sequence(inst, s.schedule)
    moves = math.ceil(p * (net.n - 1))
    order = list(seq.order)
    for _ in range(moves):
        if len(order) < 2:
            break
        j = rng.randrange(1, len(order))
        i = rng.randrange(j)
        seq2 = apply_vertex_shift(VSequence(tuple(order)), VertexShift(order[j], i))
        order = list(seq2.order)
    tree = a_it(net, cached_oracle(net), VSequence(tuple(order)))
    return solve_tree(inst, tree)


def _shake_pair(inst, s, p, rng) -> Solution:
    moves = math.ceil(p * inst.q)
    cur = s
    oracle = cached_oracle(inst.net)
    for _ in range(moves):
        seq = pairs_connection_sequence(inst, cur.schedule, reduced=True)
        options = list(enumerate_pair_shifts(seq))
        if not options:
            break
        move = options[rng.randrange(len(options))]
        tree = a_et(inst.net, apply_pair_shift(seq, move), oracle)
        cur = solve_tree(inst, tree)
    return cur


def iterated_local_search(inst: ProblemInstance, cfg: SearchConfig) -> Solution:
    """ILS: MST-LOC start, then shake / descend cycles until the time limit."""
    if cfg.algorithm != ILS:
        raise ValueError("config is not an ILS config")
    cfg = _fill_defaults(inst, cfg)
    rng = random.Random(cfg.seed)
    deadline = _Deadline(cfg.time_limit)
    incumbent = best = mst_loc(inst, cfg.kind)
    iteration = 0
    while not deadline.reached() and not _hit_target(best, cfg):
        if cfg.max_iters is not None and iteration >= cfg.max_iters:
            break
        iteration += 1
        shaken = shake(inst, incumbent, cfg.kind, cfg.shake_p, rng)
        local = loc(inst, shaken, cfg.kind)
        if local.objective < best.objective:
            best = local
        if cfg.accept == "always" or local.objective < incumbent.objective:
            incumbent = local
    return best


def tabu_search(inst: ProblemInstance, cfg: SearchConfig) -> Solution:
    """TS: full-neighborhood steps with per-item tabu tenures."""
    if cfg.algorithm != TS:
        raise ValueError("config is not a TS config")
    cfg = _fill_defaults(inst, cfg)
    rng = random.Random(cfg.seed)
    deadline = _Deadline(cfg.time_limit)
    incumbent = best = mst_loc(inst, cfg.kind)
    tabu = TabuList()
    iteration = 0
    while not deadline.reached() and not _hit_target(best, cfg):
        if cfg.max_iters is not None and iteration >= cfg.max_iters:
            break
        iteration += 1
        best_nb = None  # (objective, move, solution)
        best_free = None
        timed_out = False
        for move, sol in neighbors(inst, incumbent, cfg.kind):
            if best_nb is None or sol.objective < best_nb[0]:
                best_nb = (sol.objective, move, sol)
            if not _is_tabu(move, tabu, iteration) and (
                best_free is None or sol.objective < best_free[0]
            ):
                best_free = (sol.objective, move, sol)
            if deadline.reached():
                timed_out = True
                break
        if best_nb is None:
            break  # degenerate: no neighborhood at all
        if best_nb[0] < best.objective:
            incumbent = best = impr(inst, best_nb[2])
            tabu.clear()
        else:
            step = best_free if best_free is not None else best_nb
            incumbent = step[2]
            for item in _move_items(step[1]):
                tenure = rng.randint(cfg.tenure_min, cfg.tenure_max)
                tabu.add(item, iteration + tenure)
        if timed_out:
            break
    return best


def run(inst: ProblemInstance, cfg: SearchConfig) -> Solution:
    if cfg.algorithm == ILS:
        return iterated_local_search(inst, cfg)
    return tabu_search(inst, cfg)


def _fill_defaults(inst: ProblemInstance, cfg: SearchConfig) -> SearchConfig:
    params = DEFAULT_PARAMS[inst.variant]
    key = f"{cfg.algorithm.lower()}_{cfg.kind.lower()}"
    if cfg.algorithm == ILS and cfg.shake_p is None:
        cfg = replace(cfg, shake_p=params[key])
    if cfg.algorithm == TS and (cfg.tenure_min is None or cfg.tenure_max is None):
        lo, hi = params[key]
        cfg = replace(cfg, tenure_min=lo, tenure_max=hi)
    return cfg


def _hit_target(best: Solution, cfg: SearchConfig) -> bool:
    return cfg.target_objective is not None and best.objective <= cfg.target_objective
