"""Instance generation for the three benchmark families, plus JSON (de)serialization.

All geometry is integer-only (grid coordinates, rounded distances), so the
same seed reproduces the same instance on any platform.
"""
from __future__ import annotations

import json
import math
import random
import warnings
from dataclasses import dataclass

import numpy as np

from .graph import Network, _floyd_warshall, minimum_spanning_tree
from .model import L, L_ETPC, SWRT, USRT, VARIANTS, ProblemInstance

FORMAT_VERSION = 1
GRID = 1000  # coordinates drawn from [0, GRID]^2

EUCLIDEAN_COMPLETE = "euclidean_complete"
RANDOM_METRIC = "random_metric"
PLANAR_ROAD = "planar_road"
FAMILIES = (EUCLIDEAN_COMPLETE, RANDOM_METRIC, PLANAR_ROAD)


class InstanceFormatError(ValueError):
    """Malformed instance file; ``field`` names the offending entry."""

    def __init__(self, field_path: str, message: str):
        self.field = field_path
        super().__init__(f"{field_path}: {message}")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    seed: int
    variant: str
    weight_range: tuple[int, int] = (1, 10)
    pair_multiplier: int = 6
    length_range: tuple[int, int] = (1, 1000)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")


def _rounded_dist(p: tuple[int, int], q: tuple[int, int]) -> int:
    d2 = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
    r = math.isqrt(d2)
    if d2 - r * r > r:  # nearer to r + 1
        r += 1
    return r


def _sample_points(rng: random.Random, n: int) -> list[tuple[int, int]]:
    points: list[tuple[int, int]] = []
    used = set()
    while len(points) < n:
        p = (rng.randrange(GRID + 1), rng.randrange(GRID + 1))
        if p not in used:
            used.add(p)
            points.append(p)
    return points


def generate(spec: GeneratorSpec) -> ProblemInstance:
    """Deterministic per-seed instance for the given family and variant."""
    rng = random.Random(spec.seed)
    if spec.family == EUCLIDEAN_COMPLETE:
        net = _euclidean_complete(rng, spec.n)
    elif spec.family == RANDOM_METRIC:
        net = _random_metric(rng, spec.n, spec.length_range)
    else:
        net = _planar_road(rng, spec.n)
    return _attach_variant_data(rng, net, spec)


def _euclidean_complete(rng: random.Random, n: int) -> Network:
    points = _sample_points(rng, n)
    edges = [
        (i, j, _rounded_dist(points[i], points[j]))
        for i in range(n)
        for j in range(i + 1, n)
    ]
    return Network(n, tuple(edges), depot=rng.randrange(n))


def _random_metric(rng: random.Random, n: int, length_range) -> Network:
    lo, hi = length_range
    raw = [
        (i, j, rng.randint(lo, hi)) for i in range(n) for j in range(i + 1, n)
    ]
    dist = np.zeros((n, n), dtype=np.int64)
    for a, b, w in raw:
        dist[a, b] = dist[b, a] = w
    _floyd_warshall(dist)
    edges = [(a, b, int(dist[a, b])) for a, b, _ in raw]
    return Network(n, tuple(edges), depot=rng.randrange(n))


def _segments_cross(p1, p2, p3, p4) -> bool:
    """True if the segments share any point other than a common endpoint."""
    if len({p1, p2} & {p3, p4}) == 1:
        # sharing one endpoint: only a problem if collinear overlap occurs
        shared = ({p1, p2} & {p3, p4}).pop()
        a = p2 if p1 == shared else p1
        b = p4 if p3 == shared else p3
        return _orient(shared, a, b) == 0 and _on_segment(shared, a, b) or (
            _orient(shared, b, a) == 0 and _on_segment(shared, b, a)
        )
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 and d2 and d3 and d4:
        return True
    for a, b, c in ((p3, p4, p1), (p3, p4, p2), (p1, p2, p3), (p1, p2, p4)):
        if _orient(a, b, c) == 0 and _on_segment(a, c, b):
            return True
    return False


def _orient(a, b, c) -> int:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, c, b) -> bool:
    """c strictly inside the bounding box of collinear a, b."""
    return (
        min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        and c != a
        and c != b
    )


def _planar_road(rng: random.Random, n: int) -> Network:
    """Euclidean MST plus the shortest non-crossing augmenting edges."""
    points = _sample_points(rng, n)

    def d2(i, j):
        return (points[i][0] - points[j][0]) ** 2 + (points[i][1] - points[j][1]) ** 2

    all_pairs = sorted(
        ((i, j) for i in range(n) for j in range(i + 1, n)),
        key=lambda p: (d2(*p), p),
    )
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen: list[tuple[int, int]] = []
    for i, j in all_pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
            chosen.append((i, j))
            if len(chosen) == n - 1:
                break
    target = math.ceil(1.75 * n)
    in_net = set(chosen)
    for i, j in all_pairs:
        if len(chosen) >= target:
            break
        if (i, j) in in_net:
            continue
        if any(
            _segments_cross(points[i], points[j], points[a], points[b])
            for a, b in chosen
        ):
            continue
        chosen.append((i, j))
        in_net.add((i, j))
    if len(chosen) < target:
        warnings.warn(
            f"planar road target of {target} edges unreachable without "
            f"crossings; produced {len(chosen)}"
        )
    edges = tuple((i, j, _rounded_dist(points[i], points[j])) for i, j in chosen)
    return Network(n, edges, depot=rng.randrange(n))


def _attach_variant_data(rng: random.Random, net: Network, spec: GeneratorSpec) -> ProblemInstance:
    if spec.variant == USRT:
        return ProblemInstance(net, USRT)
    if spec.variant == SWRT:
        lo, hi = spec.weight_range
        weights = tuple(rng.randint(lo, hi) for _ in range(net.n))
        return ProblemInstance(net, SWRT, weights=weights)
    horizon = minimum_spanning_tree(net).total_length
    if spec.variant == L:
        due = tuple(rng.randint(0, horizon) for _ in range(net.n))
        return ProblemInstance(net, L, vertex_due_dates=due)
    all_pairs = [(i, j) for i in range(net.n) for j in range(i + 1, net.n)]
    q = min(spec.pair_multiplier * net.n, len(all_pairs))
    pairs = sorted(rng.sample(all_pairs, q))
    due_dates = {p: rng.randint(0, horizon) for p in pairs}
    return ProblemInstance(net, L_ETPC, pair_due_dates=due_dates)


def instance_to_dict(inst: ProblemInstance, family: str | None = None) -> dict:
    doc: dict = {
        "format_version": FORMAT_VERSION,
        "variant": inst.variant,
        "n": inst.net.n,
        "depot": inst.net.depot,
        "edges": [list(e) for e in inst.net.edges],
    }
    if inst.variant in (USRT, SWRT):
        doc["weights"] = list(inst.weights)
    elif inst.variant == L:
        doc["vertex_due_dates"] = list(inst.vertex_due_dates)
    else:
        doc["pair_due_dates"] = [
            [u, v, d] for (u, v), d in sorted(inst.pair_due_dates.items())
        ]
    if family is not None:
        doc["family"] = family
    return doc


def write_instance(inst: ProblemInstance, path, family: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(inst, family), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _require(doc: dict, key: str, kind) -> object:
    if key not in doc:
        raise InstanceFormatError(key, "missing required field")
    value = doc[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise InstanceFormatError(key, f"expected {kind.__name__}")
    return value


def instance_from_dict(doc: dict) -> ProblemInstance:
    version = _require(doc, "format_version", int)
    if version != FORMAT_VERSION:
        raise InstanceFormatError("format_version", f"unsupported version {version}")
    variant = _require(doc, "variant", str)
    if variant not in VARIANTS:
        raise InstanceFormatError("variant", f"unknown variant {variant!r}")
    n = _require(doc, "n", int)
    depot = _require(doc, "depot", int)
    edges_doc = _require(doc, "edges", list)
    edges = []
    for k, item in enumerate(edges_doc):
        if not (isinstance(item, list) and len(item) == 3) or any(
            not isinstance(x, int) or isinstance(x, bool) for x in item
        ):
            raise InstanceFormatError(f"edges[{k}]", "expected [a, b, length]")
        edges.append(tuple(item))
    try:
        net = Network(n, tuple(edges), depot=depot)
    except ValueError as exc:
        raise InstanceFormatError("edges", str(exc)) from exc
    kwargs = {}
    if variant == SWRT:
        weights = _require(doc, "weights", list)
        _check_int_list("weights", weights, n)
        kwargs["weights"] = tuple(weights)
    elif variant == L:
        due = _require(doc, "vertex_due_dates", list)
        _check_int_list("vertex_due_dates", due, n)
        kwargs["vertex_due_dates"] = tuple(due)
    elif variant == L_ETPC:
        raw = _require(doc, "pair_due_dates", list)
        pairs = {}
        for k, item in enumerate(raw):
            if not (isinstance(item, list) and len(item) == 3) or any(
                not isinstance(x, int) or isinstance(x, bool) for x in item
            ):
                raise InstanceFormatError(f"pair_due_dates[{k}]", "expected [u, v, d]")
            pairs[(item[0], item[1])] = item[2]
        kwargs["pair_due_dates"] = pairs
    try:
        return ProblemInstance(net, variant, **kwargs)
    except ValueError as exc:
        raise InstanceFormatError(variant, str(exc)) from exc


def _check_int_list(name: str, values: list, n: int) -> None:
    if len(values) != n:
        raise InstanceFormatError(name, f"expected {n} entries, got {len(values)}")
    for k, x in enumerate(values):
        if not isinstance(x, int) or isinstance(x, bool):
            raise InstanceFormatError(f"{name}[{k}]", "expected an integer")


def read_instance(path) -> ProblemInstance:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError("<root>", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceFormatError("<root>", "expected a JSON object")
    return instance_from_dict(doc)


def read_family(path) -> str | None:
    """Optional family annotation stored by the generator, if present."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return doc.get("family")
    except (OSError, json.JSONDecodeError):
        return None
