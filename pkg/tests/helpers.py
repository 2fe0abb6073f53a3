"""Shared fixtures: tiny named networks, random generators, independent oracles."""
from __future__ import annotations

import itertools
import random

import networkx as nx
import numpy as np

from netcon import (
    L,
    L_ETPC,
    SWRT,
    USRT,
    EdgeSchedule,
    Network,
    ProblemInstance,
    SpanningTree,
)
from netcon.graph import _canonical_tips, _floyd_warshall


def tri() -> Network:
    """Triangle: e0=(0,1,1), e1=(0,2,3), e2=(1,2,1), depot 0."""
    return Network(3, ((0, 1, 1), (0, 2, 3), (1, 2, 1)), depot=0)


def to_nx(net: Network) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(net.n))
    for eid, (a, b, w) in enumerate(net.edges):
        g.add_edge(a, b, key=eid, weight=w)
    return g


def nx_distances(net: Network) -> dict[tuple[int, int], int]:
    g = to_nx(net)
    out = {}
    for u, lengths in nx.all_pairs_dijkstra_path_length(g, weight="weight"):
        for v, d in lengths.items():
            out[(u, v)] = int(d)
    return out


def random_network(
    rng: random.Random,
    n: int,
    extra_edges: int | None = None,
    max_len: int = 20,
    complete: bool = False,
) -> Network:
    """Connected network: random spanning tree plus extra distinct edges."""
    pairs = list(itertools.combinations(range(n), 2))
    if complete:
        chosen = pairs
    else:
        perm = list(range(n))
        rng.shuffle(perm)
        tree_pairs = {
            tuple(sorted((perm[i], perm[rng.randrange(i)]))) for i in range(1, n)
        }
        rest = [p for p in pairs if p not in tree_pairs]
        rng.shuffle(rest)
        if extra_edges is None:
            extra_edges = rng.randrange(0, min(len(rest), n) + 1)
        chosen = sorted(tree_pairs | set(rest[:extra_edges]))
    edges = tuple((a, b, rng.randint(1, max_len)) for a, b in chosen)
    return Network(n, edges, depot=rng.randrange(n))


def random_spanning_tree(rng: random.Random, net: Network) -> SpanningTree:
    order = list(range(net.m))
    rng.shuffle(order)
    parent = list(range(net.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ids = []
    for eid in order:
        a, b, _ = net.edges[eid]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            ids.append(eid)
    return SpanningTree.from_edges(net, ids)


def random_feasible_order(rng: random.Random, tree: SpanningTree) -> EdgeSchedule:
    """Uniform-ish feasible e-sequence: grow the built part from the depot."""
    net = tree.net
    built = {net.depot}
    remaining = set(tree.edge_ids)
    order = []
    while remaining:
        frontier = [
            eid
            for eid in remaining
            if net.edges[eid][0] in built or net.edges[eid][1] in built
        ]
        eid = frontier[rng.randrange(len(frontier))]
        remaining.discard(eid)
        order.append(eid)
        built.update(net.edges[eid][:2])
    return EdgeSchedule(tree, tuple(order))


def random_order(rng: random.Random, tree: SpanningTree) -> EdgeSchedule:
    order = list(tree.edge_ids)
    rng.shuffle(order)
    return EdgeSchedule(tree, tuple(order))


def random_instance(
    rng: random.Random,
    variant: str,
    n: int,
    max_len: int = 20,
    max_weight: int = 10,
    max_pairs: int = 8,
    **net_kwargs,
) -> ProblemInstance:
    net = random_network(rng, n, max_len=max_len, **net_kwargs)
    return attach_data(rng, net, variant, max_weight=max_weight, max_pairs=max_pairs)


def attach_data(
    rng: random.Random,
    net: Network,
    variant: str,
    max_weight: int = 10,
    max_pairs: int = 8,
) -> ProblemInstance:
    horizon = net.total_length
    if variant == USRT:
        return ProblemInstance(net, USRT)
    if variant == SWRT:
        weights = tuple(rng.randint(1, max_weight) for _ in range(net.n))
        return ProblemInstance(net, SWRT, weights=weights)
    if variant == L:
        due = tuple(rng.randint(0, horizon) for _ in range(net.n))
        return ProblemInstance(net, L, vertex_due_dates=due)
    pairs = list(itertools.combinations(range(net.n), 2))
    q = rng.randint(1, min(max_pairs, len(pairs)))
    sample = rng.sample(pairs, q)
    return ProblemInstance(
        net, L_ETPC, pair_due_dates={p: rng.randint(0, horizon) for p in sample}
    )


def recompute_contracted(cg):
    """Independent (dist, tips) for a ContractedGraph state: fresh Floyd-Warshall
    over the surviving parallel-edge minima, plus the same canonical tip rule."""
    n = cg.net.n
    active = cg.active_vertices()
    big = 1 << 40
    dist = np.full((n, n), big, dtype=np.int64)
    for v in active:
        dist[v, v] = 0
    for x in active:
        for y, (length, _) in cg.adj[x].items():
            if length < dist[x, y]:
                dist[x, y] = dist[y, x] = length
    sub = dist[np.ix_(active, active)]
    _floyd_warshall(sub)
    dist[np.ix_(active, active)] = sub

    def neighbors_of(v):
        return [(y, length) for y, (length, _) in sorted(cg.adj[v].items())]

    tips = _canonical_tips(dist, neighbors_of, active)
    return dist, tips
