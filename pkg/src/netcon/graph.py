"""Graph primitives: networks, all-pairs shortest paths, spanning trees, contraction.

All lengths and distances are exact integers; there are no floating-point
tolerances anywhere in this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np


class GraphError(ValueError):
    """Invalid graph data or a violated structural precondition."""


class EmptyPathError(GraphError):
    """Path reconstruction requested between a vertex and itself."""


@dataclass(frozen=True)
class Network:
    """Undirected connected network with positive integer edge lengths.

    ``edges`` is a tuple of ``(a, b, length)`` triples; edge ids are positions
    in this tuple.  ``depot`` is the server's start vertex.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    depot: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple((int(a), int(b), int(w)) for a, b, w in self.edges)
        )
        if self.n < 1:
            raise GraphError("network needs at least one vertex")
        if not 0 <= self.depot < self.n:
            raise GraphError(f"depot {self.depot} out of range")
        seen = set()
        for eid, (a, b, w) in enumerate(self.edges):
            if a == b:
                raise GraphError(f"edge {eid} is a self-loop")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise GraphError(f"edge {eid} endpoint out of range")
            if w <= 0:
                raise GraphError(f"edge {eid} has non-positive length {w}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise GraphError(f"duplicate edge between {key[0]} and {key[1]}")
            seen.add(key)
        # connectivity
        uf = _UnionFind(self.n)
        for a, b, _ in self.edges:
            uf.union(a, b)
        if any(uf.find(v) != uf.find(0) for v in range(self.n)):
            raise GraphError("network is not connected")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def total_length(self) -> int:
        return sum(w for _, _, w in self.edges)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {
            (min(a, b), max(a, b)): eid for eid, (a, b, _) in enumerate(self.edges)
        }

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        """Per vertex: tuple of (neighbor, edge id, length), neighbors ascending."""
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.n)]
        for eid, (a, b, w) in enumerate(self.edges):
            adj[a].append((b, eid, w))
            adj[b].append((a, eid, w))
        return tuple(tuple(sorted(lst)) for lst in adj)


class _UnionFind:
    """Disjoint sets; the canonical representative is the smallest member id."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx > ry:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def _floyd_warshall(dist: np.ndarray) -> np.ndarray:
    """In-place Floyd-Warshall on an int64 distance matrix."""
    n = dist.shape[0]
    for k in range(n):
        np.minimum(dist, dist[:, k : k + 1] + dist[k : k + 1, :], out=dist)
    return dist


def _canonical_tips(
    dist: np.ndarray, neighbors_of, vertices, inactive_value: int = -1
) -> np.ndarray:
    """Predecessor matrix derived purely from ``dist`` and the adjacency.

    ``tip[u, v]`` is the smallest neighbor ``w`` of ``v`` lying on a shortest
    ``u``-``v`` path, i.e. with ``dist[u, w] + len(w, v) == dist[u, v]``.
    Being a function of the distance matrix alone (given the adjacency), the
    same rule applied after an incremental distance update and after a full
    recompute yields identical tips.
    """
    n = dist.shape[0]
    tip = np.full((n, n), inactive_value, dtype=np.int64)
    for v in vertices:
        nbrs = neighbors_of(v)
        if not nbrs:
            tip[v, v] = v
            continue
        ws = np.fromiter((w for w, _ in nbrs), dtype=np.int64)
        ls = np.fromiter((l for _, l in nbrs), dtype=np.int64)
        cand = dist[:, ws] + ls
        eq = cand == dist[:, v : v + 1]
        idx = eq.argmax(axis=1)
        tip[:, v] = ws[idx]
        tip[v, v] = v
    return tip


@dataclass(frozen=True, eq=False)
class DistanceOracle:
    """All-pairs shortest-path distances plus backtracking tips."""

    net: Network
    dist: np.ndarray
    tip: np.ndarray


def all_pairs_shortest_paths(net: Network) -> DistanceOracle:
    big = np.int64(net.total_length + 1)
    dist = np.full((net.n, net.n), big, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    for a, b, w in net.edges:
        dist[a, b] = dist[b, a] = w
    _floyd_warshall(dist)

    def neighbors_of(v):
        return [(w, l) for w, _, l in net.adjacency[v]]

    tip = _canonical_tips(dist, neighbors_of, range(net.n))
    return DistanceOracle(net, dist, tip)


@lru_cache(maxsize=64)
def cached_oracle(net: Network) -> DistanceOracle:
    return all_pairs_shortest_paths(net)


def reconstruct_path(oracle: DistanceOracle, u: int, v: int) -> list[int]:
    """Edge ids of a shortest u-v path, in order from u to v."""
    if u == v:
        raise EmptyPathError("no path between a vertex and itself")
    index = oracle.net.edge_index
    path = []
    cur = v
    while cur != u:
        prev = int(oracle.tip[u, cur])
        path.append(index[(min(prev, cur), max(prev, cur))])
        cur = prev
    path.reverse()
    return path


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree given by edge ids plus a parent map rooted at the depot."""

    net: Network
    edge_ids: tuple[int, ...]
    parent: tuple[tuple[int, int], ...]  # vertex -> (parent vertex, edge id); depot -> (-1, -1)

    @classmethod
    def from_edges(cls, net: Network, edge_ids) -> "SpanningTree":
        ids = tuple(sorted(edge_ids))
        if len(ids) != net.n - 1 or len(set(ids)) != len(ids):
            raise GraphError(f"expected {net.n - 1} distinct edges, got {len(ids)}")
        adj: list[list[tuple[int, int]]] = [[] for _ in range(net.n)]
        for eid in ids:
            a, b, _ = net.edges[eid]
            adj[a].append((b, eid))
            adj[b].append((a, eid))
        parent = [(-2, -2)] * net.n
        parent[net.depot] = (-1, -1)
        stack = [net.depot]
        seen = 1
        while stack:
            v = stack.pop()
            for w, eid in adj[v]:
                if parent[w] == (-2, -2):
                    parent[w] = (v, eid)
                    seen += 1
                    stack.append(w)
        if seen != net.n:
            raise GraphError("edge set does not span all vertices")
        return cls(net, ids, tuple(parent))

    @cached_property
    def edge_child(self) -> dict[int, int]:
        """Edge id -> the endpoint farther from the depot."""
        return {eid: v for v, (_, eid) in enumerate(self.parent) if eid >= 0}

    @cached_property
    def depth(self) -> tuple[int, ...]:
        d = [-1] * self.net.n
        d[self.net.depot] = 0
        for v in range(self.net.n):
            chain = []
            x = v
            while d[x] < 0:
                chain.append(x)
                x = self.parent[x][0]
            base = d[x]
            for y in reversed(chain):
                base += 1
                d[y] = base
        return tuple(d)

    @cached_property
    def total_length(self) -> int:
        return sum(self.net.edges[eid][2] for eid in self.edge_ids)

    def path_edges(self, u: int, v: int) -> list[int]:
        """Tree edges on the unique u-v path, in order from u to v."""
        depth = self.depth
        up, down = [], []
        while depth[u] > depth[v]:
            up.append(self.parent[u][1])
            u = self.parent[u][0]
        while depth[v] > depth[u]:
            down.append(self.parent[v][1])
            v = self.parent[v][0]
        while u != v:
            up.append(self.parent[u][1])
            down.append(self.parent[v][1])
            u = self.parent[u][0]
            v = self.parent[v][0]
        return up + down[::-1]


def minimum_spanning_tree(net: Network) -> SpanningTree:
    """Kruskal with ascending (length, edge id) order for deterministic ties."""
    uf = _UnionFind(net.n)
    chosen = []
    for w, eid, a, b in sorted(
        (w, eid, a, b) for eid, (a, b, w) in enumerate(net.edges)
    ):
        if uf.union(a, b):
            chosen.append(eid)
            if len(chosen) == net.n - 1:
                break
    return SpanningTree.from_edges(net, chosen)


def spanning_tree_cycle(tree: SpanningTree, non_tree_edge: int) -> list[int]:
    """Tree edges of the cycle closed by inserting ``non_tree_edge``."""
    if non_tree_edge in set(tree.edge_ids):
        raise GraphError(f"edge {non_tree_edge} is already in the tree")
    a, b, _ = tree.net.edges[non_tree_edge]
    return tree.path_edges(a, b)


class ContractedGraph:
    """A network under repeated edge contraction with maintained distances.

    Super-vertices are tracked by a disjoint-set structure whose canonical
    representative is the smallest original vertex id.  ``dist`` stays a full
    n-by-n matrix; only rows/columns of active representatives are meaningful.
    Parallel edges are reduced to the shortest one (tie: smallest original
    edge id); loops are removed.
    """

    def __init__(self, net: Network, oracle: DistanceOracle | None = None):
        self.net = net
        self._uf = _UnionFind(net.n)
        self.active = [True] * net.n
        # adj[r]: dict of other representative -> (length, original edge id)
        self.adj: list[dict[int, tuple[int, int]]] = [{} for _ in range(net.n)]
        for eid, (a, b, w) in enumerate(net.edges):
            cur = self.adj[a].get(b)
            if cur is None or (w, eid) < cur:
                self.adj[a][b] = (w, eid)
                self.adj[b][a] = (w, eid)
        if oracle is None:
            oracle = all_pairs_shortest_paths(net)
        self.dist = oracle.dist.copy()

    def find(self, v: int) -> int:
        return self._uf.find(v)

    def active_vertices(self) -> list[int]:
        return [v for v in range(self.net.n) if self.active[v]]

    def num_components(self) -> int:
        return sum(self.active)

    def contract_edge(self, x: int, y: int) -> int:
        """Merge adjacent super-vertices x and y; returns the merged id."""
        x, y = self.find(x), self.find(y)
        if x == y or y not in self.adj[x]:
            raise GraphError(f"vertices {x} and {y} are not adjacent super-vertices")
        z, gone = min(x, y), max(x, y)
        dist = self.dist
        dx = dist[:, x].copy()
        dy = dist[:, y].copy()
        alt = dx[:, None] + dy[None, :]
        np.minimum(dist, alt, out=dist)
        np.minimum(dist, alt.T, out=dist)
        dz = np.minimum(dx, dy)
        dist[:, z] = dz
        dist[z, :] = dz
        dist[z, z] = 0

        del self.adj[x][y]
        del self.adj[y][x]
        merged: dict[int, tuple[int, int]] = {}
        for side in (x, y):
            for u, entry in self.adj[side].items():
                if u not in merged or entry < merged[u]:
                    merged[u] = entry
        for u in set(self.adj[x]) | set(self.adj[y]):
            self.adj[u].pop(x, None)
            self.adj[u].pop(y, None)
        for u, entry in merged.items():
            self.adj[u][z] = entry
        self.adj[z] = merged
        self.adj[gone] = {}
        self._uf.union(x, y)
        self.active[gone] = False
        return z

    def tips(self) -> np.ndarray:
        """Canonical predecessor matrix over active super-vertices (-1 elsewhere)."""
        actives = self.active_vertices()

        def neighbors_of(v):
            return sorted((w, entry[0]) for w, entry in self.adj[v].items())

        tip = _canonical_tips(self.dist, neighbors_of, actives)
        mask = np.zeros(self.net.n, dtype=bool)
        mask[actives] = True
        tip[~mask, :] = -1
        tip[:, ~mask] = -1
        return tip

    def shortest_path_edges(self, a: int, b: int) -> list[int]:
        """Original edge ids of the canonical shortest path between the
        super-vertices of ``a`` and ``b``.

        The canonical rule walks back from the larger representative: the
        predecessor of ``w`` is the smallest adjacent representative ``p``
        with ``dist[s, p] + len(p, w) == dist[s, w]``.
        """
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise GraphError("endpoints are in the same super-vertex")
        s, t = min(ra, rb), max(ra, rb)
        dist = self.dist
        path = []
        cur = t
        while cur != s:
            target = dist[s, cur]
            for p in sorted(self.adj[cur]):
                length, eid = self.adj[cur][p]
                if dist[s, p] + length == target:
                    path.append(eid)
                    cur = p
                    break
            else:  # pragma: no cover - impossible for consistent state
                raise GraphError("distance matrix inconsistent with adjacency")
        path.reverse()
        return path
