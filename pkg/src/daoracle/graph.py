"""Tanner graph representation and the combinatorial predicates on it.

A Tanner graph is the bipartite adjacency of a binary parity-check
matrix: variable nodes (VNs) index codeword positions, check nodes (CNs)
index parity constraints. All indices are 0-based. Graphs are immutable
after construction and safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import backend
from .errors import InputError

INF = float("inf")


@dataclass(frozen=True)
class CycleEnumeration:
    """Cycles a prospective edge would create; truncated when the cap hit.

    Each cycle is a (vns, cns) pair of ascending index tuples (the vertex
    sets of the cycle), listed in lexicographic order of the VN tuples.
    """

    cycles: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    truncated: bool

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)


@dataclass(frozen=True)
class TannerGraph:
    num_vns: int
    num_cns: int
    vn_adj: tuple[tuple[int, ...], ...] = field(repr=False)
    cn_adj: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def from_edges(cls, num_vns: int, num_cns: int,
                   edges: Iterable[tuple[int, int]]) -> "TannerGraph":
        """Build from (cn_index, vn_index) pairs; duplicates are rejected."""
        if num_vns < 0 or num_cns < 0:
            raise InputError("node counts must be non-negative")
        vn: list[list[int]] = [[] for _ in range(num_vns)]
        cn: list[list[int]] = [[] for _ in range(num_cns)]
        seen = set()
        for c, v in edges:
            if not (0 <= c < num_cns and 0 <= v < num_vns):
                raise InputError(f"edge ({c},{v}) out of range")
            if (c, v) in seen:
                raise InputError(f"duplicate edge ({c},{v})")
            seen.add((c, v))
            vn[v].append(c)
            cn[c].append(v)
        return cls(num_vns, num_cns,
                   tuple(tuple(sorted(a)) for a in vn),
                   tuple(tuple(sorted(a)) for a in cn))

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.vn_adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(c, v) for c in range(self.num_cns) for v in self.cn_adj[c]]

    def vn_degrees(self) -> list[int]:
        return [len(a) for a in self.vn_adj]

    def cn_degrees(self) -> list[int]:
        return [len(a) for a in self.cn_adj]

    def has_edge(self, c: int, v: int) -> bool:
        return v in self.cn_adj[c]

    def permuted(self, column_order: tuple[int, ...]) -> "TannerGraph":
        """Relabel VNs so that new column i is old column column_order[i]."""
        if sorted(column_order) != list(range(self.num_vns)):
            raise InputError("column_order is not a permutation")
        new_of_old = [0] * self.num_vns
        for new, old in enumerate(column_order):
            new_of_old[old] = new
        edges = [(c, new_of_old[v]) for c, v in self.edges()]
        return TannerGraph.from_edges(self.num_vns, self.num_cns, edges)


def _check_vn_set(g: TannerGraph, s) -> frozenset:
    s = frozenset(s)
    for v in s:
        if not (0 <= v < g.num_vns):
            raise InputError(f"vn index {v} out of range")
    return s


def is_stopping_set(g: TannerGraph, s) -> bool:
    """True iff every CN adjacent to s touches it at least twice.

    The empty set is not a stopping set.
    """
    s = _check_vn_set(g, s)
    if not s:
        return False
    counts: dict[int, int] = {}
    for v in s:
        for c in g.vn_adj[v]:
            counts[c] = counts.get(c, 0) + 1
    return all(k >= 2 for k in counts.values())


def emd(g: TannerGraph, s) -> int:
    """Extrinsic message degree: CNs with exactly one neighbour in s."""
    s = _check_vn_set(g, s)
    if not s:
        raise InputError("emd of an empty set is undefined")
    counts: dict[int, int] = {}
    for v in s:
        for c in g.vn_adj[v]:
            counts[c] = counts.get(c, 0) + 1
    return sum(1 for k in counts.values() if k == 1)


def peel_residual(g: TannerGraph, erased) -> frozenset:
    """Index-level peeling fixpoint: the erased set left when no CN has
    exactly one erased neighbour. Empty iff peeling would succeed."""
    erased = set(_check_vn_set(g, erased))
    missing = [0] * g.num_cns
    for v in erased:
        for c in g.vn_adj[v]:
            missing[c] += 1
    ready = [c for c in range(g.num_cns) if missing[c] == 1]
    while ready:
        c = ready.pop()
        if missing[c] != 1:
            continue
        v = next(u for u in g.cn_adj[c] if u in erased)
        erased.discard(v)
        for c2 in g.vn_adj[v]:
            missing[c2] -= 1
            if missing[c2] == 1:
                ready.append(c2)
    return frozenset(erased)


def cn_distances(vn_adj, cn_adj, v: int) -> list[int]:
    """BFS distances (edge counts) from VN v to every CN; -1 = unreachable."""
    dist_c = [-1] * len(cn_adj)
    seen_v = [False] * len(vn_adj)
    seen_v[v] = True
    frontier = [v]
    depth = 0
    while frontier:
        depth += 1
        next_c = []
        for u in frontier:
            for c in vn_adj[u]:
                if dist_c[c] < 0:
                    dist_c[c] = depth
                    next_c.append(c)
        depth += 1
        frontier = []
        for c in next_c:
            for u in cn_adj[c]:
                if not seen_v[u]:
                    seen_v[u] = True
                    frontier.append(u)
    return dist_c


def _shortest_cycle_through(g: TannerGraph, v: int, cap: float) -> float:
    # BFS from v labelling each vertex with its first CN hop; two branches
    # meeting along an edge close a cycle of dist[x] + dist[y] + 1 through v.
    dist_v = [-1] * g.num_vns
    dist_c = [-1] * g.num_cns
    br_v = [-1] * g.num_vns
    br_c = [-1] * g.num_cns
    dist_v[v] = 0
    frontier = [v]
    best = cap
    d = 0
    while frontier and 2 * d + 2 < best:
        cn_level = []
        for x in frontier:
            for c in g.vn_adj[x]:
                b = c if x == v else br_v[x]
                if dist_c[c] < 0:
                    dist_c[c] = d + 1
                    br_c[c] = b
                    cn_level.append(c)
                elif br_c[c] != b:
                    best = min(best, dist_c[c] + d + 1)
        frontier = []
        for c in cn_level:
            for y in g.cn_adj[c]:
                if dist_v[y] < 0:
                    dist_v[y] = d + 2
                    br_v[y] = br_c[c]
                    frontier.append(y)
                elif y != v and br_v[y] != br_c[c]:
                    best = min(best, dist_v[y] + d + 2)
        d += 2
    return best


def girth(g: TannerGraph) -> float:
    """Length of the shortest cycle, or inf for a forest."""
    best = INF
    for v in range(g.num_vns):
        best = _shortest_cycle_through(g, v, best)
    return best


def cycles_through_new_edge(g: TannerGraph, c: int, v: int, length: int,
                            max_cycles: int = 100_000) -> CycleEnumeration:
    """All cycles of exactly `length` that adding edge (c, v) would create.

    Each such cycle is a simple alternating path of length-1 edges from v
    to c in the current graph, closed by the new edge. Enumeration stops
    (truncated=True) past max_cycles.
    """
    if not (0 <= c < g.num_cns and 0 <= v < g.num_vns):
        raise InputError("endpoint out of range")
    if g.has_edge(c, v):
        raise InputError(f"edge ({c},{v}) already present")
    if length < 4 or length % 2 != 0:
        raise InputError("cycle length must be even and >= 4")
    paths, truncated = backend.alternating_paths(
        g.vn_adj, g.cn_adj, v, length - 1, max_cycles)
    cycles = sorted(
        (tuple(sorted(vns)), tuple(sorted(cns)))
        for vns, cns in paths if cns[-1] == c)
    return CycleEnumeration(tuple(cycles), truncated)
