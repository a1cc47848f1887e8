"""Progressive edge growth (PEG) construction and the DE-PEG variant.

PEG places d_v edges per VN, each time connecting to a candidate check
node that maximises the girth of any cycle created (unreachable CNs
first, else the deepest in a BFS from the VN), restricted to minimum
current degree. DE-PEG changes only the choice *within* the candidate
set when a short cycle is unavoidable: it keeps a running list of bad
cycles (length <= g_max, extrinsic message degree <= emd_threshold at
creation) and picks the candidate whose created cycles, together with
that list, admit the smallest greedy hitting set. Small hitting sets
over bad cycles translate into small secure-phase covers later.
"""

from __future__ import annotations

import random
from bisect import insort
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import backend
from .errors import ConstructionError, InputError, ParameterError
from .graph import INF, TannerGraph, cn_distances

DEFAULT_VN_DEGREE = 4
DEFAULT_EMD_THRESHOLD = 5
DEFAULT_CYCLE_CAP = 100_000


def default_g_max(num_layers: int, layer: int) -> int:
    """Per-layer default girth target: 8 for the two largest layers, 6 above."""
    return 8 if layer >= num_layers - 2 else 6


@dataclass(frozen=True)
class PegParams:
    num_vns: int
    num_cns: int
    vn_degree: int = DEFAULT_VN_DEGREE
    g_max: int = 8
    emd_threshold: int = DEFAULT_EMD_THRESHOLD
    seed: int = 0
    cycle_cap: int = DEFAULT_CYCLE_CAP

    def __post_init__(self):
        if self.num_cns >= self.num_vns:
            raise ParameterError("need fewer CNs than VNs")
        if not (1 <= self.vn_degree <= self.num_cns):
            raise ParameterError("vn_degree must be in [1, num_cns]")
        if self.g_max < 0 or self.emd_threshold < 0:
            raise ParameterError("g_max and emd_threshold must be non-negative")


class CycleRecord(NamedTuple):
    vns: tuple[int, ...]
    length: int
    emd_at_creation: int


@dataclass(frozen=True)
class BadCycleLedger:
    """Running list of low-EMD short cycles accumulated during DE-PEG."""

    entries: tuple[CycleRecord, ...]

    def vn_sets(self) -> list[tuple[int, ...]]:
        return [rec.vns for rec in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def _pick(rng: random.Random, seq):
    return seq[0] if len(seq) == 1 else seq[rng.randrange(len(seq))]


def _candidate_cns(vn_adj, cn_adj, cn_deg, v):
    num_cns = len(cn_adj)
    dist = cn_distances(vn_adj, cn_adj, v)
    pool = [c for c in range(num_cns) if dist[c] < 0]
    if pool:
        g_new = INF
    else:
        dmax = max(dist)
        if dmax <= 1:
            raise ConstructionError(
                f"vn {v} is already adjacent to every CN; no candidate exists")
        pool = [c for c in range(num_cns) if dist[c] == dmax]
        g_new = dmax + 1
    min_deg = min(cn_deg[c] for c in pool)
    return [c for c in pool if cn_deg[c] == min_deg], g_new


def peg_candidates(g: TannerGraph, v: int,
                   max_degree: int | None = None) -> tuple[tuple[int, ...], float]:
    """Candidate CNs for a new edge at v, and the girth of the shortest
    cycle that edge would create (inf when no cycle forms)."""
    if not 0 <= v < g.num_vns:
        raise InputError(f"vn index {v} out of range")
    if max_degree is not None and len(g.vn_adj[v]) >= max_degree:
        raise InputError(f"vn {v} already has {len(g.vn_adj[v])} edges")
    cands, g_new = _candidate_cns(g.vn_adj, g.cn_adj, g.cn_degrees(), v)
    return tuple(cands), g_new


def _greedy_cover_matrix(mat: np.ndarray, rng: random.Random,
                         exclude: int | None = None) -> list[int]:
    """Greedy hitting set over the rows of a 0/1 membership matrix.

    Picks the column covering the most uncovered rows until none remain,
    ties broken by rng. Rows with no coverable column are dropped. The
    matrix is consumed (mutated).
    """
    if exclude is not None:
        mat[:, exclude] = 0
    alive = np.flatnonzero(mat.any(axis=1))
    picks: list[int] = []
    while alive.size:
        counts = mat[alive].sum(axis=0, dtype=np.int64)
        ties = np.flatnonzero(counts == counts.max())
        pick = int(_pick(rng, ties))
        picks.append(pick)
        alive = alive[mat[alive, pick] == 0]
    return picks


def _set_matrix(num_cols: int, sets: Iterable[Iterable[int]]) -> np.ndarray:
    rows = [list(s) for s in sets]
    mat = np.zeros((len(rows), num_cols), dtype=np.uint8)
    for r, members in enumerate(rows):
        mat[r, members] = 1
    return mat


def greedy_size(cycles: Sequence[Iterable[int]], v: int,
                rng: random.Random | int | None = None,
                num_vns: int | None = None) -> int:
    """Size of the greedy hitting set over cycle VN sets, with v barred
    from selection. Cycles containing only v cost nothing."""
    if isinstance(rng, random.Random):
        r = rng
    else:
        r = random.Random(0 if rng is None else rng)
    if not cycles:
        return 0
    n = num_vns if num_vns is not None else max(max(s) for s in cycles) + 1
    n = max(n, v + 1)
    return len(_greedy_cover_matrix(_set_matrix(n, cycles), r, exclude=v))


def _emd_of(vn_adj, vns) -> int:
    counts: dict[int, int] = {}
    for u in vns:
        for c in vn_adj[u]:
            counts[c] = counts.get(c, 0) + 1
    return sum(1 for k in counts.values() if k == 1)


class _LedgerMatrix:
    """Grow-only 0/1 membership buffer for the bad-cycle list."""

    def __init__(self, num_vns: int):
        self.buf = np.zeros((64, num_vns), dtype=np.uint8)
        self.rows = 0

    def append(self, members):
        if self.rows == len(self.buf):
            self.buf = np.vstack([self.buf, np.zeros_like(self.buf)])
        self.buf[self.rows, list(members)] = 1
        self.rows += 1

    def with_extra(self, extra_sets) -> np.ndarray:
        mat = np.zeros((self.rows + len(extra_sets), self.buf.shape[1]),
                       dtype=np.uint8)
        mat[:self.rows] = self.buf[:self.rows]
        for r, members in enumerate(extra_sets):
            mat[self.rows + r, list(members)] = 1
        return mat


def _construct(params: PegParams, de_peg: bool):
    rng = random.Random(params.seed)
    M, J, dv = params.num_vns, params.num_cns, params.vn_degree
    vn_adj: list[list[int]] = [[] for _ in range(M)]
    cn_adj: list[list[int]] = [[] for _ in range(J)]
    cn_deg = [0] * J
    ledger_entries: list[CycleRecord] = []
    ledger = _LedgerMatrix(M) if de_peg else None

    for v in range(M):
        for e in range(dv):
            cands, g_new = _candidate_cns(vn_adj, cn_adj, cn_deg, v)
            if not de_peg or g_new > params.g_max:
                chosen = _pick(rng, cands)
                created: list[tuple[int, ...]] = []
            else:
                paths, truncated = backend.alternating_paths(
                    vn_adj, cn_adj, v, int(g_new) - 1, params.cycle_cap)
                if truncated:
                    raise ConstructionError(
                        f"cycle enumeration overflow at vn {v}, edge {e}")
                bucket: dict[int, list[tuple[int, ...]]] = {c: [] for c in cands}
                for vns, cns in paths:
                    rows = bucket.get(cns[-1])
                    if rows is not None:
                        rows.append(tuple(sorted(vns)))
                for rows in bucket.values():
                    rows.sort()
                scores = []
                for c in cands:  # rng draws serialized in candidate order
                    mat = ledger.with_extra(bucket[c])
                    scores.append(len(_greedy_cover_matrix(mat, rng, exclude=v)))
                best = min(scores)
                chosen = _pick(rng, [c for c, s in zip(cands, scores) if s == best])
                created = bucket[chosen]
            insort(vn_adj[v], chosen)
            insort(cn_adj[chosen], v)
            cn_deg[chosen] += 1
            if de_peg and created:
                for vns in created:
                    cemd = _emd_of(vn_adj, vns)
                    if cemd <= params.emd_threshold:
                        ledger_entries.append(CycleRecord(vns, int(g_new), cemd))
                        ledger.append(vns)

    g = TannerGraph(M, J,
                    tuple(tuple(a) for a in vn_adj),
                    tuple(tuple(a) for a in cn_adj))
    return g, BadCycleLedger(tuple(ledger_entries))


def build_peg(params: PegParams) -> TannerGraph:
    """Classic PEG: uniform choice among the candidate CNs at every step."""
    g, _ = _construct(params, de_peg=False)
    return g


def build_de_peg(params: PegParams) -> tuple[TannerGraph, BadCycleLedger]:
    """PEG with cover-minimizing CN selection among unavoidable short cycles."""
    return _construct(params, de_peg=True)
