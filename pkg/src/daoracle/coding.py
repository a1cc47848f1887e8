"""Systematic erasure coding and peeling decoding over byte chunks.

The code is binary and applied bytewise: a parity constraint says the
XOR of the chunks on a check node's neighbourhood is the zero chunk.
Encoding picks the last num_cns columns as parity positions and solves
for them by GF(2) elimination; with regular even VN degree the check
matrix is always row-rank-deficient (rows XOR to zero), so the solver
accepts consistent underdetermined systems and zero-fills the free
parity positions. Decoding and stopping-set analysis keep every check
row of the original graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ConstructionError, InputError
from .graph import TannerGraph


@dataclass(frozen=True)
class PeelingOutcome:
    status: str  # "decoded" | "stuck"
    recovered: dict[int, bytes]
    residual: frozenset[int]
    parity_violations: tuple[int, ...] = ()

    @property
    def decoded(self) -> bool:
        return self.status == "decoded"


def parity_columns(g: TannerGraph) -> tuple[int, ...]:
    """Column indices used as parity positions: the last num_cns columns."""
    return tuple(range(g.num_vns - g.num_cns, g.num_vns))


def parity_block_consistent(g: TannerGraph) -> bool:
    """Whether the last num_cns columns span the column space of the
    check matrix, i.e. systematic encoding succeeds for every data word."""
    n, m = g.num_vns, g.num_cns
    split = n - m
    full = []
    par = []
    for c in range(m):
        row_full = 0
        row_par = 0
        for v in g.cn_adj[c]:
            row_full |= 1 << v
            if v >= split:
                row_par |= 1 << (v - split)
        full.append(row_full)
        par.append(row_par)
    return _gf2_rank(par) == _gf2_rank(full)


def _gf2_rank(rows: list[int]) -> int:
    rank = 0
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
            pivots.sort(reverse=True)
            rank += 1
    return rank


def systematic_encode(g: TannerGraph, data: Sequence[bytes]) -> list[bytes]:
    """Encode data chunks into a full codeword on g.

    data fills the first num_vns - num_cns positions; the remaining
    positions are solved so that every check node XORs to zero. Raises
    ConstructionError naming the inconsistent check rows when the parity
    block cannot represent the syndrome of some data word.
    """
    n, m = g.num_vns, g.num_cns
    split = n - m
    if len(data) != split:
        raise InputError(f"expected {split} data chunks, got {len(data)}")
    if split == 0:
        raise InputError("code has no data positions")
    size = len(data[0])
    if any(len(ch) != size for ch in data):
        raise InputError("data chunks must have equal length")

    data_arr = np.frombuffer(b"".join(data), dtype=np.uint8).reshape(split, size)
    # augmented system over the parity columns: mask as a bit-int, rhs a chunk
    masks: list[int] = []
    rhs = np.zeros((m, size), dtype=np.uint8)
    for c in range(m):
        mask = 0
        for v in g.cn_adj[c]:
            if v >= split:
                mask |= 1 << (v - split)
            else:
                rhs[c] ^= data_arr[v]
        masks.append(mask)

    used = [False] * m
    pivot_row = [-1] * m  # per parity bit; -1 = free variable, stays zero
    for bit in range(m):
        sel = -1
        for r in range(m):
            if not used[r] and (masks[r] >> bit) & 1:
                sel = r
                break
        if sel < 0:
            continue
        used[sel] = True
        pivot_row[bit] = sel
        for r in range(m):
            if r != sel and (masks[r] >> bit) & 1:
                masks[r] ^= masks[sel]
                rhs[r] ^= rhs[sel]

    # after Jordan elimination every unused row reduces to 0 = rhs
    bad = [c for c in range(m) if not used[c] and rhs[c].any()]
    if bad:
        raise ConstructionError(
            f"parity positions cannot satisfy check rows {bad}: "
            f"dependent rows have a nonzero syndrome")

    parity = np.zeros((m, size), dtype=np.uint8)
    for bit in range(m):
        if pivot_row[bit] >= 0:
            parity[bit] = rhs[pivot_row[bit]]
    out = [data_arr[i].tobytes() for i in range(split)]
    out.extend(parity[i].tobytes() for i in range(m))
    return out


def peel_decode(g: TannerGraph, known: Mapping[int, bytes]) -> PeelingOutcome:
    """Iterative erasure decoding: a CN with one erased neighbour recovers
    it as the XOR of the others. Also flags any fully-known CN whose
    chunks do not XOR to zero (incorrect-coding detection)."""
    n = g.num_vns
    for v in known:
        if not (0 <= v < n):
            raise InputError(f"vn index {v} out of range")
    sizes = {len(ch) for ch in known.values()}
    if len(sizes) > 1:
        raise InputError("known chunks must have equal length")
    size = sizes.pop() if sizes else 0

    chunks: dict[int, np.ndarray] = {
        v: np.frombuffer(ch, dtype=np.uint8).copy() for v, ch in known.items()}
    erased = set(range(n)) - chunks.keys()
    missing = [0] * g.num_cns
    for v in erased:
        for c in g.vn_adj[v]:
            missing[c] += 1
    ready = [c for c in range(g.num_cns) if missing[c] == 1]
    recovered: dict[int, bytes] = {}
    while ready:
        c = ready.pop()
        if missing[c] != 1:
            continue
        v = next(u for u in g.cn_adj[c] if u in erased)
        acc = np.zeros(size, dtype=np.uint8)
        for u in g.cn_adj[c]:
            if u != v:
                acc ^= chunks[u]
        chunks[v] = acc
        recovered[v] = acc.tobytes()
        erased.discard(v)
        for c2 in g.vn_adj[v]:
            missing[c2] -= 1
            if missing[c2] == 1:
                ready.append(c2)

    violations = []
    for c in range(g.num_cns):
        if missing[c] == 0 and g.cn_adj[c]:
            acc = np.zeros(size, dtype=np.uint8)
            for u in g.cn_adj[c]:
                acc ^= chunks[u]
            if acc.any():
                violations.append(c)
    status = "decoded" if not erased else "stuck"
    return PeelingOutcome(status, recovered, frozenset(erased), tuple(violations))
