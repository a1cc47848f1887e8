"""Reading and writing parity-check matrices in the alist text format.

Layout (indices 1-based on disk, zero-padded to the maximum degree):

    num_vns num_cns
    max_vn_degree max_cn_degree
    <vn degrees>
    <cn degrees>
    <per VN: its CN indices>
    <per CN: its VN indices>

A sidecar metadata file (plain "key: value" lines) can carry the
construction provenance next to the matrix.
"""

from __future__ import annotations

import os

from .errors import InputError
from .graph import TannerGraph


def write_alist(g: TannerGraph, path: str | os.PathLike) -> None:
    vn_deg = g.vn_degrees()
    cn_deg = g.cn_degrees()
    max_v = max(vn_deg, default=0)
    max_c = max(cn_deg, default=0)
    lines = [
        f"{g.num_vns} {g.num_cns}",
        f"{max_v} {max_c}",
        " ".join(map(str, vn_deg)),
        " ".join(map(str, cn_deg)),
    ]
    for v in range(g.num_vns):
        row = [c + 1 for c in g.vn_adj[v]] + [0] * (max_v - vn_deg[v])
        lines.append(" ".join(map(str, row)))
    for c in range(g.num_cns):
        row = [v + 1 for v in g.cn_adj[c]] + [0] * (max_c - cn_deg[c])
        lines.append(" ".join(map(str, row)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path: str | os.PathLike) -> TannerGraph:
    with open(path) as fh:
        tokens_per_line = [line.split() for line in fh if line.strip()]
    try:
        num_vns, num_cns = map(int, tokens_per_line[0])
        vn_deg = list(map(int, tokens_per_line[2]))
        edges = []
        for v in range(num_vns):
            for tok in tokens_per_line[4 + v]:
                c = int(tok)
                if c:
                    edges.append((c - 1, v))
        g = TannerGraph.from_edges(num_vns, num_cns, edges)
    except (IndexError, ValueError) as exc:
        raise InputError(f"malformed alist file {path}: {exc}") from None
    if [len(a) for a in g.vn_adj] != vn_deg:
        raise InputError(f"alist degree list disagrees with entries in {path}")
    # cross-check the CN-side entries when present
    cn_rows = tokens_per_line[4 + num_vns:]
    if len(cn_rows) >= num_cns:
        for c in range(num_cns):
            listed = sorted(int(t) - 1 for t in cn_rows[c] if int(t))
            if listed != list(g.cn_adj[c]):
                raise InputError(f"alist row/column entries disagree in {path}")
    return g


def write_sidecar(path: str | os.PathLike, fields: dict) -> None:
    with open(path, "w") as fh:
        for key, value in fields.items():
            fh.write(f"{key}: {value}\n")


def read_sidecar(path: str | os.PathLike) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            if ":" in line:
                key, value = line.split(":", 1)
                out[key.strip()] = value.strip()
    return out
