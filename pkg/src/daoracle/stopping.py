"""Stopping-set enumeration and the greedy secure-phase cover.

Enumeration is branch and bound over VN inclusion with check-node
constraint propagation (see the kernel docstrings); it returns every
stopping set below a size bound, or an honestly-flagged partial list
when the expansion budget runs out. The greedy cover repeatedly takes
the VN hitting the most remaining sets; dispersing those VNs to f+1
nodes secures every enumerated set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import backend
from .errors import InputError
from .graph import TannerGraph, is_stopping_set
from .peg import _greedy_cover_matrix, _set_matrix

DEFAULT_BUDGET = 10 ** 9


@dataclass(frozen=True)
class StoppingSetReport:
    size_bound: int
    sets: tuple[tuple[int, ...], ...]
    min_size: int | None  # None means ">= size_bound"
    greedy_cover: tuple[int, ...]
    exhaustive: bool
    expansions: int
    budget: int
    seed: int
    minimal_only: bool = False

    @property
    def min_size_label(self) -> str:
        return str(self.min_size) if self.min_size is not None else f">= {self.size_bound}"

    def cover_size(self) -> int:
        return len(self.greedy_cover)


def greedy_cover(sets: Sequence[Iterable[int]],
                 rng: random.Random | int | None = None,
                 num_vns: int | None = None) -> list[int]:
    """Ordered greedy hitting set: VNs picked by descending coverage of
    the remaining sets, ties broken by the seeded rng."""
    if isinstance(rng, random.Random):
        r = rng
    else:
        r = random.Random(0 if rng is None else rng)
    materialized = [tuple(s) for s in sets]
    if not materialized:
        return []
    n = num_vns if num_vns is not None else max(max(s) for s in materialized) + 1
    return _greedy_cover_matrix(_set_matrix(n, materialized), r)


def _filter_minimal(sets: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    as_sets = [frozenset(s) for s in sets]
    keep = []
    for i, s in enumerate(as_sets):
        if not any(t < s for t in as_sets):
            keep.append(sets[i])
    return keep


def enumerate_stopping_sets(g: TannerGraph, bound: int,
                            budget: int = DEFAULT_BUDGET,
                            seed: int = 0,
                            minimal_only: bool = False) -> StoppingSetReport:
    """All stopping sets of size < bound, plus their greedy cover.

    A exhausted budget yields a correct partial list with
    exhaustive=False rather than an exception. With minimal_only, only
    support-minimal sets are kept (faster search, smaller report).
    """
    if bound < 1:
        raise InputError("bound must be >= 1")
    raw, expansions, exhausted = backend.find_stopping_sets(
        g.vn_adj, g.cn_adj, bound, budget, minimal_only)
    found = sorted(set(raw), key=lambda s: (len(s), s))
    if minimal_only:
        found = _filter_minimal(found)
    min_size = len(found[0]) if found else None
    cover = greedy_cover(found, rng=random.Random(seed), num_vns=g.num_vns)
    return StoppingSetReport(
        size_bound=bound,
        sets=tuple(found),
        min_size=min_size,
        greedy_cover=tuple(cover),
        exhaustive=exhausted,
        expansions=expansions,
        budget=budget,
        seed=seed,
        minimal_only=minimal_only,
    )


@dataclass(frozen=True)
class MinSizeProbe:
    """Outcome of iterative deepening on the minimum stopping set size."""

    certified_lower_bound: int  # no stopping set of size < this exists
    found_min: int | None       # exact when certified, else an upper bound
    exhaustive: bool            # search completed to the target bound
    expansions: int

    @property
    def label(self) -> str:
        if self.found_min is not None and self.exhaustive:
            return str(self.found_min)
        if self.found_min is not None:
            return f"<= {self.found_min} (certified >= {self.certified_lower_bound})"
        return f">= {self.certified_lower_bound}"


def probe_min_stopping_size(g: TannerGraph, target_bound: int,
                            budget: int = DEFAULT_BUDGET,
                            seed: int = 0) -> MinSizeProbe:
    """Iterative deepening: certify 'no stopping set below b' for growing
    b within one shared expansion budget, reporting honestly how far the
    certification reached."""
    spent = 0
    certified = 1
    found_min: int | None = None
    for b in range(2, target_bound + 1):
        remaining = budget - spent
        if remaining <= 0:
            return MinSizeProbe(certified, found_min, False, spent)
        raw, exp, exhausted = backend.find_stopping_sets(
            g.vn_adj, g.cn_adj, b, remaining, True)
        spent += exp
        if raw:
            best = min(len(s) for s in raw)
            found_min = best if found_min is None else min(found_min, best)
        if not exhausted:
            return MinSizeProbe(certified, found_min, False, spent)
        if found_min is not None:
            # min size known exactly; nothing smaller can appear later
            return MinSizeProbe(found_min, found_min, True, spent)
        certified = b
    return MinSizeProbe(certified, found_min, True, spent)


def write_report(report: StoppingSetReport, path) -> None:
    lines = [
        "# stopping-set report",
        f"bound: {report.size_bound}",
        f"budget: {report.budget}",
        f"expansions: {report.expansions}",
        f"exhaustive: {str(report.exhaustive).lower()}",
        f"minimal_only: {str(report.minimal_only).lower()}",
        f"seed: {report.seed}",
        f"min_size: {report.min_size_label}",
        "cover: " + " ".join(map(str, report.greedy_cover)),
    ]
    lines.extend("set: " + " ".join(map(str, s)) for s in report.sets)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_report(path) -> StoppingSetReport:
    fields: dict[str, str] = {}
    sets: list[tuple[int, ...]] = []
    cover: tuple[int, ...] = ()
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(":")
            key, value = key.strip(), value.strip()
            if key == "set":
                sets.append(tuple(int(t) for t in value.split()))
            elif key == "cover":
                cover = tuple(int(t) for t in value.split())
            else:
                fields[key] = value
    try:
        min_size = None if fields["min_size"].startswith(">=") else int(fields["min_size"])
        return StoppingSetReport(
            size_bound=int(fields["bound"]),
            sets=tuple(sets),
            min_size=min_size,
            greedy_cover=cover,
            exhaustive=fields["exhaustive"] == "true",
            expansions=int(fields["expansions"]),
            budget=int(fields["budget"]),
            seed=int(fields.get("seed", "0")),
            minimal_only=fields.get("minimal_only", "false") == "true",
        )
    except KeyError as exc:
        raise InputError(f"missing field in report {path}: {exc}") from None


def validate_report(g: TannerGraph, report: StoppingSetReport) -> None:
    """Independent re-verification of a report's structural invariants."""
    cover = set(report.greedy_cover)
    for s in report.sets:
        if len(s) >= report.size_bound:
            raise InputError(f"set {s} at or above the bound")
        if not is_stopping_set(g, s):
            raise InputError(f"listed set {s} is not a stopping set")
        if not cover.intersection(s):
            raise InputError(f"set {s} missed by the greedy cover")
