"""Closed-form communication-cost accounting for two-phase dispersal.

All arithmetic is exact rational bytes: the base chunk size b/(R M) is
fractional at the default parameters and rounding anywhere would shift
the published table cells. GB means 10^9 bytes for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cit import CitParams
from .errors import InfeasibleError, InputError
from .probability import max_supported_nodes, min_k_with_replacement, min_valid_k

GB = 10 ** 9


@dataclass(frozen=True)
class OracleParams:
    """The node population and its adversarial/threshold parameters."""

    num_nodes: int
    adversary_fraction: Fraction  # beta < 1/2
    gamma: Fraction               # honest-quorum fraction, <= 1 - 2 beta
    p_th: Fraction                # failure-probability budget

    def __post_init__(self):
        object.__setattr__(self, "adversary_fraction", Fraction(self.adversary_fraction))
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        object.__setattr__(self, "p_th", Fraction(self.p_th))
        if self.num_nodes < 1:
            raise InputError("need at least one node")
        if not 0 <= self.adversary_fraction < Fraction(1, 2):
            raise InputError("adversary fraction must lie in [0, 1/2)")
        if not 0 < self.gamma <= 1 - 2 * self.adversary_fraction:
            raise InputError("gamma must lie in (0, 1 - 2 beta]")
        if self.gamma * self.num_nodes < 1:
            raise InputError("gamma N must be at least 1")
        if not 0 < self.p_th < 1:
            raise InputError("p_th must lie in (0, 1)")
        if 2 * self.max_malicious >= self.num_nodes:
            raise InputError("ceil(beta N) must stay below N/2")

    @property
    def max_malicious(self) -> int:
        return math.ceil(self.adversary_fraction * self.num_nodes)

    @property
    def drawings(self) -> int:
        return math.ceil(self.gamma * self.num_nodes)

    @property
    def vote_threshold(self) -> int:
        return math.ceil((self.gamma + self.adversary_fraction) * self.num_nodes)


@dataclass(frozen=True)
class CostBreakdown:
    root_cost: Fraction
    secure_cost: Fraction
    valid_cost: Fraction
    total: Fraction
    chunk_sizes: tuple[Fraction, ...]

    def gb(self, field: str) -> float:
        return float(getattr(self, field) / GB)


def chunk_sizes(params: CitParams) -> tuple[Fraction, ...]:
    """Per-layer size of one chunk plus its proof, exact rational bytes.

    Index 0 is the top layer. The base entry uses the exact rational
    block_size / data_count even when storage rounds it up.
    """
    y = params.hash_size
    q = params.batch
    l = params.num_layers
    out = []
    for j in range(l):
        overhead = Fraction(y * (2 * q - 1) * j)
        if j == l - 1:
            base = Fraction(params.block_size, params.data_count(l - 1))
        else:
            base = Fraction(q * y)
        out.append(base + overhead)
    return tuple(out)


def root_cost(oracle: OracleParams, params: CitParams) -> Fraction:
    return Fraction(oracle.num_nodes * params.root_hashes * params.hash_size)


def secure_cost(cover_sizes: Sequence[int], oracle: OracleParams,
                sizes: Sequence[Fraction]) -> Fraction:
    """Secure-phase bytes: each fresh cover chunk goes to f+1 nodes.

    A layer's fresh count is its cover size minus the largest cover of
    any layer below (those chunks ride along inside proofs), floored at
    zero; the base layer is always entirely fresh.
    """
    l = len(sizes)
    if len(cover_sizes) != l:
        raise InputError(f"need {l} cover sizes, got {len(cover_sizes)}")
    copies = oracle.max_malicious + 1
    total = Fraction(cover_sizes[-1]) * sizes[-1]
    for j in range(l - 1):
        carried = max(cover_sizes[j + 1:])
        total += Fraction(max(cover_sizes[j] - carried, 0)) * sizes[j]
    return copies * total


def valid_cost(num_nodes: int, k: int, base_size: Fraction) -> Fraction:
    return num_nodes * k * Fraction(base_size)


def total_cost(oracle: OracleParams, params: CitParams, k: int,
               cover_sizes: Sequence[int] | None = None) -> CostBreakdown:
    sizes = chunk_sizes(params)
    covers = list(cover_sizes) if cover_sizes is not None else [0] * len(sizes)
    c_root = root_cost(oracle, params)
    c_sec = secure_cost(covers, oracle, sizes)
    c_val = valid_cost(oracle.num_nodes, k, sizes[-1])
    return CostBreakdown(c_root, c_sec, c_val, c_root + c_sec + c_val, sizes)


@dataclass(frozen=True)
class BaselineComparison:
    """With-replacement dispersal versus the k-subset protocol at the
    largest node count the former supports."""

    num_nodes: int
    k_min: int
    full: CostBreakdown        # all k_min copies counted
    distinct: CostBreakdown    # expected distinct chunks per node counted
    expected_distinct: Fraction
    k_star: int
    baseline: CostBreakdown    # k-subset dispersal at mu = min stopping size


def expected_distinct(M: int, draws: int) -> Fraction:
    """Expected distinct values among `draws` uniform draws from M."""
    return M * (1 - Fraction(M - 1, M) ** draws)


def baseline_comparison(params: CitParams, beta, p_th, eta, mu: int,
                        *, prefactor: str = "entropy") -> BaselineComparison:
    """Costs at the maximum N the with-replacement bound supports.

    eta is the distinct-fraction target of the with-replacement scheme
    (1 - stopping ratio); mu is the stopping-size target of the k-subset
    scheme. Raises InfeasibleError when no N >= 1 is supported.
    """
    M = params.base_symbols
    beta, p_th = Fraction(beta), Fraction(p_th)
    gamma = 1 - 2 * beta
    ceiling = max_supported_nodes(eta, M, gamma, p_th)
    N = math.ceil(ceiling) - 1
    if N < 1:
        raise InfeasibleError(f"no node count fits under the ceiling {ceiling:.4f}")
    oracle = OracleParams(N, beta, gamma, p_th)
    k_min = math.ceil(min_k_with_replacement(eta, N, M, gamma, p_th))
    sizes = chunk_sizes(params)
    c_root = root_cost(oracle, params)
    zero = [0] * len(sizes)

    full = valid_cost(N, k_min, sizes[-1])
    exp_distinct = expected_distinct(M, k_min)
    distinct = exp_distinct * N * sizes[-1]
    k_star = min_valid_k(mu, N, M, gamma, p_th, prefactor=prefactor)
    base = valid_cost(N, k_star, sizes[-1])

    def pack(valid: Fraction) -> CostBreakdown:
        return CostBreakdown(c_root, Fraction(0), valid, c_root + valid, sizes)

    return BaselineComparison(
        num_nodes=N, k_min=k_min,
        full=pack(full), distinct=pack(distinct),
        expected_distinct=exp_distinct,
        k_star=k_star, baseline=pack(base),
    )


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: Fraction
    scheme: str
    k: int | None
    secure: Fraction | None
    valid: Fraction | None
    total: Fraction | None
    note: str = ""

    def csv_cells(self) -> list[str]:
        def gb(x):
            return "" if x is None else f"{float(x) / GB:.6f}"
        return [self.axis, str(float(self.value)), self.scheme,
                "" if self.k is None else str(self.k),
                gb(self.secure), gb(self.valid), gb(self.total), self.note]


def sweep(axis: str, values, params: CitParams, beta, p_th, mu: int,
          cover_tuples: dict[str, Sequence[int]], mu_baseline: int,
          num_nodes: int | None = None, *,
          prefactor: str = "entropy") -> list[SweepRow]:
    """Total-cost rows across N or beta for the baseline (k-subset at
    mu_baseline, no secure phase), the covered schemes, and the no-cover
    lower bound. Sweeping beta re-derives gamma = 1 - 2 beta per point.
    """
    if axis not in ("N", "beta"):
        raise InputError("axis must be 'N' or 'beta'")
    rows: list[SweepRow] = []
    schemes = [("baseline", None), *((name, t) for name, t in cover_tuples.items()),
               ("lower-bound", [0] * params.num_layers)]
    for value in values:
        if axis == "N":
            N = int(value)
            b = Fraction(beta)
        else:
            N = int(num_nodes)
            b = Fraction(value)
        gamma = 1 - 2 * b
        try:
            oracle = OracleParams(N, b, gamma, Fraction(p_th))
        except InputError as exc:
            rows.extend(SweepRow(axis, Fraction(value), name, None, None, None,
                                 None, f"infeasible: {exc}")
                        for name, _ in schemes)
            continue
        M = params.base_symbols
        cache: dict[int, int] = {}

        def kstar(m):
            if m not in cache:
                cache[m] = min_valid_k(m, N, M, gamma, Fraction(p_th),
                                       prefactor=prefactor)
            return cache[m]

        for name, tup in schemes:
            try:
                if name == "baseline":
                    k = kstar(mu_baseline)
                    cost = total_cost(oracle, params, k)
                else:
                    k = kstar(mu)
                    cost = total_cost(oracle, params, k, tup)
                rows.append(SweepRow(axis, Fraction(value), name, k,
                                     cost.secure_cost, cost.valid_cost, cost.total))
            except InfeasibleError as exc:
                rows.append(SweepRow(axis, Fraction(value), name, None, None,
                                     None, None, f"infeasible: {exc}"))
    return rows
