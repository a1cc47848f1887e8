"""Exact probability bounds for randomized chunk dispersal.

The failure bound for k-subset dispersal reduces to the coupon
collector's problem with group drawings: chi(n, l, s, T, m) is the exact
probability that T uniform m-subsets of an s-set cover at most n elements
of a designated l-subset,

    chi = sum_{j=0}^{n} (-1)^(n-j) C(l,j) C(l-j-1, l-n-1)
          * [C(s-l+j, m) / C(s, m)]^T.

The alternating terms dwarf the result by hundreds of orders of
magnitude at production sizes, so everything here is exact integer
arithmetic; comparisons against thresholds happen in high-precision
log space (mpmath), and floats only appear in outward-rounded reports.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import mp, mpf

from .errors import InfeasibleError, InputError

mp.dps = 60

PREFACTORS = ("entropy", "binomial")


def binary_entropy(p) -> float:
    """Natural-log binary entropy, with the point-mass limits at 0 and 1."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InputError("entropy argument must lie in [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def _entropy_mp(p: Fraction):
    x = mpf(p.numerator) / p.denominator
    if x == 0 or x == 1:
        return mpf(0)
    return -x * mp.log(x) - (1 - x) * mp.log(1 - x)


def prob_not_eta_valid_ub(eta, N: int, M: int, k: int, gamma) -> float:
    """Chernoff-style bound on with-replacement dispersal missing an eta
    fraction: exp(N He(gamma) - M f(eta, rho)) with rho = gamma N k / M.

    Only valid for k > (M / (N gamma)) ln(1/(1-eta)); outside that domain
    the expression is not a bound and an InputError is raised.
    """
    eta = Fraction(eta)
    gamma = Fraction(gamma)
    if not 0 < eta < 1:
        raise InputError("eta must lie in (0, 1)")
    k_floor = (M / (N * float(gamma))) * math.log(1.0 / float(1 - eta))
    if k <= k_floor:
        raise InputError(
            f"bound invalid: k={k} must exceed {k_floor:.3f} at these parameters")
    rho = mpf(Fraction(gamma * N * k, M))
    ebar = mpf(Fraction(1) - eta)
    x = mp.e ** rho
    f = (x * ebar - 1) ** 2 / (x * (x * ebar + 1))
    return float(mp.e ** (N * _entropy_mp(gamma) - M * f))


def max_supported_nodes(eta, M: int, gamma, p_th) -> float:
    """Largest real N below which a finite k keeps the with-replacement
    bound under p_th: (M(1-eta) + ln p_th) / He(gamma)."""
    eta, gamma, p_th = Fraction(eta), Fraction(gamma), Fraction(p_th)
    num = M * (1 - mpf(Fraction(eta))) + mp.log(mpf(p_th.numerator) / p_th.denominator)
    return float(num / _entropy_mp(gamma))


def min_k_with_replacement(eta, N: int, M: int, gamma, p_th) -> float:
    """Smallest real k meeting the with-replacement bound at N nodes.

    Raises InfeasibleError when N >= the node ceiling (no finite k works).
    """
    eta, gamma, p_th = Fraction(eta), Fraction(gamma), Fraction(p_th)
    ceiling = max_supported_nodes(eta, M, gamma, p_th)
    if N >= ceiling:
        raise InfeasibleError(
            f"N={N} is at or above the supported ceiling {ceiling:.4f}")
    ebar = mpf(Fraction(1) - eta)
    lpth = mp.log(mpf(p_th.numerator) / p_th.denominator)
    v = (N * _entropy_mp(gamma) - lpth) / M
    arg = (-(2 * ebar + v) - mp.sqrt(8 * ebar * v + v * v)) / (2 * ebar * (v - ebar))
    return float(M / (N * mpf(Fraction(gamma))) * mp.log(arg))


def group_coupon_tail(n: int, l: int, s: int, T: int, m: int) -> Fraction:
    """Exact P(distinct elements of the l-subset collected in T drawings
    of m-subsets <= n). Binomials with invalid arguments vanish."""
    if not (0 <= n < l <= s):
        raise InputError("need 0 <= n < l <= s")
    if T < 0 or not (0 <= m <= s):
        raise InputError("need T >= 0 and 0 <= m <= s")
    C = math.comb
    den = C(s, m) ** T
    num = 0
    for j in range(n + 1):
        t = C(l, j) * C(l - j - 1, l - n - 1) * (C(s - l + j, m) ** T)
        num += t if (n - j) % 2 == 0 else -t
    return Fraction(num, den)


def _drawings(N: int, gamma: Fraction) -> int:
    return math.ceil(gamma * N)


def _log_prefactor(N: int, gamma: Fraction, T: int, prefactor: str):
    if prefactor == "entropy":
        return N * _entropy_mp(gamma)
    if prefactor == "binomial":
        return mp.log(mpf(math.comb(N, T)))
    raise InputError(f"unknown prefactor {prefactor!r}; use one of {PREFACTORS}")


def prob_not_ss_valid_ub(mu: int, N: int, M: int, k: int, gamma, *,
                         drawings: int | None = None,
                         prefactor: str = "entropy") -> float:
    """Upper bound on a k-dispersal failing mu-SS-validity.

    The per-subset tail is the exact chi(M-mu, M, M, T, k) with
    T = ceil(gamma N) drawings; the union over subsets uses either the
    e^(N He(gamma)) relaxation (default) or the exact C(N, T) count
    (tighter, also a valid bound). The float is rounded outward so a
    reported value never understates the bound.
    """
    if not 1 <= mu <= M:
        raise InputError("mu must lie in [1, M]")
    if not 0 <= k <= M:
        raise InputError("k must lie in [0, M]")
    gamma = Fraction(gamma)
    T = _drawings(N, gamma) if drawings is None else drawings
    tail = group_coupon_tail(M - mu, M, M, T, k)
    if tail == 0:
        return 0.0
    log_v = (_log_prefactor(N, gamma, T, prefactor)
             + mp.log(mpf(tail.numerator)) - mp.log(mpf(tail.denominator)))
    value = float(mp.e ** log_v)
    return math.nextafter(value, math.inf)


def min_valid_k(mu: int, N: int, M: int, gamma, p_th, *,
                drawings: int | None = None,
                prefactor: str = "entropy") -> int:
    """Smallest k whose mu-SS-validity failure bound is <= p_th.

    Ascending scan with exact tails; the exit comparison doubles as the
    monotonicity audit at k*-1 / k*, and the audit extends one step past
    the answer. Raises InfeasibleError when even k = M fails.
    """
    if not 1 <= mu <= M:
        raise InputError("mu must lie in [1, M]")
    gamma = Fraction(gamma)
    p_th = Fraction(p_th)
    T = _drawings(N, gamma) if drawings is None else drawings
    log_pf = _log_prefactor(N, gamma, T, prefactor)
    log_th = mp.log(mpf(p_th.numerator)) - mp.log(mpf(p_th.denominator))
    prev_tail: Fraction | None = None
    for k in range(1, M + 1):
        tail = group_coupon_tail(M - mu, M, M, T, k)
        if tail < 0:
            raise ArithmeticError(
                f"negative tail at k={k}: chi evaluation is broken")
        if prev_tail is not None and tail > prev_tail:
            raise ArithmeticError(
                f"tail increased from k={k - 1} to {k}: monotonicity violated")
        prev_tail = tail
        if tail == 0 or (log_pf + mp.log(mpf(tail.numerator))
                         - mp.log(mpf(tail.denominator))) <= log_th:
            if k < M:  # audit one step beyond the answer
                nxt = group_coupon_tail(M - mu, M, M, T, k + 1)
                if nxt > tail:
                    raise ArithmeticError(
                        f"tail increased from k={k} to {k + 1}: monotonicity violated")
            return k
    raise InfeasibleError(
        f"no k <= M={M} meets p_th={float(p_th):.3e} at mu={mu}, N={N}")


def secure_size_threshold(layer_size: int, M: int, mu: int) -> int:
    """Stopping sets strictly below this size must be secured at a layer
    of layer_size chunks for the base-layer mu guarantee to carry up."""
    if not 1 <= mu <= M:
        raise InputError("mu must lie in [1, M]")
    needed = -((-(M - mu + 1) * layer_size) // M)  # ceil over exact integers
    return layer_size - needed + 1
