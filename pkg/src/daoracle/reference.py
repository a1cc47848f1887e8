"""Published reference operating points for the default parameter set.

These are the externally published cost-table cells the reproduction
commands regenerate and the acceptance suite compares against: a 1 MB
block, 32-byte hashes, batch 4, 4 layers, 256 base symbols, rate 1/2,
beta = 0.49, gamma = 1 - 2 beta, p_th = 1e-8 unless stated.

Cover tuples are listed top layer first. k* cells in the mu-sweep table
were published under the exact-binomial union prefactor, the max-N
comparison under the entropy relaxation; reproduction pins each
accordingly (both are valid upper bounds).
"""

from __future__ import annotations

from fractions import Fraction

from .cit import CitParams

DEFAULT_CIT = CitParams(block_size=10 ** 6, hash_size=32, batch=4,
                        num_layers=4, base_symbols=256, rate=Fraction(1, 2))
DEFAULT_BETA = Fraction("0.49")
DEFAULT_GAMMA = Fraction("0.02")
DEFAULT_PTH = Fraction(1, 10 ** 8)
DEFAULT_NODES = 9000

# legacy with-replacement scheme: stopping ratio 0.125, so eta = 0.875
LEGACY_STOPPING_RATIO = Fraction("0.125")
LEGACY_ETA = 1 - LEGACY_STOPPING_RATIO

MIN_STOPPING_SIZE = {"peg": 17, "de-peg": 18}

# mu-sweep table: mu -> (k*, Cv_GB, cover tuples, Cs_GB, Ct_GB per scheme)
MU_SWEEP_PREFACTOR = "binomial"
MU_SWEEP = {
    17: {"k": 67, "cv": 5.116, "peg": (0, 0, 0, 0), "de-peg": (0, 0, 0, 0),
         "cs": {"peg": 0.0, "de-peg": 0.0}, "ct": {"peg": 5.125, "de-peg": 5.125}},
    18: {"k": 64, "cv": 4.887, "peg": (0, 0, 0, 1), "de-peg": (0, 0, 0, 0),
         "cs": {"peg": 0.037, "de-peg": 0.0}, "ct": {"peg": 4.933, "de-peg": 4.896}},
    19: {"k": 61, "cv": 4.658, "peg": (0, 0, 1, 3), "de-peg": (0, 0, 0, 1),
         "cs": {"peg": 0.112, "de-peg": 0.037}, "ct": {"peg": 4.779, "de-peg": 4.704}},
    20: {"k": 58, "cv": 4.428, "peg": (0, 0, 1, 7), "de-peg": (0, 0, 0, 4),
         "cs": {"peg": 0.262, "de-peg": 0.149}, "ct": {"peg": 4.700, "de-peg": 4.587}},
    21: {"k": 56, "cv": 4.276, "peg": (0, 1, 2, 14), "de-peg": (0, 1, 0, 13),
         "cs": {"peg": 0.524, "de-peg": 0.486}, "ct": {"peg": 4.809, "de-peg": 4.771}},
}
MU_SWEEP_LOWER_BOUND_AT_20 = 4.438

# max-N comparison: p_th -> published cells
MAX_N_PREFACTOR = "entropy"
MAX_N_TABLE = {
    Fraction(1, 10 ** 8): {
        "N": 138, "k_min": 895, "ct_full": 1.048, "ct_distinct": 0.2909,
        "k_star_17": 207, "ct_baseline": 0.2425,
        "k_star_20": 199, "ct_peg": 0.2372, "ct_depeg": 0.2355,
    },
    Fraction(1, 10 ** 6): {
        "N": 185, "k_min": 671, "ct_full": 1.053, "ct_distinct": 0.3729,
        "k_star_17": 184, "ct_baseline": 0.2890,
        "k_star_20": 175, "ct_peg": 0.2803, "ct_depeg": 0.2780,
    },
    Fraction(1, 10 ** 4): {
        "N": 232, "k_min": 539, "ct_full": 1.061, "ct_distinct": 0.4430,
        "k_star_17": 164, "ct_baseline": 0.3231,
        "k_star_20": 155, "ct_peg": 0.3122, "ct_depeg": 0.3092,
    },
}

# trend targets at mu = 20: reductions vs baseline at N = 15000, and the
# cost growth from beta 0.40 -> 0.49 at N = 20000
TREND_REDUCTION_N = 15000
TREND_REDUCTIONS = {"peg": 0.07, "de-peg": 0.093}
TREND_BETA_NODES = 20000
TREND_BETA_SPAN = (Fraction("0.40"), Fraction("0.49"))
TREND_BETA_DELTAS_GB = {"baseline": 5.1, "peg": 4.52, "de-peg": 4.47}
