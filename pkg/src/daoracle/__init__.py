"""Communication-efficient coded data dispersal for availability oracles.

Pipeline: construct layer codes (PEG / DE-PEG), enumerate their small
stopping sets, build the coded interleaving tree, plan the two-phase
dispersal (secure cover replication + uniform k-subsets), account costs
exactly, and stress the whole thing in an adversarial simulation.
"""

__version__ = "0.1.0"

from .backend import BACKEND, backend_name
from .graph import (CycleEnumeration, TannerGraph, cycles_through_new_edge,
                    emd, girth, is_stopping_set, peel_residual)
from .coding import PeelingOutcome, parity_block_consistent, peel_decode, \
    systematic_encode
from .alist import read_alist, write_alist
from .peg import (BadCycleLedger, PegParams, build_de_peg, build_peg,
                  default_g_max, greedy_size, peg_candidates)
from .stopping import (MinSizeProbe, StoppingSetReport, enumerate_stopping_sets,
                       greedy_cover, probe_min_stopping_size, read_report,
                       validate_report, write_report)
from .probability import (binary_entropy, group_coupon_tail,
                          max_supported_nodes, min_k_with_replacement,
                          min_valid_k, prob_not_eta_valid_ub,
                          prob_not_ss_valid_ub, secure_size_threshold)
from .cit import (CitParams, CodedInterleavingTree, ProofOfMembership,
                  build_cit, layer_sizes, load_tree, pom, pom_from_bytes,
                  pom_index_cover, pom_to_bytes, save_tree, verify_chunk)
from .costs import (GB, BaselineComparison, CostBreakdown, OracleParams,
                    baseline_comparison, chunk_sizes, expected_distinct,
                    secure_cost, sweep, total_cost, valid_cost)
from .dispersal import (DispersalPlan, SecureAssignment, ValidityEstimate,
                        build_plan, check_ss_valid, is_securely_dispersed,
                        plan_from_json, plan_secure_phase, plan_to_json,
                        plan_valid_phase)
from .sim import (AdversaryModel, RoundOutcome, SearchResult,
                  adversarial_worst_case_search, run_round, write_transcript)
from .errors import (ConstructionError, InfeasibleError, InputError,
                     ParameterError, UnsupportedRegimeError)
