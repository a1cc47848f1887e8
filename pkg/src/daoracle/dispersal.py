"""Two-phase dispersal planning and validity checking.

The secure phase permutes each layer's columns so the greedy-cover VNs
sit first, then walks layers bottom-up sending every not-yet-covered
cover chunk (plus its proof) to f+1 random nodes; proof symbols sent
along the way mark the matching cover positions of the layers above, so
upper layers usually cost nothing. The valid phase hands every node an
independent uniform k-subset of the base chunks. Checking distinct-chunk
validity of the result is exact in two exhaustive modes (over node
subsets, or equivalently over chunk subsets when that side is smaller)
with a Monte Carlo estimator past both caps.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .cit import CitParams
from .costs import OracleParams
from .errors import ConstructionError, InputError, UnsupportedRegimeError
from .graph import TannerGraph
from .coding import parity_block_consistent
from .probability import secure_size_threshold
from .stopping import StoppingSetReport

EXHAUSTIVE_CAP = 10 ** 6
_PERMUTATION_RETRIES = 256


class SecureAssignment(NamedTuple):
    layer: int
    index: int
    nodes: tuple[int, ...]


@dataclass(frozen=True)
class DispersalPlan:
    oracle: OracleParams
    cit: CitParams
    mu: int
    k: int
    seed: int
    column_orders: tuple[tuple[int, ...], ...]
    secure_assignments: tuple[SecureAssignment, ...]
    valid_assignments: tuple[tuple[int, ...], ...]
    fresh_counts: tuple[int, ...]
    permutation_redraws: int = 0

    def layer_holdings(self, layer: int) -> list[set[int]]:
        """Chunk indices (post-permutation) each node holds at a layer,
        counting proof-carried symbols from both phases."""
        base = self.cit.num_layers - 1
        if not 0 <= layer <= base:
            raise InputError(f"layer {layer} out of range")
        out: list[set[int]] = [set() for _ in range(self.oracle.num_nodes)]
        if layer == base:
            def refs(i):
                return (i,)
        else:
            s = self.cit.data_count(layer)
            p = self.cit.parity_count(layer)

            def refs(i):
                return (i % s, s + (i % p))
        for node, subset in enumerate(self.valid_assignments):
            for i in subset:
                out[node].update(refs(i))
        for a in self.secure_assignments:
            if a.layer == layer:
                for node in a.nodes:
                    out[node].add(a.index)
            elif a.layer > layer:
                for node in a.nodes:
                    out[node].update(refs(a.index))
        return out

    def chunk_holders(self, layer: int) -> list[set[int]]:
        n = self.cit.layer_sizes()[layer]
        holders: list[set[int]] = [set() for _ in range(n)]
        for node, held in enumerate(self.layer_holdings(layer)):
            for i in held:
                holders[i].add(node)
        return holders


def plan_secure_phase(codes: Sequence[TannerGraph],
                      reports: Sequence[StoppingSetReport],
                      oracle: OracleParams, cit: CitParams, mu: int,
                      rng: random.Random, *,
                      allow_partial_reports: bool = False):
    """Column orders plus f+1-replicated assignments securing every
    enumerated stopping set. Returns (orders, assignments, fresh_counts,
    redraws)."""
    sizes = cit.layer_sizes()
    M = sizes[-1]
    if len(codes) != len(sizes) or len(reports) != len(sizes):
        raise InputError("need one code and one report per layer")
    for j, (g, rep) in enumerate(zip(codes, reports)):
        want = secure_size_threshold(sizes[j], M, mu)
        if rep.size_bound != want:
            raise InputError(
                f"layer {j} report bound {rep.size_bound}, expected {want}")
        if not rep.exhaustive and not allow_partial_reports:
            raise InputError(
                f"layer {j} enumeration is partial; pass "
                f"allow_partial_reports=True to plan anyway")
        if len(rep.greedy_cover) > cit.data_count(j):
            raise UnsupportedRegimeError(
                f"layer {j} cover of {len(rep.greedy_cover)} exceeds the "
                f"{cit.data_count(j)} data positions the accounting assumes")

    orders: list[tuple[int, ...]] = []
    redraws = 0
    for j, (g, rep) in enumerate(zip(codes, reports)):
        cover = list(rep.greedy_cover)
        rest = [v for v in range(g.num_vns) if v not in set(cover)]
        for attempt in range(_PERMUTATION_RETRIES):
            rng.shuffle(rest)
            order = tuple(cover + rest)
            if parity_block_consistent(g.permuted(order)):
                break
            redraws += 1
        else:
            raise ConstructionError(
                f"layer {j}: no column order with an encodable parity block "
                f"found in {_PERMUTATION_RETRIES} draws")
        orders.append(order)

    num_layers = len(sizes)
    dispersed: list[set[int]] = [set() for _ in range(num_layers)]
    assignments: list[SecureAssignment] = []
    fresh_counts = [0] * num_layers
    f_plus_1 = oracle.max_malicious + 1
    for j in range(num_layers - 1, -1, -1):
        cover_len = len(reports[j].greedy_cover)
        fresh = [i for i in range(cover_len) if i not in dispersed[j]]
        fresh_counts[j] = len(fresh)
        for idx in fresh:
            nodes = tuple(sorted(rng.sample(range(oracle.num_nodes), f_plus_1)))
            assignments.append(SecureAssignment(j, idx, nodes))
            dispersed[j].add(idx)
            for up in range(j):
                s = cit.data_count(up)
                p = cit.parity_count(up)
                dispersed[up].add(idx % s)
                dispersed[up].add(s + (idx % p))
    return orders, assignments, fresh_counts, redraws


def plan_valid_phase(oracle: OracleParams, M: int, k: int,
                     rng: random.Random) -> list[tuple[int, ...]]:
    """One independent uniform k-subset of base indices per node."""
    if not 0 <= k <= M:
        raise InputError(f"k={k} must lie in [0, {M}]")
    return [tuple(sorted(rng.sample(range(M), k)))
            for _ in range(oracle.num_nodes)]


def build_plan(codes: Sequence[TannerGraph],
               reports: Sequence[StoppingSetReport],
               oracle: OracleParams, cit: CitParams, mu: int, k: int,
               seed: int, *, allow_partial_reports: bool = False) -> DispersalPlan:
    rng = random.Random(seed)
    orders, assignments, fresh, redraws = plan_secure_phase(
        codes, reports, oracle, cit, mu, rng,
        allow_partial_reports=allow_partial_reports)
    valid = plan_valid_phase(oracle, cit.layer_sizes()[-1], k, rng)
    return DispersalPlan(
        oracle=oracle, cit=cit, mu=mu, k=k, seed=seed,
        column_orders=tuple(orders),
        secure_assignments=tuple(assignments),
        valid_assignments=tuple(valid),
        fresh_counts=tuple(fresh),
        permutation_redraws=redraws,
    )


def is_securely_dispersed(vn_set, plan: DispersalPlan, layer: int,
                          f: int | None = None) -> bool:
    """True iff the nodes holding any chunk of the set could not all be
    malicious: |holders| >= f + 1."""
    if f is None:
        f = plan.oracle.max_malicious
    holders = plan.chunk_holders(layer)
    union: set[int] = set()
    for v in vn_set:
        if not 0 <= v < len(holders):
            raise InputError(f"index {v} out of range at layer {layer}")
        union.update(holders[v])
    return len(union) >= f + 1


@dataclass(frozen=True)
class ValidityEstimate:
    trials: int
    violations: int

    @property
    def frequency(self) -> float:
        return self.violations / self.trials

    @property
    def radius_95(self) -> float:
        if self.violations == 0:
            return 3.0 / self.trials  # rule of three
        f = self.frequency
        return 1.96 * math.sqrt(f * (1 - f) / self.trials)


def check_ss_valid(plan: DispersalPlan, mu: int, *, layer: int | None = None,
                   mode: str = "exhaustive", trials: int = 10_000,
                   rng: random.Random | None = None,
                   cap: int = EXHAUSTIVE_CAP):
    """Does every ceil(gamma N)-subset of nodes jointly hold more than
    n_layer - mu distinct chunks of the layer?

    Exhaustive mode enumerates node subsets, or equivalently chunk
    subsets of size mu when that side is smaller (a mu-subset of chunks
    jointly missing from some gamma-subset exists iff its holders leave
    gamma N nodes uncovered); past both caps an InputError points to
    monte_carlo, which returns a ValidityEstimate instead of a bool.
    """
    if layer is None:
        layer = plan.cit.num_layers - 1
    n = plan.cit.layer_sizes()[layer]
    if not 1 <= mu <= n:
        raise InputError(f"mu must lie in [1, {n}]")
    N = plan.oracle.num_nodes
    T = plan.oracle.drawings
    node_masks = [sum(1 << i for i in held)
                  for held in plan.layer_holdings(layer)]
    need = n - mu  # a subset must hold > need distinct chunks

    if mode == "monte_carlo":
        r = rng or random.Random(0)
        bad = 0
        for _ in range(trials):
            union = 0
            for node in r.sample(range(N), T):
                union |= node_masks[node]
            if union.bit_count() <= need:
                bad += 1
        return ValidityEstimate(trials, bad)
    if mode != "exhaustive":
        raise InputError("mode must be 'exhaustive' or 'monte_carlo'")

    if math.comb(N, T) <= cap:
        for subset in itertools.combinations(range(N), T):
            union = 0
            for node in subset:
                union |= node_masks[node]
            if union.bit_count() <= need:
                return False
        return True
    if math.comb(n, mu) <= cap:
        holder_masks = [0] * n
        for node, mask in enumerate(node_masks):
            rem = mask
            while rem:
                low = rem & -rem
                holder_masks[low.bit_length() - 1] |= 1 << node
                rem ^= low
        uncovered_ok = N - T  # holders must exceed this for every mu-subset
        for combo in itertools.combinations(range(n), mu):
            union = 0
            for i in combo:
                union |= holder_masks[i]
            if union.bit_count() <= uncovered_ok:
                return False
        return True
    raise InputError(
        f"both C({N},{T}) and C({n},{mu}) exceed the exhaustive cap {cap}; "
        f"use mode='monte_carlo'")


# ---------------------------------------------------------------------------
# serialization

def plan_to_json(plan: DispersalPlan) -> str:
    doc = {
        "oracle": {
            "num_nodes": plan.oracle.num_nodes,
            "adversary_fraction": str(plan.oracle.adversary_fraction),
            "gamma": str(plan.oracle.gamma),
            "p_th": str(plan.oracle.p_th),
        },
        "cit": {
            "block_size": plan.cit.block_size,
            "hash_size": plan.cit.hash_size,
            "batch": plan.cit.batch,
            "num_layers": plan.cit.num_layers,
            "base_symbols": plan.cit.base_symbols,
            "rate": str(plan.cit.rate),
        },
        "mu": plan.mu,
        "k": plan.k,
        "seed": plan.seed,
        "column_orders": [list(o) for o in plan.column_orders],
        "secure_assignments": [[a.layer, a.index, list(a.nodes)]
                               for a in plan.secure_assignments],
        "valid_assignments": [list(s) for s in plan.valid_assignments],
        "fresh_counts": list(plan.fresh_counts),
        "permutation_redraws": plan.permutation_redraws,
    }
    return json.dumps(doc, indent=1)


def plan_from_json(text: str) -> DispersalPlan:
    doc = json.loads(text)
    oracle = OracleParams(
        num_nodes=doc["oracle"]["num_nodes"],
        adversary_fraction=Fraction(doc["oracle"]["adversary_fraction"]),
        gamma=Fraction(doc["oracle"]["gamma"]),
        p_th=Fraction(doc["oracle"]["p_th"]),
    )
    cit = CitParams(
        block_size=doc["cit"]["block_size"],
        hash_size=doc["cit"]["hash_size"],
        batch=doc["cit"]["batch"],
        num_layers=doc["cit"]["num_layers"],
        base_symbols=doc["cit"]["base_symbols"],
        rate=Fraction(doc["cit"]["rate"]),
    )
    return DispersalPlan(
        oracle=oracle, cit=cit, mu=doc["mu"], k=doc["k"], seed=doc["seed"],
        column_orders=tuple(tuple(o) for o in doc["column_orders"]),
        secure_assignments=tuple(
            SecureAssignment(a[0], a[1], tuple(a[2]))
            for a in doc["secure_assignments"]),
        valid_assignments=tuple(tuple(s) for s in doc["valid_assignments"]),
        fresh_counts=tuple(doc["fresh_counts"]),
        permutation_redraws=doc.get("permutation_redraws", 0),
    )
