"""In-process adversarial rounds over the full oracle workflow.

A round runs propose -> disperse -> verify/vote -> commit -> retrieve ->
decode with message passing recorded in a transcript. Malicious nodes
vote as their policy dictates and withhold chunks at retrieval; honest
nodes verify every received chunk against the committed root before
voting. The client authenticates retrieved chunks layer by layer (root
hashes for the top layer, decoded parent hashes below), so corrupt data
is discarded and only withholding can hurt availability.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .cit import CitParams, CodedInterleavingTree, build_cit, pom, verify_chunk, _hash
from .coding import peel_decode
from .costs import OracleParams
from .dispersal import DispersalPlan
from .errors import InputError
from .graph import TannerGraph, peel_residual

BEHAVIORS = ("withhold_all", "withhold_subset", "vote_dishonestly")


@dataclass(frozen=True)
class AdversaryModel:
    malicious_nodes: frozenset[int]
    behavior: str = "withhold_all"
    withheld: frozenset[tuple[int, int]] = frozenset()  # (layer, index)

    def __post_init__(self):
        if self.behavior not in BEHAVIORS:
            raise InputError(f"behavior must be one of {BEHAVIORS}")

    def check_budget(self, oracle: OracleParams) -> None:
        f = oracle.max_malicious
        if len(self.malicious_nodes) > f:
            raise InputError(
                f"{len(self.malicious_nodes)} malicious nodes exceed f={f}")

    def withholds(self, node: int, layer: int, index: int) -> bool:
        if node not in self.malicious_nodes:
            return False
        if self.behavior == "withhold_all":
            return True
        if self.behavior == "withhold_subset":
            return (layer, index) in self.withheld
        return False  # vote_dishonestly: serves data, lies in the vote


@dataclass(frozen=True)
class LayerRetrieval:
    status: str  # decoded | stuck | skipped
    residual: frozenset[int] = frozenset()


@dataclass(frozen=True)
class RoundOutcome:
    committed: bool
    votes: int
    vote_threshold: int
    retrieval: tuple[LayerRetrieval, ...]
    available: bool
    block_matches: bool | None
    transcript: tuple[dict, ...] = field(repr=False)


def _deliveries(plan: DispersalPlan, tree: CodedInterleavingTree):
    """Per node, the (layer, index, chunk, proof) tuples it receives."""
    base = plan.cit.num_layers - 1
    out = [[] for _ in range(plan.oracle.num_nodes)]
    for node, subset in enumerate(plan.valid_assignments):
        for i in subset:
            out[node].append((base, i, tree.symbol(base, i), pom(tree, base, i)))
    for a in plan.secure_assignments:
        item = (a.layer, a.index, tree.symbol(a.layer, a.index),
                pom(tree, a.layer, a.index))
        for node in a.nodes:
            out[node].append(item)
    return out


def permuted_codes(plan: DispersalPlan,
                   codes: Sequence[TannerGraph]) -> list[TannerGraph]:
    return [g.permuted(order) for g, order in zip(codes, plan.column_orders)]


def run_round(block: bytes, oracle: OracleParams, cit: CitParams,
              codes: Sequence[TannerGraph], plan: DispersalPlan,
              adversary: AdversaryModel, rng: random.Random) -> RoundOutcome:
    """One propose/disperse/vote/retrieve round under the adversary.

    codes are the unpermuted layer codes; the plan's column orders are
    applied here, matching what the planner promised the cover layout.
    """
    adversary.check_budget(oracle)
    transcript: list[dict] = []
    codes_p = permuted_codes(plan, codes)
    tree = build_cit(block, cit, codes_p)
    deliveries = _deliveries(plan, tree)

    votes = 0
    for node in range(oracle.num_nodes):
        if node in adversary.malicious_nodes:
            vote = True  # stalling adversary: vote yes, withhold later
            transcript.append({"event": "vote", "node": node, "verdict": "yes",
                               "malicious": True})
        else:
            ok = all(verify_chunk(tree.root, cit, layer, idx, chunk, proof)
                     for layer, idx, chunk, proof in deliveries[node])
            vote = ok
            transcript.append({"event": "vote", "node": node,
                               "verdict": "yes" if ok else "no",
                               "malicious": False})
        votes += vote
    threshold = oracle.vote_threshold
    committed = votes >= threshold
    transcript.append({"event": "commit", "votes": votes,
                       "threshold": threshold, "committed": committed})
    if not committed:
        skipped = tuple(LayerRetrieval("skipped") for _ in range(cit.num_layers))
        return RoundOutcome(False, votes, threshold, skipped, False, None,
                            tuple(transcript))

    # retrieval: query all nodes; malicious ones withhold per policy
    returned: list[dict[int, bytes]] = [dict() for _ in range(cit.num_layers)]
    for node in range(oracle.num_nodes):
        for layer, idx, chunk, _ in deliveries[node]:
            if adversary.withholds(node, layer, idx):
                transcript.append({"event": "withhold", "node": node,
                                   "layer": layer, "index": idx})
                continue
            returned[layer][idx] = chunk

    sizes = cit.layer_sizes()
    retrieval: list[LayerRetrieval] = []
    decoded_layers: list[dict[int, bytes]] = []
    available = True
    for layer in range(cit.num_layers):
        if not available:
            retrieval.append(LayerRetrieval("skipped"))
            continue
        if layer == 0:
            expected = list(tree.root)
        else:
            s_up = cit.data_count(layer - 1)
            parent = decoded_layers[layer - 1]
            expected = [parent[x % s_up][(x // s_up) * cit.hash_size:
                                         (x // s_up + 1) * cit.hash_size]
                        for x in range(sizes[layer])]
        known = {i: ch for i, ch in returned[layer].items()
                 if _hash(ch) == expected[i]}
        outcome = peel_decode(codes_p[layer], known)
        if outcome.decoded:
            full = dict(known)
            full.update(outcome.recovered)
            decoded_layers.append(full)
            retrieval.append(LayerRetrieval("decoded"))
        else:
            available = False
            retrieval.append(LayerRetrieval("stuck", outcome.residual))
        transcript.append({"event": "decode", "layer": layer,
                           "verdict": retrieval[-1].status})

    block_matches: bool | None = None
    if available:
        base = cit.num_layers - 1
        data = b"".join(decoded_layers[base][i]
                        for i in range(cit.data_count(base)))
        block_matches = data[:len(block)] == block and not any(
            data[len(block):cit.data_count(base) * cit.base_chunk_size()])
    return RoundOutcome(True, votes, threshold, tuple(retrieval), available,
                        block_matches, tuple(transcript))


@dataclass(frozen=True)
class SearchResult:
    witness: AdversaryModel | None
    proven_none: bool
    explored: int


def _erasure_stuck(plan: DispersalPlan, codes_p: Sequence[TannerGraph],
                   malicious: frozenset[int]) -> int | None:
    """First layer a peeling client cannot decode when `malicious`
    withholds everything, or None."""
    for layer in range(plan.cit.num_layers):
        holders = plan.chunk_holders(layer)
        erased = {i for i, nodes in enumerate(holders)
                  if not (nodes - malicious)}
        if erased and peel_residual(codes_p[layer], erased):
            return layer
    return None


def adversarial_worst_case_search(plan: DispersalPlan,
                                  codes: Sequence[TannerGraph],
                                  budget: int = 100_000,
                                  reports=None,
                                  rng: random.Random | None = None,
                                  exhaustive_nodes: int = 20) -> SearchResult:
    """Hunt for a committed-but-unavailable adversary configuration.

    Tries report-guided targets first (a stopping set whose holders fit
    within f nodes is an immediate witness), then exhausts malicious
    f-subsets for small N, else samples them. proven_none only after the
    exhaustive sweep completed.
    """
    f = plan.oracle.max_malicious
    N = plan.oracle.num_nodes
    codes_p = permuted_codes(plan, codes)
    explored = 0

    if reports is not None:
        for layer, rep in enumerate(reports):
            holders = plan.chunk_holders(layer)
            # report sets are in original column labels; map them forward
            order = plan.column_orders[layer]
            new_of_old = {old: new for new, old in enumerate(order)}
            for s in rep.sets:
                explored += 1
                union: set[int] = set()
                for v in s:
                    union.update(holders[new_of_old[v]])
                if len(union) <= f:
                    return SearchResult(
                        AdversaryModel(frozenset(union)), False, explored)

    if f == 0:
        stuck = _erasure_stuck(plan, codes_p, frozenset())
        if stuck is not None:
            return SearchResult(AdversaryModel(frozenset()), False, explored + 1)
        return SearchResult(None, True, explored + 1)

    if N <= exhaustive_nodes:
        for combo in itertools.combinations(range(N), f):
            explored += 1
            if explored > budget:
                return SearchResult(None, False, explored)
            mal = frozenset(combo)
            if _erasure_stuck(plan, codes_p, mal) is not None:
                return SearchResult(AdversaryModel(mal), False, explored)
        return SearchResult(None, True, explored)

    r = rng or random.Random(0)
    while explored < budget:
        explored += 1
        mal = frozenset(r.sample(range(N), f))
        if _erasure_stuck(plan, codes_p, mal) is not None:
            return SearchResult(AdversaryModel(mal), False, explored)
    return SearchResult(None, False, explored)


def write_transcript(outcome: RoundOutcome, path) -> None:
    import json

    with open(path, "w") as fh:
        for event in outcome.transcript:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
