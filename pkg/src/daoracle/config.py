"""Run configuration: one JSON document drives every pipeline stage.

Fractions travel as decimal strings so nothing is lost to binary
floats; quantities are bytes. Every output file embeds the canonical
config hash and the tool version for provenance.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .cit import CitParams
from .costs import OracleParams
from .errors import ParameterError
from .peg import DEFAULT_EMD_THRESHOLD, DEFAULT_VN_DEGREE, PegParams, default_g_max
from .probability import secure_size_threshold


@dataclass(frozen=True)
class RunConfig:
    cit: CitParams
    oracle: OracleParams
    mu: int
    scheme: str = "de-peg"  # de-peg | peg
    vn_degree: int = DEFAULT_VN_DEGREE
    g_max: tuple[int, ...] = ()
    emd_threshold: int = DEFAULT_EMD_THRESHOLD
    seed: int = 0
    enum_budget: int = 10 ** 9
    raw: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.scheme not in ("peg", "de-peg"):
            raise ParameterError(f"unknown scheme {self.scheme!r}")
        if not 1 <= self.mu <= self.cit.base_symbols:
            raise ParameterError("mu must lie in [1, base_symbols]")
        if self.g_max and len(self.g_max) != self.cit.num_layers:
            raise ParameterError("g_max must list one value per layer")
        for j, n in enumerate(self.cit.layer_sizes()):
            if self.cit.parity_count(j) < self.vn_degree:
                raise ParameterError(
                    f"layer {j} has fewer CNs than vn_degree={self.vn_degree}")

    def layer_g_max(self, layer: int) -> int:
        if self.g_max:
            return self.g_max[layer]
        return default_g_max(self.cit.num_layers, layer)

    def peg_params(self, layer: int) -> PegParams:
        sizes = self.cit.layer_sizes()
        return PegParams(
            num_vns=sizes[layer],
            num_cns=self.cit.parity_count(layer),
            vn_degree=self.vn_degree,
            g_max=self.layer_g_max(layer),
            emd_threshold=self.emd_threshold,
            seed=self.seed * 1000 + layer,
        )

    def enum_bound(self, layer: int) -> int:
        sizes = self.cit.layer_sizes()
        return secure_size_threshold(sizes[layer], self.cit.base_symbols, self.mu)


def parse_config(doc: dict) -> RunConfig:
    try:
        cit = CitParams(
            block_size=int(doc["block_size_bytes"]),
            hash_size=int(doc.get("hash_size_bytes", 32)),
            batch=int(doc.get("batch", 4)),
            num_layers=int(doc.get("layers", 4)),
            base_symbols=int(doc.get("base_symbols", 256)),
            rate=Fraction(str(doc.get("rate", "1/2"))),
        )
        oracle = OracleParams(
            num_nodes=int(doc["num_nodes"]),
            adversary_fraction=Fraction(str(doc["adversary_fraction"])),
            gamma=Fraction(str(doc["gamma"])),
            p_th=Fraction(str(doc["p_th"])),
        )
        return RunConfig(
            cit=cit,
            oracle=oracle,
            mu=int(doc["mu"]),
            scheme=doc.get("scheme", "de-peg"),
            vn_degree=int(doc.get("vn_degree", DEFAULT_VN_DEGREE)),
            g_max=tuple(doc["g_max"]) if "g_max" in doc else (),
            emd_threshold=int(doc.get("emd_threshold", DEFAULT_EMD_THRESHOLD)),
            seed=int(doc.get("seed", 0)),
            enum_budget=int(doc.get("enum_budget", 10 ** 9)),
            raw=doc,
        )
    except KeyError as exc:
        raise ParameterError(f"config is missing required field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"malformed config value: {exc}") from None


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(json.load(fh))


def config_hash(cfg: RunConfig) -> str:
    canon = json.dumps(cfg.raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def provenance_lines(cfg: RunConfig | None, seed: int | None = None) -> list[str]:
    out = [f"# daoracle {__version__}"]
    if cfg is not None:
        out.append(f"# config_sha256 {config_hash(cfg)}")
    if seed is not None:
        out.append(f"# seed {seed}")
    return out
