"""Command-line surface: construct / analyze / plan / cost / simulate /
reproduce, all driven by one JSON config plus a handful of flags.

Stages communicate through files only; identical config and seed give
byte-identical outputs. Every artifact starts with provenance lines
(tool version, config hash, seed).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from fractions import Fraction

from . import __version__, backend
from .alist import read_alist, write_alist, write_sidecar
from .cit import CitParams
from .config import RunConfig, config_hash, load_config, provenance_lines
from .costs import (GB, OracleParams, baseline_comparison, chunk_sizes,
                    expected_distinct, sweep, total_cost)
from .dispersal import build_plan, plan_to_json
from .errors import InfeasibleError, ParameterError
from .peg import build_de_peg, build_peg
from .probability import min_valid_k
from .sim import AdversaryModel, adversarial_worst_case_search, run_round, \
    write_transcript
from .stopping import enumerate_stopping_sets, read_report, write_report
from . import reference as ref


def _fail(message: str, code: int = 2):
    sys.stderr.write(json.dumps({"error": message}) + "\n")
    raise SystemExit(code)


def _load(path: str) -> RunConfig:
    try:
        return load_config(path)
    except (ParameterError, OSError, json.JSONDecodeError) as exc:
        _fail(f"invalid config: {exc}")


def _open_out(path: str | None):
    return open(path, "w", newline="") if path and path != "-" else sys.stdout


def _write_csv(out_path, cfg, seed, header, rows):
    fh = _open_out(out_path)
    for line in provenance_lines(cfg, seed):
        fh.write(line + "\n")
    fh.write(f"# backend {backend.backend_name()}\n")
    writer = csv.writer(fh)
    writer.writerow(header)
    writer.writerows(rows)
    if fh is not sys.stdout:
        fh.close()


def cmd_construct(args):
    cfg = _load(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    os.makedirs(args.out, exist_ok=True)
    for layer in range(cfg.cit.num_layers):
        params = cfg.peg_params(layer)
        if args.seed is not None:
            params = type(params)(**{**params.__dict__, "seed": seed * 1000 + layer})
        if cfg.scheme == "de-peg":
            g, ledger = build_de_peg(params)
            ledger_note = f"{len(ledger)} bad cycles retained"
        else:
            g = build_peg(params)
            ledger_note = "n/a"
        stem = os.path.join(args.out, f"layer{layer}")
        write_alist(g, stem + ".alist")
        write_sidecar(stem + ".meta", {
            "tool": f"daoracle {__version__}",
            "config": config_hash(cfg),
            "scheme": cfg.scheme,
            "layer": layer,
            "seed": params.seed,
            "num_vns": params.num_vns,
            "num_cns": params.num_cns,
            "vn_degree": params.vn_degree,
            "g_max": params.g_max,
            "emd_threshold": params.emd_threshold,
            "ledger": ledger_note,
        })
    print(f"wrote {cfg.cit.num_layers} layer codes to {args.out}")


def cmd_analyze(args):
    cfg = _load(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    for layer in range(cfg.cit.num_layers):
        g = read_alist(os.path.join(args.codes, f"layer{layer}.alist"))
        rep = enumerate_stopping_sets(
            g, cfg.enum_bound(layer), budget=cfg.enum_budget, seed=seed)
        write_report(rep, os.path.join(args.out, f"layer{layer}.ssets"))
        print(f"layer {layer}: bound {rep.size_bound}, {len(rep.sets)} sets, "
              f"cover {len(rep.greedy_cover)}, min {rep.min_size_label}, "
              f"exhaustive={rep.exhaustive}")


def cmd_plan(args):
    cfg = _load(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    codes, reports = [], []
    for layer in range(cfg.cit.num_layers):
        codes.append(read_alist(os.path.join(args.codes, f"layer{layer}.alist")))
        reports.append(read_report(os.path.join(args.reports, f"layer{layer}.ssets")))
    k = min_valid_k(cfg.mu, cfg.oracle.num_nodes, cfg.cit.base_symbols,
                    cfg.oracle.gamma, cfg.oracle.p_th)
    plan = build_plan(codes, reports, cfg.oracle, cfg.cit, cfg.mu, k, seed,
                      allow_partial_reports=args.allow_partial)
    with _open_out(args.out) as fh:
        fh.write(plan_to_json(plan))
    print(f"k*={k}, {len(plan.secure_assignments)} secure assignments, "
          f"fresh per layer {plan.fresh_counts}", file=sys.stderr)


def cmd_cost(args):
    cfg = _load(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    covers: dict[str, tuple[int, ...]] = {}
    if args.reports:
        sizes = []
        for layer in range(cfg.cit.num_layers):
            rep = read_report(os.path.join(args.reports, f"layer{layer}.ssets"))
            sizes.append(len(rep.greedy_cover))
        covers[cfg.scheme] = tuple(sizes)
        exhaustive_note = "from reports"
    else:
        covers["peg"] = ref.MU_SWEEP[cfg.mu]["peg"] if cfg.mu in ref.MU_SWEEP else None
        covers["de-peg"] = ref.MU_SWEEP[cfg.mu]["de-peg"] if cfg.mu in ref.MU_SWEEP else None
        covers = {k2: v for k2, v in covers.items() if v is not None}
        exhaustive_note = "reference tuples"
    k = min_valid_k(cfg.mu, cfg.oracle.num_nodes, cfg.cit.base_symbols,
                    cfg.oracle.gamma, cfg.oracle.p_th)
    rows = []
    exact = {}
    for scheme, tup in (covers or {"lower-bound": (0,) * cfg.cit.num_layers}).items():
        cost = total_cost(cfg.oracle, cfg.cit, k, tup)
        rows.append([scheme, ",".join(map(str, tup)), k,
                     f"{cost.gb('secure_cost'):.6f}", f"{cost.gb('valid_cost'):.6f}",
                     f"{cost.gb('root_cost'):.6f}", f"{cost.gb('total'):.6f}",
                     exhaustive_note])
        exact[scheme] = {name: [getattr(cost, name).numerator,
                                getattr(cost, name).denominator]
                         for name in ("root_cost", "secure_cost", "valid_cost", "total")}
    _write_csv(args.out, cfg, seed,
               ["scheme", "covers", "k", "cs_gb", "cv_gb", "root_gb", "ct_gb", "source"],
               rows)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"version": __version__, "config": config_hash(cfg),
                       "bytes_exact": exact}, fh, indent=1)


def cmd_simulate(args):
    cfg = _load(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    rng = random.Random(seed)
    codes = []
    for layer in range(cfg.cit.num_layers):
        params = cfg.peg_params(layer)
        if cfg.scheme == "de-peg":
            g, _ = build_de_peg(params)
        else:
            g = build_peg(params)
        codes.append(g)
    reports = [enumerate_stopping_sets(g, cfg.enum_bound(layer),
                                       budget=cfg.enum_budget, seed=seed)
               for layer, g in enumerate(codes)]
    k = min_valid_k(cfg.mu, cfg.oracle.num_nodes, cfg.cit.base_symbols,
                    cfg.oracle.gamma, cfg.oracle.p_th)
    plan = build_plan(codes, reports, cfg.oracle, cfg.cit, cfg.mu, k, seed)
    f = cfg.oracle.max_malicious
    summary = {"rounds": args.rounds, "committed": 0, "available": 0,
               "committed_unavailable": 0, "k": k,
               "votes_threshold": cfg.oracle.vote_threshold}
    block = bytes(rng.randrange(256) for _ in range(min(cfg.cit.block_size, 1 << 16)))
    last = None
    for _ in range(args.rounds):
        malicious = frozenset(rng.sample(range(cfg.oracle.num_nodes), f))
        adversary = AdversaryModel(malicious, "withhold_all")
        outcome = run_round(block, cfg.oracle, cfg.cit, codes, plan, adversary, rng)
        summary["committed"] += outcome.committed
        summary["available"] += outcome.available
        summary["committed_unavailable"] += outcome.committed and not outcome.available
        last = outcome
    search = adversarial_worst_case_search(plan, codes, reports=reports)
    summary["witness_found"] = search.witness is not None
    summary["search_proven_none"] = search.proven_none
    if args.out and last is not None:
        write_transcript(last, args.out)
    json.dump(summary, sys.stdout, indent=1)
    print()


def _reproduce_table1(out_path, seed):
    cit = ref.DEFAULT_CIT
    oracle = OracleParams(ref.DEFAULT_NODES, ref.DEFAULT_BETA,
                          ref.DEFAULT_GAMMA, ref.DEFAULT_PTH)
    rows = []
    for mu, cell in sorted(ref.MU_SWEEP.items()):
        k = min_valid_k(mu, oracle.num_nodes, cit.base_symbols, oracle.gamma,
                        oracle.p_th, prefactor=ref.MU_SWEEP_PREFACTOR)
        peg = total_cost(oracle, cit, k, cell["peg"])
        dep = total_cost(oracle, cit, k, cell["de-peg"])
        rows.append([mu, k, f"{peg.gb('valid_cost'):.3f}",
                     " ".join(map(str, cell["peg"])),
                     " ".join(map(str, cell["de-peg"])),
                     f"{peg.gb('secure_cost'):.3f}", f"{dep.gb('secure_cost'):.3f}",
                     f"{peg.gb('total'):.3f}", f"{dep.gb('total'):.3f}"])
    _write_csv(out_path, None, seed,
               ["mu", "k_star", "cv_gb", "cover_peg", "cover_depeg",
                "cs_peg_gb", "cs_depeg_gb", "ct_peg_gb", "ct_depeg_gb"],
               rows)


def _reproduce_table2(out_path, seed):
    cit = ref.DEFAULT_CIT
    rows = []
    for p_th, cell in sorted(ref.MAX_N_TABLE.items(), reverse=True):
        cmp_ = baseline_comparison(cit, ref.DEFAULT_BETA, p_th, ref.LEGACY_ETA,
                                   mu=ref.MIN_STOPPING_SIZE["peg"],
                                   prefactor=ref.MAX_N_PREFACTOR)
        N = cmp_.num_nodes
        oracle = OracleParams(N, ref.DEFAULT_BETA, 1 - 2 * ref.DEFAULT_BETA, p_th)
        k20 = min_valid_k(20, N, cit.base_symbols, oracle.gamma, p_th,
                          prefactor=ref.MAX_N_PREFACTOR)
        peg = total_cost(oracle, cit, k20, ref.MU_SWEEP[20]["peg"])
        dep = total_cost(oracle, cit, k20, ref.MU_SWEEP[20]["de-peg"])
        rows.append([f"{float(p_th):.0e}", N, cmp_.k_min,
                     f"{cmp_.full.gb('total'):.3f}",
                     f"{cmp_.distinct.gb('total'):.4f}",
                     cmp_.k_star, f"{cmp_.baseline.gb('total'):.4f}",
                     k20, f"{peg.gb('total'):.4f}", f"{dep.gb('total'):.4f}"])
    _write_csv(out_path, None, seed,
               ["p_th", "max_nodes", "k_min", "ct_full_gb", "ct_distinct_gb",
                "k_star_mu17", "ct_baseline_gb", "k_star_mu20", "ct_peg_gb",
                "ct_depeg_gb"],
               rows)


def _reproduce_fig2(out_path, seed):
    cit = ref.DEFAULT_CIT
    tuples = {"peg": ref.MU_SWEEP[20]["peg"], "de-peg": ref.MU_SWEEP[20]["de-peg"]}
    rows = sweep("N", [6000, 9000, 12000, 15000, 18000, 21000], cit,
                 ref.DEFAULT_BETA, ref.DEFAULT_PTH, 20, tuples,
                 mu_baseline=ref.MIN_STOPPING_SIZE["peg"])
    rows += sweep("beta", [Fraction(40 + 3 * i, 100) for i in range(4)], cit,
                  ref.DEFAULT_BETA, ref.DEFAULT_PTH, 20, tuples,
                  mu_baseline=ref.MIN_STOPPING_SIZE["peg"],
                  num_nodes=ref.TREND_BETA_NODES)
    _write_csv(out_path, None, seed,
               ["axis", "value", "scheme", "k", "cs_gb", "cv_gb", "ct_gb", "note"],
               [r.csv_cells() for r in rows])


def cmd_reproduce(args):
    target = args.target
    if target == "table1":
        _reproduce_table1(args.out, args.seed)
    elif target == "table2":
        _reproduce_table2(args.out, args.seed)
    elif target == "fig2":
        _reproduce_fig2(args.out, args.seed)
    else:
        _fail(f"unknown reproduction target {target!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="daoracle",
        description="coded dispersal pipeline: construct, analyze, plan, "
                    "cost, simulate, reproduce")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("construct", help="build the per-layer codes")
    common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="enumerate stopping sets per layer")
    common(p)
    p.add_argument("--codes", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("plan", help="produce a dispersal plan")
    common(p)
    p.add_argument("--codes", required=True)
    p.add_argument("--reports", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--allow-partial", action="store_true")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("cost", help="closed-form cost table for the config")
    common(p)
    p.add_argument("--reports", default=None)
    p.add_argument("--out", default="-")
    p.add_argument("--json", default=None, help="also write exact rationals")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("simulate", help="adversarial end-to-end rounds")
    common(p)
    p.add_argument("--rounds", type=int, default=10)
    p.add_argument("--mode", choices=["exhaustive", "monte-carlo"],
                   default="monte-carlo")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--out", default=None, help="transcript path (last round)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", help="regenerate a published table")
    p.add_argument("target", choices=["table1", "table2", "fig2"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_reproduce)

    args = parser.parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
