"""Config-driven experiment runner and command-line interface.

A run takes an experiment config (TOML), generates the graph, draws disorder
realizations, computes the eigenvalue-counting and landscape-counting curves,
compares them, fits the spectral-bottom tail, and writes a reproducible
artifact bundle: graph file, curve CSVs, JSON reports, gnuplot scripts, and
a manifest with config hash and stage timings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (LandscapeLawReport, ensemble_mean, fit_tail, landscape_law_check,
                       lowest_positive_decade, scaled_overlay)
from .config import ExperimentConfig, build_graph_and_region, default_alpha, load_config
from .curves import CountingCurve
from .graphics import write_panel_script
from .graphio import curve_rows, read_curves_csv, write_curves_csv, write_graph_text
from .graphs import build_covering, covering_is_exhaustive, measure_overlap
from .landscape import CountingEvaluator, counting_curve_landscape, solve_landscape
from .operator import assemble, sample_disorder
from .spectral import band1d_kernel_bounds, harmonic_weight_1d, ids_curve
from .zoo import GASKET_BETA

ENSEMBLE_IDS_TAG = -1
ENSEMBLE_NU_TAG = -2


class StageError(RuntimeError):
    def __init__(self, stage, config_name, cause):
        super().__init__("stage %r failed for experiment %r: %s" % (stage, config_name, cause))
        self.stage = stage


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _report_dict(rep: LandscapeLawReport) -> dict:
    return _json_ready({
        "model": rep.model,
        "upper_constant": rep.upper_constant,
        "upper_violation": rep.upper_violation,
        "min_upper_slack": None if rep.upper_slack is None else float(rep.upper_slack.min()),
        "lower_c1": rep.lower_c1,
        "lower_c2": rep.lower_c2,
        "energies": rep.energies,
        "ids_values": rep.ids_values,
        "nu_at_upper": rep.nu_at_upper,
    })


def run_experiment(config: ExperimentConfig, out_dir, threads=1, paper_scale=False) -> dict:
    """Full pipeline; returns the report dictionary that was written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    timings = {}
    manifest = {
        "code_version": __version__,
        "config_hash": config.config_hash(),
        "name": config.name,
        "stages_seconds": timings,
    }

    def stage(name):
        class _Timer:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, exc_type, exc, tb):
                timings[name] = time.perf_counter() - self.t0
                (out / "manifest.json").write_text(
                    json.dumps(_json_ready(manifest), indent=2, sort_keys=True))
                if exc is not None and not isinstance(exc, StageError):
                    raise StageError(name, config.name, exc) from exc
        return _Timer()

    graph_table = dict(config.graph)
    if paper_scale:
        graph_table.update(config.paper_scale_graph)

    with stage("generate"):
        g, region = build_graph_and_region(graph_table)
        write_graph_text(g, out / "graph.txt")
        manifest["vertices"] = g.vertex_count
        manifest["region_size"] = len(region)

    energies = config.energy_grid()

    def one_realization(r):
        mu, v = sample_disorder(g, region, config.disorder, realization=r)
        op = assemble(g, region, mu, v, config.boundary)
        u = solve_landscape(op)
        ids = ids_curve(op, energies)
        nu = counting_curve_landscape(u, region, energies, config.policy)
        return op, u, ids, nu

    with stage("realizations"):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(one_realization, range(config.realizations)))
        else:
            results = [one_realization(r) for r in range(config.realizations)]
        rows = []
        for r, (_, _, ids, nu) in enumerate(results):
            rows += curve_rows(ids, r)
            rows += curve_rows(nu, r)

    with stage("ensemble"):
        ids_mean = ensemble_mean([ids for _, _, ids, _ in results])
        nu_mean = ensemble_mean([nu for _, _, _, nu in results])
        rows += [(e, v, "ensemble_mean", ENSEMBLE_IDS_TAG)
                 for e, v in zip(ids_mean.energies, ids_mean.values)]
        rows += [(e, v, "ensemble_mean", ENSEMBLE_NU_TAG)
                 for e, v in zip(nu_mean.energies, nu_mean.values)]
        write_curves_csv(out / "curves.csv", rows)

    with stage("landscape_law"):
        lo, hi = config.scale_grid_exponents
        scale_grid = [2.0 ** (k / 4.0) for k in range(lo, hi + 1)]
        _, u0, ids0, _ = results[0]
        evaluator = CountingEvaluator(u0, region, config.policy)
        law = landscape_law_check(ids0, evaluator, scale_grid, model=config.name)

    with stage("covering_stats"):
        ref_radius = config.policy.radius(config.e_min)
        cov = build_covering(g, ref_radius)
        alpha = default_alpha(graph_table)
        covering_stats = {
            "radius": ref_radius,
            "centers": len(cov.centers),
            "overlap_constant": cov.overlap_constant,
            "union_covers": covering_is_exhaustive(g, cov),
            "scaled_overlap": {str(lam): measure_overlap(g, cov, lam) for lam in (1, 2, 4)},
            "alpha": alpha,
        }

    with stage("tail_fit"):
        exponent = config.fit_exponent
        if exponent is None:
            exponent = default_alpha(graph_table) / config.policy.beta
        window = lowest_positive_decade(ids_mean)
        tail = None
        if window is not None:
            try:
                fit = fit_tail(ids_mean, window, exponent)
                tail = {
                    "window": fit.window, "exponent": fit.exponent,
                    "m1": fit.m1, "m2": fit.m2, "r_squared": fit.r_squared,
                    "loglog_slope": fit.loglog_slope,
                    "loglog_r_squared": fit.loglog_r_squared,
                }
            except ValueError as err:
                tail = {"error": str(err)}

    with stage("overlay"):
        overlay_rows = None
        if config.overlay_c1 is not None and config.overlay_c2 is not None:
            ov = scaled_overlay(nu_mean, config.overlay_c1, config.overlay_c2)
            overlay_rows = list(zip(ov.energies, ov.values))
            write_curves_csv(out / "nu_scaled.csv",
                             [(e, v, "landscape", 0) for e, v in overlay_rows])

    with stage("report"):
        report = {
            "name": config.name,
            "graph": graph_table,
            "region_size": len(region),
            "landscape_law": _report_dict(law),
            "covering": covering_stats,
            "tail_fit": tail,
            "overlay": {"c1": config.overlay_c1, "c2": config.overlay_c2},
            "realizations": config.realizations,
            "seed": config.seed,
        }
        (out / "report.json").write_text(json.dumps(_json_ready(report), indent=2, sort_keys=True))
        write_curves_csv(out / "ids_mean.csv", [(e, v, "ensemble_mean", ENSEMBLE_IDS_TAG)
                                                for e, v in zip(ids_mean.energies, ids_mean.values)])
        write_curves_csv(out / "nu_mean.csv", [(e, v, "ensemble_mean", ENSEMBLE_NU_TAG)
                                               for e, v in zip(nu_mean.energies, nu_mean.values)])
        write_panel_script(out, config.name, have_overlay=overlay_rows is not None)
    return report


def _parse_int_list(text):
    """Accept '3,6,10', '1..3', or a single integer."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_gen(args):
    if args.config:
        table = load_config(args.config).graph
    else:
        table = {"family": args.spec}
        if args.spec == "band":
            table.update(d=args.d, W=args.W, region_sites=args.sites, norm=args.norm)
        elif args.spec == "sierpinski":
            table.update(level=args.level)
        elif args.spec == "penrose":
            table.update(clip_radius=args.clip_radius)
            if args.generations:
                table.update(generations=args.generations)
        elif args.spec == "stacked":
            raise SystemExit("stacked generation needs a config file with a [graph.base] table")
    g, region = build_graph_and_region(table)
    write_graph_text(g, args.out)
    print("wrote %s: %d vertices, %d edges (region %d)"
          % (args.out, g.vertex_count, g.edge_count, len(region)))
    return 0


def _load_and_override(args):
    config = load_config(args.config)
    if args.seed is not None:
        config = _with_seed(config, args.seed)
    return config


def _with_seed(config: ExperimentConfig, seed):
    from .operator import DisorderConfig
    config.seed = int(seed)
    config.disorder = DisorderConfig(mu=config.disorder.mu, v=config.disorder.v, seed=int(seed))
    return config


def cmd_run(args):
    config = _load_and_override(args)
    out = args.out or config.output
    report = run_experiment(config, out, threads=args.threads, paper_scale=args.paper_scale)
    law = report["landscape_law"]
    print("experiment %s: upper constant C=%s, lower witness c1=%s c2=%s"
          % (report["name"], law["upper_constant"], law["lower_c1"], law["lower_c2"]))
    if report["tail_fit"]:
        print("tail fit: %s" % json.dumps(_json_ready(report["tail_fit"])))
    return 0 if law["upper_constant"] is not None else 1


def _run_curves_only(args, want_ids):
    config = _load_and_override(args)
    out = Path(args.out or config.output)
    out.mkdir(parents=True, exist_ok=True)
    g, region = build_graph_and_region(config.graph)
    energies = config.energy_grid()
    rows = []
    for r in range(config.realizations):
        mu, v = sample_disorder(g, region, config.disorder, realization=r)
        op = assemble(g, region, mu, v, config.boundary)
        if want_ids:
            rows += curve_rows(ids_curve(op, energies), r)
        else:
            u = solve_landscape(op)
            rows += curve_rows(counting_curve_landscape(u, region, energies, config.policy), r)
    name = "ids.csv" if want_ids else "landscape.csv"
    write_curves_csv(out / name, rows)
    print("wrote %s (%d realizations)" % (out / name, config.realizations))
    return 0


def cmd_run_ids(args):
    return _run_curves_only(args, want_ids=True)


def cmd_run_landscape(args):
    return _run_curves_only(args, want_ids=False)


def _first_curve(path, prefer_kind):
    data = read_curves_csv(path)
    keys = sorted(data, key=lambda k: (k[0] != prefer_kind, k[1]))
    if not keys:
        raise SystemExit("no curves in %s" % path)
    energies, values = data[keys[0]]
    kind = keys[0][0] if keys[0][0] in ("ids", "landscape", "ensemble_mean") else "ids"
    return CountingCurve(np.array(energies), np.array(values), kind)


def cmd_compare(args):
    ids = _first_curve(args.ids, "ids")
    nu = _first_curve(args.nu, "landscape")
    report = landscape_law_check(ids, nu, model="compare")
    if report.upper_constant is None:
        print("no upper constant in grid; max violation %.3e" % report.upper_violation)
        return 1
    print("upper constant C=%g (min slack %.3e); lower witness c1=%s c2=%s"
          % (report.upper_constant, report.upper_slack.min(),
             report.lower_c1, report.lower_c2))
    return 0


def cmd_fit_tails(args):
    curve = _first_curve(args.curves, args.kind)
    window = (args.window[0], args.window[1]) if args.window else lowest_positive_decade(curve)
    if window is None:
        print("curve has no positive values; nothing to fit")
        return 1
    try:
        fit = fit_tail(curve, window, args.exponent)
    except ValueError as err:
        print("fit failed: %s" % err)
        return 1
    print("window [%g, %g]: m1=%.4g m2=%.4g R^2=%.4f loglog slope=%.3f"
          % (fit.window[0], fit.window[1], fit.m1, fit.m2, fit.r_squared, fit.loglog_slope))
    return 0


def cmd_verify_appendix(args):
    ws = _parse_int_list(args.W)
    rs = _parse_int_list(args.r)
    ok = True
    for w in ws:
        for r in rs:
            rep = band1d_kernel_bounds(w, r)
            passed = rep.min_slack >= -1e-10 and rep.poisson_mass_error <= 1e-10
            print("kernel bounds W=%d r=%-3d min slack % .3e mass err %.2e %s"
                  % (w, r, rep.min_slack, rep.poisson_mass_error, "ok" if passed else "FAIL"))
            ok &= passed
            if r >= 2:
                hw = harmonic_weight_1d(w, r)
                hpass = (abs(hw.total - 1.0) <= 1e-10
                         and hw.min_weight >= hw.lower_bound - 1e-10)
                print("harmonic weight W=%d r=%-3d sum-1 % .2e min %.4e >= %.4e %s"
                      % (w, r, hw.total - 1.0, hw.min_weight, hw.lower_bound,
                         "ok" if hpass else "FAIL"))
                ok &= hpass
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="landscapeids",
                                     description="IDS vs landscape counting experiments on graphs")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("--config")
    p.add_argument("--spec", choices=["band", "sierpinski", "penrose", "stacked"])
    p.add_argument("--level", type=int, default=5)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--W", type=int, default=1)
    p.add_argument("--sites", type=int, default=100)
    p.add_argument("--norm", default="l1")
    p.add_argument("--clip-radius", type=float, default=15.0)
    p.add_argument("--generations", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    for name, func in (("run", cmd_run), ("run-ids", cmd_run_ids),
                       ("run-landscape", cmd_run_landscape)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--paper-scale", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("compare", help="landscape-law comparison of two curve files")
    p.add_argument("ids")
    p.add_argument("nu")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("fit-tails")
    p.add_argument("--curves", required=True)
    p.add_argument("--kind", default="ensemble_mean")
    p.add_argument("--exponent", type=float, default=0.5)
    p.add_argument("--window", type=float, nargs=2)
    p.set_defaults(func=cmd_fit_tails)

    p = sub.add_parser("verify-appendix", help="1D band kernel and harmonic-weight sweeps")
    p.add_argument("--W", default="1..3")
    p.add_argument("--r", default="3..20")
    p.set_defaults(func=cmd_verify_appendix)

    args = parser.parse_args(argv)
    if args.command == "gen" and not args.config and not args.spec:
        parser.error("gen needs --config or --spec")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
