"""Command-line surface.

Commands: pc-table, theta, psi, alpha-c, max-h, audit-beta, offspring,
simulate, gw.  Every command is deterministic given its flags and seed; the
seed defaults to the RUMORLAB_SEED environment variable, then OS entropy,
and is always echoed in the emitted manifest.

Exit codes: 0 success, 2 usage error, 3 numeric fault.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import secrets
import sys
import time
from . import __version__
from . import ctmc, gw, laws, thresholds, treegen
from .errors import NumericFault

_EXIT_NUMERIC_FAULT = 3


def _default_seed() -> int:
    env = os.environ.get("RUMORLAB_SEED")
    if env is not None:
        return int(env)
    return secrets.randbits(63)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit master seed (default: RUMORLAB_SEED env or OS entropy)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", dest="out_format")
    common.add_argument("--out", default="-", help="output path (default stdout)")
    common.add_argument("--threads", type=int, default=1, help="worker processes for replica-parallel commands")
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=None, help="force exact rational arithmetic")
    mode.add_argument("--float", dest="exact", action="store_false", help="force log-space float arithmetic")
    return common


def _manifest(args: argparse.Namespace, command: str) -> dict:
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "out", "out_format") and v is not None
    }
    return {
        "command": command,
        "parameters": params,
        "seed": args.seed,
        "version": __version__,
    }


def _emit(args: argparse.Namespace, manifest: dict, rows: list[dict], payload: dict | None = None) -> None:
    """Write the report: JSON embeds the manifest; CSV carries it as a
    '#'-prefixed preamble above the header row (comma-delimited, UTF-8, LF).
    """
    if args.out_format == "json":
        doc = {"manifest": manifest}
        if payload is not None:
            doc.update(payload)
        if rows:
            doc["rows"] = rows
        text = json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    else:
        buf = io.StringIO()
        buf.write("# manifest: " + json.dumps(manifest, sort_keys=True, default=str) + "\n")
        if payload:
            buf.write("# summary: " + json.dumps(payload, sort_keys=True, default=str) + "\n")
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _finish(args, command, rows, payload=None, started=None) -> int:
    manifest = _manifest(args, command)
    if started is not None:
        manifest["duration_s"] = round(time.perf_counter() - started, 6)
    _emit(args, manifest, rows, payload)
    return 0


def _fraction_fields(value) -> tuple[str, str]:
    if value is not None and value.is_exact:
        return str(value.numerator), str(value.denominator)
    return "", ""


def cmd_pc_table(args, parser) -> int:
    started = time.perf_counter()
    if args.d_min < 3:
        parser.error(f"pc-table requires d >= 3 (the threshold is trivial below); got d-min={args.d_min}")
    if args.d_min > args.d_max:
        parser.error(f"empty range: d-min={args.d_min} > d-max={args.d_max}")
    rows = []
    for d in range(args.d_min, args.d_max + 1):
        report = thresholds.p_critical(d, exact=args.exact)
        num, den = _fraction_fields(report.value)
        rows.append(
            {
                "d": d,
                "pc_numerator": num,
                "pc_denominator": den,
                "pc_float": report.float_value,
                "pc_asymptotic": report.asymptotic_value,
            }
        )
    return _finish(args, "pc-table", rows, started=started)


def cmd_theta(args, parser) -> int:
    started = time.perf_counter()
    if not 0 < args.p <= 1:
        parser.error(f"p must lie in (0, 1], got {args.p}")
    methods = ("analytic", "gw_mc", "ctmc_mc") if args.method == "all" else (args.method,)
    payload: dict = {}
    rows = []
    for method in methods:
        if method == "analytic":
            value = thresholds.theta(args.d, args.p)
            payload["analytic"] = value
            rows.append({"method": "analytic", "estimate": value, "ci_low": "", "ci_high": ""})
        elif method == "gw_mc":
            est = gw.survival_mc(
                args.d, args.p, args.replicas, horizon=args.horizon,
                seed=args.seed, workers=args.threads,
            )
            payload["gw_mc"] = est.__dict__
            rows.append({"method": "gw_mc", "estimate": est.estimate, "ci_low": est.ci_low, "ci_high": est.ci_high})
        else:
            est = ctmc.estimate_survival_ctmc(
                treegen.cayley(args.d), args.p, target_level=args.level,
                replicas=args.replicas, seed=args.seed, workers=args.threads,
            )
            payload["ctmc_mc"] = est.__dict__
            rows.append({"method": "ctmc_mc", "estimate": est.estimate, "ci_low": est.ci_low, "ci_high": est.ci_high})
    return _finish(args, "theta", rows, payload, started)


def cmd_psi(args, parser) -> int:
    started = time.perf_counter()
    if not 0 < args.p <= 1:
        parser.error(f"p must lie in (0, 1], got {args.p}")
    root = thresholds.psi_root(args.d, args.p)
    rows = [{"psi": root.psi, "iterations": root.iterations, "residual": root.residual}]
    return _finish(args, "psi", rows, started=started)


def cmd_alpha_c(args, parser) -> int:
    started = time.perf_counter()
    report = thresholds.alpha_critical(args.d, args.k, args.h, beta_form=args.beta_form, exact=args.exact)
    num, den = _fraction_fields(report.value)
    rows = [
        {
            "alpha_c_numerator": num,
            "alpha_c_denominator": den,
            "alpha_c_float": report.float_value,
            "feasible": report.feasible,
            "beta_form": args.beta_form,
        }
    ]
    return _finish(args, "alpha-c", rows, started=started)


def cmd_max_h(args, parser) -> int:
    started = time.perf_counter()
    h_max = thresholds.max_h(args.d, args.k, beta_form=args.beta_form, exact=args.exact)
    bound = thresholds.asymptotic_h_bound(args.d, args.k)
    payload = {"h_max": h_max, "asymptotic_bound_logd_logk": bound}
    log_d = math.log(args.d)
    if 0.5 * log_d <= args.k <= 2.0 * log_d:
        # k = Theta(log d) regime: feasibility scales like log d / log log d
        payload["k_theta_logd"] = True
        payload["asymptotic_bound_logd_loglogd"] = log_d / math.log(log_d)
    rows = [{"h_max": h_max, "asymptotic_bound": bound}]
    return _finish(args, "max-h", rows, payload, started)


def cmd_audit_beta(args, parser) -> int:
    started = time.perf_counter()
    if args.k < 3:
        parser.error(f"audit-beta requires k >= 3 (k = 2 has zero paper-form traversal); got {args.k}")
    m = args.k - 1
    paper = laws.beta_paper(m)
    series = laws.beta_series(m)
    gap = laws.beta_gap(m)
    est = ctmc.path_traversal_empirical(args.k, args.replicas, seed=args.seed)
    payload = {
        "beta_paper": paper.as_float(),
        "beta_series": series.as_float(),
        "exact_gap": f"{gap.numerator}/{gap.denominator}",
        "gap_float": float(gap),
        "empirical": est.__dict__,
        "empirical_covers": (
            "series" if est.ci_low <= series.as_float() <= est.ci_high else
            "paper" if est.ci_low <= paper.as_float() <= est.ci_high else "neither"
        ),
    }
    p_num, p_den = _fraction_fields(paper)
    s_num, s_den = _fraction_fields(series)
    rows = [
        {
            "form": "paper",
            "numerator": p_num,
            "denominator": p_den,
            "value": paper.as_float(),
        },
        {
            "form": "series",
            "numerator": s_num,
            "denominator": s_den,
            "value": series.as_float(),
        },
        {
            "form": "empirical",
            "numerator": "",
            "denominator": "",
            "value": est.estimate,
        },
    ]
    return _finish(args, "audit-beta", rows, payload, started)


def cmd_offspring(args, parser) -> int:
    started = time.perf_counter()
    if not 0 < args.p <= 1:
        parser.error(f"p must lie in (0, 1], got {args.p}")
    empirical = ctmc.offspring_empirical(args.d, args.p, args.replicas, seed=args.seed)
    analytic = laws.law_X_prime(args.d, args.p)
    tv = laws.tv_distance(empirical, analytic)
    rows = [
        {"i": i, "empirical": float(empirical.p(i)), "analytic": float(analytic.p(i))}
        for i in analytic.support()
    ]
    payload = {"tv_distance": tv, "empirical_mean": float(empirical.mean()), "analytic_mean": float(analytic.mean())}
    return _finish(args, "offspring", rows, payload, started)


def _topology_from_args(args, parser) -> treegen.TreeTopology:
    if args.tree == "cayley":
        if args.k is not None or args.alpha is not None or args.h is not None:
            parser.error("--k/--alpha/--h require --tree hub_path")
        return treegen.cayley(args.d)
    if args.k is None or args.alpha is None or args.h is None:
        parser.error("--tree hub_path requires --k, --alpha, and --h")
    return treegen.hub_path(args.d, args.k, args.alpha, args.h)


def cmd_simulate(args, parser) -> int:
    started = time.perf_counter()
    if not 0 < args.p <= 1:
        parser.error(f"p must lie in (0, 1], got {args.p}")
    topology = _topology_from_args(args, parser)

    def run(level: int) -> ctmc.SurvivalEstimate:
        return ctmc.estimate_survival_ctmc(
            topology,
            args.p,
            target_level=level,
            replicas=args.replicas,
            event_cap=args.event_cap,
            seed=args.seed,
            workers=args.threads,
            level_unit=args.level_unit,
        )

    if args.level_sweep:
        try:
            lo, hi, step = (int(x) for x in args.level_sweep.split(":"))
        except ValueError:
            parser.error("--level-sweep expects MIN:MAX:STEP")
        if lo < 1 or hi < lo or step < 1:
            parser.error("--level-sweep expects 1 <= MIN <= MAX and STEP >= 1")
        rows = []
        for level in range(lo, hi + 1, step):
            est = run(level)
            rows.append(
                {"level": level, "estimate": est.estimate, "ci_low": est.ci_low,
                 "ci_high": est.ci_high, "cap_hits": est.cap_hits}
            )
        return _finish(args, "simulate", rows, started=started)

    est = run(args.level) if args.level else run(None)
    payload = {
        "estimate": est.estimate,
        "ci_low": est.ci_low,
        "ci_high": est.ci_high,
        "replicas": est.replicas,
        "cap_hits": est.cap_hits,
        "target_level": est.target_level,
        "level_unit": est.level_unit,
    }
    rows = [dict(payload)]
    return _finish(args, "simulate", rows, payload, started)


def cmd_gw(args, parser) -> int:
    started = time.perf_counter()
    if not 0 < args.p <= 1:
        parser.error(f"p must lie in (0, 1], got {args.p}")
    est = gw.survival_mc(
        args.d, args.p, args.replicas, horizon=args.horizon, cap=args.cap,
        seed=args.seed, workers=args.threads,
    )
    payload = est.__dict__
    rows = [
        {"estimate": est.estimate, "ci_low": est.ci_low, "ci_high": est.ci_high,
         "replicas": est.replicas}
    ]
    return _finish(args, "gw", rows, payload, started)


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="rumorlab",
        description="Thresholds and simulation for rumor spreading on trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pc-table", parents=[common], help="critical probability table")
    p.add_argument("--d-min", type=int, default=3)
    p.add_argument("--d-max", type=int, default=11)
    p.set_defaults(func=cmd_pc_table)

    p = sub.add_parser("theta", parents=[common], help="survival probability")
    p.add_argument("d", type=int)
    p.add_argument("p", type=float)
    p.add_argument("--method", choices=("analytic", "gw_mc", "ctmc_mc", "all"), default="analytic")
    p.add_argument("--replicas", type=int, default=10_000)
    p.add_argument("--horizon", type=int, default=gw.DEFAULT_HORIZON)
    p.add_argument("--level", type=int, default=ctmc.DEFAULT_LEVEL_CAYLEY)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("psi", parents=[common], help="extinction fixed point")
    p.add_argument("d", type=int)
    p.add_argument("p", type=float)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("alpha-c", parents=[common], help="hub-tree critical alpha")
    p.add_argument("d", type=int)
    p.add_argument("k", type=int)
    p.add_argument("h", type=int)
    p.add_argument("--beta-form", choices=("paper", "series"), default="paper")
    p.set_defaults(func=cmd_alpha_c)

    p = sub.add_parser("max-h", parents=[common], help="largest feasible hub distance")
    p.add_argument("d", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--beta-form", choices=("paper", "series"), default="paper")
    p.set_defaults(func=cmd_max_h)

    p = sub.add_parser("audit-beta", parents=[common], help="compare traversal probability forms")
    p.add_argument("k", type=int)
    p.add_argument("--replicas", type=int, default=100_000)
    p.set_defaults(func=cmd_audit_beta)

    p = sub.add_parser("offspring", parents=[common], help="empirical offspring law")
    p.add_argument("d", type=int)
    p.add_argument("p", type=float)
    p.add_argument("--replicas", type=int, default=100_000)
    p.set_defaults(func=cmd_offspring)

    p = sub.add_parser("simulate", parents=[common], help="event-driven survival estimate")
    p.add_argument("--tree", choices=("cayley", "hub_path"), default="cayley")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--h", type=int)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--level", type=int)
    p.add_argument("--level-unit", choices=("graph", "hub"))
    p.add_argument("--level-sweep", help="MIN:MAX:STEP emits a CSV series of reach estimates")
    p.add_argument("--replicas", type=int, default=10_000)
    p.add_argument("--event-cap", type=int, default=ctmc.DEFAULT_EVENT_CAP)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gw", parents=[common], help="branching-process survival estimate")
    p.add_argument("d", type=int)
    p.add_argument("p", type=float)
    p.add_argument("--replicas", type=int, default=10_000)
    p.add_argument("--horizon", type=int, default=gw.DEFAULT_HORIZON)
    p.add_argument("--cap", type=int, default=gw.DEFAULT_POPULATION_CAP)
    p.set_defaults(func=cmd_gw)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    try:
        return args.func(args, parser)
    except NumericFault as exc:
        print(f"numeric fault: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC_FAULT
    except ValueError as exc:
        parser.error(str(exc))
        return 2  # pragma: no cover - parser.error raises SystemExit


if __name__ == "__main__":
    raise SystemExit(main())
