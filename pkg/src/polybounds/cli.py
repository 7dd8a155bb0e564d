"""Command line front-end: ``polybounds {bounds,spectrum,verify,report,table1}``."""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import bounds as B
from .config import ExperimentConfig, load_config, parse_domain
from .eigensolve import (clamped_beam_spectrum, exact_box_spectrum_l1,
                         rayleigh_ritz_interval, rayleigh_ritz_square)
from .errors import EXIT_OK, EXIT_VIOLATIONS, ConfigError, PolyboundsError
from .harness import FLOAT_FMT, run_experiment, write_outputs
from .table1 import check_plate_coefficient, check_table, format_table


def _problem(args) -> B.ProblemSpec:
    if args.config:
        return load_config(args.config).problem
    if not args.domain:
        raise ConfigError("give --domain or --config")
    try:
        return B.ProblemSpec.on(parse_domain(args.domain), args.l)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_bounds(args) -> int:
    spec = _problem(args)
    k = args.k
    out = []
    if args.sigma0 is None:
        try:
            params = B.optimize_sigma0(spec, k, proof_form=args.proof_form)
        except PolyboundsError as exc:
            params = None
            out.append(("theorem_upper", math.nan, str(exc)))
    else:
        params = B.BoundParams.for_domain(spec.domain, args.sigma0, k)
    if params is not None:
        b = B.theorem_upper(spec, params, args.proof_form)
        note = f"sigma0={params.sigma0:.6g} theta={params.theta:.6g} valid={b.valid} degenerate={b.degenerate}"
        out.append(("theorem_upper", b.value, note))
        if not params.degenerate:
            out.append(("theorem_upper_assembled",
                        B.theorem_upper_assembled(spec, params, proof_form=args.proof_form), "quadrature"))
        if spec.l == 2:
            out.append(("cheng_wei", B.cheng_wei_clamped_upper(spec.n, spec.volume, params.theta, k),
                        "bounds the average of k+1"))
    out.append(("weyl", B.weyl_kth(spec, k), "asymptotic Lambda_k"))
    out.append(("weyl_average", B.weyl_average(spec, k), "asymptotic average"))
    if spec.l == 1:
        out.append(("li_yau", B.li_yau_lower(spec, k), "lower, average"))
        out.append(("polya", B.polya_tiling_lower(spec, k), "lower, Lambda_k (tiling domains)"))
    out.append(("levine_protter:general-l", B.levine_protter_lower(spec, k), "lower, average"))
    if spec.l == 2:
        out.append(("levine_protter:clamped-16pi4", B.levine_protter_lower(spec, k, "clamped-16pi4"),
                    "lower, average"))
    out.append(("cheng_qi_wei", B.cheng_qi_wei_lower(spec, k), "lower, average"))
    if args.delta0 is not None:
        try:
            out.append(("corollary", B.corollary_upper(spec, args.delta0, args.tau, k, args.proof_form),
                        f"delta0={args.delta0} tau={args.tau}"))
        except ValueError as exc:
            out.append(("corollary", math.nan, str(exc)))
    print(f"n={spec.n} l={spec.l} domain={spec.domain.kind}{list(spec.domain.extents)} k={k}")
    for name, value, note in out:
        print(f"{name:<30} {FLOAT_FMT % value:>26}  {note}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spec = _problem(args)
    d = spec.domain
    method = args.method
    if method == "exact-box-l1":
        sp = exact_box_spectrum_l1(d.sides, args.count)
    elif method == "beam-roots":
        sp = clamped_beam_spectrum(d.sides[0], args.count)
    elif d.kind == "interval":
        sp = rayleigh_ritz_interval(spec.l, d.sides[0], args.basis or args.count + 8, args.count)
    else:
        sp = rayleigh_ritz_square(spec.l, d.sides[0], args.basis or 12, args.count)
    print(f"# method={sp.method} basis_size={sp.basis_size} converged={sp.converged_count}/{len(sp)}")
    for j, v in enumerate(sp.values, 1):
        print(f"{j} {FLOAT_FMT % v}")
    return EXIT_OK


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    return cfg.with_overrides(seed=args.seed, proof_form=True if args.proof_form else None)


def cmd_verify(args) -> int:
    cfg = _load(args)
    report = run_experiment(cfg)
    if args.out:
        write_outputs(report, cfg, args.out)
    for line in report.violations:
        print(f"VIOLATION {line}")
    checked = sum(r[f"{b}:verdict"] == "ok" for r in report.rows for b in report.bound_ids)
    print(f"{len(report.rows)} rows, {checked} checks passed, {len(report.violations)} violations")
    return EXIT_VIOLATIONS if report.violations else EXIT_OK


def cmd_report(args) -> int:
    cfg = _load(args)
    report = run_experiment(cfg)
    out = Path(args.out or ".")
    paths = write_outputs(report, cfg, out)
    for key, p in paths.items():
        print(f"{key}: {p}")
    if report.degenerate_only:
        print("every sigma0-dependent row is degenerate (collar covers the domain)")
    for line in report.violations:
        print(f"VIOLATION {line}")
    return report.exit_code()


def cmd_table1(args) -> int:
    cells = check_table()
    print(format_table(cells))
    plate = check_plate_coefficient(16)
    plate_ok = all(a == b for _, a, b in plate)
    n_ok = sum(c.ok for c in cells)
    print(f"table cells matched: {n_ok}/{len(cells)}")
    print(f"A2(n,2) == 4n^2 for n=1..16: {'ok' if plate_ok else 'MISMATCH'}")
    return EXIT_OK if n_ok == len(cells) and plate_ok else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polybounds", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=False):
        sp.add_argument("--config", required=config_required, help="YAML experiment config")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--proof-form", action="store_true",
                        help="evaluate upper bounds at k+1 (average of the first k+1 eigenvalues)")
        sp.add_argument("--out", default=None, help="output directory")

    sb = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    common(sb)
    sb.add_argument("--domain", help="interval:L | box:s1,s2,... | ball:R,n")
    sb.add_argument("--l", type=int, default=1)
    sb.add_argument("--k", type=int, required=True)
    sb.add_argument("--sigma0", type=float, default=None, help="fixed sigma0 (default: optimized)")
    sb.add_argument("--delta0", type=float, default=None)
    sb.add_argument("--tau", type=float, default=1.0)
    sb.set_defaults(func=cmd_bounds)

    ss = sub.add_parser("spectrum", help="compute a reference spectrum")
    common(ss)
    ss.add_argument("--domain")
    ss.add_argument("--l", type=int, default=1)
    ss.add_argument("--count", type=int, default=10)
    ss.add_argument("--method", default="exact-box-l1",
                    choices=["exact-box-l1", "beam-roots", "rayleigh-ritz"])
    ss.add_argument("--basis", type=int, default=0)
    ss.set_defaults(func=cmd_spectrum)

    sv = sub.add_parser("verify", help="run the inequality suite; exit 1 on any violation")
    common(sv, config_required=True)
    sv.set_defaults(func=cmd_verify)

    sr = sub.add_parser("report", help="write CSV, plot script and summary")
    common(sr, config_required=True)
    sr.set_defaults(func=cmd_report)

    st = sub.add_parser("table1", help="check the coefficient table")
    st.set_defaults(func=cmd_table1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PolyboundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
