"""Batch verification: spectrum + bounds -> per-k report, CSV and plot script.

Row k compares each bound with its natural target:

* ``lower_avg`` / ``upper_avg``: the running average of Lambda_1..Lambda_k;
* ``lower_kth``: Lambda_k;
* ``upper_next``: Lambda_k, bounded from the prefix Lambda_1..Lambda_{k-1}
  (not applicable at k = 1);
* ``asymptotic_*``: reported, never judged.

Bounds whose natural statement covers k + 1 eigenvalues (the clamped-plate
bound, and every upper bound in proof form) are evaluated at k - 1 so that
all columns of a row refer to the same k eigenvalues.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds as B
from .config import BOUND_KINDS, ExperimentConfig
from .eigensolve import (Spectrum, clamped_beam_spectrum, exact_box_spectrum_l1,
                         rayleigh_ritz_interval, rayleigh_ritz_square)
from .errors import (EXIT_DEGENERATE_ONLY, EXIT_OK, EXIT_VIOLATIONS, ConfigError,
                     NoAdmissibleSigmaError, ReportIOError, SolverError)
from .geometry import (collar_decay_delta0, collar_ratio, collar_volume,
                       collar_volume_mc, default_delta_grid)

log = logging.getLogger(__name__)

SIGMA_BOUNDS = ("theorem_upper", "cheng_wei")
REL_SLACK = 1e-12
FLOAT_FMT = "%.17g"


@dataclass
class BoundReport:
    bound_ids: list[str]
    rows: list[dict] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def has_sigma(self) -> bool:
        return any(b in SIGMA_BOUNDS for b in self.bound_ids)

    @property
    def columns(self) -> list[str]:
        cols = ["k", "lambda_k", "running_avg", *self.bound_ids]
        if self.has_sigma:
            cols.append("sigma0")
        for b in self.bound_ids:
            cols += [f"{b}:valid", f"{b}:degenerate", f"{b}:verdict"]
        return cols

    @property
    def degenerate_only(self) -> bool:
        """True when sigma0-dependent bounds were requested but none was ever usable."""
        sig = [b for b in self.bound_ids if b in SIGMA_BOUNDS]
        if not sig or not self.rows:
            return False
        return not any(r[f"{b}:verdict"] in ("ok", "violation") for r in self.rows for b in sig)

    def exit_code(self) -> int:
        if self.violations:
            return EXIT_VIOLATIONS
        if self.degenerate_only:
            return EXIT_DEGENERATE_ONLY
        return EXIT_OK

    # -- CSV ---------------------------------------------------------------

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = self.columns
        w.writerow(cols)
        for row in self.rows:
            w.writerow([_fmt(row[c]) for c in cols])
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(self.to_csv_text())
        except OSError as exc:
            raise ReportIOError(f"cannot write {path}: {exc}") from exc
        return path

    @classmethod
    def from_csv_text(cls, text: str) -> "BoundReport":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        ids = [c for c in header[3:] if ":" not in c or c in BOUND_KINDS]
        ids = [c for c in ids if c != "sigma0"]
        rep = cls(bound_ids=ids)
        for rec in reader:
            row = {}
            for name, cell in zip(header, rec):
                if name == "k":
                    row[name] = int(cell)
                elif name.endswith(":valid") or name.endswith(":degenerate"):
                    row[name] = cell == "1"
                elif name.endswith(":verdict"):
                    row[name] = cell
                else:
                    row[name] = float(cell)
            rep.rows.append(row)
        return rep

    @classmethod
    def read_csv(cls, path: str | Path) -> "BoundReport":
        try:
            return cls.from_csv_text(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ReportIOError(f"cannot read {path}: {exc}") from exc


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT % v
    return str(v)


# -- spectra ---------------------------------------------------------------

def compute_spectrum(cfg: ExperimentConfig, count: int) -> Spectrum:
    spec = cfg.problem
    d = spec.domain
    method = cfg.solver.method
    if method == "exact-box-l1":
        if d.kind == "ball" or spec.l != 1:
            raise ConfigError("exact-box-l1 needs l = 1 on an interval or box")
        return exact_box_spectrum_l1(d.sides, count)
    if method == "beam-roots":
        if d.kind != "interval" or spec.l != 2:
            raise ConfigError("beam-roots needs l = 2 on an interval")
        return clamped_beam_spectrum(d.sides[0], count)
    N = cfg.solver.basis_size
    if d.kind == "interval":
        sp = rayleigh_ritz_interval(spec.l, d.sides[0], N or count + 8, count)
    elif d.kind == "box" and d.dim == 2 and d.sides[0] == d.sides[1]:
        sp = rayleigh_ritz_square(spec.l, d.sides[0], N or 12, count)
    else:
        raise ConfigError("rayleigh-ritz supports intervals and squares only")
    if sp.converged_count < count:
        raise SolverError(f"only {sp.converged_count} of {count} eigenvalues converged at N={sp.basis_size}")
    return sp


# -- one row -----------------------------------------------------------------

def _sigma_params(cfg: ExperimentConfig, arg: int) -> B.BoundParams | None:
    if arg < 1:
        return None
    spec = cfg.problem
    if cfg.sigma0 is not None:
        return B.BoundParams.for_domain(spec.domain, cfg.sigma0, arg)
    try:
        return B.optimize_sigma0(spec, arg, cfg.sigma_grid, cfg.proof_form)
    except NoAdmissibleSigmaError:
        return None


def _curvature_floor(cfg: ExperimentConfig) -> float:
    """n * kappa_0 for the clamped-plate hypothesis sigma0 > n kappa_0."""
    d = cfg.problem.domain
    return cfg.problem.n / d.radius if d.kind == "ball" else 0.0


def _evaluate(bid: str, cfg: ExperimentConfig, k: int, lam: np.ndarray,
              params: B.BoundParams | None, delta0: float | None) -> tuple[float, bool, bool]:
    """(value, valid, degenerate) of one bound for row k."""
    spec = cfg.problem
    nan = math.nan
    if bid == "li_yau":
        return B.li_yau_lower(spec, k), True, False
    if bid == "polya":
        return B.polya_tiling_lower(spec, k), spec.domain.kind != "ball", False
    if bid.startswith("levine_protter:"):
        return B.levine_protter_lower(spec, k, bid.split(":", 1)[1]), True, False
    if bid == "cheng_qi_wei":
        return B.cheng_qi_wei_lower(spec, k), True, False
    if bid == "weyl":
        return B.weyl_kth(spec, k), False, False
    if bid == "weyl_average":
        return B.weyl_average(spec, k), False, False
    if bid in ("ppw", "yang"):
        if k < 2:
            return nan, False, False
        fn = B.ppw_next_upper if bid == "ppw" else B.yang_next_upper
        return fn(spec, lam[: k - 1]), True, False
    if bid == "theorem_upper":
        if params is None:
            return nan, False, False
        b = B.theorem_upper(spec, params, cfg.proof_form)
        return b.value, b.valid, b.degenerate
    if bid == "cheng_wei":
        if params is None or k < 2:
            return nan, False, False
        arg = k - 1
        valid = (arg >= spec.volume * params.sigma0 ** spec.n
                 and params.sigma0 > _curvature_floor(cfg))
        value = B.cheng_wei_clamped_upper(spec.n, spec.volume, params.theta, arg)
        return value, valid, params.degenerate
    if bid == "corollary":
        arg = k - 1 if cfg.proof_form else k
        if arg < 1 or delta0 is None:
            return nan, False, False
        theta0 = B.corollary_theta0(spec.n, delta0, cfg.tau, arg)
        if theta0 >= 1:
            return nan, False, False
        value = B.corollary_upper(spec, delta0, cfg.tau, arg, cfg.proof_form)
        return value, arg > delta0 ** spec.n, False
    raise ConfigError(f"unknown bound {bid!r}")


def _verdict(kind: str, value: float, valid: bool, degenerate: bool,
             lam_k: float, avg: float) -> str:
    if kind.startswith("asymptotic"):
        return "info"
    if not valid or degenerate or not math.isfinite(value):
        return "skip"
    target = avg if kind.endswith("avg") else lam_k
    if kind.startswith("lower"):
        ok = value <= target * (1 + REL_SLACK)
    else:
        ok = value >= target * (1 - REL_SLACK)
    return "ok" if ok else "violation"


def run_experiment(cfg: ExperimentConfig, spectrum: Spectrum | None = None) -> BoundReport:
    """Evaluate every requested bound on k_range against a reference spectrum.

    ``spectrum`` overrides the configured solver (used to inject test data).
    Violations are collected, never raised.
    """
    lo, hi = cfg.k_range
    if spectrum is None:
        spectrum = compute_spectrum(cfg, hi)
    if len(spectrum) < hi:
        raise SolverError(f"spectrum has {len(spectrum)} values, need {hi}")
    lam = spectrum.values
    avg = spectrum.running_average()
    spec = cfg.problem

    delta0 = cfg.delta0
    if "corollary" in cfg.bound_set and delta0 is None:
        delta0 = collar_decay_delta0(spec.domain, cfg.tau, default_delta_grid(spec.domain))

    report = BoundReport(bound_ids=list(cfg.bound_set))
    report.meta.update(
        n=spec.n, l=spec.l, domain=spec.domain.kind, extents=list(spec.domain.extents),
        method=spectrum.method, basis_size=spectrum.basis_size, k_range=list(cfg.k_range),
        proof_form=cfg.proof_form, seed=cfg.seed,
        sigma0_policy="optimized" if cfg.optimized else {"fixed": cfg.sigma0},
    )
    if delta0 is not None:
        report.meta["delta0"] = delta0

    need_sigma = report.has_sigma
    any_range = False
    for k in range(lo, hi + 1):
        row = {"k": k, "lambda_k": float(lam[k - 1]), "running_avg": float(avg[k - 1])}
        params = None
        if need_sigma:
            params = _sigma_params(cfg, k - 1 if cfg.proof_form else k)
            if params is None and "cheng_wei" in cfg.bound_set:
                params = _sigma_params(cfg, k - 1)
            row["sigma0"] = params.sigma0 if params is not None else math.nan
            any_range = any_range or params is not None
        for bid in cfg.bound_set:
            kind = BOUND_KINDS[bid][0]
            value, valid, degenerate = _evaluate(bid, cfg, k, lam, params, delta0)
            verdict = _verdict(kind, value, valid, degenerate, row["lambda_k"], row["running_avg"])
            row[bid] = float(value)
            row[f"{bid}:valid"] = bool(valid)
            row[f"{bid}:degenerate"] = bool(degenerate)
            row[f"{bid}:verdict"] = verdict
            if verdict == "violation":
                target = "running_avg" if kind.endswith("avg") else "lambda_k"
                report.violations.append(
                    f"k={k} {bid}={FLOAT_FMT % value} vs {target}={FLOAT_FMT % row[target]} ({kind})")
        report.rows.append(row)

    if need_sigma and cfg.optimized and not any_range:
        raise NoAdmissibleSigmaError(
            f"no k in {cfg.k_range} admits sigma0 with sigma0^2 > sup|x|^2 and k >= V sigma0^n")
    if cfg.collar_check_samples > 0 and need_sigma:
        sig = cfg.sigma0 if cfg.sigma0 is not None else report.rows[-1]["sigma0"]
        if math.isfinite(sig):
            est, se = collar_volume_mc(spec.domain, sig, cfg.collar_check_samples, cfg.seed)
            exact = collar_volume(spec.domain, sig)
            report.meta["collar_check"] = {"sigma0": sig, "exact": exact, "mc": est, "std_error": se,
                                           "theta": collar_ratio(spec.domain, sig)}
            if se > 0 and abs(est - exact) > 5 * se:
                log.warning("Monte Carlo collar volume %.6g disagrees with exact %.6g", est, exact)
    return report


def verify(cfg: ExperimentConfig, spectrum: Spectrum | None = None, echo=print) -> int:
    """0 iff the report has no violations among valid, non-degenerate rows."""
    report = run_experiment(cfg, spectrum)
    for line in report.violations:
        echo(f"VIOLATION {line}")
    return EXIT_VIOLATIONS if report.violations else EXIT_OK


# -- plot script -------------------------------------------------------------

def emit_plot_script(report: BoundReport, path: str | Path, csv_name: str = "report.csv",
                     logscale: bool = False) -> Path:
    """Write a gnuplot script charting the spectrum columns and every bound against k."""
    cols = report.columns
    lines = [
        "# generated by polybounds",
        "set datafile separator ','",
        "set key left top",
        "set xlabel 'k'",
        "set ylabel 'eigenvalue'",
    ]
    if logscale:
        lines.append("set logscale xy")
    curves = [f"'{csv_name}' using 1:3 with linespoints title 'running average'",
              f"'' using 1:2 with points title 'lambda_k'"]
    for b in report.bound_ids:
        idx = cols.index(b) + 1
        curves.append(f"'' using 1:{idx} with lines title '{b}'")
    lines.append("plot " + ", \\\n     ".join(curves))
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc}") from exc
    return path


def write_outputs(report: BoundReport, cfg: ExperimentConfig, out_dir: str | Path) -> dict:
    out = Path(out_dir)
    csv_path = report.write_csv(out / cfg.output.csv)
    plot_path = emit_plot_script(report, out / cfg.output.plot, csv_path.name, cfg.output.logscale)
    summary = out / (Path(cfg.output.csv).stem + ".summary.json")
    try:
        summary.write_text(json.dumps({"meta": report.meta, "violations": report.violations,
                                       "degenerate_only": report.degenerate_only},
                                      indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"cannot write {summary}: {exc}") from exc
    return {"csv": csv_path, "plot": plot_path, "summary": summary}
