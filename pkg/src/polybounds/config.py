"""Experiment configuration: a YAML document parsed into :class:`ExperimentConfig`.

Schema (all keys except ``problem`` optional)::

    problem:
      domain: {kind: box, extents: [1.0, 1.0], center: [0.0, 0.0]}
      l: 1
    k_range: [1, 100]            # inclusive
    bounds: [li_yau, polya, theorem_upper, weyl]
    sigma0: optimized            # or {fixed: 4.0}
    sigma_grid: 256
    solver: {method: exact-box-l1, basis_size: 0}
    corollary: {delta0: 4.0, tau: 1.0}
    collar_check_samples: 0      # > 0 adds a seeded Monte Carlo collar check
    output: {csv: report.csv, plot: report.gp, logscale: false}
    seed: 0
    proof_form: false
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from .bounds import DEFAULT_SIGMA_GRID, ProblemSpec
from .errors import ConfigError
from .geometry import Domain

# id -> (kind, required l or None)
BOUND_KINDS: dict[str, tuple[str, int | None]] = {
    "li_yau": ("lower_avg", 1),
    "polya": ("lower_kth", 1),
    "levine_protter:general-l": ("lower_avg", None),
    "levine_protter:clamped-16pi4": ("lower_avg", 2),
    "cheng_qi_wei": ("lower_avg", None),
    "theorem_upper": ("upper_avg", None),
    "cheng_wei": ("upper_avg", 2),
    "corollary": ("upper_avg", None),
    "ppw": ("upper_next", None),
    "yang": ("upper_next", None),
    "weyl": ("asymptotic_kth", None),
    "weyl_average": ("asymptotic_avg", None),
}
ALIASES = {"levine_protter": "levine_protter:general-l",
           "theorem_upper:optimized": "theorem_upper"}
SOLVERS = ("exact-box-l1", "beam-roots", "rayleigh-ritz")


@dataclass(frozen=True)
class SolverSpec:
    method: str = "exact-box-l1"
    basis_size: int = 0


@dataclass(frozen=True)
class OutputSpec:
    csv: str = "report.csv"
    plot: str = "report.gp"
    logscale: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemSpec
    k_range: tuple[int, int] = (1, 100)
    bound_set: tuple[str, ...] = ()
    sigma0: float | None = None  # None means optimized per k
    sigma_grid: int = DEFAULT_SIGMA_GRID
    solver: SolverSpec = field(default_factory=SolverSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    delta0: float | None = None
    tau: float = 1.0
    collar_check_samples: int = 0
    seed: int = 0
    proof_form: bool = False

    def __post_init__(self):
        lo, hi = self.k_range
        if lo < 1 or hi < lo:
            raise ConfigError(f"k_range must be a nonempty range of positive integers, got {self.k_range}")
        for b in self.bound_set:
            if b not in BOUND_KINDS:
                raise ConfigError(f"unknown bound {b!r}; known: {sorted(BOUND_KINDS)}")
            need = BOUND_KINDS[b][1]
            if need is not None and need != self.problem.l:
                raise ConfigError(f"bound {b!r} requires l = {need}")
        if self.solver.method not in SOLVERS:
            raise ConfigError(f"unknown solver {self.solver.method!r}; known: {SOLVERS}")
        if self.sigma0 is not None and not self.sigma0 > 0:
            raise ConfigError("a fixed sigma0 must be positive")
        if self.sigma_grid < 1:
            raise ConfigError("sigma_grid must be >= 1")

    @property
    def optimized(self) -> bool:
        return self.sigma0 is None

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


def domain_from_mapping(d: dict) -> Domain:
    try:
        kind = d["kind"]
        extents = d["extents"]
    except (KeyError, TypeError) as exc:
        raise ConfigError("domain needs 'kind' and 'extents'") from exc
    if not isinstance(extents, (list, tuple)):
        extents = [extents]
    try:
        if kind == "interval":
            return Domain.interval(extents[0], *(d.get("center") or [0.0]))
        if kind == "box":
            return Domain.box(extents, d.get("center"))
        if kind == "ball":
            n = d.get("n") or (len(d["center"]) if d.get("center") else None)
            if n is None:
                raise ConfigError("a ball domain needs 'n' or 'center'")
            return Domain.ball(extents[0], int(n), d.get("center"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown domain kind {kind!r}")


def parse_domain(text: str) -> Domain:
    """Parse ``interval:L``, ``box:s1,s2,...`` or ``ball:R,n`` (centered at the origin)."""
    kind, _, rest = text.partition(":")
    try:
        nums = [float(x) for x in rest.split(",") if x]
    except ValueError as exc:
        raise ConfigError(f"cannot parse domain {text!r}") from exc
    if kind == "ball":
        if len(nums) != 2:
            raise ConfigError("ball domains are written ball:R,n")
        return domain_from_mapping({"kind": "ball", "extents": [nums[0]], "n": int(nums[1])})
    return domain_from_mapping({"kind": kind, "extents": nums})


def _get(mapping: dict, key: str, default: Any) -> Any:
    value = mapping.get(key, default)
    return default if value is None else value


def config_from_mapping(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict) or "problem" not in raw:
        raise ConfigError("config must be a mapping with a 'problem' section")
    prob = raw["problem"]
    domain = domain_from_mapping(prob.get("domain", {}))
    try:
        problem = ProblemSpec.on(domain, int(prob.get("l", 1)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    bounds = tuple(ALIASES.get(b, b) for b in _get(raw, "bounds", []))
    policy = _get(raw, "sigma0", "optimized")
    if policy == "optimized":
        sigma0 = None
    elif isinstance(policy, dict) and "fixed" in policy:
        sigma0 = float(policy["fixed"])
    else:
        raise ConfigError(f"sigma0 must be 'optimized' or {{fixed: value}}, got {policy!r}")
    solver = _get(raw, "solver", {})
    output = _get(raw, "output", {})
    cor = _get(raw, "corollary", {})
    k_range = _get(raw, "k_range", [1, 100])
    if len(k_range) != 2:
        raise ConfigError("k_range must be [first, last]")
    return ExperimentConfig(
        problem=problem,
        k_range=(int(k_range[0]), int(k_range[1])),
        bound_set=bounds,
        sigma0=sigma0,
        sigma_grid=int(_get(raw, "sigma_grid", DEFAULT_SIGMA_GRID)),
        solver=SolverSpec(str(_get(solver, "method", "exact-box-l1")), int(_get(solver, "basis_size", 0))),
        output=OutputSpec(str(_get(output, "csv", "report.csv")), str(_get(output, "plot", "report.gp")),
                          bool(_get(output, "logscale", False))),
        delta0=None if cor.get("delta0") is None else float(cor["delta0"]),
        tau=float(_get(cor, "tau", 1.0)),
        collar_check_samples=int(_get(raw, "collar_check_samples", 0)),
        seed=int(_get(raw, "seed", 0)),
        proof_form=bool(_get(raw, "proof_form", False)),
    )


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return config_from_mapping(raw)
