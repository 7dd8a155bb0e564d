"""Closed-form eigenvalue bounds for the clamped poly-Laplacian (-Delta)^l.

Conventions: ``n`` is the ambient dimension, ``l`` the poly-harmonic order,
``V`` the volume, ``B_n`` the unit-ball volume and ``theta`` the collar ratio
V(Omega_sigma0) / V(Omega).  Averages are (1/k) * sum_{j<=k} Lambda_j.

Upper bounds that degenerate (theta == 1) return ``math.inf`` together with
a flag instead of raising.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InconsistentPrefixError, NoAdmissibleSigmaError
from .geometry import (Domain, collar_ratio, moment_of_inertia, sup_norm_sq,
                       unit_ball_volume, volume)
from .quadrature import gauss_legendre

TWO_PI = 2 * math.pi
DEFAULT_SIGMA_GRID = 256
LP_VARIANTS = ("general-l", "clamped-16pi4")


@dataclass(frozen=True)
class ProblemSpec:
    """One Dirichlet problem (-Delta)^l u = Lambda u on ``domain``."""

    n: int
    l: int
    domain: Domain

    def __post_init__(self):
        if self.l < 1 or int(self.l) != self.l:
            raise ValueError(f"order l must be a positive integer, got {self.l}")
        if self.n != self.domain.dim:
            raise ValueError(f"n={self.n} does not match domain dimension {self.domain.dim}")

    @classmethod
    def on(cls, domain: Domain, l: int) -> "ProblemSpec":
        return cls(domain.dim, l, domain)

    @property
    def volume(self) -> float:
        return volume(self.domain)

    @property
    def weyl_scale(self) -> float:
        """(B_n V)^{1/n}; every bound is a power of 2*pi / weyl_scale."""
        return (unit_ball_volume(self.n) * self.volume) ** (1.0 / self.n)


@dataclass(frozen=True)
class BoundParams:
    sigma0: float
    theta: float
    k: int
    delta0: float = 0.0
    tau: float = 1.0

    def __post_init__(self):
        if not self.sigma0 > 0:
            raise ValueError("sigma0 must be positive")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.delta0 < 0 or self.tau < 1:
            raise ValueError("need delta0 >= 0 and tau >= 1")

    @classmethod
    def for_domain(cls, domain: Domain, sigma0: float, k: int, **kw) -> "BoundParams":
        return cls(sigma0=sigma0, theta=collar_ratio(domain, sigma0), k=k, **kw)

    @property
    def degenerate(self) -> bool:
        return self.theta >= 1.0


# -- coefficients ---------------------------------------------------------

def theta_coefficient(n: int, l: int) -> float:
    """The value n(2l^2 + (4-2n)l + 2n - 2)/(n + 2l - 2) used on odd theta-branches."""
    return n * (2 * l * l + (4 - 2 * n) * l + 2 * n - 2) / (n + 2 * l - 2)


def _theta_branch(n: int, l: int) -> bool:
    if l % 2 == 1:
        return l == 1 or l >= n - 3 - 2 / (l - 1)
    return l >= n - 2


def _collar_numerators(n: int, l: int) -> tuple[float, float]:
    """Numerators (c1, c2) of the |xi|^2/sigma^2 and 1/sigma^4 terms of C_0."""
    if l % 2 == 1:
        c1 = 2 * l * l + (4 - 2 * n) * l + 2 * n - 2
        c2 = ((l - 1) ** 2 + n * (l - 1)) ** 2
    else:
        c1 = 2 * l * l - 2 * n * l + 4 * l
        c2 = (l * (l - 2) + n * l) ** 2
    if not _theta_branch(n, l):
        c1 = 0
    return float(c1), float(c2)


@dataclass(frozen=True)
class CoefficientCase:
    parity: str
    branch: str
    value_A1: float
    value_A2: float


def coefficient_case(n: int, l: int) -> CoefficientCase:
    return CoefficientCase(
        parity="odd" if l % 2 else "even",
        branch="theta-branch" if _theta_branch(n, l) else "zero-branch",
        value_A1=coeff_A1(n, l),
        value_A2=coeff_A2(n, l),
    )


def coeff_A1(n: int, l: int) -> float:
    _check_nl(n, l)
    if not _theta_branch(n, l):
        return 0.0
    if l % 2 == 1:
        return theta_coefficient(n, l)
    return n * (2 * l * l - 2 * n * l + 4 * l) / (n + 2 * l - 2)


def coeff_A2(n: int, l: int) -> float:
    _check_nl(n, l)
    _, c2 = _collar_numerators(n, l)
    if c2 == 0:
        return 0.0
    denom = n + 2 * l - 4
    if denom == 0:
        raise ValueError(f"A2({n},{l}) is undefined: n + 2l - 4 = 0")
    return n * c2 / denom


def _check_nl(n: int, l: int) -> None:
    if n < 1 or l < 1:
        raise ValueError(f"need n, l >= 1, got n={n}, l={l}")


def lemma_C0(n: int, l: int, xi_norm: float, sigma: float) -> float:
    """Pointwise collar constant C_0 bounding the energy of the cut-off
    plane wave on Omega_sigma per unit collar volume."""
    _check_nl(n, l)
    c1, c2 = _collar_numerators(n, l)
    r = float(xi_norm)
    # expanded form so the |xi|^{2l-4} prefactor never multiplies a zero term
    value = r ** (2 * l)
    if c1:
        value += c1 * r ** (2 * l - 2) / sigma ** 2
    if c2:
        value += c2 * r ** (2 * l - 4) / sigma ** 4
    return value


def ball_moment(n: int, p: int, sigma: float) -> float:
    """int over the ball of radius sigma of |xi|^{2p} dxi."""
    if n + 2 * p <= 0:
        raise ValueError(f"divergent ball moment: n + 2p = {n + 2 * p}")
    return unit_ball_volume(n) * sigma ** (n + 2 * p) * n / (n + 2 * p)


# -- main theorem ---------------------------------------------------------

class TheoremBound(NamedTuple):
    value: float
    valid: bool
    degenerate: bool
    terms: tuple[float, float, float]


def theorem_admissible(spec: ProblemSpec, params: BoundParams) -> bool:
    return (params.sigma0 ** 2 > sup_norm_sq(spec.domain)
            and params.k >= spec.volume * params.sigma0 ** spec.n)


def _count(k: int, proof_form: bool) -> int:
    return k + 1 if proof_form else k


def theorem_terms(n: int, l: int, V: float, theta: float, count: float) -> tuple[float, float, float]:
    """The three right-hand-side terms of the sharp upper bound, at ``count``."""
    bv = unit_ball_volume(n) * V
    one = 1.0 - theta
    t1 = (n / (n + 2 * l) * TWO_PI ** (2 * l) * count ** (2 * l / n)
          / (one ** ((n + 2 * l) / n) * bv ** (2 * l / n)))
    out = [t1]
    for coeff, shift in ((coeff_A1(n, l), 4), (coeff_A2(n, l), 8)):
        e = 2 * l - shift
        if coeff == 0.0 or theta == 0.0:
            out.append(0.0)
            continue
        out.append(coeff * TWO_PI ** e * theta * count ** (e / n)
                   / (one ** ((n + e) / n) * bv ** (e / n)))
    return out[0], out[1], out[2]


def theorem_upper(spec: ProblemSpec, params: BoundParams, proof_form: bool = False) -> TheoremBound:
    """Sharp upper bound on the average of the first k eigenvalues.

    With ``proof_form`` the right-hand side is evaluated at k + 1 and bounds
    the average of the first k + 1 eigenvalues.
    """
    valid = theorem_admissible(spec, params)
    if params.degenerate:
        return TheoremBound(math.inf, valid, True, (math.inf, math.inf, math.inf))
    terms = theorem_terms(spec.n, spec.l, spec.volume, params.theta,
                          _count(params.k, proof_form))
    return TheoremBound(math.fsum(terms), valid, False, terms)


def assembly_sigma(spec: ProblemSpec, params: BoundParams, proof_form: bool = False) -> float:
    """Radius of the xi-ball balancing the Parseval remainder against the count."""
    count = _count(params.k, proof_form)
    return TWO_PI * (count / (unit_ball_volume(spec.n) * spec.volume * (1 - params.theta))) ** (1 / spec.n)


def theorem_upper_assembled(spec: ProblemSpec, params: BoundParams,
                            quad_points: int | None = None,
                            proof_form: bool = False) -> float:
    """Rebuild the sharp upper bound by integrating the pointwise Rayleigh
    quotient numerator over the xi-ball.

    Integrand: |xi|^{2l} (V - V_0) + C_0(|xi|) V_0 with V_0 the sigma0-collar
    volume, integrated radially with Gauss-Legendre and divided by
    sigma^n B_n (V - V_0).  Independent of :func:`theorem_terms`.
    """
    if params.degenerate:
        return math.inf
    n, l = spec.n, spec.l
    V = spec.volume
    V0 = params.theta * V
    sigma = assembly_sigma(spec, params, proof_form)
    if quad_points is None:
        quad_points = l + n + 2
    r, w = gauss_legendre(quad_points).on(0.0, sigma)
    g = np.array([lemma_C0(n, l, ri, sigma) * V0 + ri ** (2 * l) * (V - V0) for ri in r])
    bn = unit_ball_volume(n)
    integral = n * bn * float(np.dot(w, g * r ** (n - 1)))
    return integral / (sigma ** n * bn * (V - V0))


def optimize_sigma0(spec: ProblemSpec, k: int, grid_size: int = DEFAULT_SIGMA_GRID,
                    proof_form: bool = False) -> BoundParams:
    """Best sigma0 on a log grid over (sqrt(sup|x|^2), (k/V)^{1/n}].

    Returns degenerate params (theta == 1) when every admissible sigma0 gives
    a collar covering the domain.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lo = math.sqrt(sup_norm_sq(spec.domain))
    hi = (k / spec.volume) ** (1 / spec.n)
    if hi <= lo:
        raise NoAdmissibleSigmaError(
            f"no admissible sigma0 for k={k}: need sqrt(sup|x|^2)={lo:.6g} < sigma0 <= {hi:.6g}")
    grid = np.geomspace(lo, hi, grid_size + 1)[1:]
    best, best_val = None, math.inf
    for s in grid:
        p = BoundParams.for_domain(spec.domain, float(s), k)
        if p.degenerate:
            continue
        b = theorem_upper(spec, p, proof_form)
        if b.valid and b.value < best_val:
            best, best_val = p, b.value
    if best is None:
        return BoundParams(sigma0=float(grid[-1]), theta=1.0, k=k)
    return best


# -- asymptotics and prior bounds -----------------------------------------

def _weyl_core(spec: ProblemSpec, k: float, order: int) -> float:
    """(2 pi)^{2 order} k^{2 order/n} / (B_n V)^{2 order/n}."""
    return (TWO_PI / spec.weyl_scale) ** (2 * order) * k ** (2 * order / spec.n)


def weyl_kth(spec: ProblemSpec, k: float) -> float:
    return _weyl_core(spec, k, spec.l)


def weyl_average(spec: ProblemSpec, k: float) -> float:
    return spec.n / (spec.n + 2 * spec.l) * weyl_kth(spec, k)


def _require_membrane(spec: ProblemSpec, name: str) -> None:
    if spec.l != 1:
        raise ValueError(f"{name} applies to l = 1 only, got l = {spec.l}")


def li_yau_lower(spec: ProblemSpec, k: int) -> float:
    _require_membrane(spec, "li_yau_lower")
    return spec.n / (spec.n + 2) * _weyl_core(spec, k, 1)


def polya_tiling_lower(spec: ProblemSpec, k: int) -> float:
    """Lower bound on Lambda_k itself; proven for tiling domains."""
    _require_membrane(spec, "polya_tiling_lower")
    return _weyl_core(spec, k, 1)


def levine_protter_lower(spec: ProblemSpec, k: int, variant: str = "general-l") -> float:
    n, l = spec.n, spec.l
    if variant == "general-l":
        return n / (n + 2 * l) * (math.pi / spec.weyl_scale) ** (2 * l) * k ** (2 * l / n)
    if variant == "clamped-16pi4":
        if l != 2:
            raise ValueError("the clamped-16pi4 variant requires l = 2")
        return n / (n + 4) * 16 * math.pi ** 4 / spec.weyl_scale ** 4 * k ** (4 / n)
    raise ValueError(f"unknown Levine-Protter variant {variant!r}; choose from {LP_VARIANTS}")


def cheng_qi_wei_lower(spec: ProblemSpec, k: int) -> float:
    n, l = spec.n, spec.l
    V = spec.volume
    ratio = V / moment_of_inertia(spec.domain)
    total = _weyl_core(spec, k, l)
    for p in range(1, l + 1):
        ascending = math.prod(n + 2 * i for i in range(p))
        total += ((l + 1 - p) / (24 ** p * ascending) * _weyl_core(spec, k, l - p) * ratio ** p)
    return n / (n + 2 * l) * total


def cheng_wei_terms(n: int, V: float, theta: float, k: int) -> tuple[float, float, float]:
    """Clamped-plate upper bound terms on the average of the first k + 1 eigenvalues."""
    if theta >= 1:
        return math.inf, math.inf, math.inf
    base = TWO_PI ** 4 * (1 + k) ** (4 / n) / ((1 - theta) ** ((n + 4) / n) * (V * unit_ball_volume(n)) ** (4 / n))
    return (n / (n + 4) * base, 24 * n / (n + 2) * theta * base, 4 * n * n * theta * base)


def cheng_wei_clamped_upper(n: int, V: float, theta: float, k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    return math.fsum(cheng_wei_terms(n, V, theta, k))


# -- universal inequalities -----------------------------------------------

def _prefix(spectrum_prefix: Sequence[float]) -> np.ndarray:
    lam = np.asarray(spectrum_prefix, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("spectrum prefix must be a nonempty list")
    if np.any(lam <= 0) or np.any(np.diff(lam) < 0):
        raise ValueError("spectrum prefix must be positive and nondecreasing")
    return lam


def universal_constant(n: int, l: int) -> float:
    return 4 * l * (n + 2 * l - 2) / (n * n)


def ppw_next_upper(spec: ProblemSpec, spectrum_prefix: Sequence[float]) -> float:
    """Payne-Polya-Weinberger type bound on Lambda_{k+1}."""
    lam = _prefix(spectrum_prefix)
    k, l = lam.size, spec.l
    c = universal_constant(spec.n, l) / (k * k)
    return float(lam[-1] + c * np.sum(lam ** (1 / l)) * np.sum(lam ** ((l - 1) / l)))


def yang_next_upper(spec: ProblemSpec, spectrum_prefix: Sequence[float]) -> float:
    """Larger root of k x^2 - (2+c) S1 x + (1+c) S2 = 0 (Yang-type bound)."""
    lam = _prefix(spectrum_prefix)
    k = lam.size
    c = universal_constant(spec.n, spec.l)
    s1, s2 = math.fsum(lam), math.fsum(lam * lam)
    b = (2 + c) * s1
    disc = b * b - 4 * k * (1 + c) * s2
    if disc < 0:
        # rounding on exactly degenerate prefixes
        if disc > -1e-12 * b * b:
            disc = 0.0
        else:
            raise InconsistentPrefixError(f"inconsistent prefix: discriminant {disc:.6g} < 0")
    return (b + math.sqrt(disc)) / (2 * k)


# -- comparison against the clamped-plate bound ----------------------------

@dataclass
class ClampedComparison:
    n: int
    theta: float
    second_coeff: float
    second_coeff_cw: float
    third_coeff: float
    third_coeff_cw: float
    ks: list[int] = field(default_factory=list)
    term_deltas: list[tuple[float, float, float]] = field(default_factory=list)
    total_deltas: list[float] = field(default_factory=list)
    sigma3s: list[float] = field(default_factory=list)
    threshold_k: int | None = None

    @property
    def coefficients_ok(self) -> bool:
        return self.second_coeff < self.second_coeff_cw and self.third_coeff == self.third_coeff_cw


def plate_coefficients(n: int) -> tuple[float, float, float, float]:
    """(A1(n,2), 24n/(n+2), A2(n,2), 4n^2)."""
    return coeff_A1(n, 2), 24 * n / (n + 2), coeff_A2(n, 2), 4.0 * n * n


def compare_with_cheng_wei(spec: ProblemSpec, sigma0: float, k_max: int) -> ClampedComparison:
    """Term-by-term deltas (this bound minus the clamped-plate bound) for l = 2.

    Both sides are evaluated on the average of the first k + 1 eigenvalues
    at the same sigma0.  ``threshold_k`` is the smallest admissible k from
    which the full bound stays strictly below the clamped-plate bound up to
    ``k_max``.
    """
    if spec.l != 2:
        raise ValueError("the clamped-plate comparison needs l = 2")
    n, V = spec.n, spec.volume
    a1, cw2, a2, cw3 = plate_coefficients(n)
    theta = collar_ratio(spec.domain, sigma0)
    out = ClampedComparison(n, theta, a1, cw2, a2, cw3)
    k_min = max(1, math.ceil(V * sigma0 ** n))
    if theta >= 1 or k_min > k_max:
        return out
    for k in range(k_min, k_max + 1):
        ours = theorem_terms(n, 2, V, theta, k + 1)
        theirs = cheng_wei_terms(n, V, theta, k)
        out.ks.append(k)
        out.term_deltas.append(tuple(a - b for a, b in zip(ours, theirs)))
        out.total_deltas.append(math.fsum(ours) - math.fsum(theirs))
        out.sigma3s.append(max(sigma0, TWO_PI * ((1 + k) / (unit_ball_volume(n) * V * (1 - theta))) ** (1 / n)))
    threshold = None
    for k, d in zip(reversed(out.ks), reversed(out.total_deltas)):
        if d < 0:
            threshold = k
        else:
            break
    out.threshold_k = threshold
    return out


# -- corollary ------------------------------------------------------------

def corollary_alphas(n: int, l: int, theta0: float) -> tuple[float, float, float]:
    """Explicit constants (alpha_1, alpha_2, alpha_3) valid for theta in (0, theta0].

    alpha_1 uses the derivative of (1-theta)^{-(n+2l)/n} at theta0 (the
    function is convex, so this dominates every secant from 0).  alpha_2 and
    alpha_3 use the exact supremum over [0, theta0] of (1-theta)^{-e}, which
    is monotone in theta for every exponent e.
    """
    if not 0 <= theta0 < 1:
        raise ValueError(f"theta0 must lie in [0, 1), got {theta0}")
    one = 1 - theta0
    alpha1 = (n / (n + 2 * l)) * (1 + 2 * l / n) / one ** ((2 * n + 2 * l) / n)

    def sup_ratio(e: float) -> float:
        return max(1.0, one ** (-e))

    alpha2 = coeff_A1(n, l) * sup_ratio((n + 2 * l - 4) / n)
    alpha3 = coeff_A2(n, l) * sup_ratio((n + 2 * l - 8) / n)
    return alpha1, alpha2, alpha3


def corollary_theta0(n: int, delta0: float, tau: float, k: int) -> float:
    return delta0 / (1 + k) ** (tau / n)


def corollary_upper(spec: ProblemSpec, delta0: float, tau: float, k: int,
                    proof_form: bool = False) -> float:
    """Upper bound on the average under a collar-decay hypothesis
    V(Omega_sigma) <= delta0 V^{(n-tau)/n} sigma^{-tau}."""
    n, l = spec.n, spec.l
    if delta0 < 0 or tau < 1:
        raise ValueError("need delta0 >= 0 and tau >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    theta0 = corollary_theta0(n, delta0, tau, k)
    if theta0 >= 1:
        raise ValueError(f"theta0 = {theta0:.6g} >= 1; k too small for delta0")
    count = _count(k, proof_form)
    a1, a2, a3 = corollary_alphas(n, l, theta0)
    main = n / (n + 2 * l) * _weyl_core(spec, count, l)
    if delta0 == 0:
        return main
    w = TWO_PI / spec.weyl_scale
    mid = delta0 * (a1 * w ** (2 * l) + a2 * w ** (2 * l - 4)) * count ** ((2 * l - tau) / n)
    last = delta0 * a3 * w ** (2 * l - 8) * count ** ((2 * l - 4 - tau) / n)
    return main + mid + last
