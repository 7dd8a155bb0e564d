"""Admissible domains (interval, axis-aligned box, ball) and the geometric
quantities the eigenvalue bounds consume.

Every routine here is a pure function of its arguments.  Collar volumes are
exact; :func:`collar_volume_mc` is a seeded Monte Carlo cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

KINDS = ("interval", "box", "ball")

# documented default for collar_decay_delta0
DEFAULT_DELTA_GRID_SIZE = 64
MC_MIN_SAMPLES = 1000


@dataclass(frozen=True)
class Domain:
    """A placed domain.

    ``extents`` holds ``(L,)`` for an interval, the side lengths for a box and
    ``(R,)`` for a ball.  ``center`` is the centroid; its length fixes the
    ambient dimension.
    """

    kind: str
    extents: tuple[float, ...]
    center: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        ext = tuple(float(e) for e in self.extents)
        ctr = tuple(float(c) for c in self.center)
        object.__setattr__(self, "extents", ext)
        object.__setattr__(self, "center", ctr)
        if not ext or not all(e > 0 and math.isfinite(e) for e in ext):
            raise ValueError(f"extents must be positive, got {ext}")
        if self.kind == "interval" and (len(ext) != 1 or len(ctr) != 1):
            raise ValueError("an interval has one length and a 1-d center")
        if self.kind == "box" and len(ext) != len(ctr):
            raise ValueError("box center must have one coordinate per side")
        if self.kind == "ball" and (len(ext) != 1 or len(ctr) < 1):
            raise ValueError("a ball has one radius and a center in R^n, n >= 1")

    @classmethod
    def interval(cls, length: float, center: float = 0.0) -> "Domain":
        return cls("interval", (length,), (center,))

    @classmethod
    def box(cls, sides: Sequence[float], center: Sequence[float] | None = None) -> "Domain":
        sides = tuple(sides)
        if center is None:
            center = (0.0,) * len(sides)
        return cls("box", sides, tuple(center))

    @classmethod
    def ball(cls, radius: float, n: int, center: Sequence[float] | None = None) -> "Domain":
        if center is None:
            center = (0.0,) * n
        if len(center) != n:
            raise ValueError("ball center must live in R^n")
        return cls("ball", (radius,), tuple(center))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def sides(self) -> tuple[float, ...]:
        """Side lengths for interval/box domains."""
        if self.kind == "ball":
            raise ValueError("a ball has no sides")
        return self.extents

    @property
    def radius(self) -> float:
        if self.kind != "ball":
            raise ValueError(f"a {self.kind} has no radius")
        return self.extents[0]

    def translated(self, shift: Sequence[float]) -> "Domain":
        ctr = tuple(c + s for c, s in zip(self.center, shift))
        return Domain(self.kind, self.extents, ctr)

    def distance_to_boundary(self, x: np.ndarray) -> np.ndarray:
        """r(x) for points ``x`` of shape (m, n); negative outside."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        c = np.asarray(self.center)
        if self.kind == "ball":
            return self.radius - np.linalg.norm(x - c, axis=1)
        half = np.asarray(self.extents) / 2
        return np.min(half - np.abs(x - c), axis=1)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        c = np.asarray(self.center)
        if self.kind == "ball":
            h = np.full(self.dim, self.radius)
        else:
            h = np.asarray(self.extents) / 2
        return c - h, c + h


@dataclass(frozen=True)
class CollarSpec:
    """Inverse-length scale sigma of the collar {x : r(x) < 1/sigma}."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


def _sigma(c: CollarSpec | float) -> float:
    return c.sigma if isinstance(c, CollarSpec) else CollarSpec(float(c)).sigma


def unit_ball_volume(n: int) -> float:
    """Volume B_n of the unit ball in R^n."""
    if int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n}")
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def volume(d: Domain) -> float:
    if d.kind == "ball":
        return unit_ball_volume(d.dim) * d.radius ** d.dim
    return math.prod(d.extents)


def inradius(d: Domain) -> float:
    if d.kind == "ball":
        return d.radius
    return min(d.extents) / 2


def collar_volume(d: Domain, c: CollarSpec | float) -> float:
    """Exact V(Omega_sigma), clamped to V(Omega) once the collar covers Omega."""
    width = 1.0 / _sigma(c)
    if d.kind == "ball":
        n, r = d.dim, d.radius
        if width >= r:
            return volume(d)
        # r^n - (r-w)^n summed as w * sum r^(n-1-j) (r-w)^j: no cancellation for thin collars
        return unit_ball_volume(n) * width * math.fsum(r ** (n - 1 - j) * (r - width) ** j for j in range(n))
    if 2 * width >= min(d.extents):
        return volume(d)
    # prod(s) - prod(s - 2w) accumulated term by term, all summands positive
    outer, gap = 1.0, 0.0
    for s in d.extents:
        gap = gap * s + (outer - gap) * 2 * width
        outer *= s
    return gap


def collar_ratio(d: Domain, c: CollarSpec | float) -> float:
    """theta = V(Omega_sigma) / V(Omega), in [0, 1]."""
    return min(collar_volume(d, c) / volume(d), 1.0)


def collar_volume_mc(d: Domain, c: CollarSpec | float, samples: int,
                     seed: int) -> tuple[float, float]:
    """Monte Carlo estimate of V(Omega_sigma) with its standard error.

    Points are drawn uniformly in the bounding box and classified by their
    exact distance to the boundary.
    """
    if samples < MC_MIN_SAMPLES:
        raise ValueError(f"need at least {MC_MIN_SAMPLES} samples, got {samples}")
    width = 1.0 / _sigma(c)
    lo, hi = d.bounding_box()
    box_vol = float(np.prod(hi - lo))
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 200_000
    left = samples
    while left > 0:
        m = min(chunk, left)
        x = rng.uniform(lo, hi, size=(m, d.dim))
        r = d.distance_to_boundary(x)
        hits += int(np.count_nonzero((r > 0) & (r < width)))
        left -= m
    p = hits / samples
    return box_vol * p, box_vol * math.sqrt(p * (1 - p) / samples)


def sup_norm_sq(d: Domain) -> float:
    """sup over the placed domain of |x|^2."""
    c = np.asarray(d.center)
    if d.kind == "ball":
        return (float(np.linalg.norm(c)) + d.radius) ** 2
    half = np.asarray(d.extents) / 2
    far = np.maximum(np.abs(c - half), np.abs(c + half))
    return float(np.sum(far ** 2))


def moment_of_inertia(d: Domain) -> float:
    """I(Omega) = min_a int |x - a|^2 dx, attained at the centroid."""
    n = d.dim
    if d.kind == "ball":
        return unit_ball_volume(n) * d.radius ** (n + 2) * n / (n + 2)
    return volume(d) * sum(s * s for s in d.extents) / 12


def default_delta_grid(d: Domain, size: int = DEFAULT_DELTA_GRID_SIZE,
                       span: float = 100.0) -> np.ndarray:
    """Log-spaced sigma grid starting just above V^{-1/n}."""
    lo = volume(d) ** (-1.0 / d.dim) * (1 + 1e-9)
    return np.geomspace(lo, lo * span, size)


def collar_decay_delta0(d: Domain, tau: float, sigma_grid: Sequence[float]) -> float:
    """Smallest delta_0 with V(Omega_sigma) <= delta_0 V^{(n-tau)/n} sigma^{-tau}
    on every sigma of the grid."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    grid = np.asarray(list(sigma_grid), dtype=float)
    if grid.size == 0:
        raise ValueError("empty sigma grid")
    V, n = volume(d), d.dim
    floor = V ** (-1.0 / n)
    if np.any(grid <= floor):
        raise ValueError(f"every sigma must exceed V^(-1/n) = {floor:.6g}")
    scale = V ** ((n - tau) / n)
    return max(collar_volume(d, s) * s ** tau / scale for s in grid)
