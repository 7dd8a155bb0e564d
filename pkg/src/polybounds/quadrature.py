"""Gauss-Legendre rules built by Newton iteration on P_m."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def degree(self) -> int:
        """Highest polynomial degree integrated exactly."""
        return 2 * len(self.nodes) - 1

    def on(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights mapped affinely onto [a, b]."""
        half = (b - a) / 2
        return a + half * (self.nodes + 1), half * self.weights

    def integrate(self, f, a: float = -1.0, b: float = 1.0) -> float:
        x, w = self.on(a, b)
        return float(np.dot(w, f(x)))


def _legendre_and_derivative(m: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, m + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    # P'_m = m (x P_m - P_{m-1}) / (x^2 - 1); nodes never sit at +-1
    dp = m * (x * p1 - p0) / (x * x - 1)
    return p1, dp


@lru_cache(maxsize=64)
def _rule(points: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if points == 1:
        return (0.0,), (2.0,)
    i = np.arange(1, points + 1)
    x = np.cos(math.pi * (i - 0.25) / (points + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(points, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < 1e-16:
            break
    _, dp = _legendre_and_derivative(points, x)
    w = 2.0 / ((1 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    # enforce exact symmetry of the rule
    x = (x - x[::-1]) / 2
    w = (w + w[::-1]) / 2
    return tuple(x), tuple(w)


def gauss_legendre(points: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1] exact to degree 2*points - 1."""
    if int(points) != points or points < 1:
        raise ValueError(f"points must be a positive integer, got {points}")
    x, w = _rule(int(points))
    return QuadratureRule(np.array(x), np.array(w))
