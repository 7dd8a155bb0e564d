"""Reference spectra for the clamped poly-Laplacian.

Exact routes: separation of variables for l = 1 on boxes, and the roots of
cos(mu) cosh(mu) = 1 for the clamped beam (l = 2, n = 1).  Galerkin route:
polynomial trial spaces that satisfy all clamped conditions exactly, so the
computed values are Rayleigh-Ritz upper approximations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial import legendre as leg
from scipy.linalg import solve_triangular

from .errors import SolverError
from .quadrature import gauss_legendre

METHODS = ("exact-box-l1", "beam-roots", "rayleigh-ritz")
CONVERGENCE_RTOL = 1e-6
REFINEMENT_STEP = 4
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray
    method: str
    basis_size: int = 0
    converged_count: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if self.method not in METHODS:
            raise ValueError(f"unknown spectrum method {self.method!r}")
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("a spectrum needs at least one value")
        if np.any(vals <= 0) or np.any(np.diff(vals) < 0):
            raise ValueError("spectrum values must be positive and nondecreasing")
        if not 0 <= self.converged_count <= vals.size:
            raise ValueError("converged_count out of range")

    def __len__(self) -> int:
        return self.values.size

    def running_average(self) -> np.ndarray:
        return np.cumsum(self.values) / np.arange(1, self.values.size + 1)

    @property
    def trusted(self) -> np.ndarray:
        """Leading values that passed the convergence test."""
        return self.values[: self.converged_count]


# -- exact oracles --------------------------------------------------------

def _lattice_values(sides: Sequence[float], cap: float) -> np.ndarray:
    vals = np.zeros(1)
    for s in sides:
        m_max = int(math.floor(s * math.sqrt(cap) / math.pi))
        if m_max < 1:
            return np.empty(0)
        step = (math.pi * np.arange(1, m_max + 1) / s) ** 2
        vals = (vals[:, None] + step[None, :]).ravel()
        vals = vals[vals <= cap * (1 + 1e-14)]
    return vals


def exact_box_spectrum_l1(sides: Sequence[float], count: int) -> Spectrum:
    """First ``count`` Dirichlet Laplacian eigenvalues pi^2 sum (m_i/s_i)^2 of a box."""
    sides = [float(s) for s in sides]
    if count < 1:
        raise ValueError("count must be >= 1")
    if not sides or min(sides) <= 0:
        raise ValueError("sides must be positive")
    cap = math.pi ** 2 * sum(1 / s ** 2 for s in sides)
    while True:
        vals = _lattice_values(sides, cap)
        if vals.size >= count:
            break
        cap *= 2.0
    vals = np.sort(vals)[:count]
    return Spectrum(vals, "exact-box-l1", converged_count=count)


def beam_roots(count: int, tol: float = 1e-12) -> np.ndarray:
    """First ``count`` positive roots of cos(mu) cosh(mu) = 1.

    Root j lies in [j pi, (j+1) pi]; the equivalent cos(mu) - 1/cosh(mu) = 0
    changes sign there and stays bounded for large mu.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    j = np.arange(1, count + 1, dtype=float)
    lo, hi = j * math.pi, (j + 1) * math.pi

    def g(mu):
        return np.cos(mu) - 1.0 / np.cosh(mu)

    glo = g(lo)
    if np.any(glo * g(hi) >= 0):
        bad = int(np.flatnonzero(glo * g(hi) >= 0)[0]) + 1
        raise SolverError(f"failed to bracket beam root {bad}")
    for _ in range(200):
        mid = (lo + hi) / 2
        gm = g(mid)
        left = np.sign(gm) == np.sign(glo)
        lo = np.where(left, mid, lo)
        glo = np.where(left, gm, glo)
        hi = np.where(left, hi, mid)
        if np.all(hi - lo <= tol * np.maximum(1.0, lo)):
            break
    else:
        raise SolverError("beam root bisection did not converge")
    return (lo + hi) / 2


def clamped_beam_spectrum(length: float, count: int) -> Spectrum:
    """Clamped-clamped beam eigenvalues (mu_j / L)^4."""
    if not length > 0:
        raise ValueError("length must be positive")
    mu = beam_roots(count)
    return Spectrum((mu / length) ** 4, "beam-roots", converged_count=count)


# -- generalized symmetric eigenproblem -----------------------------------

def dense_generalized_symmetric_eig(S: np.ndarray, M: np.ndarray,
                                    return_vectors: bool = False):
    """Eigenvalues of S x = lambda M x, ascending.

    Diagonal equilibration, Cholesky reduction M = L L^T, symmetric
    eigensolve of L^{-1} S L^{-T}, then a residual check on every pair.
    """
    S = np.asarray(S, dtype=float)
    M = np.asarray(M, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape != M.shape:
        raise ValueError(f"need square matrices of equal shape, got {S.shape} and {M.shape}")
    d = np.diag(M)
    if np.any(d <= 0):
        raise SolverError("mass matrix is not positive definite")
    scale = 1.0 / np.sqrt(d)
    Ss = S * scale[:, None] * scale[None, :]
    Ms = M * scale[:, None] * scale[None, :]
    try:
        L = np.linalg.cholesky((Ms + Ms.T) / 2)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"Cholesky factorization of the mass matrix failed (size {M.shape[0]})") from exc
    C = solve_triangular(L, solve_triangular(L, (Ss + Ss.T) / 2, lower=True).T, lower=True)
    C = (C + C.T) / 2
    lam, Y = np.linalg.eigh(C)
    X = solve_triangular(L.T, Y, lower=False) * scale[:, None]
    resid = np.linalg.norm(S @ X - (M @ X) * lam, axis=0)
    bound = RESIDUAL_RTOL * (np.linalg.norm(S, 2) + np.abs(lam) * np.linalg.norm(M, 2)) * np.linalg.norm(X, axis=0)
    if np.any(resid > bound):
        i = int(np.argmax(resid / bound))
        raise SolverError(f"eigenpair {i} residual {resid[i]:.3e} exceeds {bound[i]:.3e}")
    if return_vectors:
        return lam, X
    return lam


# -- Galerkin assembly ----------------------------------------------------

def _bubble(l: int) -> np.ndarray:
    """Legendre coefficients of ((1 - t^2)/4)^l."""
    out = np.array([1.0])
    for _ in range(l):
        out = leg.legmul(out, np.array([1 / 6, 0.0, -1 / 6]))
    return out


@lru_cache(maxsize=32)
def _basis_tables(l: int, N: int, orders: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray, dict]:
    """Values of ((1-t^2)/4)^l P_j(t) and requested derivatives at Gauss nodes on [-1, 1]."""
    weight = _bubble(l)
    rule = gauss_legendre(2 * l + N + 1)
    t = rule.nodes
    tables = {r: np.empty((N, t.size)) for r in orders}
    for j in range(N):
        coef = leg.legmul(weight, np.eye(N)[j])
        for r in orders:
            tables[r][j] = leg.legval(t, leg.legder(coef, r) if r else coef)
    return t, rule.weights, tables


def basis_on_interval(l: int, N: int, length: float, x: np.ndarray, order: int = 0) -> np.ndarray:
    """order-th x-derivative of the N trial functions at points x in [0, L]."""
    weight = _bubble(l)
    t = 2 * np.asarray(x, dtype=float) / length - 1
    out = np.empty((N, np.size(t)))
    for j in range(N):
        coef = leg.legmul(weight, np.eye(N)[j])
        out[j] = leg.legval(t, leg.legder(coef, order) if order else coef) * (2 / length) ** order
    return out


def interval_blocks(l: int, N: int, length: float, pairs: Sequence[tuple[int, int]]) -> dict:
    """Gram blocks G[(a, b)] = int_0^L phi_i^(a) phi_j^(b) dx for the order-l trial space."""
    orders = tuple(sorted({o for pair in pairs for o in pair}))
    _, w, tab = _basis_tables(l, N, orders)
    jac = length / 2
    out = {}
    for a, b in pairs:
        fa = tab[a] * (2 / length) ** a
        fb = tab[b] * (2 / length) ** b
        out[(a, b)] = (fa * w) @ fb.T * jac
    return out


def _check_basis(N: int, count: int, minimum: int = 1) -> None:
    if N < minimum or count < 1:
        raise ValueError("basis size and count must be positive")
    if N < count + 2:
        raise ValueError(f"basis size N={N} must be >= count + 2 = {count + 2}")


def _interval_eigs(l: int, length: float, N: int) -> np.ndarray:
    G = interval_blocks(l, N, length, [(l, l), (0, 0)])
    return dense_generalized_symmetric_eig(G[(l, l)], G[(0, 0)])


def _square_eigs(l: int, side: float, N: int) -> np.ndarray:
    if l == 1:
        G = interval_blocks(1, N, side, [(1, 1), (0, 0)])
        A0, A1 = G[(0, 0)], G[(1, 1)]
        S = np.kron(A1, A0) + np.kron(A0, A1)
    else:
        G = interval_blocks(2, N, side, [(2, 2), (2, 0), (0, 0)])
        A0, A2, B = G[(0, 0)], G[(2, 2)], G[(2, 0)]
        S = np.kron(A2, A0) + np.kron(A0, A2) + np.kron(B, B.T) + np.kron(B.T, B)
    return dense_generalized_symmetric_eig(S, np.kron(A0, A0))


def _certified(solve, N: int, count: int, certify: bool) -> Spectrum:
    vals = solve(N)[:count]
    converged = 0
    meta = {}
    if certify:
        finer = solve(N + REFINEMENT_STEP)[:count]
        change = np.abs(vals - finer) / vals
        meta["refinement_change"] = change.tolist()
        bad = np.flatnonzero(change >= CONVERGENCE_RTOL)
        converged = int(bad[0]) if bad.size else count
    return Spectrum(vals, "rayleigh-ritz", basis_size=N, converged_count=converged, meta=meta)


def rayleigh_ritz_interval(l: int, length: float, N: int, count: int,
                           certify: bool = True) -> Spectrum:
    """Galerkin spectrum of (-d^2/dx^2)^l on [0, L] with clamped ends.

    Trial functions (x(L-x)/L^2)^l P_j(2x/L - 1), j < N.  With ``certify``
    the solve is repeated at N + 4 and values whose relative change stays
    below 1e-6 are counted as converged.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    _check_basis(N, count)
    return _certified(lambda m: _interval_eigs(l, length, m), N, count, certify)


def rayleigh_ritz_square(l: int, side: float, N: int, count: int,
                         certify: bool = True) -> Spectrum:
    """Tensor-product Galerkin spectrum on a square, l in {1, 2}."""
    if l not in (1, 2):
        raise ValueError("square solver supports l = 1 or l = 2 only")
    if N < 4:
        raise ValueError("per-dimension basis size must be >= 4")
    if count > N * N - 2:
        raise ValueError(f"count={count} too large for N={N}")
    return _certified(lambda m: _square_eigs(l, side, m), N, count, certify)
