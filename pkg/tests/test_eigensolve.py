import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from polybounds import bounds as B
from polybounds.eigensolve import (Spectrum, basis_on_interval, beam_roots, clamped_beam_spectrum,
                                   dense_generalized_symmetric_eig, exact_box_spectrum_l1,
                                   interval_blocks, rayleigh_ritz_interval, rayleigh_ritz_square)
from polybounds.errors import SolverError
from polybounds.geometry import Domain

PI2 = math.pi ** 2
# first clamped-plate eigenvalue of the unit square, pinned by refinement N=16 -> N=20
SQUARE_PLATE_LAMBDA1 = 1294.93397976


def inertia_count(S, M, s):
    """Eigenvalues of S x = lam M x below s, from the inertia of S - s M."""
    _, D, _ = scipy.linalg.ldl(S - s * M)
    return int(np.sum(np.linalg.eigvalsh(D) < 0))


def bisect_eigs(S, M, count, lo, hi, tol=1e-12):
    out = []
    for j in range(count):
        a, b = lo, hi
        while b - a > tol * max(1.0, abs(b)):
            mid = (a + b) / 2
            if inertia_count(S, M, mid) > j:
                b = mid
            else:
                a = mid
        out.append((a + b) / 2)
    return np.array(out)


# -- exact spectra ----------------------------------------------------------

def test_square_lattice():
    np.testing.assert_allclose(exact_box_spectrum_l1([1, 1], 3).values, [2 * PI2, 5 * PI2, 5 * PI2])
    assert exact_box_spectrum_l1([1], 2).values == pytest.approx([PI2, 4 * PI2])
    assert exact_box_spectrum_l1([1, 1], 16).values.sum() == pytest.approx(234 * PI2, rel=1e-14)


def test_square_lattice_brute_force():
    m = np.arange(1, 60)
    brute = np.sort((m[:, None] ** 2 + (m[None, :] / 2.0) ** 2).ravel())[:500] * PI2
    np.testing.assert_allclose(exact_box_spectrum_l1([1, 2], 500).values, brute, rtol=1e-14)


def test_beam_roots():
    mu = beam_roots(3)
    np.testing.assert_allclose(mu[:2], [4.7300407449, 7.8532046241], rtol=1e-10)
    assert np.all(np.abs(np.cos(mu) * np.cosh(mu) - 1) < 1e-8 * np.cosh(mu))
    large = beam_roots(40)
    np.testing.assert_allclose(large[-5:], (2 * np.arange(36, 41) + 1) * math.pi / 2, rtol=1e-12)


def test_beam_spectrum_scaling():
    one = clamped_beam_spectrum(1.0, 6).values
    two = clamped_beam_spectrum(2.0, 6).values
    np.testing.assert_allclose(two, one / 16, rtol=1e-14)
    assert one[0] == pytest.approx(500.5639, rel=1e-7)
    assert one[1] == pytest.approx(3803.537, rel=1e-6)


def test_spectrum_validation():
    with pytest.raises(ValueError):
        Spectrum(np.array([2.0, 1.0]), "beam-roots")
    with pytest.raises(ValueError):
        Spectrum(np.array([1.0]), "finite-elements")
    s = Spectrum(np.array([1.0, 3.0]), "beam-roots", converged_count=1)
    assert s.running_average().tolist() == [1.0, 2.0]
    assert s.trusted.tolist() == [1.0]


# -- generalized eigensolver ------------------------------------------------

def test_identity_pairs():
    for m in (1, 5, 12):
        np.testing.assert_allclose(dense_generalized_symmetric_eig(np.eye(m), np.eye(m)), np.ones(m))
    np.testing.assert_allclose(dense_generalized_symmetric_eig(np.diag([1.0, 2, 3]), np.eye(3)), [1, 2, 3])


def test_random_pair_against_inertia_bisection():
    rng = np.random.default_rng(2024)
    A = rng.standard_normal((20, 20))
    S = A @ A.T + 20 * np.eye(20)
    C = rng.standard_normal((20, 20))
    M = C @ C.T + 20 * np.eye(20)
    lam, X = dense_generalized_symmetric_eig(S, M, return_vectors=True)
    ref = bisect_eigs(S, M, 20, 0.0, 10.0 * lam[-1])
    np.testing.assert_allclose(lam, ref, rtol=1e-8)
    np.testing.assert_allclose(X.T @ M @ X, np.eye(20), atol=1e-10)


def test_eig_errors():
    with pytest.raises(ValueError):
        dense_generalized_symmetric_eig(np.eye(2), np.eye(3))
    with pytest.raises(SolverError):
        dense_generalized_symmetric_eig(np.eye(2), np.array([[1.0, 2.0], [2.0, 1.0]]))


@given(st.integers(1, 8), st.integers(0, 10_000))
def test_generalized_eig_property(m, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, m))
    C = rng.standard_normal((m, m))
    S = A @ A.T + np.eye(m)
    M = C @ C.T + np.eye(m)
    lam, X = dense_generalized_symmetric_eig(S, M, return_vectors=True)
    assert np.all(np.diff(lam) >= 0)
    np.testing.assert_allclose(S @ X, M @ X * lam, atol=1e-8 * np.linalg.norm(S))
    np.testing.assert_allclose(lam, scipy.linalg.eigh(S, M, eigvals_only=True), rtol=1e-9)


# -- Galerkin ---------------------------------------------------------------

@pytest.mark.parametrize("l", [1, 2, 3])
def test_basis_meets_clamped_conditions(l):
    for order in range(l):
        vals = basis_on_interval(l, 10, 1.0, np.array([0.0, 1.0]), order)
        assert np.max(np.abs(vals)) < 1e-12


def test_mass_matrix_matches_dense_quadrature():
    G = interval_blocks(2, 8, 1.0, [(0, 0), (2, 2)])
    x, w = np.polynomial.legendre.leggauss(60)
    x, w = (x + 1) / 2, w / 2
    for order in (0, 2):
        phi = basis_on_interval(2, 8, 1.0, x, order)
        np.testing.assert_allclose(G[(order, order)], (phi * w) @ phi.T, rtol=1e-12, atol=1e-13)


def test_interval_membrane():
    sp = rayleigh_ritz_interval(1, 1.0, 12, 3)
    np.testing.assert_allclose(sp.values, PI2 * np.array([1, 4, 9]), rtol=1e-8)
    assert sp.converged_count == 3 and sp.method == "rayleigh-ritz"


def test_interval_beam():
    sp = rayleigh_ritz_interval(2, 1.0, 16, 2)
    np.testing.assert_allclose(sp.values, clamped_beam_spectrum(1.0, 2).values, rtol=1e-6)


def test_interval_l3_self_converges():
    sp = rayleigh_ritz_interval(3, 1.0, 20, 1)
    assert sp.meta["refinement_change"][0] < 1e-8


def test_interval_scaling():
    a = rayleigh_ritz_interval(2, 1.0, 14, 3, certify=False).values
    b = rayleigh_ritz_interval(2, 0.5, 14, 3, certify=False).values
    np.testing.assert_allclose(b, a * 16, rtol=1e-10)


def test_square_membrane():
    sp = rayleigh_ritz_square(1, 1.0, 10, 3)
    np.testing.assert_allclose(sp.values, PI2 * np.array([2, 5, 5]), rtol=1e-7)


def test_square_plate_frozen_value():
    sp = rayleigh_ritz_square(2, 1.0, 16, 1)
    assert sp.converged_count == 1
    assert sp.values[0] == pytest.approx(SQUARE_PLATE_LAMBDA1, rel=1e-9)
    spec = B.ProblemSpec.on(Domain.box([1.0, 1.0]), 2)
    assert SQUARE_PLATE_LAMBDA1 >= B.levine_protter_lower(spec, 1, "clamped-16pi4")
    assert SQUARE_PLATE_LAMBDA1 >= B.cheng_qi_wei_lower(spec, 1)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_monotone_in_basis_size(l):
    prev = None
    for N in range(6, 19, 2):
        vals = rayleigh_ritz_interval(l, 1.0, N, 4, certify=False).values
        if prev is not None:
            # nested trial spaces; slack covers the roundoff floor of the solve
            assert np.all(vals <= prev * (1 + 1e-9))
        prev = vals


def test_square_monotone_in_basis_size():
    a = rayleigh_ritz_square(2, 1.0, 6, 4, certify=False).values
    b = rayleigh_ritz_square(2, 1.0, 9, 4, certify=False).values
    assert np.all(b <= a * (1 + 1e-12))


def test_galerkin_upper_approximates():
    exact = clamped_beam_spectrum(1.0, 6).values
    ritz = rayleigh_ritz_interval(2, 1.0, 8, 6, certify=False).values
    assert np.all(ritz >= exact * (1 - 1e-12))


def test_unconverged_values_flagged():
    sp = rayleigh_ritz_interval(2, 1.0, 8, 6)
    assert sp.converged_count < 6
    assert len(sp.trusted) == sp.converged_count


def test_galerkin_argument_errors():
    with pytest.raises(ValueError):
        rayleigh_ritz_interval(1, 1.0, 3, 3)
    with pytest.raises(ValueError):
        rayleigh_ritz_square(3, 1.0, 10, 1)
    with pytest.raises(ValueError):
        rayleigh_ritz_square(1, 1.0, 3, 1)
