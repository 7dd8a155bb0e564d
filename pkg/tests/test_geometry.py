import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polybounds.geometry import (CollarSpec, Domain, collar_decay_delta0, collar_ratio,
                                 collar_volume, collar_volume_mc, default_delta_grid, inradius,
                                 moment_of_inertia, sup_norm_sq, unit_ball_volume, volume)

UNIT_SQUARE = Domain.box([1.0, 1.0])
sides = st.lists(st.floats(0.2, 5.0), min_size=1, max_size=4)


def test_unit_ball_volume_low_dims():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-15)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert unit_ball_volume(4) == pytest.approx(math.pi ** 2 / 2, rel=1e-15)


def test_unit_ball_volume_4d_monte_carlo():
    rng = np.random.default_rng(12345)
    pts = rng.uniform(-1, 1, size=(400_000, 4))
    hits = (np.einsum("ij,ij->i", pts, pts) <= 1).astype(float)
    est = 16 * hits.mean()
    se = 16 * hits.std(ddof=1) / math.sqrt(hits.size)
    assert abs(est - unit_ball_volume(4)) < 4 * se


@pytest.mark.parametrize("n", range(3, 12))
def test_unit_ball_recurrence(n):
    assert unit_ball_volume(n) == pytest.approx(unit_ball_volume(n - 2) * 2 * math.pi / n, rel=1e-13)


def test_volume_examples():
    assert volume(UNIT_SQUARE) == 1.0
    assert volume(Domain.ball(2.0, 2)) == pytest.approx(4 * math.pi)
    assert volume(Domain.box([1, 2, 3])) == pytest.approx(6.0)


def test_collar_volume_square():
    assert collar_volume(UNIT_SQUARE, 4.0) == pytest.approx(0.75)
    assert collar_volume(UNIT_SQUARE, CollarSpec(4.0)) == pytest.approx(0.75)
    assert collar_volume(UNIT_SQUARE, 1.0) == 1.0
    assert collar_volume(UNIT_SQUARE, 1e6) == pytest.approx(4e-6 - 4e-12, rel=1e-12)
    assert collar_volume(UNIT_SQUARE, 0.01) == 1.0


def test_collar_volume_disk_matches_monte_carlo():
    disk = Domain.ball(1.0, 2)
    exact = collar_volume(disk, 2.0)
    assert exact == pytest.approx(3 * math.pi / 4)
    est, se = collar_volume_mc(disk, 2.0, 1_000_000, seed=3)
    assert abs(est - exact) < 3 * se


def test_collar_mc_square():
    est, se = collar_volume_mc(UNIT_SQUARE, 4.0, 1_000_000, seed=1)
    assert 0 < se < 1e-3
    assert abs(est - 0.75) < 3 * se


def test_collar_mc_is_seeded():
    assert collar_volume_mc(UNIT_SQUARE, 3.0, 5000, seed=9) == collar_volume_mc(UNIT_SQUARE, 3.0, 5000, seed=9)


def test_collar_mc_rejects_tiny_sample():
    with pytest.raises(ValueError):
        collar_volume_mc(UNIT_SQUARE, 3.0, 10, seed=0)


def test_collar_spec_validation():
    with pytest.raises(ValueError):
        CollarSpec(0.0)


def test_inradius_examples():
    assert inradius(UNIT_SQUARE) == 0.5
    assert inradius(Domain.box([1, 2, 3])) == 0.5
    assert inradius(Domain.ball(2.0, 3)) == 2.0


def test_sup_norm_examples():
    assert sup_norm_sq(UNIT_SQUARE) == pytest.approx(0.5)
    assert sup_norm_sq(Domain.box([1, 1], center=[0.5, 0.5])) == pytest.approx(2.0)
    assert sup_norm_sq(Domain.ball(1.0, 2)) == pytest.approx(1.0)


def test_moment_of_inertia_examples():
    assert moment_of_inertia(UNIT_SQUARE) == pytest.approx(1 / 6)
    assert moment_of_inertia(Domain.interval(1.0)) == pytest.approx(1 / 12)
    assert moment_of_inertia(Domain.ball(1.0, 2)) == pytest.approx(math.pi / 2)


def test_disk_inertia_monte_carlo():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-1, 1, size=(500_000, 2))
    r2 = np.einsum("ij,ij->i", pts, pts)
    f = np.where(r2 <= 1, r2, 0.0) * 4
    assert abs(f.mean() - math.pi / 2) < 4 * f.std(ddof=1) / math.sqrt(f.size)


def test_delta0_square_is_perimeter_limited():
    grid = np.linspace(2, 100, 981)
    d0 = collar_decay_delta0(UNIT_SQUARE, 1.0, grid)
    # sigma * V(collar) = 4 - 4/sigma on [2, inf): the grid sup sits at its right end
    assert d0 == pytest.approx(4 - 4 / 100, rel=1e-12)
    assert d0 <= 4
    assert collar_decay_delta0(UNIT_SQUARE, 1.0, [2.0, 1e6]) == pytest.approx(4.0, rel=1e-5)


def test_delta0_interval_and_covering_collar():
    assert collar_decay_delta0(Domain.interval(1.0), 1.0, np.linspace(2, 100, 50)) == pytest.approx(2.0)
    assert collar_decay_delta0(UNIT_SQUARE, 1.0, [1.5]) == pytest.approx(1.5)
    assert collar_decay_delta0(UNIT_SQUARE, 2.0, [1.5]) == pytest.approx(1.5 ** 2)


def test_delta0_errors():
    with pytest.raises(ValueError):
        collar_decay_delta0(UNIT_SQUARE, 1.0, [])
    with pytest.raises(ValueError):
        collar_decay_delta0(UNIT_SQUARE, 1.0, [0.5, 3.0])
    with pytest.raises(ValueError):
        collar_decay_delta0(UNIT_SQUARE, 0.5, [3.0])
    assert default_delta_grid(UNIT_SQUARE)[0] > 1.0


def test_domain_validation():
    with pytest.raises(ValueError):
        Domain.box([1.0, -1.0])
    with pytest.raises(ValueError):
        Domain.ball(1.0, 2, center=[0.0])


@given(sides, st.floats(0.05, 50.0), st.floats(1.0, 3.0))
def test_collar_monotone_and_bounded(s, sigma, factor):
    d = Domain.box(s)
    a, b = collar_volume(d, sigma), collar_volume(d, sigma * factor)
    assert 0 <= b <= a * (1 + 1e-12) <= volume(d) * (1 + 1e-12)
    assert 0 <= collar_ratio(d, sigma) <= 1


@given(sides)
def test_collar_covers_below_inradius(s):
    d = Domain.box(s)
    assert collar_volume(d, 0.999 / inradius(d)) == pytest.approx(volume(d))


@given(st.floats(0.2, 4.0), st.integers(1, 6), st.floats(0.05, 20.0))
def test_ball_collar_in_range(r, n, sigma):
    d = Domain.ball(r, n)
    assert 0 <= collar_volume(d, sigma) <= volume(d) * (1 + 1e-12)


@given(sides, st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_translation_invariance(s, shift):
    d = Domain.box(s)
    moved = d.translated(shift[: d.dim])
    assert volume(moved) == pytest.approx(volume(d))
    assert collar_volume(moved, 3.0) == pytest.approx(collar_volume(d, 3.0))
    assert moment_of_inertia(moved) == pytest.approx(moment_of_inertia(d))
