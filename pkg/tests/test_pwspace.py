"""Band projections, kernels, and the p-norm machinery."""
import numpy as np
import pytest
from pytest import approx

from pwlab.grid import SampledFunction, from_callable, inner, lp_norm
from pwlab.pwspace import (band_residual, boyd_lower_bound, default_grid,
                           eval_functional, holder_conjugate, make_bandlimited,
                           modulate, project_band, project_halfline,
                           projector_two_term, riesz_constant_estimate,
                           sinc_kernel, sinc_profile)


def test_sinc_profile_center_and_zeros():
    a = 1.0
    assert sinc_profile(a, np.asarray([0.0]))[0] == approx(2 * a)
    ks = np.arange(1, 9) / (2 * a)  # Nyquist lattice away from 0
    assert np.max(np.abs(sinc_profile(a, ks))) < 1e-14


def test_sinc_l2_norm(grid1):
    # the 1/x tail clipped at |x| = 64 costs ~1.6e-3 of the exact mass 2a
    f = SampledFunction(grid1, sinc_profile(1.0, grid1.points).astype(complex))
    assert lp_norm(f, 2.0) ** 2 == approx(2.0, rel=2e-3)


def test_projection_idempotent(grid1):
    rng = np.random.default_rng(0)
    raw = SampledFunction(grid1, rng.standard_normal(grid1.count)
                          + 1j * rng.standard_normal(grid1.count))
    once = project_band(raw, 1.0).fun
    twice = project_band(once, 1.0).fun
    assert np.max(np.abs(twice.values - once.values)) < 1e-13
    assert band_residual(once, 1.0) < 1e-28


def test_projection_is_selfadjoint(grid1):
    rng = np.random.default_rng(1)
    f = SampledFunction(grid1, rng.standard_normal(grid1.count) + 0j)
    g = SampledFunction(grid1, rng.standard_normal(grid1.count) + 0j)
    lhs = inner(project_band(f, 1.0).fun, g)
    rhs = inner(f, project_band(g, 1.0).fun)
    assert lhs == approx(rhs, rel=1e-12)


def test_kernel_reproduces_point_values(grid1):
    # quadrature route; accuracy limited by the clipped kernel tail
    fb = project_band(sinc_kernel(0.5, 0.0, grid1), 0.5)
    for x in (0.0, 0.25, 1.5, -3.0):
        direct = fb.values[grid1.index_of(x)]
        via_kernel = eval_functional(fb, x)
        assert abs(via_kernel - direct) < 2e-3


def test_make_bandlimited_rejects_wideband(grid1):
    rng = np.random.default_rng(2)
    raw = SampledFunction(grid1, rng.standard_normal(grid1.count) + 0j)
    with pytest.raises(ValueError):
        make_bandlimited(raw, 1.0)


def test_project_band_rejects_unresolvable_band():
    g = default_grid(1.0)  # nyquist 8
    f = SampledFunction(g, np.zeros(g.count, dtype=complex))
    with pytest.raises(ValueError):
        project_band(f, 9.0)


def test_halfline_split_is_a_partition(grid1):
    rng = np.random.default_rng(3)
    f = SampledFunction(grid1, rng.standard_normal(grid1.count)
                        + 1j * rng.standard_normal(grid1.count))
    up = project_halfline(f, +1)
    down = project_halfline(f, -1)
    assert np.max(np.abs(up.values + down.values - f.values)) < 1e-12


def test_modulate_shifts_band_content(grid1):
    fb = project_band(sinc_kernel(1.0, 0.0, grid1), 1.0)
    shifted = modulate(fb.fun, 3.0)
    assert band_residual(shifted, 1.0) > 0.99  # moved entirely out of band
    assert band_residual(modulate(shifted, -3.0), 1.0) < 1e-25


def test_two_term_identity_on_band_functions(grid1):
    rng = np.random.default_rng(4)
    raw = SampledFunction(grid1, rng.standard_normal(grid1.count)
                          + 1j * rng.standard_normal(grid1.count))
    f = project_band(raw, 1.0).fun
    d = projector_two_term(f, 1.0)
    assert np.max(np.abs(d.values - f.values)) < 1e-10 * np.max(np.abs(f.values))


def test_holder_conjugate():
    assert holder_conjugate(2.0) == approx(2.0)
    assert holder_conjugate(1.5) == approx(3.0)
    assert holder_conjugate(4.0) == approx(4.0 / 3.0)


def test_riesz_constant_is_one_at_two():
    assert riesz_constant_estimate(2.0) == 1.0


def test_riesz_constant_grows_away_from_two():
    a2 = riesz_constant_estimate(2.0)
    assert riesz_constant_estimate(1.5) > a2
    assert riesz_constant_estimate(3.0) > a2


def test_boyd_estimate_on_scaled_identity():
    n = 64

    def apply(v):
        return 3.0 * v

    for p in (1.5, 2.0, 3.0):
        est = boyd_lower_bound(apply, apply, n, p, seed=5)
        assert est == approx(3.0, rel=1e-8)
