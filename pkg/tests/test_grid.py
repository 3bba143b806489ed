import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pytest import approx

from pwlab.grid import (SampledFunction, evaluate_offgrid, fft_spectrum,
                        from_callable, inner, inverse_spectrum, lp_norm,
                        quad_integral, symmetric_grid)


def test_symmetric_grid_layout():
    g = symmetric_grid(64.0, 1.0 / 16.0)
    assert g.count == 2048
    assert g.start == -64.0
    assert g.points[0] == -64.0
    assert g.points[-1] == approx(64.0 - 1.0 / 16.0)
    assert g.nyquist == approx(8.0)


def test_freq_grid_matches_fft_layout():
    g = symmetric_grid(8.0, 0.25)
    fg = g.freq_grid()
    assert fg.count == g.count
    assert fg.start == approx(-2.0)
    assert fg.step == approx(1.0 / (g.count * g.step))


def test_spectrum_of_pure_frequency_is_a_spike():
    g = symmetric_grid(32.0, 1.0 / 8.0)
    xi0 = 0.5
    f = SampledFunction(g, np.exp(2j * np.pi * xi0 * g.points))
    spec = fft_spectrum(f)
    k = spec.grid.index_of(xi0)
    # delta scaling: the spike carries the full window mass
    assert abs(spec.values[k]) == approx(2 * 32.0, rel=1e-12)
    rest = np.delete(np.abs(spec.values), k)
    assert np.max(rest) < 1e-9 * abs(spec.values[k])


def test_inverse_spectrum_roundtrip():
    g = symmetric_grid(16.0, 1.0 / 8.0)
    rng = np.random.default_rng(7)
    f = SampledFunction(g, rng.standard_normal(g.count)
                        + 1j * rng.standard_normal(g.count))
    back = inverse_spectrum(fft_spectrum(f), start=g.start)
    assert np.max(np.abs(back.values - f.values)) < 1e-12


def test_quad_integral_gaussian():
    g = symmetric_grid(32.0, 1.0 / 16.0)
    f = from_callable(lambda x: np.exp(-np.pi * x ** 2), g)
    assert quad_integral(f) == approx(1.0, abs=1e-12)


def test_lp_norm_scaling():
    g = symmetric_grid(16.0, 1.0 / 8.0)
    f = from_callable(lambda x: np.exp(-x ** 2), g)
    doubled = SampledFunction(g, 2.0 * f.values)
    for p in (1.0, 1.5, 2.0, 4.0):
        assert lp_norm(doubled, p) == approx(2.0 * lp_norm(f, p), rel=1e-12)


def test_inner_against_parseval():
    g = symmetric_grid(16.0, 1.0 / 8.0)
    rng = np.random.default_rng(3)
    f = SampledFunction(g, rng.standard_normal(g.count) + 0j)
    h = SampledFunction(g, rng.standard_normal(g.count) + 0j)
    sf, sh = fft_spectrum(f), fft_spectrum(h)
    assert inner(f, h) == approx(inner(sf, sh), rel=1e-10)


def test_evaluate_offgrid_reproduces_grid_points():
    g = symmetric_grid(8.0, 0.25)
    f = from_callable(lambda x: np.cos(0.3 * x), g)
    xs = g.points[::7]
    got = evaluate_offgrid(f, xs)
    assert np.max(np.abs(got - f.values[::7])) < 1e-12


@given(st.integers(min_value=-40, max_value=40))
def test_index_of_inverts_points(k):
    g = symmetric_grid(8.0, 0.125)
    idx = k % g.count
    assert g.index_of(g.points[idx]) == idx


@given(st.floats(min_value=-3.9, max_value=3.9),
       st.floats(min_value=0.05, max_value=1.0))
def test_bandlimited_interpolation_consistency(x0, width):
    # trig interpolation of a smooth band-limited sample is stable off-grid
    g = symmetric_grid(32.0, 1.0 / 8.0)
    f = from_callable(lambda x: np.exp(-width * x ** 2), g)
    v = evaluate_offgrid(f, np.asarray([x0]))[0]
    assert abs(v - np.exp(-width * x0 ** 2)) < 1e-6
