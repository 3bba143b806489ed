"""Operator application, matrix assembly, and norm certification."""
import numpy as np
import pytest
from pytest import approx

from pwlab.grid import SampledFunction, inner
from pwlab.pwspace import default_grid, project_band, sinc_kernel
from pwlab.symbols import (bump_spectrum_symbol, gaussian_symbol,
                           mod_poly_symbol, sampled_symbol, samples)
from pwlab.toeplitz import (NyquistBasis, OperatorMatrix, hankel_apply,
                            identity_matrix, identity_residuals,
                            matrix_from_dict, matrix_pnorm, matrix_to_dict,
                            operator_norm_certified, toeplitz_apply,
                            toeplitz_matrix)

A = 1.0


@pytest.fixture(scope="module")
def grid():
    return default_grid(A)


def test_unit_symbol_acts_as_identity(grid):
    one = sampled_symbol(SampledFunction(grid, np.ones(grid.count, complex)))
    f = project_band(sinc_kernel(0.7, 0.5, grid), A)
    out = toeplitz_apply(one, f)
    assert np.max(np.abs(out.values - f.values)) < 1e-12


def test_apply_is_linear(grid):
    sym = gaussian_symbol()
    f = project_band(sinc_kernel(0.5, 0.0, grid), A)
    g = project_band(sinc_kernel(0.8, 2.0, grid), A)
    both = project_band(SampledFunction(grid, 2.0 * f.values - 1j * g.values), A)
    lhs = toeplitz_apply(sym, both).values
    rhs = (2.0 * toeplitz_apply(sym, f).values
           - 1j * toeplitz_apply(sym, g).values)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_real_symbol_gives_selfadjoint_operator(grid):
    sym = bump_spectrum_symbol(0.05, 1.5, seed=2, hermitian=True)
    f = project_band(sinc_kernel(0.6, -1.0, grid), A)
    g = project_band(sinc_kernel(0.9, 1.5, grid), A)
    lhs = inner(toeplitz_apply(sym, f).fun, g.fun)
    rhs = inner(f.fun, toeplitz_apply(sym, g).fun)
    assert lhs == approx(rhs, rel=1e-10)


def test_zero_symbol_operator_vanishes(grid):
    # x * exp(4 pi i x) pushes the whole band out of itself
    T = toeplitz_matrix(mod_poly_symbol(1, 2.0 * A), A, 2.0, 32.0, grid)
    assert np.linalg.norm(T.entries, 2) < 1e-8


def test_mod_poly_needs_lattice_modulation(grid):
    f = project_band(sinc_kernel(0.5, 0.0, grid), A)
    with pytest.raises(ValueError, match="lattice"):
        toeplitz_apply(mod_poly_symbol(1, 2.0 + 1e-5), f)


def test_resolution_guard_names_the_problem(grid):
    sym = bump_spectrum_symbol(6.0, 7.5, seed=1)
    f = project_band(sinc_kernel(0.5, 0.0, grid), A)
    with pytest.raises(ValueError, match="resolve"):
        toeplitz_apply(sym, f)


def test_nyquist_basis_is_orthonormal(grid):
    basis = NyquistBasis(A, 8.0, grid)
    G = np.zeros((basis.size, basis.size), dtype=complex)
    for j in range(basis.size):
        vj = basis.vector(j)
        for k in range(j, basis.size):
            G[j, k] = inner(vj.fun, basis.vector(k).fun)
            G[k, j] = np.conj(G[j, k])
    assert np.max(np.abs(G - np.eye(basis.size))) < 1e-12


def test_basis_coefficients_invert_synthesis(grid):
    basis = NyquistBasis(A, 8.0, grid)
    rng = np.random.default_rng(4)
    c = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
    f = basis.synthesize(c)
    assert np.max(np.abs(basis.coefficients(f) - c)) < 1e-12


def test_identity_matrix_is_identity(grid):
    T = identity_matrix(A, 2.0, 32.0)
    assert np.max(np.abs(T.entries - np.eye(T.size))) < 1e-12


def test_matrix_pnorm_exact_cases():
    M = np.array([[1.0, 2.0], [0.0, 3.0]], dtype=complex)
    assert matrix_pnorm(M, 1.0)["lower"] == approx(5.0)
    assert matrix_pnorm(M, np.inf)["lower"] == approx(3.0)
    assert matrix_pnorm(M, 2.0)["lower"] == approx(np.linalg.norm(M, 2))


def test_matrix_pnorm_bracket_for_intermediate_p():
    rng = np.random.default_rng(8)
    M = rng.standard_normal((24, 24)) + 1j * rng.standard_normal((24, 24))
    for p in (1.5, 3.0):
        d = matrix_pnorm(M, p)
        assert 0.0 < d["lower"] <= d["upper"] * (1 + 1e-12)
    # diagonal case has the same p-norm for every p: the bracket collapses
    D = np.diag([3.0, 1.0, 0.5, 0.25]).astype(complex)
    for p in (1.5, 3.0):
        d = matrix_pnorm(D, p)
        assert d["lower"] == approx(3.0, rel=1e-8)
        assert d["upper"] >= 3.0 - 1e-12


def test_gaussian_matrix_norm_under_sup(grid):
    sym = gaussian_symbol()
    T = toeplitz_matrix(sym, A, 2.0, 32.0, grid)
    n = operator_norm_certified(T)
    assert n["lower"] <= 1.0 + 1e-9  # ||T_phi|| <= sup|phi| = 1 at p = 2


def test_projector_and_intertwine_identities():
    res = identity_residuals(A, 2.0, trials=5)
    assert res["projector_two_term"] < 1e-10
    assert res["projector_halfline_sandwich"] < 1e-10
    assert res["hankel_toeplitz_intertwine"] < 1e-10


def test_matrix_dict_roundtrip(grid):
    T = toeplitz_matrix(gaussian_symbol(), A, 2.0, 8.0, grid)
    T2 = matrix_from_dict(matrix_to_dict(T))
    assert np.array_equal(T.entries, T2.entries)
    assert (T2.a, T2.p, T2.window) == (T.a, T.p, T.window)
    assert np.array_equal(T.nodes, T2.nodes)


def test_matrix_from_dict_names_missing_field():
    with pytest.raises(ValueError, match="entries"):
        matrix_from_dict({"band": 1.0, "p": 2.0,
                          "basis": {"window": 8.0, "nodes": [0.0]}})


def test_hankel_apply_produces_antianalytic_output(grid):
    from pwlab.grid import fft_spectrum
    from pwlab.pwspace import modulate
    sym = sampled_symbol(SampledFunction(
        grid, samples(bump_spectrum_symbol(0.3, 1.4, seed=3), grid).values
        * np.exp(-4j * np.pi * A * grid.points)))
    f = project_band(sinc_kernel(0.5, 0.0, grid), A)
    out = hankel_apply(sym, modulate(f.fun, A))  # lift into the analytic class
    spec = fft_spectrum(out)
    pos = spec.grid.points >= 0
    assert np.max(np.abs(spec.values[pos])) < 1e-10 * np.max(np.abs(spec.values))


def test_hankel_apply_rejects_nonanalytic_input(grid):
    sym = gaussian_symbol()
    f = project_band(sinc_kernel(0.5, 0.0, grid), A)  # two-sided spectrum
    with pytest.raises(ValueError, match="analytic"):
        hankel_apply(sym, f.fun)
