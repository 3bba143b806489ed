"""Conformal-compression calculus on the band lattice.

Multiplication by omega(x) = (x - i)/(x + i) shifts spectra upward through a
one-sided exponential kernel.  On the frequency lattice the exact analogue is
the elementary Blaschke factor of the bin shift S,

    M = (r - S)(1 - r S)^(-1),

a lower-triangular Toeplitz matrix with first column (r, -c r, -c r^2, ...)
where c = 4 pi * freq_step and r is fixed by c r = 1 - r^2.  That calibration
is forced: the compression Lambda of M to the band block must satisfy the
rank-one identity I - adj(Lambda) Lambda = alpha k (x) k whose right side has
unit trace, and the trace of the lattice defect is c^2 r^2 / (1 - r^2)^2 up
to a term r^(2n).  With this choice the defect is *exactly* rank one on the
geometric profile r^(-l), the lattice twin of the conjugate-kernel spectrum
e^(2 pi (xi - a)) (the two growth rates agree to ~1e-6 per bin, ~1e-3 across
the band).  Everything downstream -- the compatibility test, the commutator
characterization, the series reconstruction, and the symbol recovery --
works in this exact lattice algebra, with the closed-form kernel kept as an
independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import (Grid, SampledFunction, fft_spectrum, inner,
                   inverse_spectrum, lp_norm)
from .pwspace import (BandlimitedFunction, band_mask, band_residual,
                      default_grid, project_band)
from .toeplitz import NyquistBasis, OperatorMatrix, assemble_matrix


def blaschke_params(freq_step: float) -> tuple[float, float, float]:
    """(c, r, d): kernel strength, pole radius, and diagonal weight.

    r is the positive root of c r = 1 - r^2 (unit-trace defect, see module
    docstring); d is the equivalent diagonal quadrature weight 1/c - r^2/(1-r^2)
    of the continuum kernel, recorded for reference -- the first column is
    built directly from (c, r).
    """
    c = 4.0 * np.pi * freq_step
    r = 0.5 * (math.sqrt(c * c + 4.0) - c)
    d = 1.0 / c - r * r / (1.0 - r * r)
    return c, r, d


def omega_samples(x) -> np.ndarray:
    """omega(x) = (x - i)/(x + i), unimodular on the real line."""
    x = np.asarray(x, dtype=complex)
    return (x - 1j) / (x + 1j)


def _omega_kernel(n: int, freq_step: float) -> np.ndarray:
    c, r, _ = blaschke_params(freq_step)
    col = np.zeros(n)
    col[0] = r
    col[1:] = -c * r ** np.arange(1, n)
    return col


def lattice_omega_apply(f: SampledFunction, conjugate: bool = False) -> SampledFunction:
    """Apply the lattice surrogate of multiplication by omega (or conj(omega)).

    The spectrum (in ascending frequency order) is convolved with the
    Blaschke column; the conjugate variant is the exact adjoint, a correlation
    against the same column.  The column decays geometrically, so the lattice
    top never feeds back around: the action agrees with the semi-infinite
    operator to underflow.
    """
    spec = fft_spectrum(f)
    n = f.grid.count
    col = _omega_kernel(n, f.grid.freq_step)
    if conjugate:
        out = np.convolve(spec.values, col[::-1])[n - 1:]
    else:
        out = np.convolve(spec.values, col)[:n]
    return inverse_spectrum(SampledFunction(spec.grid, out), start=f.grid.start)


@dataclass
class ConformalFrame:
    a: float
    p: float
    grid: Grid
    basis: NyquistBasis
    omega: np.ndarray            # pointwise (x-i)/(x+i) on the grid
    kernel: SampledFunction      # conjugate kernel, defect-exact lattice profile
    kernel_coeffs: np.ndarray
    alpha: float                 # 1 / ||kernel||_2^2
    sigma: np.ndarray            # (x+i)^(2/p), arg(x+i) in (0, pi)
    eta: np.ndarray              # alpha * (2 pi i (x-i))^(-2/p)


def build_frame(a: float, p: float = 2.0, grid: Grid | None = None) -> ConformalFrame:
    """Assemble the conformal frame for band a on the given lattice.

    The conjugate kernel is built in the frequency domain as the geometric
    profile r^(-l) anchored at e^(-4 pi a) on the bottom band bin -- the
    profile on which the compression defect is exactly rank one.  Its closed
    form (1/2 pi i)(theta_a(x) - e^(-4 pi a) conj(theta_a)(x))/(x - i) is
    available from closed_form_kernel for cross-checks.
    """
    if grid is None:
        grid = default_grid(a)
    x = grid.points
    basis = NyquistBasis(a, -grid.start, grid)
    _, r, _ = blaschke_params(grid.freq_step)

    fg = grid.freq_grid()
    mask = band_mask(fg.points, a)
    idx = np.where(mask)[0]
    profile = np.zeros(fg.count, dtype=complex)
    profile[idx] = math.exp(-4.0 * np.pi * a) * r ** (-np.arange(len(idx), dtype=float))
    kernel = inverse_spectrum(SampledFunction(fg, profile), start=grid.start)

    alpha = 1.0 / lp_norm(kernel, 2.0) ** 2
    # both bases stay clear of the principal cut on the real grid: x + i has
    # argument in (0, pi), and 2 pi i (x - i) = 2 pi (1 + i x) stays in the
    # open right half-plane
    sigma = np.power(x + 1j, 2.0 / p)
    eta = alpha * np.power(2j * np.pi * (x - 1j), -2.0 / p)
    return ConformalFrame(a, p, grid, basis, omega_samples(x), kernel,
                          basis.coefficients(kernel), alpha, sigma, eta)


def closed_form_kernel(a: float, grid: Grid) -> SampledFunction:
    """(1/2 pi i)(theta_a - e^(-4 pi a) conj(theta_a))/(x - i) on the grid."""
    x = grid.points
    theta = np.exp(2j * np.pi * a * x)
    decay = math.exp(-4.0 * np.pi * a)
    vals = (theta - decay * np.conj(theta)) / (2j * np.pi * (x - 1j))
    return SampledFunction(grid, vals)


def omega_compatible(f: SampledFunction | BandlimitedFunction,
                     frame: ConformalFrame) -> dict:
    """Kernel-orthogonality test for membership of omega*f in the band class.

    defect = |<f, k>| / (||f|| ||k||); the flag is defect <= 1e-6.  The other
    side of the equivalence, the out-of-band mass of omega*f, is computed
    independently through the lattice multiplication and reported alongside.
    """
    fun = f.fun if isinstance(f, BandlimitedFunction) else f
    nf = lp_norm(fun, 2.0)
    nk = lp_norm(frame.kernel, 2.0)
    defect = abs(inner(fun, frame.kernel)) / (nf * nk) if nf > 0.0 else 0.0
    omega_f = lattice_omega_apply(fun)
    residual = band_residual(omega_f, frame.a) if nf > 0.0 else 0.0
    return {"flag": defect <= 1e-6, "defect": defect, "omega_residual": residual}


def k_projector(f: SampledFunction | BandlimitedFunction,
                frame: ConformalFrame) -> SampledFunction:
    """K f = f - alpha <f, k> k, the projector onto the kernel's complement."""
    fun = f.fun if isinstance(f, BandlimitedFunction) else f
    coef = frame.alpha * inner(fun, frame.kernel)
    return SampledFunction(fun.grid, fun.values - coef * frame.kernel.values)


@dataclass
class CompressionOps:
    lam: OperatorMatrix        # compression of multiplication by omega
    lam_bar: OperatorMatrix    # compression of multiplication by conj(omega)

    @property
    def size(self) -> int:
        return self.lam.size


def lambda_ops(frame: ConformalFrame) -> CompressionOps:
    """Assemble the band compressions of omega- and conj(omega)-multiplication.

    Both are built from their own lattice kernels (not one as the adjoint of
    the other); at p = 2 adjointness is then a checkable property rather than
    a definition.
    """
    a, p, grid = frame.a, frame.p, frame.grid
    window = -grid.start

    def apply_omega(v):
        return project_band(lattice_omega_apply(v.fun), a, p)

    def apply_omega_bar(v):
        return project_band(lattice_omega_apply(v.fun, conjugate=True), a, p)

    lam = assemble_matrix(apply_omega, a, p, window, grid)
    lam_bar = assemble_matrix(apply_omega_bar, a, p, window, grid)
    return CompressionOps(lam, lam_bar)


def defect_identity_residual(ops: CompressionOps, frame: ConformalFrame) -> float:
    """|| (I - LambdaBar Lambda) - alpha k (x) k ||_2 in the basis coordinates."""
    n = ops.size
    defect = np.eye(n, dtype=complex) - ops.lam_bar.entries @ ops.lam.entries
    kc = frame.kernel_coeffs
    return float(np.linalg.norm(defect - frame.alpha * np.outer(kc, np.conj(kc)), 2))


def _check_frame_matrix(T: OperatorMatrix, frame: ConformalFrame):
    if T.size != frame.basis.size:
        raise ValueError(f"operator is on a {T.size}-vector basis, but the frame "
                         f"uses {frame.basis.size}; assemble it at window "
                         f"{-frame.grid.start}")


def _k_project_coeffs(vecs: np.ndarray, frame: ConformalFrame) -> np.ndarray:
    kc = frame.kernel_coeffs
    scale = frame.alpha  # alpha * ||kc||^2 = 1 on the lattice
    return vecs - scale * np.outer(kc, np.conj(kc) @ vecs)


def commutator_test(T: OperatorMatrix, frame: ConformalFrame,
                    n_test: int = 8, seed: int = 42) -> dict:
    """Toeplitz characterization: <T f, g> = <T(omega f), omega g> on Ran K.

    Seeded random coefficient vectors are K-projected on both sides; for such
    vectors the lattice omega-multiplication coincides with Lambda, so the
    right pairing is (Lambda g)^H T (Lambda f).  deviation is the largest
    normalized mismatch; is_toeplitz flags deviation <= 1e-6.
    """
    _check_frame_matrix(T, frame)
    n = T.size
    tnorm = float(np.linalg.norm(T.entries, 2))
    if tnorm == 0.0:
        return {"is_toeplitz": True, "deviation": 0.0}
    rng = np.random.default_rng(seed)
    fs = _k_project_coeffs(rng.standard_normal((n, n_test))
                           + 1j * rng.standard_normal((n, n_test)), frame)
    gs = _k_project_coeffs(rng.standard_normal((n, n_test))
                           + 1j * rng.standard_normal((n, n_test)), frame)
    lam = _frame_ops(frame).lam.entries
    plain = np.conj(gs).T @ (T.entries @ fs)
    moved = np.conj(lam @ gs).T @ (T.entries @ (lam @ fs))
    scale = tnorm * np.outer(np.linalg.norm(gs, axis=0), np.linalg.norm(fs, axis=0))
    deviation = float(np.max(np.abs(plain - moved) / scale))
    return {"is_toeplitz": deviation <= 1e-6, "deviation": deviation}


_OPS_CACHE: dict = {}


def _frame_ops(frame: ConformalFrame) -> CompressionOps:
    key = (frame.a, frame.p, frame.grid.start, frame.grid.step, frame.grid.count)
    if key not in _OPS_CACHE:
        _OPS_CACHE[key] = lambda_ops(frame)
    return _OPS_CACHE[key]


def series_reconstruct(T: OperatorMatrix, N: int, frame: ConformalFrame) -> OperatorMatrix:
    """Partial sum sum_{n=0}^{N} LambdaBar^n (T - LambdaBar T Lambda) Lambda^n.

    Computed by the exact recursion S <- C + LambdaBar S Lambda, which
    telescopes to T - LambdaBar^(N+1) T Lambda^(N+1): the reconstruction error
    is precisely the operator mass not yet drained through the compression.
    """
    _check_frame_matrix(T, frame)
    ops = _frame_ops(frame)
    lam, lam_bar = ops.lam.entries, ops.lam_bar.entries
    C = T.entries - lam_bar @ T.entries @ lam
    S = C.copy()
    for _ in range(N):
        S = C + lam_bar @ S @ lam
    return OperatorMatrix(S, T.a, T.p, T.window, T.nodes)


def series_residual(T: OperatorMatrix, S: OperatorMatrix,
                    frame: ConformalFrame, radius: float | None = None) -> float:
    """Relative reconstruction error on the drain-certified sub-basis.

    Lambda^n pushes mass outward by roughly sqrt(n/(2 pi a)) nodes, so only
    basis vectors well inside that horizon have drained by step N; the
    certificate reads the operator restricted to nodes |t_k| <= radius
    (default sqrt(64/(2 pi a))/3, the horizon of the reference step count).
    """
    if radius is None:
        radius = math.sqrt(64.0 / (2.0 * np.pi * frame.a)) / 3.0
    sel = np.abs(T.nodes) <= radius
    if not np.any(sel):
        raise ValueError("certification radius excludes every basis vector")
    block = np.ix_(sel, sel)
    denom = float(np.linalg.norm(T.entries[block], 2))
    if denom == 0.0:
        return float(np.linalg.norm(S.entries[block], 2))
    return float(np.linalg.norm(S.entries[block] - T.entries[block], 2)) / denom


@dataclass
class RecoveredSymbol:
    phi_bar_part: SampledFunction   # anti-analytic-type summand
    psi_part: SampledFunction       # analytic-type summand

    @property
    def total(self) -> SampledFunction:
        return SampledFunction(self.phi_bar_part.grid,
                               self.phi_bar_part.values + self.psi_part.values)


def recover_symbol(T: OperatorMatrix, frame: ConformalFrame) -> RecoveredSymbol:
    """Recover the two-sided symbol of a Toeplitz-certified operator at p = 2.

    With C = T - LambdaBar T Lambda and Q = C^H - alpha conj(<C k, k>) I, the
    two summands come from the kernel images:

        phi_bar_part = alpha conj(theta_a) C[k] / eta
        psi_part     = conj(alpha conj(theta_a) Q[k] / eta)

    (the involution f -> theta conj(f) undone in closed form).  The quotient
    alpha conj(theta_a)/eta equals (1 - theta(i)^2 conj(theta)^2) / k, and the
    division is evaluated in exactly that shape through the frame kernel: the
    defect calculus is rank-one on the frame's own kernel samples, so dividing
    by anything else (say the continuum closed form, which the discretized
    kernel tracks only to a few percent at this window) would leak the kernel
    discretization into the recovered symbol.  A guarded division protects any
    grid point where the kernel is negligibly small.
    """
    if frame.p != 2.0:
        raise ValueError("symbol recovery is supported at p = 2 only "
                         "(fractional branch powers enter otherwise)")
    _check_frame_matrix(T, frame)
    ops = _frame_ops(frame)
    lam, lam_bar = ops.lam.entries, ops.lam_bar.entries
    kc = frame.kernel_coeffs
    C = T.entries - lam_bar @ T.entries @ lam
    Ck = C @ kc
    mean = np.conj(kc) @ Ck   # <C k, k> in basis coordinates
    Q = np.conj(C).T - frame.alpha * np.conj(mean) * np.eye(T.size)
    Qk = Q @ kc

    grid = frame.grid
    x = grid.points
    theta_bar = np.exp(-2j * np.pi * frame.a * x)
    numer = 1.0 - np.exp(-4.0 * np.pi * frame.a) * theta_bar ** 2
    kv = frame.kernel.values
    guard = np.abs(kv) < 1e-12 * float(np.max(np.abs(kv)))
    safe_k = np.where(guard, 1.0, kv)

    def pull(vec: np.ndarray, conj_out: bool) -> SampledFunction:
        fun = frame.basis.synthesize(vec)
        vals = fun.values * numer / safe_k
        vals = np.where(guard, 0.0, vals)
        return SampledFunction(grid, np.conj(vals) if conj_out else vals)

    return RecoveredSymbol(pull(Ck, conj_out=False), pull(Qk, conj_out=True))


def recovery_roundtrip(T: OperatorMatrix, frame: ConformalFrame) -> float:
    """Relative norm error of reassembling T from its recovered symbol."""
    from .symbols import sampled_symbol
    from .toeplitz import toeplitz_matrix

    rec = recover_symbol(T, frame)
    T_rec = toeplitz_matrix(sampled_symbol(rec.total), frame.a, frame.p,
                            T.window, frame.grid)
    tnorm = float(np.linalg.norm(T.entries, 2))
    err = float(np.linalg.norm(T_rec.entries - T.entries, 2))
    return err / tnorm if tnorm > 0.0 else err
