"""Frequency splitting of a symbol into left / central / right parts.

A fixed smooth partition psi_L + psi_C + psi_R = 1 on [-2, 2] (supports
[-4, -1/4], [-1/2, 1/2], [1/4, 4]) is dilated by the band radius and applied
to the symbol's spectrum.  The central part has spectrum inside [-a/2, a/2]
and is the piece whose symbol can be read back off the operator pointwise;
the side parts are handed to the Hankel machinery.

The L^1 norms of the inverse transforms of the dilated cutoffs control the
operator norms of the parts (Young's inequality); they are dilation
invariants and are computed here on a window where the smooth-cutoff tail is
negligible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import (Grid, SampledFunction, evaluate_offgrid, fft_spectrum,
                   inverse_spectrum, lp_norm, symmetric_grid)
from .pwspace import (band_residual, default_grid, holder_conjugate,
                      sinc_kernel, sinc_profile)
from .symbols import SymbolSpec, samples, sampled_symbol

BUMP_NAMES = ("L", "C", "R")

# Spectral supports of the three cutoffs in units of the band radius.
SUPPORTS = {"L": (-4.0, -0.25), "C": (-0.5, 0.5), "R": (0.25, 4.0)}


def _smooth_step(u: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, strictly rising between."""
    u = np.asarray(u, dtype=float)
    eu = np.where(u > 0.0, np.exp(-1.0 / np.where(u > 0.0, u, 1.0)), 0.0)
    ev = np.where(u < 1.0, np.exp(-1.0 / np.where(u < 1.0, 1.0 - u, 1.0)), 0.0)
    return eu / (eu + ev)


def _bump_vals(u: np.ndarray, which: str) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if which == "L":
        return _smooth_step((u + 4.0) / 2.0) * _smooth_step(-4.0 * u - 1.0)
    if which == "R":
        return _bump_vals(-u, "L")
    if which == "C":
        inside = (u >= -0.5) & (u <= 0.5)
        return np.where(inside, 1.0 - _bump_vals(u, "L") - _bump_vals(u, "R"),
                        0.0)
    raise ValueError(f"unknown bump {which!r}; expected one of {BUMP_NAMES}")


def bump(x: float, which: str) -> float:
    """Value at x of the reference cutoff psi_L, psi_C or psi_R (band = 1)."""
    return float(_bump_vals(np.asarray([x]), which)[0])


# L^1 norms of the inverse transforms: the cutoffs are supported in [-4a, 4a],
# so a frequency window of 32a holds them with room to spare, and the 1/64a
# frequency step puts the time samples on [-32/a, 32/a) where the smooth
# cutoffs' transforms have decayed far below 1e-6 of their peak.
_L1_WINDOW_MULT = 32.0
_L1_STEP_DIV = 64.0
_L1_COUNT = 4096


def bump_l1_norms(a: float = 1.0) -> dict:
    """L^1 norms of the inverse transforms of the dilated cutoffs.

    Dilation invariance is exact in exact arithmetic (the dilation rescales
    height by a and width by 1/a); the fixed a-proportional grid keeps the
    computed values stable across bands as well.
    """
    fgrid = Grid(-_L1_WINDOW_MULT * a, a / _L1_STEP_DIV, _L1_COUNT)
    out = {}
    for name in BUMP_NAMES:
        spec = SampledFunction(fgrid, _bump_vals(fgrid.points / a, name)
                               .astype(complex))
        out[name] = lp_norm(inverse_spectrum(spec), 1.0)
    return out


@dataclass
class SplitResult:
    part_l: SampledFunction
    part_c: SampledFunction
    part_r: SampledFunction
    l1_norms: dict
    band_certificates: dict
    a: float

    def part(self, which: str) -> SampledFunction:
        return {"L": self.part_l, "C": self.part_c, "R": self.part_r}[which]

    def part_symbol(self, which: str) -> SymbolSpec:
        lo, hi = SUPPORTS[which]
        return sampled_symbol(self.part(which), support=(lo * self.a,
                                                         hi * self.a))


def _support_residual(spec: SampledFunction, lo: float, hi: float) -> float:
    """Energy fraction of a spectrum outside [lo, hi] (half-open lattice
    bins; a one-bin slack absorbs the endpoint bins themselves)."""
    xi = spec.grid.points
    outside = (xi < lo - spec.grid.step) | (xi > hi + spec.grid.step)
    total = float(np.sum(np.abs(spec.values) ** 2))
    if total == 0.0:
        return 0.0
    return float(np.sum(np.abs(spec.values[outside]) ** 2)) / total


def split_symbol(sym: SymbolSpec, a: float, grid: Grid | None = None,
                 decay_tol: float = 1e-8) -> SplitResult:
    """Split a symbol into spectral parts via the dilated cutoff triple.

    The parts are exact lattice truncations: each part's spectrum is the
    symbol's spectrum times the dilated cutoff, so the three parts sum to the
    symbol exactly on the lattice bins where the cutoffs sum to one
    (|xi| <= 2a).  Residual spectrum beyond |xi| > 2a is the caller's to
    absorb; for fast-decaying symbols it is negligible and the operator sum
    identity holds to machine precision.
    """
    if grid is None:
        grid = default_grid(a)
    f = samples(sym, grid)
    spec = fft_spectrum(f)
    xi = spec.grid.points

    peak = float(np.max(np.abs(spec.values)))
    edge = np.abs(xi) >= 0.9 * grid.nyquist
    if peak > 0.0 and float(np.max(np.abs(spec.values[edge]))) > decay_tol * peak:
        warnings.warn("symbol spectrum decays slowly; split tolerances "
                      "degrade with the unresolved tail", stacklevel=2)

    parts = {}
    certs = {}
    for name in BUMP_NAMES:
        cut = _bump_vals(xi / a, name)
        part_spec = SampledFunction(spec.grid, spec.values * cut)
        lo, hi = SUPPORTS[name]
        certs[name] = _support_residual(part_spec, lo * a, hi * a)
        parts[name] = inverse_spectrum(part_spec, start=grid.start)
    return SplitResult(parts["L"], parts["C"], parts["R"],
                       bump_l1_norms(a), certs, a)


def jensen_certificate(sym: SymbolSpec, a: float, p: float,
                       window: float = 32.0, slack: float = 1e-3) -> dict:
    """Check ||T_X|| <= ||inverse-transform of cutoff||_1 * ||T|| per part.

    Norms are certified lower estimates on the edge-excluded interior block
    (the same estimator on both sides, so the comparison is fair at every p).
    Returns the per-part norms, the inequality flags, and the summed L^1
    constant, which is the operative value of the splitting constant.
    """
    from .toeplitz import operator_norm_certified, toeplitz_matrix

    result = split_symbol(sym, a)
    m_full = toeplitz_matrix(sym, a, p, window)
    norm_full = operator_norm_certified(m_full)["lower"]
    report = {"norm_full": norm_full, "parts": {}, "p": p, "a": a,
              "constant": sum(result.l1_norms.values())}
    for name in BUMP_NAMES:
        m_part = toeplitz_matrix(result.part_symbol(name), a, p, window)
        norm_part = operator_norm_certified(m_part)["lower"]
        bound = result.l1_norms[name] * norm_full * (1.0 + slack)
        report["parts"][name] = {
            "norm": norm_part,
            "l1": result.l1_norms[name],
            "bound": bound,
            "ok": bool(norm_part <= bound),
        }
    report["ok"] = all(v["ok"] for v in report["parts"].values())
    return report


def central_recover(apply_fn, a: float, x: float,
                    grid: Grid | None = None) -> complex:
    """Read the central symbol at x off the operator itself.

    Feeds the operator a narrow-band sinc centered at x (bandwidth a/8, so
    the product of symbol spectrum and test spectrum stays inside the band)
    and evaluates the output at x; dividing by the sinc's height at its
    center (2*eps) returns phi_C(x).
    """
    if grid is None:
        grid = default_grid(a)
    eps = a / 8.0
    test = sinc_kernel(eps, x, grid)
    out = apply_fn(test)
    fun = out if isinstance(out, SampledFunction) else out.fun
    return complex(evaluate_offgrid(fun, x)) / (2.0 * eps)


def central_recover_sweep(apply_fn, a: float, xs,
                          grid: Grid | None = None) -> np.ndarray:
    return np.asarray([central_recover(apply_fn, a, float(x), grid)
                       for x in xs])


# Dedicated grid for the sinc L^p norms: |sinc|^p has corners at the zeros,
# so the quadrature needs a fine step, and the p -> 1 tail (~t^-p) needs a
# wide window.
_NORM_GRID = symmetric_grid(512.0, 1.0 / 64.0)


def sinc_norm_constant(p: float) -> dict:
    """Product ||sinc_1||_q * ||sinc_{1/8}||_p and its stated upper bound.

    The bound (4/pi)(p + 1/(p-1)) controls the growth of the recovery
    constant as p approaches 1 or infinity.
    """
    if not (1.0 < p < np.inf):
        raise ValueError("p must lie in (1, inf)")
    q = holder_conjugate(p)
    s1 = SampledFunction(_NORM_GRID,
                         sinc_profile(1.0, _NORM_GRID.points).astype(complex))
    s8 = SampledFunction(_NORM_GRID,
                         sinc_profile(0.125, _NORM_GRID.points).astype(complex))
    product = lp_norm(s1, q) * lp_norm(s8, p)
    bound = (4.0 / np.pi) * (p + 1.0 / (p - 1.0))
    if product > bound:
        raise AssertionError(f"norm product {product} exceeds bound {bound}")
    return {"product": product, "bound": bound}
