"""Exact 1D line solvers used by the alternating smoother.

Both solvers take a data signal f and one weight per neighbor link and
minimize

    sum_x (z_x - f_x)^2  +  sum_x w_x * pen(z_{x+1} - z_x)

with pen(t) = t^2 (``wls_1d``) or pen(t) = |t| (``wtv_1d``).  Weights of
zero decouple the signal into independent pieces; both solvers run in
O(n) time and are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import DimensionError, ParameterError, _as_float_array


@dataclass(frozen=True)
class Tridiagonal:
    """Bands of a tridiagonal matrix: diag (n), lower/upper (n-1)."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = _as_float_array(self.lower, "lower")
        diag = _as_float_array(self.diag, "diag")
        upper = _as_float_array(self.upper, "upper")
        n = diag.shape[0]
        if diag.ndim != 1 or n < 1:
            raise DimensionError("diag must be a 1-d array of length >= 1")
        if lower.shape != (max(n - 1, 0),) or upper.shape != (max(n - 1, 0),):
            raise DimensionError(
                f"off-diagonals must have length {n - 1}, got "
                f"{lower.shape[0]} and {upper.shape[0]}"
            )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)

    def matvec(self, z):
        z = np.asarray(z, dtype=np.float64)
        r = self.diag * z
        if z.shape[0] > 1:
            r[:-1] += self.upper * z[1:]
            r[1:] += self.lower * z[:-1]
        return r


def thomas_solve(m: Tridiagonal, rhs) -> np.ndarray:
    """Forward-elimination solve of m z = rhs.

    Intended for diagonally dominant systems; a vanishing pivot means the
    caller violated that contract and raises rather than returning junk.
    """
    rhs = _as_float_array(rhs, "rhs")
    if rhs.shape != m.diag.shape:
        raise DimensionError(
            f"rhs length {rhs.shape[0]} does not match diag length {m.diag.shape[0]}"
        )
    out = np.empty_like(rhs)
    status = _kernels.thomas_kernel(m.lower, m.diag, m.upper, rhs, out)
    if status != 0:
        raise ArithmeticError("zero pivot: system is not diagonally dominant")
    return out


def _check_line_args(f, w):
    f = _as_float_array(f, "f")
    w = _as_float_array(w, "w")
    if f.ndim != 1 or f.shape[0] < 1:
        raise DimensionError("f must be a 1-d array of length >= 1")
    if w.shape != (max(f.shape[0] - 1, 0),):
        raise DimensionError(
            f"w must have length {f.shape[0] - 1}, got {w.shape[0]}"
        )
    if w.size and np.min(w) < 0.0:
        raise ParameterError("link weights must be >= 0")
    return f, w


def wls_normal_system(f, w) -> tuple[Tridiagonal, np.ndarray]:
    """Normal equations of the quadratic line problem, in correction form.

    Returns (m, rhs) such that m @ (z - f) = rhs, where z is the
    minimizer.  Solving for the correction instead of z keeps constant
    signals and zero weights exact in floating point.
    """
    f, w = _check_line_args(f, w)
    n = f.shape[0]
    diag = np.ones(n, dtype=np.float64)
    if n > 1:
        diag[:-1] += w
        diag[1:] += w
    off = -w
    # negative objective gradient at z = f: each link pulls its endpoints
    # together in proportion to its weight
    pulls = w * np.diff(f)
    rhs = np.zeros(n, dtype=np.float64)
    if n > 1:
        rhs[:-1] += pulls
        rhs[1:] -= pulls
    return Tridiagonal(off, diag, off), rhs


def wls_1d(f, w) -> np.ndarray:
    """Quadratic-penalty line smoothing (normal equations, one sweep)."""
    f = _as_float_array(f, "f")
    m, rhs = wls_normal_system(f, w)
    return f + thomas_solve(m, rhs)


def wtv_1d(f, w) -> np.ndarray:
    """Absolute-penalty line smoothing (exact, via the taut string)."""
    f, w = _check_line_args(f, w)
    out = np.empty_like(f)
    _kernels.taut_line(f, 0.5 * w, out)
    return out


def wtv_dual_certificate(f, z) -> np.ndarray:
    """Per-link dual variables certifying a wtv_1d solution.

    Returns s of length n+1 with s_0 = 0.  At an exact minimizer of
    sum (z-f)^2 + sum w_x |z_{x+1}-z_x| the certificate satisfies

        s_n = 0,   |s_x| <= w_x,
        s_x = +w_x wherever z_{x+1} > z_x,
        s_x = -w_x wherever z_{x+1} < z_x,

    i.e. s collects the subgradient weights of the links, recovered from
    the residual by z_x = f_x + (s_x - s_{x-1}) / 2.
    """
    f = _as_float_array(f, "f")
    z = _as_float_array(z, "z")
    if f.shape != z.shape or f.ndim != 1:
        raise DimensionError("f and z must be 1-d arrays of equal length")
    s = np.empty(f.shape[0] + 1, dtype=np.float64)
    s[0] = 0.0
    np.cumsum(2.0 * (z - f), out=s[1:])
    return s
