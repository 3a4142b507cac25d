"""Penalty functions applied to gradient magnitudes.

Each potential knows its value and the two surrogate weights the
re-weighting drivers need: ``irls_ratio`` is the quadratic majorizer
slope psi'(t) / (2 t) with its analytic limit at t = 0, and
``irl1_weight`` is the magnitude of the subgradient of psi(|t|).
Both operate elementwise on arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .core import ParameterError

# cap for irl1 weights of potentials whose derivative blows up at 0
IRL1_WEIGHT_CAP = 1.0e4


class Potential:
    """Interface; concrete potentials override the three mappings."""

    #: quadratic surrogate is usable (irls_ratio finite at 0)
    supports_irls = False
    #: absolute-value surrogate is usable (concave in |t|)
    supports_irl1 = False

    def value(self, t):
        raise NotImplementedError

    def irls_ratio(self, t):
        raise NotImplementedError

    def irl1_weight(self, t):
        raise NotImplementedError


class Quadratic(Potential):
    """psi(t) = t^2, the weighted least-squares prior."""

    supports_irls = True
    supports_irl1 = False

    def value(self, t):
        t = np.asarray(t, dtype=np.float64)
        return t * t

    def irls_ratio(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.ones_like(t)

    def irl1_weight(self, t):
        t = np.asarray(t, dtype=np.float64)
        return 2.0 * np.abs(t)


class Abs(Potential):
    """psi(t) = |t|, the weighted total-variation prior."""

    supports_irls = False
    supports_irl1 = True

    def value(self, t):
        return np.abs(np.asarray(t, dtype=np.float64))

    def irls_ratio(self, t):
        t = np.abs(np.asarray(t, dtype=np.float64))
        with np.errstate(divide="ignore"):
            return np.where(t > 0.0, 0.5 / t, np.inf)

    def irl1_weight(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.ones_like(t)


class Welsch(Potential):
    """psi(t) = sigma * (1 - exp(-t^2 / sigma)); saturates at sigma."""

    supports_irls = True
    supports_irl1 = False

    def __init__(self, sigma: float):
        if not (math.isfinite(sigma) and sigma > 0.0):
            raise ParameterError(f"sigma must be finite and > 0, got {sigma}")
        self.sigma = float(sigma)

    def value(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.sigma * (-np.expm1(-(t * t) / self.sigma))

    def irls_ratio(self, t):
        # psi'(t) / (2t) = exp(-t^2 / sigma); already 1 at t = 0
        t = np.asarray(t, dtype=np.float64)
        return np.exp(-(t * t) / self.sigma)

    def irl1_weight(self, t):
        t = np.asarray(t, dtype=np.float64)
        return 2.0 * np.abs(t) * np.exp(-(t * t) / self.sigma)


class LogAbs(Potential):
    """psi(t) = log(1 + |t|), concave in |t|."""

    supports_irls = False
    supports_irl1 = True

    def value(self, t):
        return np.log1p(np.abs(np.asarray(t, dtype=np.float64)))

    def irls_ratio(self, t):
        t = np.abs(np.asarray(t, dtype=np.float64))
        with np.errstate(divide="ignore"):
            return np.where(t > 0.0, 0.5 / (t * (1.0 + t)), np.inf)

    def irl1_weight(self, t):
        t = np.asarray(t, dtype=np.float64)
        return 1.0 / (1.0 + np.abs(t))


class PowerP(Potential):
    """psi(t) = |t|^p with 0 < p < 1.

    The irl1 weight p |t|^(p-1) is unbounded at 0 and gets capped at
    IRL1_WEIGHT_CAP so downstream 1D solves stay well posed.
    """

    supports_irls = False
    supports_irl1 = True

    def __init__(self, p: float):
        if not (math.isfinite(p) and 0.0 < p < 1.0):
            raise ParameterError(f"p must lie in (0, 1), got {p}")
        self.p = float(p)

    def value(self, t):
        return np.abs(np.asarray(t, dtype=np.float64)) ** self.p

    def irls_ratio(self, t):
        t = np.abs(np.asarray(t, dtype=np.float64))
        with np.errstate(divide="ignore"):
            return np.where(t > 0.0, 0.5 * self.p * t ** (self.p - 2.0), np.inf)

    def irl1_weight(self, t):
        t = np.abs(np.asarray(t, dtype=np.float64))
        with np.errstate(divide="ignore"):
            raw = np.where(t > 0.0, self.p * t ** (self.p - 1.0), np.inf)
        return np.minimum(raw, IRL1_WEIGHT_CAP)
