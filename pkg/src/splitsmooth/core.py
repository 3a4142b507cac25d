"""Core value types and grid operations shared by the solvers.

Images are planar float64 arrays of shape (channels, height, width).
Edge weights live on the forward-difference links of the pixel grid:
``w1[y, x]`` weights the horizontal link between (x, y) and (x+1, y),
``w2[y, x]`` the vertical link between (x, y) and (x, y+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class ParameterError(ValueError):
    """A scalar parameter or weight map is outside its admissible range."""


class DimensionError(ValueError):
    """Array shapes do not agree with each other or with the grid."""


def _as_float_array(a, name):
    arr = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class ImageBuffer:
    """Immutable planar image, 1 or 3 channels, float64 samples.

    The constructor copies its input and marks the copy read-only, so a
    buffer can be shared between threads without defensive copies.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = _as_float_array(self.data, "image")
        if arr.ndim == 2:
            arr = arr[np.newaxis, :, :]
        if arr.ndim != 3:
            raise DimensionError(f"image must be 2-d or 3-d, got ndim={arr.ndim}")
        if arr.shape[0] not in (1, 3):
            raise DimensionError(f"image must have 1 or 3 channels, got {arr.shape[0]}")
        if arr.shape[1] < 1 or arr.shape[2] < 1:
            raise DimensionError(f"image must be at least 1x1, got shape {arr.shape}")
        arr = np.ascontiguousarray(arr).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @classmethod
    def gray(cls, samples) -> "ImageBuffer":
        """Build a single-channel buffer from a (height, width) array."""
        a = np.asarray(samples, dtype=np.float64)
        if a.ndim != 2:
            raise DimensionError(f"gray() expects a 2-d array, got ndim={a.ndim}")
        return cls(a)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    def plane(self, c: int) -> np.ndarray:
        """Read-only view of one channel."""
        return self.data[c]


@dataclass(frozen=True)
class EdgeWeights:
    """Per-link guidance weights in (0, 1].

    ``w1`` has shape (height, width-1) and ``w2`` shape (height-1, width);
    either may be empty when the image is one pixel wide or tall.
    """

    w1: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        w1 = _as_float_array(self.w1, "w1")
        w2 = _as_float_array(self.w2, "w2")
        if w1.ndim != 2 or w2.ndim != 2:
            raise DimensionError("edge weights must be 2-d arrays")
        h1, h2 = w1.shape[0], w2.shape[0] + 1
        wd1, wd2 = w1.shape[1] + 1, w2.shape[1]
        # both planes must describe the same (height, width) grid, except
        # that a degenerate axis leaves one plane empty and unconstrained
        if w1.size and w2.size and (h1, wd1) != (h2, wd2):
            raise DimensionError(
                f"inconsistent weight shapes {w1.shape} / {w2.shape}"
            )
        for name, w in (("w1", w1), ("w2", w2)):
            if w.size and (np.min(w) <= 0.0 or np.max(w) > 1.0):
                raise ParameterError(f"{name} entries must lie in (0, 1]")
        w1 = np.ascontiguousarray(w1)
        w2 = np.ascontiguousarray(w2)
        w1.flags.writeable = False
        w2.flags.writeable = False
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)


@dataclass(frozen=True)
class SmootherConfig:
    """Solver parameters.

    lam          global smoothing strength (0 disables the prior entirely)
    kappa        guidance sensitivity used by compute_weights
    alpha        growth factor of the coupling penalty, > 1
    beta1        initial coupling penalty, > 0
    inner_iters  alternating row/column sweeps per solve (T)
    outer_iters  re-weighting steps for the non-convex drivers (K)
    prior        "wls" for quadratic links, "wtv" for absolute-value links
    """

    lam: float = 400.0
    kappa: float = 7.65
    alpha: float = 4.0
    beta1: float = 1.0
    inner_iters: int = 5
    outer_iters: int = 5
    prior: str = "wls"

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise ParameterError(f"lam must be finite and >= 0, got {self.lam}")
        if not (math.isfinite(self.kappa) and self.kappa > 0.0):
            raise ParameterError(f"kappa must be finite and > 0, got {self.kappa}")
        if not (math.isfinite(self.alpha) and self.alpha > 1.0):
            raise ParameterError(f"alpha must be finite and > 1, got {self.alpha}")
        if not (math.isfinite(self.beta1) and self.beta1 > 0.0):
            raise ParameterError(f"beta1 must be finite and > 0, got {self.beta1}")
        if int(self.inner_iters) != self.inner_iters or self.inner_iters < 1:
            raise ParameterError(f"inner_iters must be a positive integer")
        if int(self.outer_iters) != self.outer_iters or self.outer_iters < 1:
            raise ParameterError(f"outer_iters must be a positive integer")
        if self.prior not in ("wls", "wtv"):
            raise ParameterError(f"prior must be 'wls' or 'wtv', got {self.prior!r}")


@dataclass(frozen=True)
class TraceEntry:
    """State recorded after one completed iteration."""

    iteration: int
    energy: float
    gap: float
    seconds: float

    def __post_init__(self):
        if not math.isfinite(self.energy):
            raise ParameterError("trace energy must be finite")
        if not math.isfinite(self.gap) or self.gap < 0.0:
            raise ParameterError("trace gap must be finite and >= 0")


@dataclass
class SolverTrace:
    """Per-iteration objective, coupling gap and wall time of one solve."""

    entries: list[TraceEntry] = field(default_factory=list)

    def append(self, iteration, energy, gap, seconds):
        self.entries.append(TraceEntry(iteration, float(energy), float(gap), float(seconds)))

    def __len__(self):
        return len(self.entries)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e.energy for e in self.entries], dtype=np.float64)

    @property
    def gaps(self) -> np.ndarray:
        return np.array([e.gap for e in self.entries], dtype=np.float64)


def uniform_weights(width: int, height: int) -> EdgeWeights:
    """All-ones weights for a width x height grid (no guidance)."""
    if width < 1 or height < 1:
        raise DimensionError(f"grid must be at least 1x1, got {width}x{height}")
    return EdgeWeights(
        np.ones((height, width - 1)), np.ones((height - 1, width))
    )


def compute_weights(g: ImageBuffer, kappa: float) -> EdgeWeights:
    """Guidance weights exp(-d^2 / kappa) on every grid link.

    d^2 is the squared forward difference of the guidance image; for a
    3-channel guidance it is the mean of the per-channel squared
    differences, so weights stay in (0, 1] regardless of channel count.
    """
    if not (math.isfinite(kappa) and kappa > 0.0):
        raise ParameterError(f"kappa must be finite and > 0, got {kappa}")
    d1 = np.diff(g.data, axis=2)
    d2 = np.diff(g.data, axis=1)
    sq1 = np.mean(d1 * d1, axis=0)
    sq2 = np.mean(d2 * d2, axis=0)
    # exp underflows to 0 for very strong edges; keep weights strictly
    # positive by flooring at the smallest normal double
    tiny = np.finfo(np.float64).tiny
    return EdgeWeights(
        np.maximum(np.exp(-sq1 / kappa), tiny),
        np.maximum(np.exp(-sq2 / kappa), tiny),
    )


def weight_planes(w, height, width):
    """Normalize a weight argument to two raw (w1, w2) arrays.

    Accepts an EdgeWeights or a plain (w1, w2) pair; the pair form admits
    any non-negative values and is what the re-weighting drivers use for
    their intermediate weight maps.
    """
    if isinstance(w, EdgeWeights):
        w1, w2 = w.w1, w.w2
    else:
        try:
            w1, w2 = w
        except (TypeError, ValueError):
            raise ParameterError("weights must be EdgeWeights or a (w1, w2) pair")
        w1 = _as_float_array(w1, "w1")
        w2 = _as_float_array(w2, "w2")
        if (w1.size and np.min(w1) < 0.0) or (w2.size and np.min(w2) < 0.0):
            raise ParameterError("weight entries must be >= 0")
    if w1.shape != (height, max(width - 1, 0)) or w2.shape != (max(height - 1, 0), width):
        raise DimensionError(
            f"weight shapes {w1.shape} / {w2.shape} do not fit a "
            f"{height}x{width} grid"
        )
    return w1, w2


def energy_arrays(u, f, w1, w2, lam, pot) -> float:
    """Objective on raw planar arrays; see energy() for the contract."""
    res = float(np.sum((u - f) ** 2))
    if lam == 0.0:
        return res
    prior = 0.0
    d1 = np.diff(u, axis=2)
    d2 = np.diff(u, axis=1)
    for c in range(u.shape[0]):
        if w1.size:
            prior += float(np.sum(w1 * pot.value(d1[c])))
        if w2.size:
            prior += float(np.sum(w2 * pot.value(d2[c])))
    return res + lam * prior


def energy(u: ImageBuffer, f: ImageBuffer, w, lam: float, pot) -> float:
    """Smoothing objective: sum (u-f)^2 + lam * sum_links w * pot(step).

    Channels share the link weights and their contributions are summed.
    """
    if u.data.shape != f.data.shape:
        raise DimensionError(
            f"image shapes differ: {u.data.shape} vs {f.data.shape}"
        )
    if not (math.isfinite(lam) and lam >= 0.0):
        raise ParameterError(f"lam must be finite and >= 0, got {lam}")
    w1, w2 = weight_planes(w, u.height, u.width)
    return energy_arrays(u.data, f.data, w1, w2, lam, pot)
