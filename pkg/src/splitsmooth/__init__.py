"""Linear-time global edge-preserving image smoothing.

The smoother minimizes a global objective that trades fidelity to the
input against weighted penalties on neighbor differences, with weights
taken from a guidance image so strong edges survive.  Instead of one
large sparse solve, the 2D problem is split into exact 1D row and
column subproblems coupled by a growing penalty, which keeps every
iteration linear in the pixel count.

Entry points:

* :func:`smooth` — quadratic or absolute link penalty.
* :func:`firls` / :func:`firl1` — outer re-weighting loops for robust
  and sparsity-promoting penalties.
* :func:`compute_weights` — guidance gradients to link weights.
* :mod:`splitsmooth.reference` — independent slow oracles and metrics.
* ``splitsmooth`` CLI — smoothing, texture removal, color quantization.
"""

from .core import (
    DimensionError,
    EdgeWeights,
    ImageBuffer,
    ParameterError,
    SmootherConfig,
    SolverTrace,
    TraceEntry,
    compute_weights,
    energy,
    uniform_weights,
)
from .imgio import DecodeError, read_pnm, write_pnm
from .potentials import Abs, LogAbs, Potential, PowerP, Quadratic, Welsch
from .reweighted import firl1, firls
from .smoother import coupling_gap, smooth
from .solver1d import (
    Tridiagonal,
    thomas_solve,
    wls_1d,
    wls_normal_system,
    wtv_1d,
    wtv_dual_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "Abs",
    "DecodeError",
    "DimensionError",
    "EdgeWeights",
    "ImageBuffer",
    "LogAbs",
    "ParameterError",
    "Potential",
    "PowerP",
    "Quadratic",
    "SmootherConfig",
    "SolverTrace",
    "TraceEntry",
    "Tridiagonal",
    "Welsch",
    "compute_weights",
    "coupling_gap",
    "energy",
    "firl1",
    "firls",
    "read_pnm",
    "smooth",
    "thomas_solve",
    "uniform_weights",
    "wls_1d",
    "wls_normal_system",
    "write_pnm",
    "wtv_1d",
    "wtv_dual_certificate",
    "__version__",
]
