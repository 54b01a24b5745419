"""Integrated error metrics between true and fitted curves.

Integrals use composite Gauss-Legendre quadrature.  Panel edges always
include any supplied breakpoints (typically the fitted spline's knots), so
piecewise-polynomial integrands are integrated exactly and partition
additivity holds to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyIntervalError, NonFiniteInputError
from .penalty import _gauss_legendre
from .smoother import FitModel

__all__ = ["TailRegions", "integrated_sse", "local_isse", "model_isse"]

_NODES_PER_PANEL = 10


@dataclass(frozen=True)
class TailRegions:
    """The two boundary subintervals used for local error reporting."""

    lower: tuple[float, float]
    upper: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.lower, self.upper
        for interval in (lo, hi):
            if not interval[0] < interval[1]:
                raise EmptyIntervalError(f"tail interval {interval} has nonpositive length")
        if lo[1] > hi[0]:
            raise EmptyIntervalError("tail intervals must not overlap")

    @classmethod
    def fraction(cls, a: float, b: float, frac: float = 0.1) -> "TailRegions":
        """Tails covering the first and last `frac` of [a, b]."""
        if not 0 < frac < 0.5:
            raise EmptyIntervalError("tail fraction must lie in (0, 0.5)")
        width = frac * (b - a)
        return cls(lower=(a, a + width), upper=(b - width, b))


def _panel_edges(lo, hi, quad_points, breakpoints):
    inner = np.asarray(breakpoints, dtype=float)
    inner = inner[(inner > lo) & (inner < hi)]
    edges = np.unique(np.concatenate([[lo, hi], inner]))
    # Uniform refinement until the node budget is met.
    n_panels = max(1, int(np.ceil(quad_points / _NODES_PER_PANEL)))
    while edges.size - 1 < n_panels:
        mids = 0.5 * (edges[:-1] + edges[1:])
        edges = np.unique(np.concatenate([edges, mids]))
    return edges


def integrated_sse(truth, fitted, interval, quad_points: int = 256, breakpoints=()) -> float:
    """Integral of the squared difference between two curve evaluators.

    truth and fitted are callables mapping a point array to values of shape
    (npts,) or (npts, n_curves); families are summed over curves.  Both must
    produce finite values on the interval.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise EmptyIntervalError(f"integration interval [{lo}, {hi}] has nonpositive length")
    if quad_points < 16:
        raise EmptyIntervalError("quad_points must be at least 16")
    edges = _panel_edges(lo, hi, quad_points, breakpoints)
    nodes, weights = _gauss_legendre(_NODES_PER_PANEL)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    pts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    diff = np.asarray(truth(pts), dtype=float) - np.asarray(fitted(pts), dtype=float)
    if not np.all(np.isfinite(diff)):
        raise NonFiniteInputError("curve evaluators returned non-finite values")
    if diff.ndim == 1:
        return float(np.dot(w, diff * diff))
    return float(np.einsum("i,ij->", w, diff * diff))


def local_isse(truth, fitted, tails: TailRegions, quad_points: int = 256,
               breakpoints=()) -> tuple[float, float]:
    """Integrated squared error restricted to the two tail regions."""
    lower = integrated_sse(truth, fitted, tails.lower, quad_points, breakpoints)
    upper = integrated_sse(truth, fitted, tails.upper, quad_points, breakpoints)
    return lower, upper


def model_isse(model: FitModel, truth, tails: TailRegions | None = None,
               quad_points: int = 256) -> dict:
    """Full and tail integrated errors of a fitted model against a truth evaluator.

    The model's interior knots are passed to the quadrature as breakpoints.
    Returns a dict with keys isse, isse_inf, isse_sup (the tail entries are
    None when no tails are given).
    """
    a, b = model.spec.domain
    knots = model.spec.interior_knots
    fitted = model.predict
    out = {"isse": integrated_sse(truth, fitted, (a, b), quad_points, knots)}
    if tails is None:
        out["isse_inf"] = None
        out["isse_sup"] = None
    else:
        inf, sup = local_isse(truth, fitted, tails, quad_points, knots)
        out["isse_inf"] = inf
        out["isse_sup"] = sup
    return out
