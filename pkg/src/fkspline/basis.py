"""Open B-spline bases on a closed interval.

The basis of order r (degree r - 1) over domain [a, b] with p strictly
increasing interior knots is built on the clamped knot vector that repeats
each boundary r times, giving n_basis = p + r functions.  Evaluation uses
the Cox-de Boor triangle vectorized over evaluation points; derivatives come
from the standard difference recurrence applied to a lower-order basis.

Conventions: the last span is right-closed, so evaluating at t = b returns
the limiting values and every row of a design matrix sums to one exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CoefficientLengthMismatchError,
    DerivativeOrderTooHighError,
    EmptyIntervalError,
    KnotOutOfDomainError,
    NonFiniteInputError,
    NonIncreasingKnotsError,
    OrderTooSmallError,
    PointOutOfDomainError,
)

__all__ = ["BasisSpec", "DesignMatrix", "make_basis_spec", "eval_design", "eval_spline"]


@dataclass(frozen=True)
class BasisSpec:
    """Immutable description of one spline basis.

    domain : (a, b) with a < b.
    order : spline order r >= 2 (cubic splines have r = 4).
    interior_knots : (p,) strictly increasing knots inside the open domain.
    """

    domain: tuple[float, float]
    order: int
    interior_knots: tuple[float, ...] = ()

    def __post_init__(self):
        a, b = float(self.domain[0]), float(self.domain[1])
        if not (np.isfinite(a) and np.isfinite(b)):
            raise NonFiniteInputError("domain endpoints must be finite")
        if not a < b:
            raise EmptyIntervalError(f"domain [{a}, {b}] has nonpositive length")
        if int(self.order) != self.order or self.order < 2:
            raise OrderTooSmallError(f"order must be an integer >= 2, got {self.order}")
        tau = np.asarray(self.interior_knots, dtype=float).reshape(-1)
        if tau.size and not np.all(np.isfinite(tau)):
            raise NonFiniteInputError("interior knots must be finite")
        if np.any(np.diff(tau) <= 0):
            raise NonIncreasingKnotsError("interior knots must be strictly increasing")
        if tau.size and (tau[0] <= a or tau[-1] >= b):
            raise KnotOutOfDomainError("interior knots must lie strictly inside the domain")
        r = int(self.order)
        object.__setattr__(self, "domain", (a, b))
        object.__setattr__(self, "order", r)
        object.__setattr__(self, "interior_knots", tuple(float(x) for x in tau))
        full = np.concatenate([np.full(r, a), tau, np.full(r, b)])
        full.setflags(write=False)
        object.__setattr__(self, "_full_arr", full)

    @property
    def full_knots(self) -> tuple[float, ...]:
        """Clamped knot vector with boundary multiplicity r."""
        return tuple(self._full_arr)

    @property
    def n_basis(self) -> int:
        return len(self.interior_knots) + self.order

    @property
    def span_edges(self) -> tuple[float, ...]:
        """Breakpoints a, tau_1, ..., tau_p, b of the nonempty spans."""
        a, b = self.domain
        return (a, *self.interior_knots, b)


def make_basis_spec(a, b, order, interior_knots=()) -> BasisSpec:
    """Validate and build a :class:`BasisSpec`."""
    return BasisSpec((float(a), float(b)), order, np.asarray(interior_knots, dtype=float))


@dataclass(frozen=True)
class DesignMatrix:
    """Dense design matrix of basis (derivative) values at sample points."""

    values: np.ndarray  # (h, n_basis)
    points: np.ndarray  # (h,)
    derivative: int
    spec: BasisSpec


def _find_spans(full_knots: np.ndarray, order: int, t: np.ndarray) -> np.ndarray:
    """Index mu of the nonempty span with T[mu] <= t < T[mu+1] (right-closed at b)."""
    spans = np.searchsorted(full_knots, t, side="right") - 1
    return np.clip(spans, order - 1, full_knots.size - order - 1)


def _deboor_columns(full_knots, k, t, spans):
    """Values of the k nonzero order-k basis functions at each point.

    Column i of the result is basis index spans - k + 1 + i.  Denominators
    in the triangle always span the nonempty interval containing t, so no
    zero guards are needed.
    """
    npts = t.size
    values = np.empty((npts, k))
    values[:, 0] = 1.0
    left = np.empty((npts, k))
    right = np.empty((npts, k))
    for j in range(1, k):
        left[:, j] = t - full_knots[spans + 1 - j]
        right[:, j] = full_knots[spans + j] - t
        saved = np.zeros(npts)
        for i in range(j):
            temp = values[:, i] / (right[:, i + 1] + left[:, j - i])
            values[:, i] = saved + right[:, i + 1] * temp
            saved = left[:, j - i] * temp
        values[:, j] = saved
    return values


def _dense_design(full_knots, k, t, spans):
    """Scatter the de Boor columns of the order-k basis into a dense matrix."""
    cols = _deboor_columns(full_knots, k, t, spans)
    dense = np.zeros((t.size, full_knots.size - k))
    idx = spans[:, None] + np.arange(1 - k, 1)[None, :]
    dense[np.arange(t.size)[:, None], idx] = cols
    return dense


def _check_points(spec: BasisSpec, t) -> np.ndarray:
    t = np.asarray(t, dtype=float).reshape(-1)
    if not np.all(np.isfinite(t)):
        raise NonFiniteInputError("evaluation points must be finite")
    a, b = spec.domain
    tol = 1e-12 * (b - a)
    if t.size and (t.min() < a - tol or t.max() > b + tol):
        raise PointOutOfDomainError(
            f"evaluation points must lie in [{a}, {b}]"
        )
    return np.clip(t, a, b)


def eval_design(spec: BasisSpec, t, derivative: int = 0) -> DesignMatrix:
    """Evaluate all basis functions (or a derivative) at the given points.

    Returns an (h, n_basis) matrix with at most r consecutive nonzeros per
    row.  For derivative = 0 rows sum to one; derivative order must satisfy
    0 <= derivative < order.
    """
    d = int(derivative)
    r = spec.order
    if d < 0 or d >= r:
        raise DerivativeOrderTooHighError(
            f"derivative order must satisfy 0 <= d < {r}, got {derivative}"
        )
    t = _check_points(spec, t)
    full = spec._full_arr
    spans = _find_spans(full, r, t)
    dense = _dense_design(full, r - d, t, spans)
    # Lift the order-(r-d) values through d difference steps; zero-length
    # spans at the clamped ends correspond to identically-zero functions,
    # their reciprocal is taken as zero.
    for step in range(d):
        k = r - d + step + 1
        w = full.size - k
        g1 = full[k - 1 : k - 1 + w] - full[:w]
        g2 = full[k : k + w] - full[1 : 1 + w]
        inv1 = np.where(g1 > 0, 1.0 / np.where(g1 > 0, g1, 1.0), 0.0)
        inv2 = np.where(g2 > 0, 1.0 / np.where(g2 > 0, g2, 1.0), 0.0)
        dense = (k - 1) * (dense[:, :w] * inv1 - dense[:, 1 : w + 1] * inv2)
    return DesignMatrix(values=dense, points=t, derivative=d, spec=spec)


def eval_spline(spec: BasisSpec, coeffs, t, derivative: int = 0) -> np.ndarray:
    """Evaluate one spline (or a family sharing the basis) at the given points.

    coeffs has shape (n_basis,) for a single curve or (n_basis, n) for a
    family; the result has shape (h,) or (h, n) accordingly.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[0] != spec.n_basis:
        raise CoefficientLengthMismatchError(
            f"expected {spec.n_basis} coefficients, got {coeffs.shape[0]}"
        )
    if not np.all(np.isfinite(coeffs)):
        raise NonFiniteInputError("coefficients must be finite")
    design = eval_design(spec, t, derivative)
    return design.values @ coeffs
