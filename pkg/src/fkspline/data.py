"""Container for discretely observed functional data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatchError, NonFiniteInputError, NonIncreasingKnotsError


@dataclass(frozen=True)
class FunctionalDataset:
    """A family of curves observed on one shared sample grid.

    t : (h,) strictly increasing sample points.
    values : (h, n) observation matrix, one column per curve.
    """

    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if values.shape[0] == 1 and t.size > 1:
            values = values.T
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)
        if t.ndim != 1 or t.size < 2:
            raise LengthMismatchError("need a 1-d grid with at least 2 points")
        if values.shape[0] != t.size:
            raise LengthMismatchError(
                f"grid has {t.size} points but values has {values.shape[0]} rows"
            )
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(values))):
            raise NonFiniteInputError("grid and observations must be finite")
        if np.any(np.diff(t) <= 0):
            raise NonIncreasingKnotsError("sample grid must be strictly increasing")

    @property
    def n_points(self) -> int:
        return self.t.size

    @property
    def n_curves(self) -> int:
        return self.values.shape[1]

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])
