"""Free-knot placement by unconstrained optimization of log gap ratios.

Interior knots are reparameterized by the log-ratio transform: component i
is the log of the ratio of consecutive knot gaps.  The transform is a
bijection between strictly increasing interior knot vectors and all of R^p,
so the knot search runs as plain unconstrained Gauss-Newton on the
variable-projection objective (the residual sum of squares of the penalized
fit at those knots, coefficients solved exactly).

Knots are added one at a time: each round scans a candidate grid, keeps the
already accepted knots, refines the best candidate, and either stops by a
GCV rule or continues to a fixed count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import BasisSpec, make_basis_spec
from .data import FunctionalDataset
from .errors import (
    AllCandidatesSingularError,
    ConfigError,
    FkSplineError,
    NonFiniteInputError,
    NonIncreasingKnotsError,
    NumericalError,
)
from .penalty import PenaltyConfig
from .smoother import FitModel, fit_coefficients

__all__ = [
    "JuppCoords",
    "KnotSearchConfig",
    "GaussNewtonResult",
    "StageRecord",
    "FreeKnotResult",
    "jupp",
    "jupp_inverse",
    "objective_f",
    "gauss_newton_refine",
    "add_knots_gradually",
    "fit_free_knot",
]


@dataclass(frozen=True)
class JuppCoords:
    """Unconstrained coordinates of an interior knot vector on [lo, hi]."""

    values: np.ndarray  # (p,) log gap ratios
    lo: float
    hi: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        object.__setattr__(self, "values", values)
        if not self.lo < self.hi:
            raise ConfigError(f"domain [{self.lo}, {self.hi}] has nonpositive length")
        if not np.all(np.isfinite(values)):
            raise NonFiniteInputError("log gap ratios must be finite")

    @property
    def p(self) -> int:
        return self.values.size


def jupp(knots, lo: float, hi: float) -> JuppCoords:
    """Map strictly increasing interior knots to log gap ratios.

    Component i is log((tau_{i+1} - tau_i) / (tau_i - tau_{i-1})) with the
    domain endpoints standing in for tau_0 and tau_{p+1}.
    """
    tau = np.asarray(knots, dtype=float).reshape(-1)
    if not np.all(np.isfinite(tau)):
        raise NonFiniteInputError("knots must be finite")
    full = np.concatenate([[lo], tau, [hi]])
    gaps = np.diff(full)
    if np.any(gaps <= 0):
        raise NonIncreasingKnotsError(
            "knots must be strictly increasing and strictly inside the domain"
        )
    return JuppCoords(values=np.diff(np.log(gaps)), lo=float(lo), hi=float(hi))


def jupp_inverse(coords: JuppCoords) -> np.ndarray:
    """Reconstruct the interior knots from log gap ratios.

    Stable for large components: gap weights are normalized through a
    shifted softmax, so the result is strictly increasing for any finite
    input that does not underflow the gap widths.
    """
    k = coords.values
    if k.size == 0:
        return np.empty(0)
    # log of gap i relative to gap 0 is the cumulative sum of k.
    logw = np.concatenate([[0.0], np.cumsum(k)])
    logw -= logw.max()
    w = np.exp(logw)
    cum = np.cumsum(w[:-1]) / w.sum()
    return coords.lo + (coords.hi - coords.lo) * cum


@dataclass(frozen=True)
class KnotSearchConfig:
    """Settings for the knot search driver and its Gauss-Newton refiner."""

    order: int = 4
    max_knots: int = 8
    grid_size: int = 50
    domain: tuple[float, float] | None = None
    # Gauss-Newton settings.  objective_tol is the relative-improvement
    # floor: a successful step gaining less than this fraction stops the
    # refinement, which also starves the slow knot-coalescence drift that
    # plain least squares rewards when data are noisy.
    max_iterations: int = 30
    step_tol: float = 1e-5
    objective_tol: float = 1e-4
    damping: float = 1e-3
    fd_step: float = 1e-6
    # stage selection
    fixed_p: bool = False
    gcv_rel_tol: float = 1e-3
    gcv_patience: int = 2

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 2:
            raise ConfigError("order must be an integer >= 2")
        if self.max_knots < 1:
            raise ConfigError("max_knots must be at least 1")
        if self.grid_size < 2:
            raise ConfigError("grid_size must be at least 2")
        if self.max_iterations < 1 or self.damping <= 0 or self.fd_step <= 0:
            raise ConfigError("invalid Gauss-Newton settings")
        if self.gcv_patience < 1 or not 0 < self.gcv_rel_tol < 1:
            raise ConfigError("invalid stage selection settings")


def _domain(dataset: FunctionalDataset, search: KnotSearchConfig) -> tuple[float, float]:
    if search.domain is not None:
        return float(search.domain[0]), float(search.domain[1])
    return dataset.domain


def _spec_for(coords: JuppCoords, order: int) -> BasisSpec:
    return make_basis_spec(coords.lo, coords.hi, order, jupp_inverse(coords))


def _fit_at(coords: JuppCoords, dataset, config, order) -> FitModel:
    return fit_coefficients(dataset, _spec_for(coords, order), config)


def objective_f(coords: JuppCoords, dataset: FunctionalDataset, config: PenaltyConfig,
                order: int = 4) -> float:
    """Residual sum of squares of the penalized fit at these knots.

    The coefficients are projected out exactly, so this equals the sse
    reported by the fit at the reconstructed knot vector.
    """
    return _fit_at(coords, dataset, config, order).diagnostics.sse


def _residual_vector(coords, dataset, config, order) -> np.ndarray:
    model = _fit_at(coords, dataset, config, order)
    fitted = model.predict(dataset.t)
    return (dataset.values - fitted).ravel()


@dataclass(frozen=True)
class GaussNewtonResult:
    """Refined coordinates plus convergence information."""

    coords: JuppCoords
    objective: float
    iterations: int
    converged: bool
    step_failure: bool = False  # no damped step improved the objective


def gauss_newton_refine(coords: JuppCoords, dataset: FunctionalDataset,
                        config: PenaltyConfig, search: KnotSearchConfig) -> GaussNewtonResult:
    """Damped Gauss-Newton descent on the knot objective.

    The Jacobian of the residual vector is taken by forward differences with
    per-component step fd_step * (1 + |k_i|).  The damping parameter grows
    tenfold when a step fails to decrease the objective and shrinks tenfold
    on success.  The best iterate seen is always returned, so the result
    never exceeds the starting objective.
    """
    k = coords.values.copy()
    lo, hi = coords.lo, coords.hi
    p = k.size
    if p == 0:
        f0 = objective_f(coords, dataset, config, search.order)
        return GaussNewtonResult(coords, f0, 0, True)
    min_gap = _knot_radius(lo, hi, search)
    r = _residual_vector(coords, dataset, config, search.order)
    f = float(r @ r)
    mu = search.damping
    iterations = 0
    converged = False
    step_failure = False
    for iterations in range(1, search.max_iterations + 1):
        jac = np.empty((r.size, p))
        for i in range(p):
            step = search.fd_step * (1.0 + abs(k[i]))
            # a perturbed point can be infeasible in floating point (knot
            # gaps underflow); fall back to a backward step, then to zero
            jac[:, i] = 0.0
            for signed in (step, -step):
                k_pert = k.copy()
                k_pert[i] += signed
                try:
                    r_pert = _residual_vector(JuppCoords(k_pert, lo, hi), dataset, config,
                                              search.order)
                except FkSplineError:
                    continue
                jac[:, i] = (r_pert - r) / signed
                break
        g = jac.T @ r
        jtj = jac.T @ jac
        if np.linalg.norm(g) <= 1e-14 * (1.0 + f):
            converged = True
            break
        improved = False
        for _ in range(12):
            try:
                delta = np.linalg.solve(jtj + mu * np.eye(p), -g)
            except np.linalg.LinAlgError:
                mu *= 10.0
                continue
            k_new = k + delta
            new_coords = JuppCoords(k_new, lo, hi)
            # knots drifting together chase noise through high-leverage
            # spans; such trial points are treated as infeasible
            tau_new = jupp_inverse(new_coords)
            if p >= 2 and float(np.diff(tau_new).min()) < min_gap:
                mu *= 10.0
                continue
            try:
                r_new = _residual_vector(new_coords, dataset, config, search.order)
            except FkSplineError:
                mu *= 10.0
                continue
            f_new = float(r_new @ r_new)
            if f_new < f:
                step_norm = float(np.max(np.abs(delta)))
                rel_drop = (f - f_new) / max(f, 1e-300)
                k, r, f = k_new, r_new, f_new
                mu = max(mu / 10.0, 1e-12)
                improved = True
                if step_norm < search.step_tol or rel_drop < search.objective_tol:
                    converged = True
                break
            mu *= 10.0
        if not improved:
            step_failure = True
            break
        if converged:
            break
    return GaussNewtonResult(
        coords=JuppCoords(k, lo, hi), objective=f, iterations=iterations,
        converged=converged, step_failure=step_failure,
    )


@dataclass(frozen=True)
class StageRecord:
    """One accepted stage of the gradual knot search."""

    p: int
    knots: np.ndarray
    coords: JuppCoords
    objective: float
    gcv: float
    df: float


@dataclass(eq=False)
class FreeKnotResult:
    """Outcome of the gradual knot addition search."""

    stages: list[StageRecord] = field(default_factory=list)
    chosen: StageRecord | None = None
    model: FitModel | None = None
    stopped_early: bool = False

    @property
    def p(self) -> int:
        return self.chosen.p

    @property
    def knots(self) -> np.ndarray:
        return self.chosen.knots

    @property
    def coords(self) -> JuppCoords:
        return self.chosen.coords

    @property
    def objective_trace(self) -> np.ndarray:
        return np.array([s.objective for s in self.stages])

    @property
    def gcv_trace(self) -> np.ndarray:
        return np.array([s.gcv for s in self.stages])


def _knot_radius(lo, hi, search) -> float:
    """Minimum spacing enforced between knots: a quarter of the mean
    inter-knot distance when the full knot budget is spread over the
    domain."""
    return (hi - lo) / (4.0 * search.max_knots)


def _candidate_grid(lo, hi, existing, search) -> np.ndarray:
    """Equally spaced interior candidates minus exclusion zones around knots."""
    grid = np.linspace(lo, hi, search.grid_size + 2)[1:-1]
    if existing.size == 0:
        return grid
    dist = np.abs(grid[:, None] - existing[None, :]).min(axis=1)
    return grid[dist > _knot_radius(lo, hi, search)]


def _stage_record(coords, dataset, config, order) -> tuple[StageRecord, FitModel]:
    model = _fit_at(coords, dataset, config, order)
    d = model.diagnostics
    record = StageRecord(
        p=coords.p, knots=jupp_inverse(coords), coords=coords,
        objective=d.sse, gcv=d.gcv, df=d.df,
    )
    return record, model


def add_knots_gradually(dataset: FunctionalDataset, config: PenaltyConfig,
                        search: KnotSearchConfig) -> FreeKnotResult:
    """Grow the interior knot vector one knot per round.

    Each round inserts every surviving grid candidate into the accepted
    knots, starts Gauss-Newton from the best insertion, and records the
    refined stage.  With fixed_p the final stage is selected; otherwise the
    search stops once the GCV score has failed to improve by gcv_rel_tol
    (relative) for gcv_patience consecutive rounds, and the best-GCV stage
    is selected.
    """
    lo, hi = _domain(dataset, search)
    order = search.order
    result = FreeKnotResult()
    coords = JuppCoords(np.empty(0), lo, hi)
    record, _ = _stage_record(coords, dataset, config, order)
    result.stages.append(record)
    best = record
    bad_streak = 0
    for _ in range(search.max_knots):
        existing = result.stages[-1].knots
        grid = _candidate_grid(lo, hi, existing, search)
        best_cand = None
        best_f = math.inf
        failures = 0
        for s in grid:
            tau = np.sort(np.append(existing, s))
            try:
                cand = jupp(tau, lo, hi)
                f = objective_f(cand, dataset, config, order)
            except (FkSplineError, np.linalg.LinAlgError):
                failures += 1
                continue
            if f < best_f:
                best_f = f
                best_cand = cand
        if best_cand is None:
            if failures:
                raise AllCandidatesSingularError(
                    f"all {failures} candidate knots failed at p={existing.size + 1}"
                )
            break  # grid exhausted by exclusion zones
        refined = gauss_newton_refine(best_cand, dataset, config, search)
        record, _ = _stage_record(refined.coords, dataset, config, order)
        result.stages.append(record)
        if record.gcv < best.gcv * (1.0 - search.gcv_rel_tol):
            best = record
            bad_streak = 0
        else:
            if record.gcv < best.gcv:
                best = record
            bad_streak += 1
            if not search.fixed_p and bad_streak >= search.gcv_patience:
                result.stopped_early = True
                break
    result.chosen = result.stages[-1] if search.fixed_p else best
    result.model = _fit_at(result.chosen.coords, dataset, config, order)
    result.model.knot_search = result
    return result


def fit_free_knot(dataset: FunctionalDataset, config: PenaltyConfig,
                  search: KnotSearchConfig) -> FitModel:
    """Run the knot search and return the fit at the selected knot vector."""
    return add_knots_gradually(dataset, config, search).model
