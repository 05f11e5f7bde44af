"""Most effective strategy on the budget line.

Eliminating ``gamma2 = (B - c1 gamma1) / c2`` leaves a scalar objective
over ``gamma1 in [0, B/c1]``.  Nothing guarantees it is unimodal, so the
search scans a uniform grid first and only then polishes the best grid
cell with golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from rumorcontain.dynamics import default_dt
from rumorcontain.errors import DomainError
from rumorcontain.objective import (
    Strategy,
    cost_effectiveness,
    effectiveness,
    effectiveness_many,
)

__all__ = ["StrategyResult", "solve_rc", "highest_cost_effectiveness", "DEFAULT_GRID_POINTS"]

DEFAULT_GRID_POINTS = 101
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class StrategyResult:
    best: Strategy
    eU: float
    eR: float
    eTotal: float
    costEffectiveness: float
    evaluations: int
    dt: float
    gridPoints: int
    refineTol: float
    gridProfile: list | None = field(default=None, compare=False)

    def to_json(self, profile=False):
        doc = {
            "gamma1": self.best.gamma1,
            "gamma2": self.best.gamma2,
            "eU": self.eU,
            "eR": self.eR,
            "eTotal": self.eTotal,
            "costEffectiveness": self.costEffectiveness,
            "dt": self.dt,
            "evaluations": self.evaluations,
            "gridPoints": self.gridPoints,
            "refineTol": self.refineTol,
        }
        if profile and self.gridProfile is not None:
            doc["gridProfile"] = [[g, v] for g, v in self.gridProfile]
        return doc


def default_refine_tol(instance):
    return 1e-6 * instance.max_gamma1


def _better(cand, incumbent):
    """Higher objective wins; equal objectives go to the smaller gamma1."""
    (g, v), (g0, v0) = cand, incumbent
    return v > v0 or (v == v0 and g < g0)


def solve_rc(instance, grid_points=DEFAULT_GRID_POINTS, refine_tol=None, dt=None):
    """Maximise effectiveness over the budget line of ``instance``.

    ``grid_points`` uniformly spaced values of ``gamma1`` (both ends included)
    are evaluated; golden-section search then runs on the two grid cells
    around the best grid point until the bracket is narrower than
    ``refine_tol`` (default ``1e-6 * B/c1``).  The returned numbers come from
    a fresh evaluation at the best point seen.
    """
    if int(grid_points) != grid_points or grid_points < 2:
        raise DomainError(f"grid_points must be an integer >= 2, got {grid_points!r}")
    grid_points = int(grid_points)
    dt = default_dt(instance.horizon) if dt is None else dt
    top = instance.max_gamma1
    if refine_tol is None:
        refine_tol = default_refine_tol(instance)

    if top == 0.0:
        report = effectiveness(instance, Strategy(0.0, 0.0), dt)
        return StrategyResult(Strategy(0.0, 0.0), report.eU, report.eR, report.eTotal,
                              report.costEffectiveness, 1, dt, grid_points, refine_tol,
                              [(0.0, report.eTotal)])
    if not (refine_tol > 0):
        raise DomainError(f"refine_tol must be positive, got {refine_tol!r}")

    grid = top * (np.arange(grid_points, dtype=np.float64) / (grid_points - 1))
    grid[-1] = top
    values = effectiveness_many(instance, grid, dt)[3]
    evaluations = grid_points
    # np.argmax returns the first maximiser, i.e. the smallest gamma1 among ties
    k = int(np.argmax(values))
    best = (float(grid[k]), float(values[k]))

    def f(g):
        nonlocal evaluations, best
        evaluations += 1
        v = float(effectiveness_many(instance, [g], dt)[3][0])
        if _better((g, v), best):
            best = (g, v)
        return v

    a = float(grid[max(k - 1, 0)])
    b = float(grid[min(k + 1, grid_points - 1)])
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > refine_tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)

    strategy = instance.strategy(best[0])
    report = effectiveness(instance, strategy, dt)
    evaluations += 1
    return StrategyResult(
        best=strategy,
        eU=report.eU,
        eR=report.eR,
        eTotal=report.eTotal,
        costEffectiveness=cost_effectiveness(instance, report.eTotal),
        evaluations=evaluations,
        dt=dt,
        gridPoints=grid_points,
        refineTol=refine_tol,
        gridProfile=[(float(g), float(v)) for g, v in zip(grid, values)],
    )


def highest_cost_effectiveness(instance, **kwargs):
    """Cost effectiveness of the optimal strategy, ``E(gamma*) / (B T)``."""
    return solve_rc(instance, **kwargs).costEffectiveness
