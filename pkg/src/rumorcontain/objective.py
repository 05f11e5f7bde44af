"""Effectiveness and cost effectiveness of a fixed truth-spreading strategy.

A strategy ``(gamma1, gamma2)`` costs ``c1*gamma1 + c2*gamma2`` per unit time
and must spend exactly the budget ``B``.  Its effectiveness is the expected
number of conversions to the truth over ``[0, T]``::

    E_U = gamma1 * int_0^T sum_i U_i tau_i dt      (uncertain -> truth)
    E_R = gamma2 * int_0^T sum_i R_i tau_i dt      (rumor -> truth)
    E   = E_U + E_R,     cost effectiveness = E / (B T)
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from rumorcontain.dynamics import ExpectedState, default_dt, integrate_final
from rumorcontain.errors import DomainError
from rumorcontain.graphs import DirectedGraph, graph_to_json

__all__ = [
    "Strategy",
    "RCInstance",
    "EffectivenessReport",
    "gamma2_of",
    "effectiveness",
    "effectiveness_many",
    "instance_to_json",
    "BUDGET_RTOL",
]

BUDGET_RTOL = 1e-12


@dataclass(frozen=True)
class Strategy:
    gamma1: float
    gamma2: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and nonnegative, got {v!r}")


@dataclass(frozen=True)
class RCInstance:
    """One rumor-containment problem: networks, uncontrollable rates, horizon, costs, start state.

    ``budget`` may be 0, which leaves the single admissible strategy ``(0, 0)``.
    """

    gR: DirectedGraph
    gT: DirectedGraph
    beta1: float
    beta2: float
    delta: float
    horizon: float
    budget: float
    c1: float
    c2: float
    init: ExpectedState

    def __post_init__(self):
        n = self.init.n
        if self.gR.n != n or self.gT.n != n:
            raise DomainError(
                f"networks have {self.gR.n} and {self.gT.n} nodes but the initial state has {n}")
        for name in ("beta1", "beta2", "delta", "budget"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and nonnegative, got {v!r}")
        for name in ("horizon", "c1", "c2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be finite and positive, got {v!r}")

    @property
    def n(self):
        return self.init.n

    @property
    def max_gamma1(self):
        return self.budget / self.c1

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def on_budget_line(self, strategy):
        spent = self.c1 * strategy.gamma1 + self.c2 * strategy.gamma2
        return abs(spent - self.budget) <= BUDGET_RTOL * max(self.budget, 1.0)

    def strategy(self, gamma1):
        """The admissible strategy with first truth-spreading rate ``gamma1``."""
        return Strategy(float(gamma1), gamma2_of(self, gamma1))


@dataclass(frozen=True)
class EffectivenessReport:
    gamma1: float
    gamma2: float
    eU: float
    eR: float
    eTotal: float
    costEffectiveness: float
    dt: float

    def to_json(self):
        return dataclasses.asdict(self)


def gamma2_of(instance, gamma1):
    """Second truth-spreading rate that exhausts the budget given ``gamma1``."""
    top = instance.max_gamma1
    slack = BUDGET_RTOL * max(top, 1.0)
    if not (math.isfinite(gamma1) and -slack <= gamma1 <= top + slack):
        raise DomainError(f"gamma1 must lie in [0, {top!r}], got {gamma1!r}")
    return max(0.0, (instance.budget - instance.c1 * gamma1) / instance.c2)


def cost_effectiveness(instance, e_total):
    denom = instance.budget * instance.horizon
    # zero budget admits only the null strategy, whose effectiveness is zero
    return e_total / denom if denom > 0 else 0.0


def effectiveness_many(instance, gamma1s, dt=None):
    """Evaluate the reduced objective at several ``gamma1`` values in one pass.

    Returns ``(gamma2s, eU, eR, eTotal)`` arrays.
    """
    g1 = np.asarray(gamma1s, dtype=np.float64).reshape(-1)
    g2 = np.array([gamma2_of(instance, g) for g in g1], dtype=np.float64)
    return (g2, *_evaluate(instance, g1, g2, dt))


def _evaluate(instance, g1, g2, dt):
    _, _, accU, accR = integrate_final(
        instance.init, instance.beta1, instance.beta2, instance.delta, g1, g2,
        instance.gR, instance.gT, instance.horizon, dt)
    eU = g1 * accU
    eR = g2 * accR
    return eU, eR, eU + eR


def effectiveness(instance, strategy, dt=None, check_budget=True):
    """Effectiveness report of ``strategy`` on ``instance``.

    The strategy must satisfy the budget identity unless ``check_budget`` is
    false (pure simulation of an arbitrary strategy).
    """
    if check_budget and not instance.on_budget_line(strategy):
        raise DomainError(
            f"strategy {strategy} violates c1*gamma1 + c2*gamma2 = {instance.budget!r}")
    dt = default_dt(instance.horizon) if dt is None else dt
    eU, eR, eT = _evaluate(instance, np.array([strategy.gamma1]), np.array([strategy.gamma2]), dt)
    e_total = float(eT[0])
    return EffectivenessReport(
        gamma1=strategy.gamma1,
        gamma2=strategy.gamma2,
        eU=float(eU[0]),
        eR=float(eR[0]),
        eTotal=e_total,
        costEffectiveness=cost_effectiveness(instance, e_total),
        dt=dt,
    )


def instance_to_json(instance):
    return {
        "rumor_network": graph_to_json(instance.gR),
        "truth_network": graph_to_json(instance.gT),
        "beta1": instance.beta1,
        "beta2": instance.beta2,
        "delta": instance.delta,
        "horizon": instance.horizon,
        "budget": instance.budget,
        "c1": instance.c1,
        "c2": instance.c2,
        "initial_state": {"R": instance.init.R.tolist(), "T": instance.init.T.tolist()},
    }
