"""Batch solves and one-parameter sweeps, including the published experiment tables.

Experiments 1 and 2 solve fixed lists of instances.  Experiments 3 to 9 each
sweep one parameter (``beta1``, ``beta2``, ``delta``, ``horizon``,
``budget``, ``c1``, ``c2``) over three network pairings and record the
highest cost effectiveness.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rumorcontain.dynamics import ExpectedState, default_dt
from rumorcontain.errors import DomainError
from rumorcontain.graphs import barabasi_albert, named_small_graph, realistic_standin, watts_strogatz
from rumorcontain.objective import RCInstance, instance_to_json
from rumorcontain.optimizer import DEFAULT_GRID_POINTS, solve_rc

__all__ = [
    "SWEEP_PARAMETERS",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "RowFailure",
    "network",
    "make_instance",
    "experiment_instances",
    "experiment_sweeps",
    "run_experiment_table",
    "run_sweep",
    "write_sweep_csv",
    "sweep_manifest",
    "default_threads",
]

SWEEP_PARAMETERS = ("beta1", "beta2", "delta", "horizon", "budget", "c1", "c2")
THREADS_ENV = "RUMORCONTAIN_THREADS"

# Generation parameters for the 50-node networks; only n is published.
SW_PARAMS = {"n": 50, "k": 4, "p": 0.1}
SF_PARAMS = {"n": 50, "m": 2}
DEFAULT_SEED = 1
INITIAL_PROBABILITY = 0.1


def default_threads():
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if value < 1:
            raise DomainError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


def network(name, seed=DEFAULT_SEED):
    """Experiment network by name: ``G1``..``G9``, ``SW``, ``SF`` or ``RE``."""
    if name == "SW":
        return watts_strogatz(seed=seed, **SW_PARAMS).with_label(f"SW (WS 50,4,0.1 seed={seed})")
    if name == "SF":
        return barabasi_albert(seed=seed, **SF_PARAMS).with_label(f"SF (BA 50,2 seed={seed})")
    if name == "RE":
        return realistic_standin()
    if name.startswith("G") and name[1:].isdigit():
        return named_small_graph(int(name[1:]))
    raise DomainError(f"unknown experiment network {name!r}")


def make_instance(rumor, truth, beta1, beta2, delta, horizon, budget, c1, c2,
                  initial=INITIAL_PROBABILITY, seed=DEFAULT_SEED):
    gR = network(rumor, seed)
    gT = network(truth, seed)
    return RCInstance(gR, gT, beta1, beta2, delta, horizon, budget, c1, c2,
                      ExpectedState.uniform(gR.n, initial))


# (G_R, G_T, beta1, beta2, delta, T, c1, c2, B)
EXPERIMENT_1 = [
    ("G1", "G1", 0.7, 0.1, 0.1, 35, 8, 3, 10),
    ("G2", "G3", 0.7, 0.6, 0.7, 55, 4, 8, 6),
    ("G3", "G2", 0.4, 0.3, 0.3, 35, 4, 6, 6),
    ("G4", "G5", 0.9, 0.7, 0.7, 50, 3, 3, 6),
    ("G5", "G6", 0.1, 0.8, 0.4, 50, 5, 5, 6),
    ("G6", "G7", 0.5, 0.8, 0.5, 70, 2, 4, 6),
    ("G7", "G8", 0.1, 0.4, 0.2, 40, 4, 3, 4),
    ("G8", "G9", 0.5, 0.5, 0.7, 70, 9, 9, 12),
    ("G9", "G4", 0.9, 0.6, 0.1, 45, 3, 3, 6),
]

EXPERIMENT_2 = [
    ("SW", "SF", 0.4, 0.7, 0.5, 30, 3, 9, 18),
    ("SF", "SW", 0.6, 0.8, 0.2, 50, 2, 2, 2),
    ("RE", "RE", 0.3, 0.4, 0.4, 70, 5, 6, 2),
]

_TENTHS = [round(0.1 * i, 10) for i in range(1, 10)]
_ONES = [float(i) for i in range(1, 10)]

# experiment -> (swept parameter, values, rows of (G_R, G_T, fixed parameters))
SWEEPS = {
    3: ("beta1", _TENTHS, [
        ("SW", "SF", dict(beta2=0.1, delta=0.3, horizon=10, budget=6, c1=1, c2=2)),
        ("SF", "SW", dict(beta2=0.2, delta=0.2, horizon=15, budget=8, c1=2, c2=3)),
        ("RE", "RE", dict(beta2=0.3, delta=0.1, horizon=20, budget=10, c1=3, c2=4)),
    ]),
    4: ("beta2", _TENTHS, [
        ("SW", "SF", dict(beta1=0.4, delta=0.1, horizon=10, budget=6, c1=1, c2=2)),
        ("SF", "SW", dict(beta1=0.5, delta=0.2, horizon=15, budget=8, c1=2, c2=3)),
        ("RE", "RE", dict(beta1=0.6, delta=0.3, horizon=20, budget=10, c1=3, c2=4)),
    ]),
    5: ("delta", _TENTHS, [
        ("SW", "SF", dict(beta1=0.2, beta2=0.4, horizon=10, budget=6, c1=1, c2=2)),
        ("SF", "SW", dict(beta1=0.3, beta2=0.5, horizon=15, budget=8, c1=2, c2=3)),
        ("RE", "RE", dict(beta1=0.4, beta2=0.3, horizon=20, budget=10, c1=3, c2=4)),
    ]),
    6: ("horizon", [float(t) for t in range(10, 31, 2)], [
        ("SW", "SF", dict(beta1=0.3, beta2=0.5, delta=0.1, budget=6, c1=1, c2=2)),
        ("SF", "SW", dict(beta1=0.4, beta2=0.6, delta=0.2, budget=8, c1=2, c2=3)),
        ("RE", "RE", dict(beta1=0.6, beta2=0.4, delta=0.3, budget=10, c1=3, c2=4)),
    ]),
    7: ("budget", [float(b) for b in range(2, 19, 2)], [
        ("SW", "SF", dict(beta1=0.4, beta2=0.2, delta=0.8, horizon=60, c1=7, c2=9)),
        ("SF", "SW", dict(beta1=0.8, beta2=0.6, delta=0.8, horizon=70, c1=8, c2=8)),
        ("RE", "RE", dict(beta1=0.9, beta2=0.2, delta=0.5, horizon=65, c1=5, c2=7)),
    ]),
    8: ("c1", _ONES, [
        ("SW", "SF", dict(beta1=0.5, beta2=0.4, delta=0.8, horizon=50, budget=2, c2=5)),
        ("SF", "SW", dict(beta1=0.3, beta2=0.9, delta=0.6, horizon=30, budget=12, c2=5)),
        ("RE", "RE", dict(beta1=0.4, beta2=0.8, delta=0.2, horizon=50, budget=14, c2=8)),
    ]),
    9: ("c2", _ONES, [
        ("SW", "SF", dict(beta1=0.7, beta2=0.3, delta=0.9, horizon=55, budget=12, c1=2)),
        ("SF", "SW", dict(beta1=0.3, beta2=0.1, delta=0.2, horizon=30, budget=16, c1=7)),
        ("RE", "RE", dict(beta1=0.4, beta2=0.2, delta=0.4, horizon=50, budget=4, c1=5)),
    ]),
}


def experiment_instances(number, seed=DEFAULT_SEED):
    """Instances of Experiment 1 or 2, in table order."""
    table = {1: EXPERIMENT_1, 2: EXPERIMENT_2}.get(number)
    if table is None:
        raise DomainError(f"experiments with instance tables are 1 and 2, got {number!r}")
    return [make_instance(gr, gt, b1, b2, d, T, B, c1, c2, seed=seed)
            for gr, gt, b1, b2, d, T, c1, c2, B in table]


def experiment_sweeps(number, seed=DEFAULT_SEED):
    """The three sweeps of Experiment ``number`` (3..9)."""
    if number not in SWEEPS:
        raise DomainError(f"sweep experiments are 3..9, got {number!r}")
    parameter, values, rows = SWEEPS[number]
    specs = []
    for row, (gr, gt, fixed) in enumerate(rows, start=1):
        # placeholder for the swept value; every row substitutes its own
        params = dict(fixed, **{parameter: values[0]})
        base = make_instance(gr, gt, seed=seed, **params)
        specs.append(SweepSpec(base, parameter, list(values),
                               label=f"experiment{number}_row{row}_{gr}-{gt}"))
    return specs


@dataclass(frozen=True)
class SweepSpec:
    base: RCInstance
    parameter: str
    values: list
    label: str = ""

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise DomainError(
                f"unknown sweep parameter {self.parameter!r}; valid: {', '.join(SWEEP_PARAMETERS)}")
        values = [float(v) for v in self.values]
        if not values:
            raise DomainError("sweep needs at least one value")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise DomainError("sweep values must be strictly ascending")
        object.__setattr__(self, "values", values)

    def instance_at(self, value):
        return self.base.replace(**{self.parameter: value})


@dataclass(frozen=True)
class SweepRow:
    value: float
    gamma1: float
    gamma2: float
    eTotal: float
    costEffectiveness: float
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    rows: list = field(default_factory=list)

    @property
    def cost_effectiveness(self):
        return np.array([r.costEffectiveness for r in self.rows])


@dataclass(frozen=True)
class RowFailure:
    """Stands in for a result whose instance could not be solved."""

    index: int
    error: str


def _map(fn, items, threads):
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_experiment_table(instances, grid_points=DEFAULT_GRID_POINTS, refine_tol=None,
                         dt=None, threads=None):
    """Solve every instance; failures become :class:`RowFailure` entries in place."""
    def solve(item):
        index, instance = item
        try:
            return solve_rc(instance, grid_points, refine_tol, dt)
        except (ArithmeticError, ValueError) as exc:
            return RowFailure(index, f"{type(exc).__name__}: {exc}")

    return _map(solve, list(enumerate(instances)), threads)


def run_sweep(spec, grid_points=DEFAULT_GRID_POINTS, refine_tol=None, dt=None, threads=None):
    """Solve the base instance once per swept value, rows in input order."""
    def solve(value):
        try:
            result = solve_rc(spec.instance_at(value), grid_points, refine_tol, dt)
        except (ArithmeticError, ValueError) as exc:
            nan = float("nan")
            return SweepRow(value, nan, nan, nan, nan, f"{type(exc).__name__}: {exc}")
        return SweepRow(value, result.best.gamma1, result.best.gamma2, result.eTotal,
                        result.costEffectiveness)

    return SweepResult(spec.parameter, _map(solve, spec.values, threads))


def _fmt(x):
    return f"{x:.17g}"


def write_sweep_csv(result, path):
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["param", "value", "gamma1", "gamma2", "eTotal", "costEffectiveness"])
        for r in result.rows:
            writer.writerow([result.parameter] + [_fmt(x) for x in (
                r.value, r.gamma1, r.gamma2, r.eTotal, r.costEffectiveness)])


def sweep_manifest(spec, result, grid_points, refine_tol, dt, seed=None, config=None):
    from rumorcontain import __version__

    doc = {
        "tool": "rumorcontain",
        "version": __version__,
        "label": spec.label,
        "parameter": spec.parameter,
        "values": spec.values,
        "base_instance": instance_to_json(spec.base),
        "seed": seed,
        "dt": [default_dt(spec.instance_at(v).horizon) if dt is None else dt
               for v in spec.values],
        "gridPoints": grid_points,
        "refineTol": refine_tol if refine_tol is not None else "default: 1e-6 * budget / c1",
        "errors": [{"value": r.value, "error": r.error} for r in result.rows if r.error],
    }
    if config is not None:
        doc["config"] = config
    return doc


def write_manifest(doc, path):
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
