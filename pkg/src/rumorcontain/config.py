"""JSON run configurations describing one rumor-containment instance plus solver settings.

Example::

    {
      "rumor_network": {"model": "named", "index": 1},
      "truth_network": {"model": "ws", "n": 50, "k": 4, "p": 0.1, "seed": 1},
      "beta1": 0.7, "beta2": 0.1, "delta": 0.1,
      "horizon": 35, "budget": 10, "c1": 8, "c2": 3,
      "initial_state": 0.1
    }

Network models are ``named`` (``index`` 1..9), ``ws`` (``n``, ``k``, ``p``,
``seed``), ``ba`` (``n``, ``m``, ``seed``), ``edgelist`` (``path``,
``symmetric``) and ``realistic`` (the bundled 49-node stand-in).
``initial_state`` is a probability used for every ``R_i`` and ``T_i``, or an
object ``{"R": ..., "T": ...}`` whose entries are scalars or per-node lists.
Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from rumorcontain.dynamics import ExpectedState
from rumorcontain.errors import ConfigError, DomainError, ParseError
from rumorcontain.graphs import (
    barabasi_albert,
    load_graph,
    named_small_graph,
    realistic_standin,
    watts_strogatz,
)
from rumorcontain.objective import RCInstance
from rumorcontain.optimizer import DEFAULT_GRID_POINTS

__all__ = ["RunConfig", "parse_config", "load_config", "build_graph"]

_RATES = ("beta1", "beta2", "delta", "horizon", "budget", "c1", "c2")

_GRAPH_KEYS = {
    "named": {"index": None},
    "ws": {"n": None, "k": 4, "p": 0.1, "seed": None},
    "ba": {"n": None, "m": 2, "seed": None},
    "edgelist": {"path": None, "symmetric": False},
    "realistic": {},
}

DEFAULT_SEED = 1
DEFAULT_INITIAL = 0.1


def _fail(where, msg):
    raise ConfigError(f"{where}: {msg}")


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(where, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        _fail(where, f"expected a finite number, got {value!r}")
    return value


def _integer(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(where, f"expected an integer, got {value!r}")
    return value


def _graph_spec(doc, where, seed):
    if not isinstance(doc, dict):
        _fail(where, f"expected an object, got {doc!r}")
    model = doc.get("model")
    if model not in _GRAPH_KEYS:
        _fail(f"{where}.model", f"expected one of {sorted(_GRAPH_KEYS)}, got {model!r}")
    allowed = _GRAPH_KEYS[model]
    unknown = sorted(set(doc) - set(allowed) - {"model"})
    if unknown:
        _fail(where, f"unknown keys for model {model!r}: {unknown}")
    spec = {"model": model}
    for key, default in allowed.items():
        value = doc.get(key, default)
        if value is None and key == "seed":
            value = seed
        if value is None:
            _fail(f"{where}.{key}", "required")
        if key in ("index", "n", "k", "m", "seed"):
            value = _integer(value, f"{where}.{key}")
        elif key == "p":
            value = _number(value, f"{where}.{key}")
        elif key == "symmetric":
            if not isinstance(value, bool):
                _fail(f"{where}.{key}", f"expected true or false, got {value!r}")
        elif key == "path":
            if not isinstance(value, str):
                _fail(f"{where}.{key}", f"expected a string, got {value!r}")
        spec[key] = value
    return spec


def build_graph(spec, base_dir=None):
    """Construct the network described by a normalised graph spec."""
    model = spec["model"]
    if model == "named":
        return named_small_graph(spec["index"])
    if model == "ws":
        return watts_strogatz(spec["n"], spec["k"], spec["p"], spec["seed"])
    if model == "ba":
        return barabasi_albert(spec["n"], spec["m"], spec["seed"])
    if model == "realistic":
        return realistic_standin()
    path = Path(spec["path"])
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    return load_graph(path, symmetric=spec["symmetric"])


def _initial_part(value, where):
    if isinstance(value, list):
        return [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]
    return _number(value, where)


def _initial_spec(doc):
    where = "initial_state"
    if isinstance(doc, dict):
        unknown = sorted(set(doc) - {"R", "T"})
        if unknown:
            _fail(where, f"unknown keys: {unknown}")
        if "R" not in doc or "T" not in doc:
            _fail(where, "needs both 'R' and 'T'")
        return {"R": _initial_part(doc["R"], f"{where}.R"),
                "T": _initial_part(doc["T"], f"{where}.T")}
    return _number(doc, where)


def _initial_state(spec, n):
    if not isinstance(spec, dict):
        spec = {"R": spec, "T": spec}
    parts = []
    for key in ("R", "T"):
        v = spec[key]
        if isinstance(v, list):
            if len(v) != n:
                _fail(f"initial_state.{key}", f"expected {n} entries, got {len(v)}")
            parts.append(v)
        else:
            parts.append([v] * n)
    try:
        return ExpectedState(*parts)
    except DomainError as exc:
        _fail("initial_state", str(exc))


@dataclass(frozen=True)
class RunConfig:
    rumor_network: dict
    truth_network: dict
    beta1: float
    beta2: float
    delta: float
    horizon: float
    budget: float
    c1: float
    c2: float
    initial_state: object = DEFAULT_INITIAL
    dt: float | None = None
    grid_points: int = DEFAULT_GRID_POINTS
    refine_tol: float | None = None
    seed: int = DEFAULT_SEED
    base_dir: str | None = field(default=None, compare=False)

    def to_json(self):
        """Normalised document with every default spelled out."""
        doc = {
            "rumor_network": dict(self.rumor_network),
            "truth_network": dict(self.truth_network),
        }
        for key in _RATES:
            doc[key] = getattr(self, key)
        doc["initial_state"] = self.initial_state
        doc["dt"] = self.dt
        doc["grid_points"] = self.grid_points
        doc["refine_tol"] = self.refine_tol
        doc["seed"] = self.seed
        return doc

    def instance(self):
        """Build the :class:`RCInstance`; construction failures become :class:`ConfigError`."""
        try:
            gR = build_graph(self.rumor_network, self.base_dir)
            gT = build_graph(self.truth_network, self.base_dir)
        except ParseError:
            raise
        except (DomainError, OSError) as exc:
            raise ConfigError(f"network: {exc}") from exc
        init = _initial_state(self.initial_state, gR.n)
        try:
            return RCInstance(gR, gT, self.beta1, self.beta2, self.delta, self.horizon,
                              self.budget, self.c1, self.c2, init)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc


_KEYS = ("rumor_network", "truth_network") + _RATES + (
    "initial_state", "dt", "grid_points", "refine_tol", "seed")


def parse_config(doc, base_dir=None):
    """Validate a config document and return a normalised :class:`RunConfig`."""
    if not isinstance(doc, dict):
        _fail("config", "top level must be an object")
    unknown = sorted(set(doc) - set(_KEYS))
    if unknown:
        _fail("config", f"unknown keys: {unknown}")
    seed = _integer(doc.get("seed", DEFAULT_SEED), "seed")
    kwargs = {"seed": seed, "base_dir": None if base_dir is None else str(base_dir)}
    for key in ("rumor_network", "truth_network"):
        if key not in doc:
            _fail(key, "required")
        kwargs[key] = _graph_spec(doc[key], key, seed)
    for key in _RATES:
        if key not in doc:
            _fail(key, "required")
        kwargs[key] = _number(doc[key], key)
    kwargs["initial_state"] = _initial_spec(doc.get("initial_state", DEFAULT_INITIAL))
    if doc.get("dt") is not None:
        kwargs["dt"] = _number(doc["dt"], "dt")
        if kwargs["dt"] <= 0:
            _fail("dt", "must be positive")
    kwargs["grid_points"] = _integer(doc.get("grid_points", DEFAULT_GRID_POINTS), "grid_points")
    if kwargs["grid_points"] < 2:
        _fail("grid_points", "must be at least 2")
    if doc.get("refine_tol") is not None:
        kwargs["refine_tol"] = _number(doc["refine_tol"], "refine_tol")
        if kwargs["refine_tol"] <= 0:
            _fail("refine_tol", "must be positive")
    return RunConfig(**kwargs)


def load_config(path):
    """Read and validate a JSON config file; errors name the file (and line, for syntax errors)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return parse_config(doc, base_dir=path.parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
