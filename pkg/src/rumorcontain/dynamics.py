"""Expected-state rumor/truth dynamics on a pair of directed networks.

Each person ``i`` is uncertain, rumor-believing or truth-believing with
probabilities ``U_i``, ``R_i``, ``T_i`` (``U_i = 1 - R_i - T_i`` is never
stored).  With ``a`` the rumor adjacency and ``b`` the truth adjacency, and
``rho_i = sum_j a_ji R_j``, ``tau_i = sum_j b_ji T_j``::

    dR_i/dt = beta1 U_i rho_i + beta2 T_i rho_i - gamma2 R_i tau_i - delta R_i
    dT_i/dt = gamma1 U_i tau_i + gamma2 R_i tau_i - beta2 T_i rho_i - delta T_i

Two extra channels integrate ``sum_i U_i tau_i`` and ``sum_i R_i tau_i``; the
effectiveness of a strategy is assembled from them.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numba
import numpy as np

from rumorcontain.errors import DomainError, IntegrationError

__all__ = [
    "URTUParams",
    "ExpectedState",
    "Trajectory",
    "derivative",
    "integrate",
    "integrate_final",
    "default_dt",
    "time_grid",
    "write_trajectory_csv",
    "SIMPLEX_TOL",
]

SIMPLEX_TOL = 1e-9


def _check_rate(name, value):
    if not (math.isfinite(value) and value >= 0.0):
        raise DomainError(f"{name} must be finite and nonnegative, got {value!r}")


@dataclass(frozen=True)
class URTUParams:
    beta1: float
    beta2: float
    gamma1: float
    gamma2: float
    delta: float

    def __post_init__(self):
        for name in ("beta1", "beta2", "gamma1", "gamma2", "delta"):
            _check_rate(name, getattr(self, name))

    @property
    def max_rate(self):
        return max(self.beta1, self.beta2, self.gamma1, self.gamma2, self.delta)


@dataclass(frozen=True, eq=False)
class ExpectedState:
    """Per-person rumor and truth probabilities."""

    R: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        R = np.array(self.R, dtype=np.float64, copy=True).reshape(-1)
        T = np.array(self.T, dtype=np.float64, copy=True).reshape(-1)
        if R.shape != T.shape or R.size == 0:
            raise DomainError(f"R and T must be nonempty and equally long, got {R.size} and {T.size}")
        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(T))):
            raise DomainError("state probabilities must be finite")
        if np.any(R < 0) or np.any(T < 0) or np.any(R + T > 1.0):
            raise DomainError("state must satisfy R_i >= 0, T_i >= 0 and R_i + T_i <= 1")
        R.setflags(write=False)
        T.setflags(write=False)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "T", T)

    @classmethod
    def uniform(cls, n, rumor, truth=None):
        """Every person starts with ``R_i = rumor`` and ``T_i = truth`` (default: same as rumor)."""
        truth = rumor if truth is None else truth
        return cls(np.full(n, float(rumor)), np.full(n, float(truth)))

    @property
    def n(self):
        return self.R.size

    @property
    def U(self):
        return 1.0 - self.R - self.T

    def __eq__(self, other):
        if not isinstance(other, ExpectedState):
            return NotImplemented
        return np.array_equal(self.R, other.R) and np.array_equal(self.T, other.T)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution: ``R[k]``, ``T[k]``, ``accU[k]``, ``accR[k]`` at ``times[k]``."""

    times: np.ndarray
    R: np.ndarray
    T: np.ndarray
    accU: np.ndarray
    accR: np.ndarray
    dt: float

    @property
    def n(self):
        return self.R.shape[1]

    def __len__(self):
        return self.times.size

    @property
    def states(self):
        return [ExpectedState(r, t) for r, t in zip(self.R, self.T)]

    @property
    def final(self):
        return ExpectedState(self.R[-1], self.T[-1])

    def as_array(self):
        """Rows ``[t, R_0..R_{n-1}, T_0..T_{n-1}, accU, accR]``."""
        return np.column_stack([self.times, self.R, self.T, self.accU, self.accR])


def _check_dims(n, gR, gT):
    if gR.n != n or gT.n != n:
        raise DomainError(
            f"dimension mismatch: state has {n} persons, networks have {gR.n} and {gT.n} nodes")


def derivative(state, params, gR, gT):
    """Right-hand side at ``state``.

    Returns ``(dR, dT, dAccU, dAccR)``; the accumulator rates carry no
    ``gamma`` prefactor.
    """
    _check_dims(state.n, gR, gT)
    R, T = state.R, state.T
    U = 1.0 - R - T
    rho = gR.adj.T.astype(np.float64) @ R
    tau = gT.adj.T.astype(np.float64) @ T
    p = params
    dR = p.beta1 * U * rho + p.beta2 * T * rho - p.gamma2 * R * tau - p.delta * R
    dT = p.gamma1 * U * tau + p.gamma2 * R * tau - p.beta2 * T * rho - p.delta * T
    return dR, dT, float(np.sum(U * tau)), float(np.sum(R * tau))


def default_dt(horizon):
    return min(0.01, horizon / 1000.0)


def time_grid(horizon, dt):
    """Sample times ``0, dt, 2dt, ...`` ending exactly at ``horizon``.

    The final step is shortened when ``horizon / dt`` is not an integer.
    """
    if not (math.isfinite(horizon) and horizon > 0):
        raise DomainError(f"horizon must be positive, got {horizon!r}")
    if not (math.isfinite(dt) and 0 < dt <= horizon):
        raise DomainError(f"step must satisfy 0 < dt <= horizon, got dt={dt!r}")
    ratio = horizon / dt
    k = round(ratio)
    if abs(ratio - k) > 1e-9 * ratio:
        k = math.ceil(ratio)
    times = np.arange(k + 1, dtype=np.float64) * dt
    times[-1] = horizon
    return times


@numba.njit(cache=True, nogil=True)
def _rhs(R, T, r_ptr, r_idx, t_ptr, t_idx, beta1, beta2, delta, g1, g2,
         dR, dT, dacc, rho, tau):
    n, S = R.shape
    for s in range(S):
        dacc[0, s] = 0.0
        dacc[1, s] = 0.0
    for i in range(n):
        for s in range(S):
            rho[s] = 0.0
            tau[s] = 0.0
        for p in range(r_ptr[i], r_ptr[i + 1]):
            j = r_idx[p]
            for s in range(S):
                rho[s] += R[j, s]
        for p in range(t_ptr[i], t_ptr[i + 1]):
            j = t_idx[p]
            for s in range(S):
                tau[s] += T[j, s]
        for s in range(S):
            r = R[i, s]
            t = T[i, s]
            u = 1.0 - r - t
            dR[i, s] = beta1 * u * rho[s] + beta2 * t * rho[s] - g2[s] * r * tau[s] - delta * r
            dT[i, s] = g1[s] * u * tau[s] + g2[s] * r * tau[s] - beta2 * t * rho[s] - delta * t
            dacc[0, s] += u * tau[s]
            dacc[1, s] += r * tau[s]


@numba.njit(cache=True, nogil=True)
def _rk4(R, T, acc, r_ptr, r_idx, t_ptr, t_idx, beta1, beta2, delta, g1, g2,
         steps, tol, hist_R, hist_T, hist_acc, record):
    """Advance ``R, T, acc`` in place through ``steps``.

    Returns the index of the first step whose result leaves the simplex by
    more than ``tol``, or -1.  Violations within ``tol`` are clamped.
    """
    n, S = R.shape
    rho = np.empty(S)
    tau = np.empty(S)
    kR = np.empty((4, n, S))
    kT = np.empty((4, n, S))
    ka = np.empty((4, 2, S))
    yR = np.empty((n, S))
    yT = np.empty((n, S))
    if record:
        hist_R[0] = R
        hist_T[0] = T
        hist_acc[0] = acc
    for step in range(steps.size):
        h = steps[step]
        _rhs(R, T, r_ptr, r_idx, t_ptr, t_idx, beta1, beta2, delta, g1, g2,
             kR[0], kT[0], ka[0], rho, tau)
        for stage in range(1, 4):
            c = h if stage == 3 else 0.5 * h
            for i in range(n):
                for s in range(S):
                    yR[i, s] = R[i, s] + c * kR[stage - 1, i, s]
                    yT[i, s] = T[i, s] + c * kT[stage - 1, i, s]
            _rhs(yR, yT, r_ptr, r_idx, t_ptr, t_idx, beta1, beta2, delta, g1, g2,
                 kR[stage], kT[stage], ka[stage], rho, tau)
        w = h / 6.0
        for i in range(n):
            for s in range(S):
                r = R[i, s] + w * (kR[0, i, s] + 2.0 * kR[1, i, s] + 2.0 * kR[2, i, s] + kR[3, i, s])
                t = T[i, s] + w * (kT[0, i, s] + 2.0 * kT[1, i, s] + 2.0 * kT[2, i, s] + kT[3, i, s])
                if not (r >= -tol and t >= -tol and r + t <= 1.0 + tol):
                    return step
                if r < 0.0:
                    r = 0.0
                if t < 0.0:
                    t = 0.0
                total = r + t
                if total > 1.0:
                    r = r / total
                    t = t / total
                R[i, s] = r
                T[i, s] = t
        for c in range(2):
            for s in range(S):
                acc[c, s] += w * (ka[0, c, s] + 2.0 * ka[1, c, s] + 2.0 * ka[2, c, s] + ka[3, c, s])
        if record:
            hist_R[step + 1] = R
            hist_T[step + 1] = T
            hist_acc[step + 1] = acc
    return -1


@numba.njit(cache=True, nogil=True)
def _rhs1(R, T, r_ptr, r_idx, t_ptr, t_idx, beta1, beta2, delta, g1, g2, dR, dT, dacc):
    # single-strategy twin of _rhs; arithmetic must stay identical
    n = R.size
    dacc[0] = 0.0
    dacc[1] = 0.0
    for i in range(n):
        rho = 0.0
        tau = 0.0
        for p in range(r_ptr[i], r_ptr[i + 1]):
            rho += R[r_idx[p]]
        for p in range(t_ptr[i], t_ptr[i + 1]):
            tau += T[t_idx[p]]
        r = R[i]
        t = T[i]
        u = 1.0 - r - t
        dR[i] = beta1 * u * rho + beta2 * t * rho - g2 * r * tau - delta * r
        dT[i] = g1 * u * tau + g2 * r * tau - beta2 * t * rho - delta * t
        dacc[0] += u * tau
        dacc[1] += r * tau


@numba.njit(cache=True, nogil=True)
def _rk4_1(R, T, acc, r_ptr, r_idx, t_ptr, t_idx, beta1, beta2, delta, g1, g2, steps, tol):
    # single-strategy twin of _rk4 without recording
    n = R.size
    kR = np.empty((4, n))
    kT = np.empty((4, n))
    ka = np.empty((4, 2))
    yR = np.empty(n)
    yT = np.empty(n)
    for step in range(steps.size):
        h = steps[step]
        _rhs1(R, T, r_ptr, r_idx, t_ptr, t_idx, beta1, beta2, delta, g1, g2, kR[0], kT[0], ka[0])
        for stage in range(1, 4):
            c = h if stage == 3 else 0.5 * h
            for i in range(n):
                yR[i] = R[i] + c * kR[stage - 1, i]
                yT[i] = T[i] + c * kT[stage - 1, i]
            _rhs1(yR, yT, r_ptr, r_idx, t_ptr, t_idx, beta1, beta2, delta, g1, g2,
                  kR[stage], kT[stage], ka[stage])
        w = h / 6.0
        for i in range(n):
            r = R[i] + w * (kR[0, i] + 2.0 * kR[1, i] + 2.0 * kR[2, i] + kR[3, i])
            t = T[i] + w * (kT[0, i] + 2.0 * kT[1, i] + 2.0 * kT[2, i] + kT[3, i])
            if not (r >= -tol and t >= -tol and r + t <= 1.0 + tol):
                return step
            if r < 0.0:
                r = 0.0
            if t < 0.0:
                t = 0.0
            total = r + t
            if total > 1.0:
                r = r / total
                t = t / total
            R[i] = r
            T[i] = t
        for c in range(2):
            acc[c] += w * (ka[0, c] + 2.0 * ka[1, c] + 2.0 * ka[2, c] + ka[3, c])
    return -1


def _run(init, beta1, beta2, delta, gamma1, gamma2, gR, gT, horizon, dt, record):
    n = init.n
    _check_dims(n, gR, gT)
    for name, v in (("beta1", beta1), ("beta2", beta2), ("delta", delta)):
        _check_rate(name, v)
    g1 = np.ascontiguousarray(gamma1, dtype=np.float64).reshape(-1)
    g2 = np.ascontiguousarray(gamma2, dtype=np.float64).reshape(-1)
    if g1.shape != g2.shape or g1.size == 0:
        raise DomainError("gamma1 and gamma2 must be equally long and nonempty")
    if not (np.all(np.isfinite(g1)) and np.all(g1 >= 0) and np.all(np.isfinite(g2)) and np.all(g2 >= 0)):
        raise DomainError("truth-spreading rates must be finite and nonnegative")
    S = g1.size
    times = time_grid(horizon, default_dt(horizon) if dt is None else dt)
    steps = np.diff(times)
    R = np.repeat(init.R[:, None], S, axis=1)
    T = np.repeat(init.T[:, None], S, axis=1)
    acc = np.zeros((2, S))
    if record:
        hist_R = np.empty((times.size, n, S))
        hist_T = np.empty((times.size, n, S))
        hist_acc = np.empty((times.size, 2, S))
    else:
        hist_R = hist_T = np.empty((0, n, S))
        hist_acc = np.empty((0, 2, S))
    r_ptr, r_idx = gR.in_neighbors
    t_ptr, t_idx = gT.in_neighbors
    if S == 1 and not record:
        R1, T1, acc1 = R[:, 0].copy(), T[:, 0].copy(), acc[:, 0].copy()
        failed = _rk4_1(R1, T1, acc1, r_ptr, r_idx, t_ptr, t_idx, float(beta1), float(beta2),
                        float(delta), float(g1[0]), float(g2[0]), steps, SIMPLEX_TOL)
        R, T, acc = R1[:, None], T1[:, None], acc1[:, None]
    else:
        failed = _rk4(R, T, acc, r_ptr, r_idx, t_ptr, t_idx, float(beta1), float(beta2),
                      float(delta), g1, g2, steps, SIMPLEX_TOL, hist_R, hist_T, hist_acc, record)
    if failed >= 0:
        raise IntegrationError("state left the probability simplex; reduce dt", times[failed + 1])
    return times, R, T, acc, (hist_R, hist_T, hist_acc)


def integrate(init, params, gR, gT, horizon, dt=None):
    """Classical fixed-step RK4 from ``init`` over ``[0, horizon]``, sampling every step.

    ``dt`` defaults to ``min(0.01, horizon/1000)``.  Raises
    :class:`IntegrationError` if a step leaves the simplex by more than 1e-9.
    """
    dt = default_dt(horizon) if dt is None else dt
    times, _, _, _, (hR, hT, hacc) = _run(
        init, params.beta1, params.beta2, params.delta, params.gamma1, params.gamma2,
        gR, gT, horizon, dt, True)
    return Trajectory(times, hR[:, :, 0], hT[:, :, 0], hacc[:, 0, 0], hacc[:, 1, 0], dt)


def integrate_final(init, beta1, beta2, delta, gamma1, gamma2, gR, gT, horizon, dt=None):
    """Integrate one trajectory per ``(gamma1[s], gamma2[s])`` pair, keeping final values only.

    Returns ``(R, T, accU, accR)`` with ``R`` and ``T`` of shape ``(n, S)``.
    Each column is computed exactly as a standalone integration would be.
    """
    _, R, T, acc, _ = _run(init, beta1, beta2, delta, gamma1, gamma2, gR, gT, horizon, dt, False)
    return R, T, acc[0], acc[1]


def write_trajectory_csv(traj, path):
    n = traj.n
    header = (["t"] + [f"R_{i}" for i in range(n)] + [f"T_{i}" for i in range(n)]
              + ["accU", "accR"])
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in traj.as_array():
            writer.writerow([f"{x:.17g}" for x in row])
