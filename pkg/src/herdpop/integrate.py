"""Adaptive time integration with axis (extinction) handling.

The herd fields are smooth only in the open first quadrant: the square
roots are not Lipschitz on the axes, and trajectories can reach an axis
in finite time.  Integration therefore combines

* an explicit Dormand-Prince 4(5) embedded pair with proportional-
  integral step-size control, and
* a threshold-and-reduce rule at the axes: when a component falls below
  ``extinction_eps`` (or crosses zero outright) while moving outward, it
  is pinned to exactly 0 and the surviving population follows the
  one-equation reduced dynamics (logistic growth for symbiosis,
  competition and prey; exponential decay for specialist predators).

Pinned components never come back: extinct populations stay extinct,
which also selects the biologically meaningful solution where the
square-root field loses uniqueness at the axis.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .families import (
    DimParams,
    DomainError,
    NondimParams,
    Representation,
    RepresentationError,
    State,
    _dim_field,
    _nondim_field,
)

__all__ = [
    "IntegratorConfig",
    "EventKind",
    "Event",
    "Trajectory",
    "OscillationKind",
    "OscillationReport",
    "NumericError",
    "StiffnessError",
    "integrate",
    "settle",
    "detect_oscillation",
]


class NumericError(RuntimeError):
    """Base class for integration failures."""


class StiffnessError(NumericError):
    """Step size underflowed; carries the partial trajectory."""

    def __init__(self, message: str, trajectory: "Trajectory | None" = None):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances, step bounds, extinction threshold and horizon.

    ``extinction_eps`` is interpreted in the state's own units: for
    dimensional runs it is scaled by the carrying capacities, for
    nondimensional runs it applies directly.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-11
    max_step: float = math.inf
    min_step: float = 1e-12
    extinction_eps: float = 1e-9
    t_max: float = 500.0

    def __post_init__(self):
        if not (0.0 < self.min_step <= self.max_step):
            raise ValueError("need 0 < min_step <= max_step")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.extinction_eps <= 0.0:
            raise ValueError("extinction_eps must be positive")
        if self.t_max <= 0.0:
            raise ValueError("t_max must be positive")


class EventKind(str, Enum):
    EXTINCT_Q = "ExtinctQ"
    EXTINCT_P = "ExtinctP"
    EXTINCT_BOTH = "ExtinctBoth"
    STEADY_STATE = "SteadyState"
    HORIZON_REACHED = "HorizonReached"


@dataclass(frozen=True)
class Event:
    time: float
    kind: EventKind


@dataclass
class Trajectory:
    """Accepted integration samples plus event markers."""

    times: np.ndarray
    states: np.ndarray  # shape (n, 2), componentwise >= 0
    rep: Representation
    events: list[Event] = field(default_factory=list)

    def final_state(self) -> State:
        u, v = self.states[-1]
        return State(max(u, 0.0), max(v, 0.0), self.rep)

    def state_at(self, t: float) -> np.ndarray:
        """Linear interpolation between accepted samples."""
        return np.array(
            [
                np.interp(t, self.times, self.states[:, 0]),
                np.interp(t, self.times, self.states[:, 1]),
            ]
        )

    def has_event(self, kind: EventKind) -> bool:
        return any(ev.kind is kind for ev in self.events)

    def event_time(self, kind: EventKind) -> float | None:
        for ev in self.events:
            if ev.kind is kind:
                return ev.time
        return None

    def csv_header(self) -> str:
        return "t,Q,P" if self.rep is Representation.DIMENSIONAL else "t,X,Y"

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.csv_header() + "\n")
            for t, (u, v) in zip(self.times, self.states):
                fh.write(f"{t!r},{u!r},{v!r}\n")

    def events_payload(self) -> list[dict]:
        return [{"time": ev.time, "kind": ev.kind.value} for ev in self.events]


# ---------------------------------------------------------------------------
# Dormand-Prince 4(5) coefficients

_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168,
    -355 / 33,
    46732 / 5247,
    49 / 176,
    -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

_SAFETY = 0.9
_BETA1 = 0.7 / 5  # PI controller: proportional exponent
_BETA2 = 0.4 / 5  # PI controller: integral exponent
_FAC_MIN = 0.2
_FAC_MAX = 10.0


class _Run:
    """One integration, with pinned-axis bookkeeping."""

    def __init__(self, model, s0, cfg: IntegratorConfig):
        if isinstance(model, DimParams):
            self.rep = Representation.DIMENSIONAL
            self.base = _dim_field(model)
            kq = model.k_q
            kp = model.k_p if model.k_p is not None else model.k_q
            self.eps = (cfg.extinction_eps * kq, cfg.extinction_eps * kp)
        elif isinstance(model, NondimParams):
            self.rep = Representation.NONDIMENSIONAL
            self.base = _nondim_field(model)
            self.eps = (cfg.extinction_eps, cfg.extinction_eps)
        else:
            raise TypeError("model must be DimParams or NondimParams")

        if isinstance(s0, State):
            if s0.rep is not self.rep:
                raise RepresentationError(
                    f"initial state is {s0.rep.value} but the model is {self.rep.value}"
                )
            u0, v0 = s0.first, s0.second
        else:
            u0, v0 = float(s0[0]), float(s0[1])
        if u0 < 0.0 or v0 < 0.0:
            raise DomainError("initial state must be componentwise nonnegative")

        self.cfg = cfg
        self.t = 0.0
        self.u, self.v = u0, v0
        # components that start at zero are absent, not newly extinct
        self.pinned = [u0 == 0.0, v0 == 0.0]
        self.times = [0.0]
        self.samples = [(u0, v0)]
        self.events: list[Event] = []

    # masked field: pinned components hold exactly zero
    def f(self, u, v):
        if self.pinned[0]:
            u = 0.0
        if self.pinned[1]:
            v = 0.0
        du, dv = self.base(u, v)
        if self.pinned[0]:
            du = 0.0
        if self.pinned[1]:
            dv = 0.0
        return du, dv

    def _initial_step(self, du, dv) -> float:
        scale = 1.0 + max(abs(self.u), abs(self.v))
        rate = 1.0 + max(abs(du), abs(dv))
        h = 0.01 * scale / rate
        return min(h, self.cfg.max_step, self.cfg.t_max * 1e-3 + self.cfg.min_step)

    def _record(self):
        self.times.append(self.t)
        self.samples.append((self.u, self.v))

    def trajectory(self) -> Trajectory:
        states = np.array(self.samples, dtype=float)
        np.clip(states, 0.0, None, out=states)
        return Trajectory(
            times=np.array(self.times), states=states, rep=self.rep, events=list(self.events)
        )

    def run(self, t_eval=None, stop_condition=None) -> Trajectory:
        cfg = self.cfg
        f = self.f
        if t_eval is None:
            targets = deque()
        else:
            targets = deque(
                sorted(
                    min(float(t), cfg.t_max)
                    for t in np.asarray(t_eval, dtype=float).ravel()
                    if 0.0 < t <= cfg.t_max * (1.0 + 1e-12)
                )
            )

        du, dv = f(self.u, self.v)
        h = self._initial_step(du, dv)
        err_prev = 1.0
        k1u, k1v = du, dv

        if self.pinned[0] and self.pinned[1]:
            self.events.append(Event(self.t, EventKind.STEADY_STATE))
            return self.trajectory()

        while self.t < cfg.t_max - 1e-14:
            h = min(h, cfg.max_step, cfg.t_max - self.t)
            while targets and targets[0] <= self.t + 1e-14:
                targets.popleft()
            if targets and self.t + h > targets[0]:
                h = targets[0] - self.t

            u, v = self.u, self.v
            # six new stage evaluations; k1 is FSAL from the previous step
            k2u, k2v = f(u + h * _A21 * k1u, v + h * _A21 * k1v)
            k3u, k3v = f(
                u + h * (_A31 * k1u + _A32 * k2u), v + h * (_A31 * k1v + _A32 * k2v)
            )
            k4u, k4v = f(
                u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u),
                v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v),
            )
            k5u, k5v = f(
                u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u),
                v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v),
            )
            k6u, k6v = f(
                u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u + _A65 * k5u),
                v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v),
            )
            u5 = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B5 * k5u + _B6 * k6u)
            v5 = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
            k7u, k7v = f(u5, v5)

            eu = h * (
                _E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u + _E7 * k7u
            )
            ev = h * (
                _E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v
            )
            if math.isfinite(u5) and math.isfinite(v5):
                su = cfg.abs_tol + cfg.rel_tol * max(abs(u), abs(u5))
                sv = cfg.abs_tol + cfg.rel_tol * max(abs(v), abs(v5))
                err = math.sqrt(0.5 * ((eu / su) ** 2 + (ev / sv) ** 2))
            else:
                err = math.inf

            if err > 1.0:
                if h <= cfg.min_step * (1.0 + 1e-12):
                    raise StiffnessError(
                        f"step size underflow at t={self.t:.6g}", self.trajectory()
                    )
                shrink = _SAFETY * err ** (-0.2) if math.isfinite(err) else 0.1
                h = max(h * max(0.1, shrink), cfg.min_step)
                continue

            # PI step-size update based on this and the previous accepted error
            e_clip = max(err, 1e-10)
            fac = _SAFETY * e_clip ** (-_BETA1) * max(err_prev, 1e-10) ** _BETA2
            h_next = h * min(_FAC_MAX, max(_FAC_MIN, fac))
            err_prev = e_clip

            t_new = self.t + h
            pin_now, theta = self._detect_pinning(u, v, u5, v5, k7u, k7v)
            if pin_now:
                # truncate the step at the (interpolated) crossing
                t_ev = self.t + theta * h
                u_ev = u + theta * (u5 - u)
                v_ev = v + theta * (v5 - v)
                for i in pin_now:
                    self.pinned[i] = True
                if 0 in pin_now:
                    u_ev = 0.0
                if 1 in pin_now:
                    v_ev = 0.0
                self.t, self.u, self.v = max(t_ev, self.t + cfg.min_step), u_ev, v_ev
                kind = (
                    EventKind.EXTINCT_BOTH
                    if len(pin_now) == 2
                    else (EventKind.EXTINCT_Q if pin_now[0] == 0 else EventKind.EXTINCT_P)
                )
                self.events.append(Event(self.t, kind))
                self._record()
                k1u, k1v = f(self.u, self.v)
            else:
                self.t, self.u, self.v = t_new, u5, v5
                self._record()
                k1u, k1v = k7u, k7v
            h = max(h_next, cfg.min_step)

            if self.pinned[0] and self.pinned[1]:
                self.events.append(Event(self.t, EventKind.STEADY_STATE))
                return self.trajectory()
            if stop_condition is not None and stop_condition(
                self.t, self.u, self.v, k1u, k1v
            ):
                return self.trajectory()

        self.events.append(Event(self.t, EventKind.HORIZON_REACHED))
        return self.trajectory()

    def _detect_pinning(self, u0, v0, u1, v1, du1, dv1):
        """Which components went extinct during this step, and where.

        A component is pinned when it crossed zero, or sits below the
        extinction threshold with an outward (negative) derivative.
        Returns (indices, theta) with theta the earliest crossing
        fraction inside the step.
        """
        hits = []
        comps = ((0, u0, u1, du1), (1, v0, v1, dv1))
        for i, y0, y1, d1 in comps:
            if self.pinned[i]:
                continue
            if y1 <= 0.0:
                theta = y0 / (y0 - y1) if y0 > y1 else 1.0
                hits.append((max(theta, 0.0), i))
            elif y1 < self.eps[i] and d1 < 0.0:
                hits.append((1.0, i))
        if not hits:
            return (), 1.0
        hits.sort()
        theta0 = hits[0][0]
        # crossings at nearly the same instant count as one joint extinction
        idx = [i for th, i in hits if th <= theta0 + 0.05]
        return tuple(idx), theta0


def integrate(model, s0, cfg: IntegratorConfig | None = None, *, t_eval=None,
              stop_condition=None) -> Trajectory:
    """Integrate ``model`` from ``s0`` over [0, cfg.t_max].

    ``t_eval`` forces steps to land exactly on the given times (they
    appear among the samples; no interpolation error).  A
    ``stop_condition(t, u, v, du, dv)`` callback ends the run early.
    """
    cfg = cfg or IntegratorConfig()
    return _Run(model, s0, cfg).run(t_eval=t_eval, stop_condition=stop_condition)


def settle(model, s0, cfg: IntegratorConfig | None = None):
    """Run to steady state.

    Returns ``(state, settled)``: ``settled`` is True once the field norm
    drops below abs_tol and the state has drifted less than
    rel_tol * |state| over the trailing 10% of the elapsed window;
    False if the horizon is reached first (e.g. on a limit cycle).

    abs_tol doubles as the steady-state field threshold, so the default
    config here uses 1e-7: the discrete flow stalls within
    O(rel_tol * |state|) of the true equilibrium and tighter thresholds
    are unreachable in double precision.
    """
    cfg = cfg or IntegratorConfig(abs_tol=1e-7)
    window: deque[tuple[float, float, float]] = deque()
    hit = {"ok": False}

    def stop(t, u, v, du, dv):
        window.append((t, u, v))
        while window and window[0][0] < 0.9 * t:
            window.popleft()
        if max(abs(du), abs(dv)) >= cfg.abs_tol:
            return False
        drift = max(
            max(abs(u - wu), abs(v - wv)) for _, wu, wv in window
        )
        if drift <= cfg.rel_tol * max(abs(u), abs(v)) + cfg.abs_tol:
            hit["ok"] = True
            return True
        return False

    traj = integrate(model, s0, cfg, stop_condition=stop)
    settled = hit["ok"] or traj.has_event(EventKind.STEADY_STATE)
    return traj.final_state(), settled


class OscillationKind(str, Enum):
    DAMPED = "Damped"
    SUSTAINED = "Sustained"
    NONE = "None"


@dataclass(frozen=True)
class OscillationReport:
    kind: OscillationKind
    period: float
    amplitude: float  # mean peak-to-trough excursion of the first component
    n_extrema: int = 0


def _refine_extremum(t0, t1, t2, y0, y1, y2):
    # parabola through three samples; vertex location and value
    denom = (t1 - t0) * (t2 - t1) * (t2 - t0)
    if denom == 0.0:
        return t1, y1
    a = (y2 * (t1 - t0) - y1 * (t2 - t0) + y0 * (t2 - t1)) / denom
    if a == 0.0:
        return t1, y1
    b = (y1 - y0) / (t1 - t0) - a * (t0 + t1)
    tv = -b / (2.0 * a)
    if not (t0 <= tv <= t2):
        return t1, y1
    c = y1 - a * t1 * t1 - b * t1
    return tv, a * tv * tv + b * tv + c


def detect_oscillation(traj: Trajectory, *, delta: float = 0.02,
                       transient_fraction: float = 0.5) -> OscillationReport:
    """Classify a trajectory's first component as sustained/damped/none.

    The first ``transient_fraction`` of the time window is discarded.
    Successive cycle amplitudes within ``1 +/- delta`` of each other mean
    a sustained oscillation; a clear monotone decay means damped; too few
    extrema (fewer than 10) or flat noise means none.
    """
    t = traj.times
    y = traj.states[:, 0]
    if len(t) < 8:
        return OscillationReport(OscillationKind.NONE, math.nan, 0.0, 0)
    t_cut = t[0] + transient_fraction * (t[-1] - t[0])
    start = int(np.searchsorted(t, t_cut))
    t, y = t[start:], y[start:]
    if len(t) < 8:
        return OscillationReport(OscillationKind.NONE, math.nan, 0.0, 0)

    maxima, minima = [], []
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] >= y[i + 1]:
            maxima.append(_refine_extremum(t[i - 1], t[i], t[i + 1], y[i - 1], y[i], y[i + 1]))
        elif y[i] < y[i - 1] and y[i] <= y[i + 1]:
            minima.append(_refine_extremum(t[i - 1], t[i], t[i + 1], y[i - 1], y[i], y[i + 1]))
    n_extrema = len(maxima) + len(minima)
    if len(maxima) < 3 or n_extrema < 10:
        return OscillationReport(OscillationKind.NONE, math.nan, 0.0, n_extrema)

    peak_t = np.array([pt for pt, _ in maxima])
    peak_y = np.array([py for _, py in maxima])
    trough_y = np.array([py for _, py in minima])
    n = min(len(peak_y), len(trough_y))
    amps = np.abs(peak_y[:n] - trough_y[:n])
    floor = 1e-9 * (1.0 + float(np.mean(np.abs(y))))
    valid = amps > floor
    if valid.sum() < 3:
        return OscillationReport(OscillationKind.NONE, math.nan, 0.0, n_extrema)
    amps = amps[valid]
    ratios = amps[1:] / amps[:-1]
    period = float(np.mean(np.diff(peak_t)))
    amplitude = float(np.mean(amps))

    if np.all(np.abs(ratios - 1.0) <= delta):
        return OscillationReport(OscillationKind.SUSTAINED, period, amplitude, n_extrema)
    if amps[-1] < (1.0 - delta) * amps[0] and np.median(ratios) < 1.0:
        return OscillationReport(OscillationKind.DAMPED, period, amplitude, n_extrema)
    return OscillationReport(OscillationKind.NONE, period, amplitude, n_extrema)
