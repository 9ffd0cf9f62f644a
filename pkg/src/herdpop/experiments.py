"""Figure-level experiments: basin maps, model comparisons, cycle probes.

Basin maps target the herd competition system, whose phase plane can be
partitioned among up to three attractors (each single-survivor state plus
stable coexistence), with a fourth outcome, joint collapse, when the
origin's attracting cone m/p < sqrt(Q/P) < q/r is nonempty.

A cell's label records the ecological outcome.  When a population goes
extinct along the trajectory, the cell is classified by the system state
at that first extinction, measured in carrying-capacity units: a crash
that annihilates one population while the other holds near its capacity
is competitive exclusion, while a joint crash that leaves the survivor
at a small fraction of capacity is ecosystem collapse (Origin).  The
deterministic model would regrow the surviving remnant logistically, and
the integrator does exactly that after the event, but the basin label
deliberately reflects the collapse rather than the regrown end state;
under strict settle-to-attractor labelling the origin basin of the
competition system has measure zero and the joint-collapse phenomenology
would be invisible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import _grid
from .equilibria import (
    Classification,
    Equilibrium,
    EquilibriumKind,
    boundary_equilibria,
    classical_coexistence,
    comp_coexistence,
    coexistence_equilibria,
)
from .families import (
    DimParams,
    DomainError,
    Family,
    NondimParams,
    Representation,
    State,
    to_nondim,
)
from .integrate import (
    EventKind,
    IntegratorConfig,
    OscillationKind,
    OscillationReport,
    Trajectory,
    detect_oscillation,
    integrate,
    settle,
)

__all__ = [
    "BasinLabel",
    "BasinGrid",
    "BasinMap",
    "basin_map",
    "ComparisonResult",
    "compare_models",
    "COMPARISON_SCENARIOS",
    "LimitCycleResult",
    "limit_cycle_experiment",
    "default_initial_state",
]

ATTRACTOR_RADIUS = 1e-3  # in carrying-capacity units


class BasinLabel(IntEnum):
    UNDECIDED = 0
    AXIS_Q = 1
    AXIS_P = 2
    COEXISTENCE = 3
    ORIGIN = 4

    @property
    def tag(self) -> str:
        return {0: "Undecided", 1: "AxisQ", 2: "AxisP",
                3: "Coexistence", 4: "Origin"}[int(self)]


@dataclass(frozen=True)
class BasinGrid:
    """Rectangular grid of dimensional initial conditions."""

    q_lo: float
    q_hi: float
    p_lo: float
    p_hi: float
    nq: int
    npp: int

    def __post_init__(self):
        if not (0.0 <= self.q_lo < self.q_hi and 0.0 <= self.p_lo < self.p_hi):
            raise DomainError("grid ranges must be nonnegative and increasing")
        if self.nq < 2 or self.npp < 2:
            raise DomainError("grid needs at least 2 points per axis")

    def q_values(self) -> np.ndarray:
        return np.linspace(self.q_lo, self.q_hi, self.nq)

    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_lo, self.p_hi, self.npp)

    @staticmethod
    def default_for(params: DimParams, n: int = 200) -> "BasinGrid":
        kp = params.k_p if params.k_p is not None else params.k_q
        return BasinGrid(0.0, 1.2 * params.k_q, 0.0, 1.2 * kp, n, n)


@dataclass
class BasinMap:
    params: DimParams
    grid: BasinGrid
    labels: np.ndarray  # (nq, npp) int8 of BasinLabel codes
    attractors: list[tuple[BasinLabel, Equilibrium]]
    t_max: float

    def counts(self) -> dict[str, int]:
        out = {}
        for lab in BasinLabel:
            n = int((self.labels == int(lab)).sum())
            if n:
                out[lab.tag] = n
        return out

    def label_tags_present(self, *, exclude_undecided=True) -> set[str]:
        present = {BasinLabel(int(v)).tag for v in np.unique(self.labels)}
        if exclude_undecided:
            present.discard("Undecided")
        return present

    def dominant_label(self) -> str:
        vals, counts = np.unique(self.labels, return_counts=True)
        return BasinLabel(int(vals[np.argmax(counts)])).tag

    def to_csv(self, path) -> None:
        qs, ps = self.grid.q_values(), self.grid.p_values()
        with open(path, "w") as fh:
            fh.write("Q0,P0,label\n")
            for i, qv in enumerate(qs):
                for j, pv in enumerate(ps):
                    fh.write(f"{qv!r},{pv!r},{BasinLabel(int(self.labels[i, j])).tag}\n")

    def attractors_payload(self) -> list[dict]:
        out = []
        for lab, eq in self.attractors:
            d = eq.to_payload()
            d["label"] = lab.tag
            d["representation"] = eq.rep.value
            out.append(d)
        return out


def _comp_attractors(params: DimParams, nd: NondimParams):
    """Stable attractors plus (conditionally) the collapse origin.

    Returns (list of (label, Equilibrium), normalized coordinates array,
    label codes array).  Coordinates are in carrying-capacity units
    (Q/K_Q, P/K_P).
    """
    bdry = {eq.kind: eq for eq in boundary_equilibria(params)}
    attractors = [
        (BasinLabel.AXIS_Q, bdry[EquilibriumKind.AXIS_Q]),
        (BasinLabel.AXIS_P, bdry[EquilibriumKind.AXIS_P]),
    ]
    coords = [(1.0, 0.0), (0.0, 1.0)]
    for eq in comp_coexistence(nd.a, nd.b, nd.c):
        if eq.stable:
            x, y = eq.location
            attractors.append((BasinLabel.COEXISTENCE, eq))
            coords.append((x * x, y * y))
    collapse_cone = nd.a > nd.b * nd.c
    if collapse_cone:
        attractors.append((BasinLabel.ORIGIN, bdry[EquilibriumKind.ORIGIN]))
        coords.append((0.0, 0.0))
    codes = np.array([int(lab) for lab, _ in attractors], dtype=np.int8)
    return attractors, np.array(coords), codes


def basin_map(params: DimParams, grid: BasinGrid | None = None, *,
              t_max: float = 500.0, extinction_eps: float = 1e-9) -> BasinMap:
    """Basin-of-attraction map of the herd competition system.

    Each grid cell is integrated (in rescaled coordinates, where the
    field is polynomial) until it is captured by an attractor, a
    population dies, or the horizon ``t_max`` (rescaled time) runs out.
    See the module docstring for how extinction events are labelled.
    """
    if params.family is not Family.COMP_HERD:
        raise DomainError("basin_map supports the comp_herd family")
    nd = to_nondim(params)
    grid = grid or BasinGrid.default_for(params)
    attractors, att_coords, att_codes = _comp_attractors(params, nd)

    qs, ps = grid.q_values(), grid.p_values()
    qq, pp = np.meshgrid(qs, ps, indexing="ij")
    kq = params.k_q
    kp = params.k_p
    x0 = np.sqrt(qq.ravel() / kq)
    y0 = np.sqrt(pp.ravel() / kp)

    a, b, c = nd.a, nd.b, nd.c
    fld = _grid.comp_field(a, b, c)
    dt = float(_grid.stable_step(max(3.0 * b + 1.0, 3.0 * c + a)))
    eps_x = math.sqrt(extinction_eps)  # X = sqrt(Q/K): population eps maps to sqrt
    r2 = ATTRACTOR_RADIUS ** 2

    event_sentinel = 101
    born_pinned = (x0 <= 0.0) | (y0 <= 0.0)

    def classify(x, y, px, py, idx):
        lab = np.zeros(x.size, np.int8)
        # an extinction event already fixes the label; stop integrating
        # (populations absent from the start are not events)
        lab[(px | py) & ~born_pinned[idx]] = event_sentinel
        u, v = x * x, y * y
        for code, (ua, va) in zip(att_codes, att_coords):
            if code == int(BasinLabel.ORIGIN):
                continue
            hit = (u - ua) ** 2 + (v - va) ** 2 < r2
            lab[hit & (lab == 0)] = code
        return lab

    out = _grid.run_cells(fld, x0, y0, dt=dt, t_max=t_max, eps=eps_x,
                          classify_fn=classify)

    n = x0.size
    labels = np.zeros(n, np.int8)
    # live captures
    captured = (out.label > 0) & (out.label != event_sentinel)
    labels[captured] = out.label[captured]

    # cells whose trajectory lost a population: classify at the event state
    has_event = out.event_kind != _grid.EV_NONE
    if has_event.any():
        eu = out.event_x[has_event] ** 2
        ev = out.event_y[has_event] ** 2
        d2 = (eu[:, None] - att_coords[None, :, 0]) ** 2 + \
             (ev[:, None] - att_coords[None, :, 1]) ** 2
        labels[has_event] = att_codes[np.argmin(d2, axis=1)]

    # started on the axes (no event): label by terminal state if captured
    rest = labels == 0
    if rest.any():
        u = out.x[rest] ** 2
        v = out.y[rest] ** 2
        d2 = (u[:, None] - att_coords[None, :, 0]) ** 2 + \
             (v[:, None] - att_coords[None, :, 1]) ** 2
        j = np.argmin(d2, axis=1)
        near = d2[np.arange(j.size), j] < r2
        sub = labels[rest]
        sub[near] = att_codes[j[near]]
        labels[rest] = sub

    return BasinMap(params, grid, labels.reshape(grid.nq, grid.npp),
                    attractors, t_max)


# ---------------------------------------------------------------------------
# herd-vs-classical comparisons

COMPARISON_SCENARIOS = {
    "symb": (Family.SYMB_HERD, Family.SYMB_CLASSIC),
    "comp": (Family.COMP_HERD, Family.COMP_CLASSIC),
    "pp": (Family.PP_PACK_HERD, Family.PP_CLASSIC),
}

_SCENARIO_DEFAULTS = {
    "symb": dict(r=3.0, m=3.0, p=0.5, q=0.3, k_q=6.0, k_p=7.0),
    "comp": dict(r=0.8, m=0.5, p=0.05, q=0.07, k_q=7.0, k_p=10.0),
    "pp": dict(r=0.76, m=0.2999, p=0.297, q=0.607, k_q=12.0, k_p=None),
}


def default_initial_state(params: DimParams) -> tuple[float, float]:
    """Shared default start for figure scenarios: 10% of each capacity."""
    kp = params.k_p if params.k_p is not None else params.k_q
    return 0.1 * params.k_q, 0.1 * kp


@dataclass
class ComparisonResult:
    scenario: str
    herd_params: DimParams
    classical_params: DimParams
    s0: tuple[float, float]
    herd_terminal: State
    herd_settled: bool
    classical_terminal: State | None
    classical_settled: bool
    classical_unbounded: bool
    herd_trajectory: Trajectory | None = None
    classical_trajectory: Trajectory | None = None

    def verdict(self) -> dict[str, str]:
        """Which model ends with the larger population, per component."""
        if self.classical_terminal is None:
            return {"Q": "classical unbounded", "P": "classical unbounded"}
        out = {}
        for name, h, c in (
            ("Q", self.herd_terminal.first, self.classical_terminal.first),
            ("P", self.herd_terminal.second, self.classical_terminal.second),
        ):
            scale = max(abs(h), abs(c), 1.0)
            if abs(h - c) <= 1e-6 * scale:
                out[name] = "tie"
            else:
                out[name] = "herd" if h > c else "classical"
        return out

    def to_payload(self) -> dict:
        def st(s):
            return None if s is None else [s.first, s.second]

        return {
            "scenario": self.scenario,
            "initial_state": list(self.s0),
            "herd_terminal": st(self.herd_terminal),
            "herd_settled": self.herd_settled,
            "classical_terminal": st(self.classical_terminal),
            "classical_settled": self.classical_settled,
            "classical_unbounded": self.classical_unbounded,
            "verdict": self.verdict(),
        }


def compare_models(scenario: str, params: dict | None = None,
                   s0: tuple[float, float] | None = None,
                   cfg: IntegratorConfig | None = None,
                   *, keep_trajectories: bool = True) -> ComparisonResult:
    """Run a herd family and its classical counterpart from the same start.

    ``params`` carries the shared dimensional parameters (defaults are
    the bundled scenario values).  Classical symbiosis with
    r m <= p q K_P K_Q has no interior equilibrium and grows without
    bound; in that case only the herd side is run.
    """
    if scenario not in COMPARISON_SCENARIOS:
        raise DomainError(f"unknown comparison scenario {scenario!r}; "
                          f"choose from {sorted(COMPARISON_SCENARIOS)}")
    herd_fam, classic_fam = COMPARISON_SCENARIOS[scenario]
    vals = dict(_SCENARIO_DEFAULTS[scenario])
    if params:
        vals.update(params)
    herd = DimParams(herd_fam, **vals)
    classic = DimParams(classic_fam, **vals)
    if s0 is None:
        s0 = default_initial_state(herd)
    cfg = cfg or IntegratorConfig(abs_tol=1e-7)

    herd_traj = integrate(herd, s0, cfg) if keep_trajectories else None
    herd_term, herd_ok = settle(herd, s0, cfg)

    unbounded = False
    if classic_fam is Family.SYMB_CLASSIC:
        unbounded = not classical_coexistence(classic).feasible
    if unbounded:
        return ComparisonResult(scenario, herd, classic, tuple(s0),
                                herd_term, herd_ok, None, False, True,
                                herd_traj, None)
    classic_traj = integrate(classic, s0, cfg) if keep_trajectories else None
    classic_term, classic_ok = settle(classic, s0, cfg)
    return ComparisonResult(scenario, herd, classic, tuple(s0),
                            herd_term, herd_ok, classic_term, classic_ok,
                            False, herd_traj, classic_traj)


# ---------------------------------------------------------------------------
# oscillation probe for the pack-pack predator-prey system


@dataclass
class LimitCycleResult:
    params: DimParams | NondimParams
    s0: tuple[float, float]
    report: OscillationReport
    trajectory: Trajectory
    cycle_times: np.ndarray | None = None
    cycle_states: np.ndarray | None = None

    def encircles(self, point) -> bool:
        """Did the last emitted cycle wind around ``point``?"""
        if self.cycle_states is None or len(self.cycle_states) < 8:
            return False
        dx = self.cycle_states[:, 0] - point[0]
        dy = self.cycle_states[:, 1] - point[1]
        ang = np.unwrap(np.arctan2(dy, dx))
        return abs(ang[-1] - ang[0]) > 1.75 * math.pi


def limit_cycle_experiment(params, s0=None, horizon: float | None = None,
                           cfg: IntegratorConfig | None = None) -> LimitCycleResult:
    """Integrate the pack-pack system and characterize its oscillation.

    Emits one period of samples when the verdict is sustained or a
    damped oscillation near the stability threshold (where transients
    are indistinguishable from cycles at finite horizons).
    """
    if isinstance(params, DimParams):
        if params.family is not Family.PP_PACK_HERD:
            raise DomainError("limit_cycle_experiment expects the pack-pack family")
        eqs = coexistence_equilibria(params)
        nd = to_nondim(params)
        center = eqs[0]
        if s0 is None:
            # a small radial offset from coexistence keeps the probe inside
            # the oscillatory neighbourhood
            cx, cy = nd.scale.inverse(*center.location)
            s0 = (1.05 * cx, 0.95 * cy)
        if horizon is None:
            # 400 rescaled time units, expressed in dimensional time
            horizon = 400.0 / nd.scale.time_coef
    elif isinstance(params, NondimParams):
        if params.family is not Family.PP_PACK_HERD:
            raise DomainError("limit_cycle_experiment expects the pack-pack family")
        from .equilibria import pp2_coexistence

        center = pp2_coexistence(params.e, params.f)
        if s0 is None:
            if not center.feasible:
                raise DomainError("no feasible coexistence to probe; pass s0")
            s0 = (1.05 * center.location[0], 0.95 * center.location[1])
        if horizon is None:
            horizon = 400.0
    else:
        raise TypeError("params must be DimParams or NondimParams")

    cfg = cfg or IntegratorConfig()
    run_cfg = IntegratorConfig(
        rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol, max_step=cfg.max_step,
        min_step=cfg.min_step, extinction_eps=cfg.extinction_eps,
        t_max=float(horizon),
    )
    traj = integrate(params, s0, run_cfg)
    report = detect_oscillation(traj)

    cycle_t = cycle_s = None
    if report.period == report.period and report.kind in (
        OscillationKind.SUSTAINED, OscillationKind.DAMPED
    ):
        t_end = traj.times[-1]
        sel = traj.times >= t_end - report.period
        if sel.sum() >= 8:
            cycle_t = traj.times[sel].copy()
            cycle_s = traj.states[sel].copy()
    return LimitCycleResult(params, tuple(float(v) for v in s0), report, traj,
                            cycle_t, cycle_s)
