"""Regime classification, bifurcation thresholds and extinction predicates.

For the pack-pack predator-prey family the (e, f) plane splits into the
rows of the summary table: the origin is stable iff 2f > e and e < 1/2;
coexistence exists iff e >= 2f, exchanging stability with the origin at
the transcritical value e* = 2f, and loses stability across the Hopf
value e^ = 3f - 1/4 (for e > 1/2).  Inside the band 2f < e < 3f - 1/4
both the origin and coexistence are unstable; growing oscillations end
in finite-time prey extinction (see ``extinction_set`` for the explicit
initial-condition set and its collapse-time bound).

Threshold comparisons run in exact rational arithmetic when the inputs
arrive as int/str/Fraction/Decimal, and within a 1e-12 band for floats;
figure-caption parameter values sit exactly on some thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from fractions import Fraction

import numpy as np

from . import _grid
from .families import DimParams, DomainError, Family, NondimParams
from .equilibria import comp_coexistence

__all__ = [
    "Pp2Regime",
    "CompRegime",
    "BifurcationKind",
    "BifurcationDistance",
    "RegimeReport",
    "ExtinctionVerdict",
    "pp2_regime",
    "comp_regime",
    "origin_collapse_predicate",
    "extinction_set",
    "AxisSpec",
    "SweepResult",
    "sweep",
    "NUMERIC_COLLAPSE",
    "NUMERIC_COEXIST",
    "NUMERIC_OSCILLATING",
    "NUMERIC_UNDECIDED",
]


class Pp2Regime(str, Enum):
    ORIGIN_STABLE_COEXIST_INFEASIBLE = "OriginStable_CoexistInfeasible"
    TRANSCRITICAL_POINT = "TranscriticalPoint"
    COEXIST_STABLE_LOW_E = "CoexistStable_LowE"
    COEXIST_STABLE_HIGH_E = "CoexistStable_HighE"
    HOPF_POINT = "HopfPoint"
    COEXIST_UNSTABLE_BAND = "CoexistUnstable_Band"
    COEXIST_INFEASIBLE_ORIGIN_UNSTABLE = "CoexistInfeasible_OriginUnstable"


class CompRegime(str, Enum):
    NO_COEXISTENCE_COLLAPSE = "NoCoexistence_CollapseBand"
    SINGLE_COEXISTENCE = "SingleCoexistence"
    TRIPLE_COEXISTENCE = "TripleCoexistence"
    FEASIBILITY_BOUNDARY = "FeasibilityBoundary"


class BifurcationKind(str, Enum):
    TRANSCRITICAL = "Transcritical"
    HOPF = "Hopf"
    PITCHFORK = "Pitchfork"


@dataclass(frozen=True)
class BifurcationDistance:
    kind: BifurcationKind
    threshold: float
    distance: float  # signed; see the regime notes for orientation

    def to_payload(self) -> dict:
        return {"kind": self.kind.value, "threshold": self.threshold,
                "distance": self.distance}


@dataclass(frozen=True)
class RegimeReport:
    params: dict
    regime: Enum
    bifurcations: tuple[BifurcationDistance, ...]
    notes: tuple[str, ...] = ()

    def to_payload(self) -> dict:
        return {
            "params": self.params,
            "regime": self.regime.value,
            "bifurcations": [b.to_payload() for b in self.bifurcations],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class ExtinctionVerdict:
    in_xi: bool
    tau_star: float | None = None

    def to_payload(self) -> dict:
        return {"in_xi": self.in_xi, "tau_star": self.tau_star}


def _exact(v):
    """Fraction for exact inputs, None for floats."""
    if isinstance(v, bool):
        return None
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, (str, Decimal)):
        return Fraction(v)
    return None


_BAND = 1e-12
_HOPF_BAND = 0.02  # finite-horizon indistinguishability window around e^


def pp2_regime(e, f, *, hopf_band: float = _HOPF_BAND) -> RegimeReport:
    """Exactly one row of the pack-pack (e, f) regime table.

    Points within ``hopf_band`` of e^ = 3f - 1/4 (with e > 1/2 and
    feasible coexistence) are reported as the Hopf row: that close to the
    threshold, transients and cycles are indistinguishable at finite
    horizons.
    """
    ee, ff = _exact(e), _exact(f)
    e_f, f_f = float(e), float(f)
    if e_f < 0.0 or f_f < 0.0:
        raise DomainError("pp2_regime requires e, f >= 0")

    e_star = 2.0 * f_f
    e_dagger = 3.0 * f_f - 0.25
    d_tc = e_f - e_star
    d_hopf = e_f - e_dagger
    bifs = (
        BifurcationDistance(BifurcationKind.TRANSCRITICAL, e_star, d_tc),
        BifurcationDistance(BifurcationKind.HOPF, e_dagger, d_hopf),
    )

    if ee is not None and ff is not None:
        at_tc = ee == 2 * ff
        half = Fraction(1, 2)
        below_half = ee < half
        feasible = ee > 2 * ff
    else:
        at_tc = abs(d_tc) <= _BAND
        below_half = e_f < 0.5
        feasible = d_tc > _BAND

    if at_tc:
        return RegimeReport(
            {"e": e_f, "f": f_f}, Pp2Regime.TRANSCRITICAL_POINT, bifs,
            ("coexistence emanates from the origin at e* = 2f",),
        )
    if feasible and not below_half and abs(d_hopf) < hopf_band:
        return RegimeReport(
            {"e": e_f, "f": f_f}, Pp2Regime.HOPF_POINT, bifs,
            ("within the near-threshold window of e^ = 3f - 1/4",),
        )
    if not feasible:
        if below_half:
            return RegimeReport(
                {"e": e_f, "f": f_f},
                Pp2Regime.ORIGIN_STABLE_COEXIST_INFEASIBLE, bifs,
                ("origin stable: 2f > e and e < 1/2",),
            )
        return RegimeReport(
            {"e": e_f, "f": f_f},
            Pp2Regime.COEXIST_INFEASIBLE_ORIGIN_UNSTABLE, bifs,
            ("no interior equilibrium and the origin is unstable; "
             "trajectories collapse through finite-time prey extinction",),
        )
    if below_half:
        return RegimeReport(
            {"e": e_f, "f": f_f}, Pp2Regime.COEXIST_STABLE_LOW_E, bifs,
            ("2f < e < 1/2 forces a negative trace at coexistence",),
        )
    if d_hopf > 0.0:
        return RegimeReport(
            {"e": e_f, "f": f_f}, Pp2Regime.COEXIST_STABLE_HIGH_E, bifs,
            ("e > max(1/2, 3f - 1/4)",),
        )
    return RegimeReport(
        {"e": e_f, "f": f_f}, Pp2Regime.COEXIST_UNSTABLE_BAND, bifs,
        ("2f < e < 3f - 1/4: coexistence unstable; oscillations grow "
         "until finite-time prey extinction",),
    )


def comp_regime(a: float, b: float, c: float) -> RegimeReport:
    """Coexistence structure of the herd competition system at (a, b, c).

    a > b*c: no interior equilibrium and the origin attracts a cone of
    directions (joint collapse).  a < b*c: one or three interior
    equilibria; the count changes through a subcritical pitchfork where
    two of them merge.
    """
    if not (a > 0 and b > 0 and c > 0):
        raise DomainError("comp_regime requires a, b, c > 0")
    feas = BifurcationDistance(BifurcationKind.TRANSCRITICAL, b * c, b * c - a)
    if abs(a - b * c) <= _BAND * max(1.0, a):
        return RegimeReport({"a": a, "b": b, "c": c},
                            CompRegime.FEASIBILITY_BOUNDARY, (feas,),
                            ("a = b*c exactly: treated as infeasible",))
    if a > b * c:
        return RegimeReport({"a": a, "b": b, "c": c},
                            CompRegime.NO_COEXISTENCE_COLLAPSE, (feas,),
                            ("a > b*c: joint collapse cone at the origin",))
    eqs = comp_coexistence(a, b, c)
    if len(eqs) == 3:
        sep = min(eqs[1].location[0] - eqs[0].location[0],
                  eqs[2].location[0] - eqs[1].location[0])
        bifs = (feas, BifurcationDistance(BifurcationKind.PITCHFORK, math.nan, sep))
        return RegimeReport({"a": a, "b": b, "c": c},
                            CompRegime.TRIPLE_COEXISTENCE, bifs,
                            ("tristability: two exclusion states plus stable "
                             "coexistence",))
    return RegimeReport({"a": a, "b": b, "c": c},
                        CompRegime.SINGLE_COEXISTENCE, (feas,),
                        ("unique interior equilibrium (unstable): "
                         "competitive exclusion",))


def origin_collapse_predicate(family: Family, state, params: DimParams) -> bool:
    """Does the near-origin flow point inward along this state's direction?

    Competition collapses along directions with m/p < sqrt(Q/P) < q/r;
    the pack-pack predator-prey model along sqrt(Q/P) < min(m/p, q/r).
    Symbiosis and the pack-individualistic model never collapse jointly,
    nor do the classical families.
    """
    u, v = float(state[0]), float(state[1])
    if not (u > 0.0 and v > 0.0):
        raise DomainError("the predicate needs strictly positive components")
    ratio = math.sqrt(u / v)
    m, p, q, r = params.m, params.p, params.q, params.r
    if family is Family.COMP_HERD:
        lo = m / p if p > 0 else math.inf
        hi = q / r if r > 0 else math.inf
        return lo < ratio < hi
    if family is Family.PP_PACK_HERD:
        lo1 = m / p if p > 0 else math.inf
        lo2 = q / r if r > 0 else math.inf
        return ratio < min(lo1, lo2)
    return False


def extinction_set(params: DimParams, s0) -> ExtinctionVerdict:
    """Membership in the finite-time prey-extinction set, with time bound.

    For the pack-pack predator-prey model, initial conditions with
    P0 > Q0 (m+r)^2 / q^2 drive the prey to zero no later than

        tau* = -(2/(m+r)) * ln(1 - (m+r) sqrt(Q0) / (q sqrt(P0)))

    (the zero of the comparison solution's integrating factor; for
    m + r = 0 the limit 2 sqrt(Q0)/(q sqrt(P0)) applies).
    """
    if params.family is not Family.PP_PACK_HERD:
        raise DomainError("the extinction set applies to the pack-pack family")
    q0, p0 = float(s0[0]), float(s0[1])
    if not (q0 > 0.0 and p0 > 0.0):
        raise DomainError("extinction_set needs strictly positive components")
    q = params.q
    if q <= 0.0:
        return ExtinctionVerdict(False)
    mr = params.m + params.r
    # membership and the bound share one expression so the boundary is
    # consistently excluded: in Xi iff (m+r) sqrt(Q0) / (q sqrt(P0)) < 1
    ratio = mr * math.sqrt(q0) / (q * math.sqrt(p0))
    if ratio >= 1.0:
        return ExtinctionVerdict(False)
    if mr == 0.0:
        tau = 2.0 * math.sqrt(q0) / (q * math.sqrt(p0))
    else:
        tau = -(2.0 / mr) * math.log(1.0 - ratio)
    return ExtinctionVerdict(True, tau)


# ---------------------------------------------------------------------------
# parameter sweeps

NUMERIC_UNDECIDED = "Undecided"
NUMERIC_COLLAPSE = "Collapse"
NUMERIC_COEXIST = "CoexistStable"
NUMERIC_OSCILLATING = "Oscillating"

# expected simulation outcome per analytic row (boundary rows excluded)
_EXPECTED_OUTCOME = {
    Pp2Regime.ORIGIN_STABLE_COEXIST_INFEASIBLE: NUMERIC_COLLAPSE,
    Pp2Regime.COEXIST_INFEASIBLE_ORIGIN_UNSTABLE: NUMERIC_COLLAPSE,
    Pp2Regime.COEXIST_STABLE_LOW_E: NUMERIC_COEXIST,
    Pp2Regime.COEXIST_STABLE_HIGH_E: NUMERIC_COEXIST,
    Pp2Regime.COEXIST_UNSTABLE_BAND: NUMERIC_COLLAPSE,
}


@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("axis needs n >= 1")
        if self.lo < 0 or self.hi < self.lo:
            raise DomainError("axis range must satisfy 0 <= lo <= hi")

    def values(self) -> np.ndarray:
        if self.n == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.n)


@dataclass
class SweepResult:
    """Regime reports (analytic) and/or outcome labels (numeric) per cell.

    Cell [i, j] pairs axis1.values()[i] with axis2.values()[j].
    """

    family: Family
    axis1: AxisSpec
    axis2: AxisSpec
    mode: str
    analytic: np.ndarray | None = None   # object array of RegimeReport
    numeric: np.ndarray | None = None    # object array of outcome strings
    start: tuple[float, float] | None = None

    def expected_outcome(self, report: RegimeReport):
        """Analytic prediction of the simulation outcome from ``start``.

        The regime row decides, except that a start inside the
        finite-time prey-extinction set (Y0 > X0 (1/2 + e) in rescaled
        coordinates) collapses regardless of the interior equilibrium's
        local stability.
        """
        if report.regime not in _EXPECTED_OUTCOME:
            return None
        if self.start is not None:
            x0, y0 = self.start
            if y0 > x0 * (0.5 + report.params["e"]):
                return NUMERIC_COLLAPSE
        return _EXPECTED_OUTCOME[report.regime]

    def agreement(self) -> float:
        """Fraction of analytic-vs-numeric matches away from thresholds.

        Cells within one grid cell of the transcritical or Hopf curve
        (or on a boundary row) are excluded from the statistic.
        """
        if self.analytic is None or self.numeric is None:
            raise ValueError("agreement needs both analytic and numeric grids")
        n1, n2 = self.analytic.shape
        v1 = self.axis1.values()
        v2 = self.axis2.values()
        step1 = v1[1] - v1[0] if len(v1) > 1 else 0.0
        step2 = v2[1] - v2[0] if len(v2) > 1 else 0.0
        total = matches = 0
        for i in range(n1):
            for j in range(n2):
                rep = self.analytic[i, j]
                expected = self.expected_outcome(rep)
                if expected is None:
                    continue
                # distance to each threshold curve, in cell units
                near = False
                for bd in rep.bifurcations:
                    if bd.kind is BifurcationKind.HOPF and rep.params["e"] <= 0.5:
                        continue
                    scale = abs(step1) * _d_threshold_d_axis(bd.kind, self.axis1.name) \
                        + abs(step2) * _d_threshold_d_axis(bd.kind, self.axis2.name)
                    if abs(bd.distance) <= max(scale, 1e-12):
                        near = True
                if near:
                    continue
                total += 1
                if self.numeric[i, j] == expected:
                    matches += 1
        return matches / total if total else 1.0


def _d_threshold_d_axis(kind: BifurcationKind, axis_name: str) -> float:
    # |d(distance)/d(axis)| for distance = e - 2f or e - (3f - 1/4)
    if axis_name == "e":
        return 1.0
    if axis_name == "f":
        return 2.0 if kind is BifurcationKind.TRANSCRITICAL else 3.0
    return 0.0


def sweep(family: Family, axis1: AxisSpec, axis2: AxisSpec,
          mode: str = "analytic", *, start: tuple[float, float] = (0.5, 0.5),
          t_max: float = 400.0) -> SweepResult:
    """Classify a 2-D parameter grid analytically, numerically or both.

    Only the pack-pack predator-prey family is supported (axes "e"/"f").
    Analytic mode evaluates the regime table per cell.  Numeric mode
    integrates the rescaled field from ``start`` and labels each cell
    Collapse (prey extinction / origin), CoexistStable (captured at the
    interior equilibrium) or Oscillating (no verdict by the horizon).
    """
    if family is not Family.PP_PACK_HERD:
        raise DomainError("sweep supports the pp_pack_herd family")
    if {axis1.name, axis2.name} != {"e", "f"}:
        raise DomainError("axes must be 'e' and 'f'")
    if mode not in ("analytic", "numeric", "both"):
        raise DomainError(f"unknown sweep mode {mode!r}")

    res = SweepResult(family, axis1, axis2, mode, start=start)
    v1, v2 = axis1.values(), axis2.values()
    g1, g2 = np.meshgrid(v1, v2, indexing="ij")
    e_grid = g1 if axis1.name == "e" else g2
    f_grid = g2 if axis1.name == "e" else g1

    if mode in ("analytic", "both"):
        out = np.empty(g1.shape, dtype=object)
        for i in range(g1.shape[0]):
            for j in range(g1.shape[1]):
                out[i, j] = pp2_regime(e_grid[i, j], f_grid[i, j])
        res.analytic = out

    if mode in ("numeric", "both"):
        res.numeric = _numeric_pp2_sweep(e_grid, f_grid, start, t_max)
    return res


def _numeric_pp2_sweep(e_grid, f_grid, start, t_max) -> np.ndarray:
    e = e_grid.ravel().astype(float)
    f = f_grid.ravel().astype(float)
    n = e.size
    with np.errstate(divide="ignore", invalid="ignore"):
        x_eq = np.sqrt(np.clip(e - 2.0 * f, 0.0, None) / np.where(e > 0, e, 1.0))
    y_eq = 2.0 * f * x_eq
    feasible = e > 2.0 * f

    field = _grid.pp2_field(e, f)
    dt = _grid.stable_step(3.0 * e + 1.0 + f)

    capture_r = 1e-3

    def classify(x, y, px, py, idx):
        lab = np.zeros(x.size, np.int8)
        lab[px] = 1  # prey extinct: collapse is inevitable
        near = (feasible[idx]
                & (np.abs(x - x_eq[idx]) < capture_r)
                & (np.abs(y - y_eq[idx]) < capture_r))
        lab[near & ~px] = 2
        at_origin = (x < 1e-6) & (y < 1e-6)
        lab[at_origin] = 1
        return lab

    out = _grid.run_cells(field, np.full(n, float(start[0])),
                          np.full(n, float(start[1])),
                          dt=dt, t_max=t_max, classify_fn=classify)
    labels = np.where(
        out.label == 1, NUMERIC_COLLAPSE,
        np.where(out.label == 2, NUMERIC_COEXIST, NUMERIC_OSCILLATING),
    )
    return labels.astype(object).reshape(e_grid.shape)
