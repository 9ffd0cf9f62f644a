"""Equilibria and their local stability for all seven families.

Closed forms are used where they exist:

* pp_pack_indiv:  E2 = (b/(b+2c), 2bc/(b+2c)), always feasible;
  det(J) = b/2, tr(J) = -(2b^2 + b + 2c)/(2(b+2c)) < 0, so E2 is always
  locally stable.
* pp_pack_herd:   E2 = (sqrt((e-2f)/e), 2f*sqrt((e-2f)/e)), feasible for
  e >= 2f; det(J) = e - 2f, tr(J) = -2e + 6f - 1/2.
* classical families: nullcline algebra (corrected symbiosis form, see
  ``classical_coexistence``).

The herd symbiosis coexistence point is the unique intersection of the
cubics Y = b(X^2-1)X and X = (c/a)(Y^2-1)Y with both coordinates above 1,
found by a bracketed 1-D root search on the composed residual.

Herd competition coexistence abscissae are the roots in (0,1) of the
eighth-degree polynomial

    c b^3 X^8 - 3 c b^3 X^6 + 3 c b^3 X^4 - c b (b^2+1) X^2 + c b - a,

equivalently c b (1-X^2) (1 - b^2 X^2 (1-X^2)^2) - a.  For a > b*c no
feasible coexistence exists; for a < b*c there are one or three points,
and the sqrt(3)/3 rule classifies them: any coordinate below sqrt(3)/3
means unstable, both above means stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .families import (
    CLASSICAL_FAMILIES,
    DimParams,
    DomainError,
    Family,
    NondimParams,
    Representation,
    State,
    jacobian_dimensional,
    jacobian_nondim,
    rhs_nondim,
    to_nondim,
)

__all__ = [
    "EquilibriumKind",
    "Classification",
    "Equilibrium",
    "RootCountError",
    "classify",
    "boundary_equilibria",
    "symb_coexistence",
    "pp1_coexistence",
    "pp2_coexistence",
    "comp_coexistence",
    "comp_polynomial",
    "comp_nullcline_residual",
    "classical_coexistence",
    "herd_prey_individual_predator_equilibrium",
    "coexistence_equilibria",
    "no_hopf_certificate",
    "SQRT3_OVER_3",
]

SQRT3_OVER_3 = math.sqrt(3.0) / 3.0

_NAN = complex(math.nan, math.nan)


class EquilibriumKind(str, Enum):
    ORIGIN = "Origin"
    AXIS_Q = "AxisQ"
    AXIS_P = "AxisP"
    COEXISTENCE = "Coexistence"


class Classification(str, Enum):
    STABLE_NODE = "StableNode"
    STABLE_FOCUS = "StableFocus"
    UNSTABLE_NODE = "UnstableNode"
    UNSTABLE_FOCUS = "UnstableFocus"
    SADDLE = "Saddle"
    CENTER = "Center"
    DEGENERATE = "Degenerate"

    @property
    def is_stable(self) -> bool:
        return self in (Classification.STABLE_NODE, Classification.STABLE_FOCUS)


class RootCountError(RuntimeError):
    """Competition root filtering produced an unexpected count."""

    def __init__(self, message: str, roots):
        super().__init__(message)
        self.roots = roots


@dataclass(frozen=True)
class Equilibrium:
    """Location, eigen-data and stability tag of one equilibrium.

    Herd-family equilibria live in nondimensional coordinates, classical
    ones in dimensional coordinates.  Boundary points of the herd fields
    are not differentiable; they carry NaN eigenvalues and a note with
    the sign analysis that replaces the linearization.
    """

    location: tuple[float, float]
    kind: EquilibriumKind
    eigenvalues: tuple[complex, complex]
    classification: Classification
    feasible: bool
    rep: Representation
    note: str = ""
    merged: bool = False

    @property
    def stable(self) -> bool:
        return self.classification.is_stable

    def state(self) -> State:
        return State(self.location[0], self.location[1], self.rep)

    def to_payload(self) -> dict:
        def num(v):
            return None if (v != v) else v  # NaN -> null

        return {
            "location": [num(self.location[0]), num(self.location[1])],
            "kind": self.kind.value,
            "eigenvalues": [[num(ev.real), num(ev.imag)] for ev in self.eigenvalues],
            "classification": self.classification.value,
            "feasible": self.feasible,
            "note": self.note,
            "merged": self.merged,
        }


def classify(jac, tol: float = 1e-9) -> tuple[tuple[complex, complex], Classification]:
    """Trace/determinant classification of a 2x2 Jacobian.

    Any eigenvalue with |Re| <= tol makes the point Degenerate (this is
    what a Hopf or transcritical contact looks like through this lens;
    the Center tag is reserved and never produced here).
    """
    j = np.asarray(jac, dtype=float)
    tr = j[0, 0] + j[1, 1]
    det = j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        s = math.sqrt(disc)
        eigs = (complex((tr - s) / 2.0), complex((tr + s) / 2.0))
    else:
        s = math.sqrt(-disc)
        eigs = (complex(tr / 2.0, -s / 2.0), complex(tr / 2.0, s / 2.0))

    if any(abs(ev.real) <= tol for ev in eigs):
        return eigs, Classification.DEGENERATE
    if det < 0.0:
        return eigs, Classification.SADDLE
    if tr < 0.0:
        return eigs, (
            Classification.STABLE_FOCUS if disc < 0.0 else Classification.STABLE_NODE
        )
    return eigs, (
        Classification.UNSTABLE_FOCUS if disc < 0.0 else Classification.UNSTABLE_NODE
    )


def _eq_from_jacobian(loc, kind, jac, rep, feasible=True, note="") -> Equilibrium:
    eigs, cls = classify(jac)
    return Equilibrium(loc, kind, eigs, cls, feasible, rep, note)


def _nonsmooth_eq(loc, kind, cls, rep, note) -> Equilibrium:
    return Equilibrium(loc, kind, (_NAN, _NAN), cls, True, rep, note)


# ---------------------------------------------------------------------------
# boundary equilibria

_SQRT_NOTE = "square-root field: classified by the axis-limit sign analysis"


def boundary_equilibria(model) -> list[Equilibrium]:
    """Origin and carrying-capacity axis points, with stability tags.

    For classical families these follow from ordinary linearization.  The
    herd fields are non-smooth on the axes, so the origin of a herd
    family (in dimensional form) is classified by the direction analysis:
    symbiosis cannot collapse, grouped predators with loose prey cannot
    either, while competition collapses along directions with
    m/p < sqrt(Q/P) < q/r and the pack-pack predator-prey model along
    sqrt(Q/P) < min(m/p, q/r).
    """
    if isinstance(model, NondimParams):
        return _boundary_nondim(model)
    if isinstance(model, DimParams):
        return _boundary_dim(model)
    raise TypeError("model must be DimParams or NondimParams")


def _boundary_nondim(nd: NondimParams) -> list[Equilibrium]:
    rep = Representation.NONDIMENSIONAL
    fam = nd.family
    out = [
        _eq_from_jacobian((0.0, 0.0), EquilibriumKind.ORIGIN,
                          jacobian_nondim(nd, (0.0, 0.0)), rep)
    ]
    if fam is Family.COMP_HERD and nd.a > nd.b * nd.c:
        out[0] = replace(
            out[0],
            note="saddle whose attracting direction lies inside the first "
                 "quadrant: joint collapse is reachable",
        )
    pinned = "fixed point of the boundary-reduced dynamics only"
    if fam in (Family.SYMB_HERD, Family.PP_PACK_INDIV, Family.PP_PACK_HERD):
        out.append(_nonsmooth_eq((1.0, 0.0), EquilibriumKind.AXIS_Q,
                                 Classification.SADDLE, rep,
                                 f"{pinned}; the missing population invades"))
    else:
        out.append(_nonsmooth_eq((1.0, 0.0), EquilibriumKind.AXIS_Q,
                                 Classification.STABLE_NODE, rep,
                                 f"{pinned}; the missing population cannot invade"))
    if fam is Family.SYMB_HERD:
        out.append(_nonsmooth_eq((0.0, 1.0), EquilibriumKind.AXIS_P,
                                 Classification.SADDLE, rep,
                                 f"{pinned}; the missing population invades"))
    elif fam is Family.COMP_HERD:
        out.append(_nonsmooth_eq((0.0, 1.0), EquilibriumKind.AXIS_P,
                                 Classification.STABLE_NODE, rep,
                                 f"{pinned}; the missing population cannot invade"))
    return out


def _boundary_dim(d: DimParams) -> list[Equilibrium]:
    rep = Representation.DIMENSIONAL
    fam = d.family
    kq = d.k_q
    kp = d.k_p if d.k_p is not None else d.k_q
    out: list[Equilibrium] = []

    if fam in CLASSICAL_FAMILIES:
        out.append(_eq_from_jacobian((0.0, 0.0), EquilibriumKind.ORIGIN,
                                     jacobian_dimensional(d, (0.0, 0.0)), rep))
        out.append(_eq_from_jacobian((kq, 0.0), EquilibriumKind.AXIS_Q,
                                     jacobian_dimensional(d, (kq, 0.0)), rep))
        if fam is not Family.PP_CLASSIC:
            out.append(_eq_from_jacobian((0.0, kp), EquilibriumKind.AXIS_P,
                                         jacobian_dimensional(d, (0.0, kp)), rep))
        return out

    if fam is Family.SYMB_HERD:
        out.append(_nonsmooth_eq((0.0, 0.0), EquilibriumKind.ORIGIN,
                                 Classification.UNSTABLE_NODE, rep,
                                 _SQRT_NOTE + "; both populations grow near the origin"))
        out.append(_nonsmooth_eq((kq, 0.0), EquilibriumKind.AXIS_Q,
                                 Classification.SADDLE, rep,
                                 _SQRT_NOTE + "; the missing population invades"))
        out.append(_nonsmooth_eq((0.0, kp), EquilibriumKind.AXIS_P,
                                 Classification.SADDLE, rep,
                                 _SQRT_NOTE + "; the missing population invades"))
    elif fam is Family.COMP_HERD:
        if d.p > 0 and d.m / d.p < (d.q / d.r if d.r > 0 else math.inf):
            cls, extra = Classification.DEGENERATE, (
                "; attracts directions with m/p < sqrt(Q/P) < q/r (joint collapse)"
            )
        else:
            cls, extra = Classification.UNSTABLE_NODE, "; no jointly-collapsing direction"
        out.append(_nonsmooth_eq((0.0, 0.0), EquilibriumKind.ORIGIN, cls, rep,
                                 _SQRT_NOTE + extra))
        out.append(_nonsmooth_eq((kq, 0.0), EquilibriumKind.AXIS_Q,
                                 Classification.STABLE_NODE, rep,
                                 _SQRT_NOTE + "; the missing population cannot invade"))
        out.append(_nonsmooth_eq((0.0, kp), EquilibriumKind.AXIS_P,
                                 Classification.STABLE_NODE, rep,
                                 _SQRT_NOTE + "; the missing population cannot invade"))
    elif fam is Family.PP_PACK_INDIV:
        out.append(_nonsmooth_eq((0.0, 0.0), EquilibriumKind.ORIGIN,
                                 Classification.SADDLE, rep,
                                 _SQRT_NOTE + "; prey grow, predators decay"))
        out.append(_nonsmooth_eq((kq, 0.0), EquilibriumKind.AXIS_Q,
                                 Classification.SADDLE, rep,
                                 _SQRT_NOTE + "; predators invade"))
    else:  # PP_PACK_HERD
        out.append(_nonsmooth_eq((0.0, 0.0), EquilibriumKind.ORIGIN,
                                 Classification.DEGENERATE, rep,
                                 _SQRT_NOTE + "; attracts directions with "
                                 "sqrt(Q/P) < min(m/p, q/r) (joint collapse)"))
        out.append(_nonsmooth_eq((kq, 0.0), EquilibriumKind.AXIS_Q,
                                 Classification.SADDLE, rep,
                                 _SQRT_NOTE + "; predators invade"))
    return out


# ---------------------------------------------------------------------------
# coexistence, herd families


def symb_coexistence(a: float, b: float, c: float) -> Equilibrium:
    """Unique interior equilibrium of the herd symbiosis system.

    Intersection of Y = b(X^2-1)X with X = (c/a)(Y^2-1)Y on X > 1
    (which forces Y > 1).  Always exists and is always stable.
    """
    if not (a > 0 and b > 0 and c > 0):
        raise DomainError("symb_coexistence requires a, b, c > 0")

    def g(x):
        y = b * (x * x - 1.0) * x
        return x - (c / a) * (y * y - 1.0) * y

    lo, hi = 1.0 + 1e-12, 2.0
    for _ in range(400):
        if g(hi) < 0.0:
            break
        hi *= 2.0
    else:  # pragma: no cover - unreachable for positive parameters
        raise RootCountError("no sign change found for the symbiosis nullclines", [])
    x = brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16)
    y = b * (x * x - 1.0) * x
    nd = NondimParams(Family.SYMB_HERD, a=a, b=b, c=c)
    res = rhs_nondim(nd, (x, y))
    if max(abs(res[0]), abs(res[1])) > 1e-10 * max(1.0, a, b, c):
        raise RootCountError(f"symbiosis nullcline residual too large: {res}", [x])
    return _eq_from_jacobian((x, y), EquilibriumKind.COEXISTENCE,
                             jacobian_nondim(nd, (x, y)),
                             Representation.NONDIMENSIONAL)


def pp1_coexistence(b: float, c: float) -> Equilibrium:
    """Closed-form coexistence of the pack-predation / loose-prey system."""
    if not (b > 0 and c > 0):
        raise DomainError("pp1_coexistence requires b, c > 0")
    x = b / (b + 2.0 * c)
    y = 2.0 * b * c / (b + 2.0 * c)
    nd = NondimParams(Family.PP_PACK_INDIV, b=b, c=c)
    return _eq_from_jacobian((x, y), EquilibriumKind.COEXISTENCE,
                             jacobian_nondim(nd, (x, y)),
                             Representation.NONDIMENSIONAL)


def pp2_coexistence(e: float, f: float) -> Equilibrium:
    """Closed-form coexistence of the pack-pack predator-prey system.

    Feasible only for e >= 2f; at e = 2f it sits on the origin
    (transcritical contact) and carries a zero eigenvalue.
    """
    if not (e > 0 and f >= 0):
        raise DomainError("pp2_coexistence requires e > 0 and f >= 0")
    rep = Representation.NONDIMENSIONAL
    if e < 2.0 * f:
        return Equilibrium((math.nan, math.nan), EquilibriumKind.COEXISTENCE,
                           (_NAN, _NAN), Classification.DEGENERATE, False, rep,
                           note="infeasible: requires e >= 2f")
    x = math.sqrt((e - 2.0 * f) / e)
    y = 2.0 * f * x
    nd = NondimParams(Family.PP_PACK_HERD, e=e, f=f)
    note = "coincides with the origin (transcritical contact)" if x == 0.0 else ""
    return _eq_from_jacobian((x, y), EquilibriumKind.COEXISTENCE,
                             jacobian_nondim(nd, (x, y)), rep, note=note)


# ---------------------------------------------------------------------------
# coexistence, herd competition


def comp_polynomial(a: float, b: float, c: float, x):
    """Expanded eighth-degree polynomial whose (0,1) roots are coexistence abscissae."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    cb3 = c * b ** 3
    return (cb3 * x2 ** 4 - 3.0 * cb3 * x2 ** 3 + 3.0 * cb3 * x2 ** 2
            - c * b * (b * b + 1.0) * x2 + c * b - a)


def comp_nullcline_residual(a: float, b: float, c: float, x):
    """Composed-nullcline form c*b*(1-x^2)*(1 - b^2 x^2 (1-x^2)^2) - a."""
    x = np.asarray(x, dtype=float)
    w = 1.0 - x * x
    return c * b * w * (1.0 - b * b * x * x * w * w) - a


def comp_coexistence(a: float, b: float, c: float, *,
                     grid: int = 10000) -> list[Equilibrium]:
    """All feasible coexistence equilibria of the herd competition system.

    Empty for a >= b*c (the boundary a = b*c counts as infeasible).
    Otherwise the (0,1) roots of the eighth-degree equation are isolated
    by a sign scan on ``grid`` points and refined by bisection to 1e-12;
    roots are kept when Y = b(1-X^2)X lies in (0,1) and the second
    nullcline holds to 1e-9.  Result sorted by abscissa.  A root pair
    closer than 1e-6 is flagged as merged (near-tangent nullclines).
    """
    if not (a > 0 and b > 0 and c > 0):
        raise DomainError("comp_coexistence requires a, b, c > 0")
    if a >= b * c:
        return []

    xs = np.linspace(0.0, 1.0, grid + 1)
    vals = comp_nullcline_residual(a, b, c, xs)
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        lo, hi = xs[i], xs[i + 1]
        flo = vals[i]
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            fm = comp_nullcline_residual(a, b, c, mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    for i in np.nonzero(vals == 0.0)[0]:
        if 0.0 < xs[i] < 1.0:
            roots.append(float(xs[i]))
    roots = sorted(roots)

    nd = NondimParams(Family.COMP_HERD, a=a, b=b, c=c)
    out = []
    for x in roots:
        y = b * (1.0 - x * x) * x
        if not (0.0 < y < 1.0):
            continue
        if abs(a * x - c * (1.0 - y * y) * y) > 1e-9:
            continue
        out.append(_eq_from_jacobian((x, y), EquilibriumKind.COEXISTENCE,
                                     jacobian_nondim(nd, (x, y)),
                                     Representation.NONDIMENSIONAL))
    if len(out) not in (1, 3):
        raise RootCountError(
            f"expected 1 or 3 competition equilibria, got {len(out)}", roots
        )
    for i in range(len(out) - 1):
        if out[i + 1].location[0] - out[i].location[0] < 1e-6:
            merged_note = "merged (near-tangent) root pair"
            out[i] = replace(out[i], classification=Classification.DEGENERATE,
                             merged=True, note=merged_note)
            out[i + 1] = replace(out[i + 1], classification=Classification.DEGENERATE,
                                 merged=True, note=merged_note)
    return out


# ---------------------------------------------------------------------------
# classical coexistence


def classical_coexistence(params: DimParams) -> Equilibrium:
    """Interior equilibrium of a classical family.

    For classical symbiosis the nullcline-derived form is

        Q* = K_Q m (r + q K_P) / (r m - p q K_P K_Q)
        P* = K_P r (m + p K_Q) / (r m - p q K_P K_Q)

    feasible iff r m > p q K_P K_Q; otherwise the populations grow
    without bound.  (Deriving from the nullclines swaps p and q relative
    to a commonly printed variant and flips the feasibility inequality;
    this form reproduces the reference numeric values.)
    """
    fam = params.family
    if fam not in CLASSICAL_FAMILIES:
        raise DomainError("classical_coexistence applies to classical families")
    r, m, p, q = params.r, params.m, params.p, params.q
    kq = params.k_q
    kp = params.k_p if params.k_p is not None else params.k_q
    rep = Representation.DIMENSIONAL

    if fam is Family.SYMB_CLASSIC:
        den = r * m - p * q * kp * kq
        if den <= 0.0:
            return Equilibrium((math.nan, math.nan), EquilibriumKind.COEXISTENCE,
                               (_NAN, _NAN), Classification.DEGENERATE, False, rep,
                               note="infeasible (rm <= pq K_P K_Q): "
                                    "unbounded trajectories")
        loc = (kq * m * (r + q * kp) / den, kp * r * (m + p * kq) / den)
        return _eq_from_jacobian(loc, EquilibriumKind.COEXISTENCE,
                                 jacobian_dimensional(params, loc), rep)

    if fam is Family.PP_CLASSIC:
        if p <= 0.0:
            return Equilibrium((math.nan, math.nan), EquilibriumKind.COEXISTENCE,
                               (_NAN, _NAN), Classification.DEGENERATE, False, rep,
                               note="infeasible: predators cannot subsist (p = 0)")
        k = params.k
        loc = (m / p, (r / q) * (1.0 - m / (p * k)) if q > 0 else math.nan)
        if q <= 0.0:
            return Equilibrium(loc, EquilibriumKind.COEXISTENCE, (_NAN, _NAN),
                               Classification.DEGENERATE, False, rep,
                               note="infeasible: q = 0")
        feasible = p * k >= m
        if not feasible:
            return Equilibrium(loc, EquilibriumKind.COEXISTENCE, (_NAN, _NAN),
                               Classification.DEGENERATE, False, rep,
                               note=f"infeasible (pK < m): predator coordinate "
                                    f"{loc[1]:.6g} < 0")
        note = ""
        if p * k == m:
            note = "transcritical contact with the prey-only state"
        return _eq_from_jacobian(loc, EquilibriumKind.COEXISTENCE,
                                 jacobian_dimensional(params, loc), rep,
                                 feasible=True, note=note)

    # classical competition: straight nullclines r(1-Q/K_Q) = qP, m(1-P/K_P) = pQ
    mat = np.array([[r / kq, q], [p, m / kp]])
    rhs_vec = np.array([r, m])
    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    if abs(det) < 1e-14 * max(1.0, abs(r), abs(m)):
        return Equilibrium((math.nan, math.nan), EquilibriumKind.COEXISTENCE,
                           (_NAN, _NAN), Classification.DEGENERATE, False, rep,
                           note="nullclines are parallel")
    loc_arr = np.linalg.solve(mat, rhs_vec)
    loc = (float(loc_arr[0]), float(loc_arr[1]))
    if loc[0] <= 0.0 or loc[1] <= 0.0:
        bad = "Q" if loc[0] <= 0.0 else "P"
        return Equilibrium(loc, EquilibriumKind.COEXISTENCE, (_NAN, _NAN),
                           Classification.DEGENERATE, False, rep,
                           note=f"infeasible: coordinate {bad} is nonpositive")
    return _eq_from_jacobian(loc, EquilibriumKind.COEXISTENCE,
                             jacobian_dimensional(params, loc), rep)


def herd_prey_individual_predator_equilibrium(
    r: float, m: float, p: float, q: float, k: float
) -> Equilibrium:
    """Coexistence of the grouped-prey / individualistic-predator model.

    That model couples through sqrt(Q)*P; its coexistence point is
    (m^2/p^2, (m r/(p q)) (1 - m^2/(p^2 K))), feasible iff m^2 <= p^2 K.
    Provided for dimensional comparisons against the pack-hunting
    variants.
    """
    if not (p > 0 and q > 0 and k > 0 and m >= 0 and r >= 0):
        raise DomainError("requires p, q, k > 0 and r, m >= 0")
    rep = Representation.DIMENSIONAL
    qq = m * m / (p * p)
    pp = (m * r / (p * q)) * (1.0 - qq / k)
    loc = (qq, pp)
    if pp < 0.0:
        return Equilibrium(loc, EquilibriumKind.COEXISTENCE, (_NAN, _NAN),
                           Classification.DEGENERATE, False, rep,
                           note="infeasible (m^2 > p^2 K): predator coordinate < 0")
    # Jacobian of dQ = r(1-Q/K)Q - q sqrt(Q) P, dP = -mP + p sqrt(Q) P
    sq = math.sqrt(qq) if qq > 0 else 0.0
    if sq > 0.0:
        jac = np.array([
            [r * (1.0 - 2.0 * qq / k) - q * pp / (2.0 * sq), -q * sq],
            [p * pp / (2.0 * sq), -m + p * sq],
        ])
        return _eq_from_jacobian(loc, EquilibriumKind.COEXISTENCE, jac, rep,
                                 note="" if pp > 0 else
                                 "feasibility boundary: predators vanish")
    return Equilibrium(loc, EquilibriumKind.COEXISTENCE, (_NAN, _NAN),
                       Classification.DEGENERATE, True, rep,
                       note="degenerate at the origin")


# ---------------------------------------------------------------------------
# uniform front end


def coexistence_equilibria(model) -> list[Equilibrium]:
    """Coexistence equilibria in the family's native representation.

    Herd families are solved in nondimensional form (a DimParams input is
    rescaled first); classical families in dimensional form.  Competition
    may return 0, 1 or 3 entries; everything else returns one.
    """
    if isinstance(model, DimParams):
        if model.family in CLASSICAL_FAMILIES:
            return [classical_coexistence(model)]
        model = to_nondim(model)
    if not isinstance(model, NondimParams):
        raise TypeError("model must be DimParams or NondimParams")
    fam = model.family
    if fam is Family.SYMB_HERD:
        return [symb_coexistence(model.a, model.b, model.c)]
    if fam is Family.PP_PACK_INDIV:
        return [pp1_coexistence(model.b, model.c)]
    if fam is Family.PP_PACK_HERD:
        return [pp2_coexistence(model.e, model.f)]
    return comp_coexistence(model.a, model.b, model.c)


def no_hopf_certificate(n: int = 10000, seed: int = 0) -> float:
    """Randomized no-Hopf certificate for symbiosis and competition.

    At any state where the Jacobian trace vanishes, solving
    b(1-3X^2) = -c(1-3Y^2) and substituting into the determinant gives
    det = -c^2 (1-3Y^2)^2 - a < 0, so purely imaginary eigenvalues are
    impossible.  This samples ``n`` trace-zero configurations with
    positive parameters and returns the maximum determinant found
    (negative means the certificate holds everywhere sampled).
    """
    rng = np.random.default_rng(seed)
    worst = -math.inf
    count = 0
    while count < n:
        k = n - count
        x = rng.uniform(0.0, 2.0, k)
        y = rng.uniform(0.0, 2.0, k)
        cc = rng.uniform(0.05, 10.0, k)
        aa = rng.uniform(0.05, 10.0, k)
        gx = 1.0 - 3.0 * x * x
        gy = 1.0 - 3.0 * y * y
        ok = np.abs(gx) > 1e-9
        bb = np.where(ok, -cc * gy / np.where(ok, gx, 1.0), -1.0)
        valid = ok & (bb > 0.0)
        if not valid.any():
            continue
        det = bb[valid] * gx[valid] * cc[valid] * gy[valid] - aa[valid]
        worst = max(worst, float(det.max()))
        count += int(valid.sum())
    return worst
