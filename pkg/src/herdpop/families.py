"""Model families: vector fields, rescalings and Jacobians.

Two populations Q and P interact through one of seven coupling schemes.
The four "herd" families model group-edge encounters with square-root
factors (only individuals on the perimeter of a patch meet the other
population); the three classical families use the bilinear mass-action
terms and serve as comparators.

    symb_herd       dQ = r(1-Q/K_Q)Q + q*sqrt(P*Q)   dP = m(1-P/K_P)P + p*sqrt(P*Q)
    pp_pack_indiv   dQ = r(1-Q/K)Q  - q*sqrt(P)*Q    dP = -mP + p*sqrt(P)*Q
    pp_pack_herd    dQ = r(1-Q/K)Q  - q*sqrt(P*Q)    dP = -mP + p*sqrt(P*Q)
    comp_herd       dQ = r(1-Q/K_Q)Q - q*sqrt(P*Q)   dP = m(1-P/K_P)P - p*sqrt(P*Q)
    symb_classic    dQ = r(1-Q/K_Q)Q + q*P*Q         dP = m(1-P/K_P)P + p*P*Q
    pp_classic      dQ = r(1-Q/K)Q  - q*P*Q          dP = -mP + p*P*Q
    comp_classic    dQ = r(1-Q/K_Q)Q - q*P*Q         dP = m(1-P/K_P)P - p*P*Q

Each herd family admits a nondimensional form that removes the axis
singularity of the Jacobian and cuts the parameter count:

* symb_herd / comp_herd: X = sqrt(Q/K_Q), Y = sqrt(P/K_P),
  t = tau * q*sqrt(K_P)/(2*sqrt(K_Q)), with
  a = (K_Q/K_P)*(p/q), b = r*sqrt(K_Q)/(q*sqrt(K_P)),
  c = m*sqrt(K_Q)/(q*sqrt(K_P)):

      dX/dt = b(1-X^2)X +/- Y,   dY/dt = c(1-Y^2)Y +/- aX

* pp_pack_indiv: X = Q/K (note: linear in Q, unlike the other three),
  Y = q*sqrt(P)/m, t = m*tau, with b = r/m, c = p*q*K/(2*m^2):

      dX/dt = b(1-X)X - XY,      dY/dt = -Y/2 + cX

* pp_pack_herd: X = sqrt(Q/K), Y = (q/(2m))*sqrt(P/K), t = m*tau,
  with e = r/(2m), f = p*q/(4*m^2):

      dX/dt = e(1-X^2)X - Y,     dY/dt = -Y/2 + fX

All structures here are immutable value types; every function is pure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Family",
    "Representation",
    "DomainError",
    "RescalingError",
    "RepresentationError",
    "DimParams",
    "NondimParams",
    "ScaleMap",
    "State",
    "HERD_FAMILIES",
    "PP_FAMILIES",
    "CLASSICAL_FAMILIES",
    "TWO_CAPACITY_FAMILIES",
    "rhs_dimensional",
    "rhs_nondim",
    "jacobian_nondim",
    "jacobian_dimensional",
    "to_nondim",
    "from_nondim",
    "map_state",
    "map_times",
]


class Family(str, Enum):
    """The seven model families."""

    SYMB_HERD = "symb_herd"
    PP_PACK_INDIV = "pp_pack_indiv"
    PP_PACK_HERD = "pp_pack_herd"
    COMP_HERD = "comp_herd"
    SYMB_CLASSIC = "symb_classic"
    PP_CLASSIC = "pp_classic"
    COMP_CLASSIC = "comp_classic"


HERD_FAMILIES = frozenset(
    {Family.SYMB_HERD, Family.PP_PACK_INDIV, Family.PP_PACK_HERD, Family.COMP_HERD}
)
PP_FAMILIES = frozenset(
    {Family.PP_PACK_INDIV, Family.PP_PACK_HERD, Family.PP_CLASSIC}
)
CLASSICAL_FAMILIES = frozenset(
    {Family.SYMB_CLASSIC, Family.PP_CLASSIC, Family.COMP_CLASSIC}
)
# families where Q and P have separate carrying capacities
TWO_CAPACITY_FAMILIES = frozenset(
    {Family.SYMB_HERD, Family.COMP_HERD, Family.SYMB_CLASSIC, Family.COMP_CLASSIC}
)


class Representation(str, Enum):
    DIMENSIONAL = "dimensional"
    NONDIMENSIONAL = "nondimensional"


class DomainError(ValueError):
    """A state or parameter lies outside the model's domain."""


class RescalingError(ValueError):
    """The nondimensional change of variables is undefined for these parameters."""


class RepresentationError(ValueError):
    """A state carries the wrong dimensional/nondimensional tag for this operation."""


def _sqrt0(v: float) -> float:
    # clamped sqrt: absorbs integrator round-off slightly below zero
    return math.sqrt(v) if v > 0.0 else 0.0


@dataclass(frozen=True)
class State:
    """A population pair, tagged with its representation.

    ``first`` is Q (dimensional) or X (nondimensional); ``second`` is P or Y.
    """

    first: float
    second: float
    rep: Representation = Representation.DIMENSIONAL

    def __post_init__(self):
        if self.first < 0.0 or self.second < 0.0:
            raise DomainError(
                f"state components must be nonnegative, got ({self.first}, {self.second})"
            )

    def __iter__(self):
        yield self.first
        yield self.second

    def as_array(self) -> np.ndarray:
        return np.array([self.first, self.second], dtype=float)


def _coerce_pair(state, rep: Representation | None) -> tuple[float, float]:
    """Accept a State (checking its tag) or a bare pair."""
    if isinstance(state, State):
        if rep is not None and state.rep is not rep:
            raise RepresentationError(
                f"expected a {rep.value} state, got {state.rep.value}"
            )
        return state.first, state.second
    u, v = float(state[0]), float(state[1])
    if u < 0.0 or v < 0.0:
        raise DomainError(f"state components must be nonnegative, got ({u}, {v})")
    return u, v


@dataclass(frozen=True)
class DimParams:
    """Dimensional parameters of one family.

    r: growth rate of Q.  m: growth rate of P (symbiosis/competition) or
    predator death rate (predator-prey families).  q, p: interaction rates
    felt by Q and P respectively.  k_q: carrying capacity of Q; it doubles
    as the single capacity K of the predator-prey families, whose k_p is
    unused and may be left as None.
    """

    family: Family
    r: float
    m: float
    p: float
    q: float
    k_q: float
    k_p: float | None = None

    def __post_init__(self):
        for name in ("r", "m", "p", "q"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"parameter {name!r} must be nonnegative")
        if not self.k_q > 0.0:
            raise DomainError("carrying capacity k_q must be positive")
        if self.family in TWO_CAPACITY_FAMILIES:
            if self.k_p is None or not self.k_p > 0.0:
                raise DomainError(
                    f"family {self.family.value} needs a positive k_p"
                )
        if self.family in PP_FAMILIES and self.p >= self.q > 0.0:
            # modeling constraint only; all formulas stay well defined
            warnings.warn(
                "predator-prey families normally assume p < q "
                "(not all of the prey is converted)",
                stacklevel=2,
            )

    @property
    def k(self) -> float:
        """Single carrying capacity of the predator-prey families."""
        return self.k_q


@dataclass(frozen=True)
class ScaleMap:
    """Coordinate change (Q, P, tau) <-> (X, Y, t).

    X = coef_q * Q**pow_q,  Y = coef_p * P**pow_p,  t = time_coef * tau.
    """

    coef_q: float
    pow_q: float
    coef_p: float
    pow_p: float
    time_coef: float

    def forward(self, q: float, p: float) -> tuple[float, float]:
        return self.coef_q * q ** self.pow_q, self.coef_p * p ** self.pow_p

    def inverse(self, x: float, y: float) -> tuple[float, float]:
        return (x / self.coef_q) ** (1.0 / self.pow_q), (
            y / self.coef_p
        ) ** (1.0 / self.pow_p)

    def forward_time(self, tau):
        return self.time_coef * tau

    def inverse_time(self, t):
        return t / self.time_coef


@dataclass(frozen=True)
class NondimParams:
    """Rescaled parameters of a herd family.

    symb_herd / comp_herd use (a, b, c); pp_pack_indiv uses (b, c);
    pp_pack_herd uses (e, f).  ``scale`` carries the map back to a
    dimensional representative when one is known.
    """

    family: Family
    a: float | None = None
    b: float | None = None
    c: float | None = None
    e: float | None = None
    f: float | None = None
    scale: ScaleMap | None = None

    _REQUIRED = {
        Family.SYMB_HERD: ("a", "b", "c"),
        Family.COMP_HERD: ("a", "b", "c"),
        Family.PP_PACK_INDIV: ("b", "c"),
        Family.PP_PACK_HERD: ("e", "f"),
    }

    def __post_init__(self):
        if self.family not in HERD_FAMILIES:
            raise RescalingError(
                f"family {self.family.value} has no nondimensional form"
            )
        required = self._REQUIRED[self.family]
        for name in required:
            v = getattr(self, name)
            if v is None:
                raise DomainError(f"family {self.family.value} requires {name!r}")
            if v < 0.0:
                raise DomainError(f"parameter {name!r} must be nonnegative")
        for name in ("a", "b", "c", "e", "f"):
            if name not in required and getattr(self, name) is not None:
                raise DomainError(
                    f"parameter {name!r} does not apply to family {self.family.value}"
                )

    def values(self) -> dict[str, float]:
        return {n: getattr(self, n) for n in self._REQUIRED[self.family]}


# ---------------------------------------------------------------------------
# vector fields


def _dim_field(params: DimParams):
    """Raw dimensional field closure (no input validation, clamped sqrt).

    Used by the integrator, whose embedded stages may probe slightly
    negative states near the axes.
    """
    fam = params.family
    r, m, p, q = params.r, params.m, params.p, params.q
    kq = params.k_q
    kp = params.k_p if params.k_p is not None else params.k_q

    if fam is Family.SYMB_HERD:
        def f(u, v):
            s = _sqrt0(u) * _sqrt0(v)
            return r * (1.0 - u / kq) * u + q * s, m * (1.0 - v / kp) * v + p * s
    elif fam is Family.COMP_HERD:
        def f(u, v):
            s = _sqrt0(u) * _sqrt0(v)
            return r * (1.0 - u / kq) * u - q * s, m * (1.0 - v / kp) * v - p * s
    elif fam is Family.PP_PACK_INDIV:
        def f(u, v):
            sv = _sqrt0(v)
            return r * (1.0 - u / kq) * u - q * sv * u, -m * v + p * sv * u
    elif fam is Family.PP_PACK_HERD:
        def f(u, v):
            s = _sqrt0(u) * _sqrt0(v)
            return r * (1.0 - u / kq) * u - q * s, -m * v + p * s
    elif fam is Family.SYMB_CLASSIC:
        def f(u, v):
            return r * (1.0 - u / kq) * u + q * u * v, m * (1.0 - v / kp) * v + p * u * v
    elif fam is Family.PP_CLASSIC:
        def f(u, v):
            return r * (1.0 - u / kq) * u - q * u * v, -m * v + p * u * v
    elif fam is Family.COMP_CLASSIC:
        def f(u, v):
            return r * (1.0 - u / kq) * u - q * u * v, m * (1.0 - v / kp) * v - p * u * v
    else:  # pragma: no cover
        raise ValueError(f"unknown family {fam}")
    return f


def _nondim_field(params: NondimParams):
    """Raw nondimensional field closure (polynomial, defined everywhere)."""
    fam = params.family
    if fam is Family.SYMB_HERD:
        a, b, c = params.a, params.b, params.c
        def f(x, y):
            return b * (1.0 - x * x) * x + y, c * (1.0 - y * y) * y + a * x
    elif fam is Family.COMP_HERD:
        a, b, c = params.a, params.b, params.c
        def f(x, y):
            return b * (1.0 - x * x) * x - y, c * (1.0 - y * y) * y - a * x
    elif fam is Family.PP_PACK_INDIV:
        b, c = params.b, params.c
        def f(x, y):
            return b * (1.0 - x) * x - x * y, -0.5 * y + c * x
    else:  # PP_PACK_HERD
        e, ff = params.e, params.f
        def f(x, y):
            return e * (1.0 - x * x) * x - y, -0.5 * y + ff * x
    return f


def rhs_dimensional(params: DimParams, state) -> tuple[float, float]:
    """Time derivative (dQ/dtau, dP/dtau) of the dimensional system."""
    u, v = _coerce_pair(state, Representation.DIMENSIONAL)
    return _dim_field(params)(u, v)


def rhs_nondim(params: NondimParams, state) -> tuple[float, float]:
    """Time derivative (dX/dt, dY/dt) of the rescaled system."""
    x, y = _coerce_pair(state, Representation.NONDIMENSIONAL)
    return _nondim_field(params)(x, y)


def jacobian_nondim(params: NondimParams, state) -> np.ndarray:
    """Analytic 2x2 Jacobian of the rescaled field at ``state``."""
    x, y = _coerce_pair(state, Representation.NONDIMENSIONAL)
    fam = params.family
    if fam is Family.SYMB_HERD:
        a, b, c = params.a, params.b, params.c
        return np.array([[b * (1.0 - 3.0 * x * x), 1.0],
                         [a, c * (1.0 - 3.0 * y * y)]])
    if fam is Family.COMP_HERD:
        a, b, c = params.a, params.b, params.c
        return np.array([[b * (1.0 - 3.0 * x * x), -1.0],
                         [-a, c * (1.0 - 3.0 * y * y)]])
    if fam is Family.PP_PACK_INDIV:
        b, c = params.b, params.c
        return np.array([[b - 2.0 * b * x - y, -x],
                         [c, -0.5]])
    e, f = params.e, params.f
    return np.array([[e * (1.0 - 3.0 * x * x), -1.0],
                     [f, -0.5]])


def jacobian_dimensional(params: DimParams, state) -> np.ndarray:
    """Analytic Jacobian of a classical family's dimensional field.

    The herd fields are not differentiable on the axes; their stability
    analysis goes through the nondimensional form, so only the classical
    families are supported here.
    """
    if params.family not in CLASSICAL_FAMILIES:
        raise DomainError(
            "dimensional Jacobian is only provided for classical families; "
            "use jacobian_nondim for herd families"
        )
    u, v = _coerce_pair(state, Representation.DIMENSIONAL)
    r, m, p, q = params.r, params.m, params.p, params.q
    kq = params.k_q
    kp = params.k_p if params.k_p is not None else params.k_q
    if params.family is Family.SYMB_CLASSIC:
        return np.array([[r * (1.0 - 2.0 * u / kq) + q * v, q * u],
                         [p * v, m * (1.0 - 2.0 * v / kp) + p * u]])
    if params.family is Family.PP_CLASSIC:
        return np.array([[r * (1.0 - 2.0 * u / kq) - q * v, -q * u],
                         [p * v, -m + p * u]])
    return np.array([[r * (1.0 - 2.0 * u / kq) - q * v, -q * u],
                     [-p * v, m * (1.0 - 2.0 * v / kp) - p * u]])


# ---------------------------------------------------------------------------
# rescaling


def to_nondim(params: DimParams) -> NondimParams:
    """Rescaled parameters and the coordinate map for a herd family."""
    fam = params.family
    if fam not in HERD_FAMILIES:
        raise RescalingError(f"family {fam.value} has no nondimensional form")
    r, m, p, q = params.r, params.m, params.p, params.q

    if fam in (Family.SYMB_HERD, Family.COMP_HERD):
        if q == 0.0:
            raise RescalingError("rescaling requires q > 0")
        kq, kp = params.k_q, params.k_p
        root = math.sqrt(kq) / math.sqrt(kp)
        scale = ScaleMap(
            coef_q=1.0 / math.sqrt(kq),
            pow_q=0.5,
            coef_p=1.0 / math.sqrt(kp),
            pow_p=0.5,
            time_coef=q / (2.0 * root),
        )
        return NondimParams(
            family=fam,
            a=(kq / kp) * (p / q),
            b=r * root / q,
            c=m * root / q,
            scale=scale,
        )

    if m == 0.0:
        raise RescalingError("rescaling requires m > 0")
    k = params.k
    if fam is Family.PP_PACK_INDIV:
        scale = ScaleMap(coef_q=1.0 / k, pow_q=1.0,
                         coef_p=q / m, pow_p=0.5, time_coef=m)
        return NondimParams(family=fam, b=r / m, c=p * q * k / (2.0 * m * m),
                            scale=scale)
    scale = ScaleMap(coef_q=1.0 / math.sqrt(k), pow_q=0.5,
                     coef_p=q / (2.0 * m * math.sqrt(k)), pow_p=0.5,
                     time_coef=m)
    return NondimParams(family=fam, e=r / (2.0 * m), f=p * q / (4.0 * m * m),
                        scale=scale)


def from_nondim(
    params: NondimParams,
    *,
    k_q: float = 1.0,
    k_p: float = 1.0,
    m: float = 1.0,
) -> DimParams:
    """A dimensional representative of rescaled parameters.

    The rescaling is many-to-one, so some dimensional degrees of freedom
    are fixed by convention: the carrying capacities and m are taken from
    the keyword arguments.  For the predator-prey families only the
    product p*q is determined, and the split is fixed as p = q/2 (which
    respects the p < q modeling constraint).  When a symbiosis/competition
    family has c = 0 the convention m is unusable (c = 0 forces m = 0);
    q = 1 is fixed instead.

    ``to_nondim(from_nondim(nd)) == nd`` up to round-off.
    """
    fam = params.family
    if fam in (Family.SYMB_HERD, Family.COMP_HERD):
        a, b, c = params.a, params.b, params.c
        root = math.sqrt(k_q) / math.sqrt(k_p)
        if c > 0.0:
            if m <= 0.0:
                raise RescalingError("convention m must be positive when c > 0")
            q = m * root / c
        else:
            m = 0.0
            q = 1.0
        r = b * q / root
        p = a * q * k_p / k_q
        return DimParams(family=fam, r=r, m=m, p=p, q=q, k_q=k_q, k_p=k_p)

    if m <= 0.0:
        raise RescalingError("convention m must be positive for predator-prey families")
    k = k_q
    if fam is Family.PP_PACK_INDIV:
        r = params.b * m
        q = 2.0 * m * math.sqrt(params.c / k)
        return DimParams(family=fam, r=r, m=m, p=0.5 * q, q=q, k_q=k)
    r = 2.0 * params.e * m
    q = 2.0 * m * math.sqrt(2.0 * params.f)
    return DimParams(family=fam, r=r, m=m, p=0.5 * q, q=q, k_q=k)


def map_state(scale: ScaleMap, state: State, target: Representation) -> State:
    """Carry a state across the coordinate change, checking the tags."""
    if not isinstance(state, State):
        raise RepresentationError("map_state needs a tagged State")
    if state.rep is target:
        raise RepresentationError(f"state is already {target.value}")
    if target is Representation.NONDIMENSIONAL:
        x, y = scale.forward(state.first, state.second)
        return State(x, y, Representation.NONDIMENSIONAL)
    u, v = scale.inverse(state.first, state.second)
    return State(u, v, Representation.DIMENSIONAL)


def map_times(scale: ScaleMap, times, target: Representation):
    """Rescale time stamps (tau <-> t) alongside map_state."""
    times = np.asarray(times, dtype=float)
    if target is Representation.NONDIMENSIONAL:
        return scale.forward_time(times)
    return scale.inverse_time(times)
