"""herdpop: two-population models with square-root group-interaction terms.

Simulation, equilibrium and stability analysis, bifurcation/regime maps,
finite-time extinction predicates and basin-of-attraction experiments for
symbiosis, predator-prey and competition models in which populations
interact through the edges of their groups, plus the classical
mass-action comparators.
"""

from .families import (
    CLASSICAL_FAMILIES,
    HERD_FAMILIES,
    PP_FAMILIES,
    DimParams,
    DomainError,
    Family,
    NondimParams,
    Representation,
    RepresentationError,
    RescalingError,
    ScaleMap,
    State,
    from_nondim,
    jacobian_dimensional,
    jacobian_nondim,
    map_state,
    map_times,
    rhs_dimensional,
    rhs_nondim,
    to_nondim,
)
from .integrate import (
    Event,
    EventKind,
    IntegratorConfig,
    NumericError,
    OscillationKind,
    OscillationReport,
    StiffnessError,
    Trajectory,
    detect_oscillation,
    integrate,
    settle,
)

__version__ = "0.1.0"
