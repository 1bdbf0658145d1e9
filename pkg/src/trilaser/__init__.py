"""Two-mode Gaussian states of a three-level cascade laser.

The package models a laser whose gain medium is a beam of three-level
cascade atoms driving two nondegenerate cavity modes.  Closed forms give
the stationary photon numbers and the intermodal correlation; from those
the two-mode covariance matrix follows, and with it the directional
Gaussian steering measures and the Renyi-2 entanglement.  A moment-ODE
integrator and a linear stationarity solver provide independent checks,
and a sweep engine plus CLI produce deterministic CSV/JSON scans of the
operating space.
"""

from .errors import (
    DegenerateBlock,
    Diverged,
    Error,
    InvalidParameter,
    InvalidSpec,
    MalformedCovariance,
    NoStationaryState,
    OutsideFormulaDomain,
    SingularSystem,
    StepTooLarge,
    UnphysicalState,
)
from .gaussian import (
    EPS_STEER,
    Direction,
    Regime,
    SteeringReport,
    TwoModeCovariance,
    classify_regime,
    is_physical,
    lmi_steerable,
    renyi2_entanglement,
    schur_complement,
    steering,
    steering_mu,
    steering_report,
    symplectic_eigenvalues,
)
from .laser import (
    AtomCavityParams,
    LaserParams,
    SteadyStateMoments,
    covariance,
    decay_rates,
    derive_gain,
    photon_difference,
    populations,
    steady_moments,
)
from .dynamics import (
    IntegrationConfig,
    IntegrationResult,
    MomentState,
    integrate,
    max_stable_dt,
    moment_derivative,
    rk4_flow_steady_state,
    steady_state_linear_solve,
)
from .sweep import (
    STATUS_NO_STATIONARY,
    STATUS_OK,
    Axis,
    SweepRecord,
    SweepSpec,
    Varied,
    evaluate_point,
    find_one_way_boundary,
    run_grid,
    run_sweep,
)
from .tableio import (
    RECORD_HEADER,
    TRAJECTORY_HEADER,
    read_records_csv,
    read_trajectory_csv,
    write_records_csv,
    write_records_json,
    write_trajectory_csv,
    write_trajectory_json,
)

__version__ = "0.1.0"

__all__ = [
    "AtomCavityParams",
    "Axis",
    "DegenerateBlock",
    "Direction",
    "Diverged",
    "EPS_STEER",
    "Error",
    "IntegrationConfig",
    "IntegrationResult",
    "InvalidParameter",
    "InvalidSpec",
    "LaserParams",
    "MalformedCovariance",
    "MomentState",
    "NoStationaryState",
    "OutsideFormulaDomain",
    "RECORD_HEADER",
    "Regime",
    "STATUS_NO_STATIONARY",
    "STATUS_OK",
    "SingularSystem",
    "SteadyStateMoments",
    "SteeringReport",
    "StepTooLarge",
    "SweepRecord",
    "SweepSpec",
    "TRAJECTORY_HEADER",
    "TwoModeCovariance",
    "UnphysicalState",
    "Varied",
    "classify_regime",
    "covariance",
    "decay_rates",
    "derive_gain",
    "evaluate_point",
    "find_one_way_boundary",
    "integrate",
    "is_physical",
    "lmi_steerable",
    "max_stable_dt",
    "moment_derivative",
    "photon_difference",
    "populations",
    "read_records_csv",
    "read_trajectory_csv",
    "renyi2_entanglement",
    "rk4_flow_steady_state",
    "run_grid",
    "run_sweep",
    "schur_complement",
    "steady_moments",
    "steady_state_linear_solve",
    "steering",
    "steering_mu",
    "steering_report",
    "symplectic_eigenvalues",
    "write_records_csv",
    "write_records_json",
    "write_trajectory_csv",
    "write_trajectory_json",
    "__version__",
]
