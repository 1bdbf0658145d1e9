"""Time evolution of the laser's field moments.

The coupled means, squeezings, occupations and cross correlations of the two
cavity modes close on themselves, giving a linear eight-component complex
system.  This module integrates it with a classical fixed-step fourth-order
Runge-Kutta scheme and provides two independent stationary-state solvers
used to validate the closed forms in :mod:`trilaser.laser`: a direct linear
solve of the stationarity conditions and the long-time limit of the RK4 flow
itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Diverged, InvalidParameter, SingularSystem, StepTooLarge
from .laser import LaserParams, SteadyStateMoments

#: Trajectories whose largest component magnitude passes this bound are
#: declared divergent (signals an unstable operating point, e.g. eta < 0).
OVERFLOW_GUARD = 1e12

#: Fraction of the fastest rate the step size may reach.
STEP_SAFETY = 0.1


@dataclass(frozen=True)
class MomentState:
    """First and second moments of the two modes at one instant.

    c1, c2 are the field means <c_j>; c1sq, c2sq the squeezing moments
    <c_j^2>; n1, n2 the occupations <c_j^dag c_j> (real); m12 = <c1 c2> and
    x12 = <c1 c2^dag> the intermodal correlations.
    """

    c1: complex = 0j
    c2: complex = 0j
    c1sq: complex = 0j
    c2sq: complex = 0j
    n1: float = 0.0
    n2: float = 0.0
    m12: complex = 0j
    x12: complex = 0j

    @classmethod
    def vacuum(cls) -> "MomentState":
        return cls()

    def to_tuple(self) -> tuple:
        return (
            complex(self.c1),
            complex(self.c2),
            complex(self.c1sq),
            complex(self.c2sq),
            complex(self.n1),
            complex(self.n2),
            complex(self.m12),
            complex(self.x12),
        )

    @classmethod
    def from_tuple(cls, values) -> "MomentState":
        c1, c2, c1sq, c2sq, n1, n2, m12, x12 = values
        return cls(
            c1=complex(c1),
            c2=complex(c2),
            c1sq=complex(c1sq),
            c2sq=complex(c2sq),
            n1=float(n1.real if isinstance(n1, complex) else n1),
            n2=float(n2.real if isinstance(n2, complex) else n2),
            m12=complex(m12),
            x12=complex(x12),
        )


@dataclass(frozen=True)
class IntegrationConfig:
    """Fixed-step integration controls.

    dt and t_max are in ms.  The run stops early once every component of
    the time derivative falls below convergence_tol (in kHz times the
    component's unit).  Every sample_stride-th step is recorded.
    """

    dt: float
    t_max: float
    convergence_tol: float = 1e-9
    sample_stride: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise InvalidParameter("dt must be finite and > 0")
        if not (math.isfinite(self.t_max) and self.t_max > 0.0):
            raise InvalidParameter("t_max must be finite and > 0")
        if not (self.convergence_tol > 0.0):
            raise InvalidParameter("convergence_tol must be > 0")
        if self.sample_stride < 1:
            raise InvalidParameter("sample_stride must be >= 1")


@dataclass
class IntegrationResult:
    """Sampled trajectory plus the final state and convergence verdict."""

    times: np.ndarray
    states: list[MomentState]
    final: MomentState
    converged: bool
    steps: int


def _coefficients(params: LaserParams) -> tuple[float, float, float, float]:
    """(Gamma_1, Gamma_2, A rho_ul, A rho_uu) for the moment equations."""
    gamma1 = params.kappa - params.gain_A * params.rho_uu
    gamma2 = params.kappa + params.gain_A * params.rho_ll
    return gamma1, gamma2, params.gain_A * params.rho_ul, params.gain_A * params.rho_uu


def _derivative(c1, c2, c1sq, c2sq, n1, n2, m12, x12, g1, g2, coup, src):
    """Time derivative of the eight moments.

    Works elementwise on scalars or arrays.  ``coup`` is A rho_ul and ``src``
    is A rho_uu; the mean-occupation source feeds mode 1 only, and the
    squeezing moments are driven by the x12 correlation (both branches carry
    <c1 c2^dag>, with opposite sign for the two modes).
    """
    half = 0.5 * coup
    damp = 0.5 * (g1 + g2)
    re_m = 0.5 * (m12 + m12.conjugate())
    d_c1 = -0.5 * g1 * c1 - half * c2.conjugate()
    d_c2 = -0.5 * g2 * c2 + half * c1.conjugate()
    d_c1sq = -g1 * c1sq - coup * x12
    d_c2sq = -g2 * c2sq + coup * x12
    d_n1 = -g1 * n1 - coup * re_m + src
    d_n2 = -g2 * n2 + coup * re_m
    d_m12 = -damp * m12 + half * (n1 - n2 + 1.0)
    d_x12 = -damp * x12 + half * (c1sq - c2sq.conjugate())
    return d_c1, d_c2, d_c1sq, d_c2sq, d_n1, d_n2, d_m12, d_x12


def moment_derivative(state: MomentState, params: LaserParams) -> MomentState:
    """Right-hand side of the moment equations at ``state``."""
    g1, g2, coup, src = _coefficients(params)
    return MomentState.from_tuple(
        _derivative(*state.to_tuple(), g1, g2, coup, src)
    )


def max_stable_dt(params: LaserParams) -> float:
    """Largest admissible step: STEP_SAFETY / max(|Gamma_1|, Gamma_2, A rho_ul, kappa)."""
    g1, g2, coup, _ = _coefficients(params)
    fastest = max(abs(g1), g2, coup, params.kappa)
    if fastest == 0.0:
        return math.inf
    return STEP_SAFETY / fastest


def _rk4_step(y, dt, g1, g2, coup, src):
    k1 = _derivative(*y, g1, g2, coup, src)
    y2 = tuple(y[i] + 0.5 * dt * k1[i] for i in range(8))
    k2 = _derivative(*y2, g1, g2, coup, src)
    y3 = tuple(y[i] + 0.5 * dt * k2[i] for i in range(8))
    k3 = _derivative(*y3, g1, g2, coup, src)
    y4 = tuple(y[i] + dt * k3[i] for i in range(8))
    k4 = _derivative(*y4, g1, g2, coup, src)
    sixth = dt / 6.0
    return (
        tuple(
            y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            for i in range(8)
        ),
        k1,
    )


def _check_sample(y, scale_tol: float) -> None:
    amax = max(abs(v) for v in y)
    if amax > OVERFLOW_GUARD:
        raise Diverged(f"component magnitude {amax:g} exceeds overflow guard")
    floor = -scale_tol * (1.0 + amax)
    if y[4].real < floor or y[5].real < floor:
        raise Diverged(
            f"negative occupation n1 = {y[4].real:g}, n2 = {y[5].real:g}"
        )


def integrate(
    params: LaserParams, initial: MomentState, config: IntegrationConfig
) -> IntegrationResult:
    """Advance the moments with classical fixed-step RK4.

    Integration starts at ``initial`` and runs until t_max or until every
    derivative component drops below convergence_tol, whichever comes first.
    Samples are recorded at t = 0 and every sample_stride-th step; the final
    state is always included.

    Raises
    ------
    StepTooLarge
        If config.dt exceeds the stability guard ``max_stable_dt(params)``.
    Diverged
        If any component magnitude passes the overflow guard or an
        occupation turns negative beyond rounding, as happens for
        operating points with no stationary state (eta < 0 deep enough).
    """
    guard = max_stable_dt(params)
    if config.dt > guard * (1.0 + 1e-12):
        raise StepTooLarge(
            f"dt = {config.dt:g} ms exceeds the stability guard {guard:g} ms"
        )
    g1, g2, coup, src = _coefficients(params)
    y = initial.to_tuple()
    n_steps = max(1, int(math.ceil(config.t_max / config.dt - 1e-9)))

    times: list[float] = []
    states: list[MomentState] = []
    converged = False
    step = 0

    def record(t: float) -> None:
        _check_sample(y, 1e-9)
        times.append(t)
        states.append(MomentState.from_tuple(y))

    record(0.0)
    while step < n_steps:
        y_next, k1 = _rk4_step(y, config.dt, g1, g2, coup, src)
        if max(abs(v) for v in k1) < config.convergence_tol:
            converged = True
            break
        y = y_next
        step += 1
        if step % config.sample_stride == 0 or step == n_steps:
            record(step * config.dt)
    else:
        # Ran to t_max; check whether the end point happens to be stationary.
        k1 = _derivative(*y, g1, g2, coup, src)
        converged = max(abs(v) for v in k1) < config.convergence_tol

    if not times or times[-1] != step * config.dt:
        record(step * config.dt)

    final = states[-1]
    return IntegrationResult(
        times=np.asarray(times),
        states=states,
        final=final,
        converged=converged,
        steps=step,
    )


def _vacuum_sector_map(params: LaserParams) -> tuple[np.ndarray, np.ndarray]:
    """The occupation sector (n1, n2, Re m12) as an affine system y' = R y + b.

    From vacuum initial data every other moment component stays exactly zero
    (the invariant manifold enforced step by step in :func:`integrate`), and
    the derivatives of these three never reference the zero components, so
    the full flow restricts to this closed 3-dimensional system.  Built by
    evaluating the derivative on basis states rather than transcribing the
    coefficients, to stay independent of the closed-form module.
    """
    g1, g2, coup, src = _coefficients(params)

    def rhs(n1: float, n2: float, re_m: float) -> np.ndarray:
        d = _derivative(
            0.0, 0.0, 0.0, 0.0, n1, n2, complex(re_m, 0.0), 0.0,
            g1, g2, coup, src,
        )
        return np.array([d[4].real, d[5].real, d[6].real])

    b = rhs(0.0, 0.0, 0.0)
    r = np.column_stack([
        rhs(1.0, 0.0, 0.0) - b,
        rhs(0.0, 1.0, 0.0) - b,
        rhs(0.0, 0.0, 1.0) - b,
    ])
    return r, b


def rk4_flow_steady_state(
    params: LaserParams,
    convergence_tol: float,
    dt: float | None = None,
    max_chunks: int = 512,
    max_polish_steps: int = 200_000,
) -> tuple[MomentState, bool, int]:
    """Long-time limit of the fixed-step RK4 flow from vacuum.

    For an affine system the classical RK4 step is exactly the degree-4
    Taylor polynomial of the flow map, y -> Phi y + psi.  This routine forms
    that one-step map on the vacuum-reachable (n1, n2, Re m12) sector,
    squares it just until it is a solid contraction (squaring all the way to
    the horizon amplifies rounding by the squared stiffness ratio, while
    literal tiny steps would crawl), then repeats the chunk map until every
    derivative component at the current state is below ``convergence_tol``.
    The squarings amplify rounding in the accumulated drift term by roughly
    the squared ratio of the fastest rate to the slowest, which at stiff
    operating points eats half the significand; the map is therefore carried
    in extended precision and only the final state is rounded back.  Should
    the chunk iteration still bottom out at its own floating-point fixed
    point short of the tolerance, the run finishes with literal single
    steps, whose fixed point is accurate to a few ulp.  The result is the
    literal RK4 trajectory state after ``steps`` steps, up to rounding.

    Returns (final state, converged flag, number of RK4 steps represented).

    Raises
    ------
    StepTooLarge
        If an explicit dt exceeds the stability guard.
    Diverged
        If the flow leaves the overflow guard (unstable operating point).
    """
    r, b = _vacuum_sector_map(params)

    if float(np.max(np.abs(b))) < convergence_tol:
        return MomentState.vacuum(), True, 0

    guard = max_stable_dt(params)
    if dt is None:
        dt = guard
    elif dt > guard * (1.0 + 1e-12):
        raise StepTooLarge(
            f"dt = {dt:g} ms exceeds the stability guard {guard:g} ms"
        )

    # Exact RK4 one-step map for the affine system, in extended precision.
    r_x = r.astype(np.longdouble)
    b_x = b.astype(np.longdouble)
    dtr = np.longdouble(dt) * r_x
    eye = np.eye(3, dtype=np.longdouble)
    phi = eye + dtr @ (eye + dtr @ (eye / 2.0 + dtr @ (eye / 6.0 + dtr / 24.0)))
    psi = np.longdouble(dt) * (
        (eye + dtr @ (eye / 2.0 + dtr @ (eye / 6.0 + dtr / 24.0))) @ b_x
    )

    phi_step = phi.copy()
    psi_step = psi.copy()

    chunk_steps = 1
    for _ in range(40):
        if float(np.max(np.abs(phi))) <= 0.5:
            break
        if float(np.max(np.abs(psi))) > OVERFLOW_GUARD:
            raise Diverged("flow exceeds overflow guard; no stationary state")
        psi = phi @ psi + psi
        phi = phi @ phi
        chunk_steps *= 2

    y = psi.copy()  # state after one chunk from vacuum
    steps = chunk_steps
    for _ in range(max_chunks):
        deriv = r_x @ y + b_x
        if float(np.max(np.abs(deriv))) < convergence_tol:
            return _state_from_sector(y), True, steps
        if float(np.max(np.abs(y))) > OVERFLOW_GUARD:
            raise Diverged("flow exceeds overflow guard; no stationary state")
        y_next = phi @ y + psi
        if np.array_equal(y_next, y):
            break  # chunk map pinned at its own rounding floor
        y = y_next
        steps += chunk_steps

    for _ in range(max_polish_steps):
        deriv = r_x @ y + b_x
        if float(np.max(np.abs(deriv))) < convergence_tol:
            return _state_from_sector(y), True, steps
        if float(np.max(np.abs(y))) > OVERFLOW_GUARD:
            raise Diverged("flow exceeds overflow guard; no stationary state")
        y = phi_step @ y + psi_step
        steps += 1
    deriv = r_x @ y + b_x
    converged = float(np.max(np.abs(deriv))) < convergence_tol
    return _state_from_sector(y), converged, steps


def _state_from_sector(vec: np.ndarray) -> MomentState:
    return MomentState(
        c1=0.0, c2=0.0, c1sq=0.0, c2sq=0.0,
        n1=float(vec[0]), n2=float(vec[1]),
        m12=complex(float(vec[2]), 0.0), x12=0.0,
    )


def steady_state_linear_solve(params: LaserParams) -> SteadyStateMoments:
    """Stationary (n1, n2, m) from the 3x3 stationarity conditions.

    At a stationary point the means, squeezings and x12 all vanish and the
    occupations satisfy

        Gamma_1 n1 + (A rho_ul) m = A rho_uu
        Gamma_2 n2 - (A rho_ul) m = 0
        ((2 kappa + A eta)/2) m - (A rho_ul / 2)(n1 - n2) = A rho_ul / 2.

    Solved by Gaussian elimination with partial pivoting, fully independent
    of the closed forms in :mod:`trilaser.laser`.  At strong gain the matrix
    entries dwarf its eigenvalues (the products Gamma_1 Gamma_2 and
    (A rho_ul)^2 cancel almost completely), so the elimination is carried in
    extended precision to keep the result well inside double accuracy.

    Raises
    ------
    SingularSystem
        If the system determinant is below 1e-12 relative to the row scale
        (kappa + A*eta = 0 makes it exactly singular).
    """
    g1, g2, coup, _ = _coefficients(params)
    src = params.gain_A * params.rho_uu
    damp = 0.5 * (g1 + g2)
    ld = np.longdouble
    a = [
        [ld(g1), ld(0.0), ld(coup)],
        [ld(0.0), ld(g2), ld(-coup)],
        [ld(-0.5 * coup), ld(0.5 * coup), ld(damp)],
    ]
    rhs = [ld(src), ld(0.0), ld(0.5 * coup)]

    scale = ld(1.0)
    for row in a:
        scale *= max(max(abs(v) for v in row), ld(1e-300))

    det = ld(1.0)
    for col in range(3):
        pivot_row = max(range(col, 3), key=lambda i: abs(a[i][col]))
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
            det = -det
        pivot = a[col][col]
        det *= pivot
        if abs(det) < 1e-12 * scale and col == 2:
            break
        if pivot == 0.0:
            det = 0.0
            break
        for i in range(col + 1, 3):
            factor = a[i][col] / pivot
            rhs[i] -= factor * rhs[col]
            for j in range(col, 3):
                a[i][j] -= factor * a[col][j]

    if abs(det) < 1e-12 * scale:
        raise SingularSystem(
            f"stationarity system determinant {det:g} below 1e-12 of scale {scale:g}"
        )

    x = [ld(0.0), ld(0.0), ld(0.0)]
    for i in (2, 1, 0):
        acc = rhs[i]
        for j in range(i + 1, 3):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return SteadyStateMoments(n1=float(x[0]), n2=float(x[1]), m=float(x[2]))
