"""Covariance algebra and correlation measures for two-mode Gaussian states.

Everything here operates on states in *standard form*: each single-mode
block of the 4x4 covariance matrix is alpha_j * I_2 and the cross block is
diag(beta, -beta).  Quadratures are x = c^dag + c and y = i(c^dag - c), so
the vacuum variance is 1.  Steering and entanglement are reported in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateBlock,
    MalformedCovariance,
    OutsideFormulaDomain,
    UnphysicalState,
)

#: Numerical tolerance used for physicality and branch-boundary decisions.
TOL_NUM = 1e-9

#: Threshold above which a steering value counts as "steerable" when
#: classifying regimes.
EPS_STEER = 1e-12

#: Single-mode symplectic form.
SYMPLECTIC_FORM = np.array([[0.0, 1.0], [-1.0, 0.0]])


class Direction(Enum):
    """Steering direction.  FORWARD means mode 1 steers mode 2."""

    FORWARD = "forward"
    BACKWARD = "backward"


class Regime(Enum):
    """Directional steering classification of a two-mode state."""

    TWO_WAY = "two_way"
    ONE_WAY_FORWARD = "one_way_forward"
    ONE_WAY_BACKWARD = "one_way_backward"
    NO_WAY = "no_way"


@dataclass(frozen=True)
class TwoModeCovariance:
    """Standard-form covariance matrix of a two-mode Gaussian state.

    Parameters
    ----------
    alpha1, alpha2 : float
        Diagonal variances of mode 1 and mode 2 (vacuum = 1).
    beta : float
        Cross-correlation amplitude; the cross block is diag(beta, -beta).
    """

    alpha1: float
    alpha2: float
    beta: float

    @property
    def g(self) -> float:
        """Global invariant alpha1*alpha2 - beta**2 (sqrt of det sigma)."""
        return self.alpha1 * self.alpha2 - self.beta * self.beta

    @property
    def s_plus(self) -> float:
        """(alpha1 + alpha2) / 2."""
        return 0.5 * (self.alpha1 + self.alpha2)

    @property
    def s_minus(self) -> float:
        """(alpha1 - alpha2) / 2."""
        return 0.5 * (self.alpha1 - self.alpha2)

    def mode_block(self, mode: int) -> np.ndarray:
        """2x2 covariance block of mode 1 or 2."""
        if mode not in (1, 2):
            raise ValueError("mode must be 1 or 2")
        alpha = self.alpha1 if mode == 1 else self.alpha2
        return alpha * np.eye(2)

    def cross_block(self) -> np.ndarray:
        """2x2 intermodal block diag(beta, -beta)."""
        return np.diag([self.beta, -self.beta])

    def matrix(self) -> np.ndarray:
        """Explicit 4x4 covariance matrix."""
        out = np.zeros((4, 4))
        out[:2, :2] = self.mode_block(1)
        out[2:, 2:] = self.mode_block(2)
        out[:2, 2:] = self.cross_block()
        out[2:, :2] = self.cross_block().T
        return out

    def swapped(self) -> "TwoModeCovariance":
        """The same state with the mode labels exchanged."""
        return TwoModeCovariance(self.alpha2, self.alpha1, self.beta)


@dataclass(frozen=True)
class SteeringReport:
    """Steering in both directions plus the derived regime label."""

    g12: float
    g21: float
    gmax: float
    regime: Regime

    def __post_init__(self) -> None:
        if self.gmax != max(self.g12, self.g21):
            raise ValueError("gmax must equal max(g12, g21)")


def symplectic_eigenvalues(
    cm: TwoModeCovariance, tol: float = TOL_NUM
) -> tuple[float, float]:
    """Symplectic spectrum (nu_minus, nu_plus) of a standard-form state.

    Uses the two-mode invariant Delta = alpha1^2 + alpha2^2 - 2 beta^2:
    nu_-+^2 = (Delta -+ sqrt(Delta^2 - 4 g^2)) / 2.  A physical state has
    nu_minus >= 1.

    Raises
    ------
    MalformedCovariance
        If the spectrum is not real beyond tolerance (Delta^2 < 4 g^2, or a
        negative squared eigenvalue).
    """
    a1, a2, b = cm.alpha1, cm.alpha2, cm.beta
    g = cm.g
    delta = a1 * a1 + a2 * a2 - 2.0 * b * b
    disc = delta * delta - 4.0 * g * g
    scale = max(1.0, delta * delta, 4.0 * g * g)
    if disc < -tol * scale:
        raise MalformedCovariance(
            f"complex symplectic spectrum: Delta^2 - 4 g^2 = {disc:g}"
        )
    root = math.sqrt(max(disc, 0.0))
    lo_sq = 0.5 * (delta - root)
    hi_sq = 0.5 * (delta + root)
    sq_scale = max(1.0, abs(delta))
    if hi_sq < -tol * sq_scale or lo_sq < -tol * sq_scale:
        raise MalformedCovariance(
            f"negative squared symplectic eigenvalue: {lo_sq:g}"
        )
    return math.sqrt(max(lo_sq, 0.0)), math.sqrt(max(hi_sq, 0.0))


def is_physical(cm: TwoModeCovariance, tol: float = TOL_NUM) -> bool:
    """Whether cm satisfies the bona fide condition sigma + i Omega >= 0.

    For the standard form this reduces to alpha1 >= 1, alpha2 >= 1 and
    nu_minus >= 1, each checked with tolerance ``tol``.
    """
    if cm.alpha1 < 1.0 - tol or cm.alpha2 < 1.0 - tol:
        return False
    nu_minus, _ = symplectic_eigenvalues(cm, tol)
    return nu_minus >= 1.0 - tol


def _steerer_alpha(cm: TwoModeCovariance, direction: Direction) -> float:
    return cm.alpha1 if direction is Direction.FORWARD else cm.alpha2


def schur_complement(cm: TwoModeCovariance, direction: Direction) -> np.ndarray:
    """Schur complement of the steering party's block, as an explicit matrix.

    For FORWARD (mode 1 steers mode 2) this is
    sigma_2 - C^T sigma_1^{-1} C with C the cross block.

    Raises
    ------
    DegenerateBlock
        If the steering party's block is not positive definite.
    """
    alpha = _steerer_alpha(cm, direction)
    if alpha <= 0.0:
        raise DegenerateBlock(
            f"steering block alpha = {alpha:g} is not positive definite"
        )
    cross = cm.cross_block()
    if direction is Direction.FORWARD:
        steerer, steered = cm.mode_block(1), cm.mode_block(2)
        coupling = cross
    else:
        steerer, steered = cm.mode_block(2), cm.mode_block(1)
        coupling = cross.T
    return steered - coupling.T @ np.linalg.inv(steerer) @ coupling


def steering_mu(
    cm: TwoModeCovariance, direction: Direction, tol: float = TOL_NUM
) -> float:
    """sqrt(det) of the steered party's Schur complement.

    The value is computed from the explicit 2x2 matrix and cross-checked
    against the standard-form closed expression g / alpha_steerer; the two
    must agree to ``tol``.
    """
    schur = schur_complement(cm, direction)
    det = float(np.linalg.det(schur))
    det_scale = max(1.0, abs(det))
    if det < -tol * det_scale:
        raise MalformedCovariance(f"negative Schur determinant: {det:g}")
    mu = math.sqrt(max(det, 0.0))
    closed = cm.g / _steerer_alpha(cm, direction)
    if abs(mu - closed) > tol * max(1.0, abs(closed)):
        raise MalformedCovariance(
            "Schur-complement determinant disagrees with the standard-form "
            f"closed expression: {mu:g} vs {closed:g}"
        )
    return mu


def steering(
    cm: TwoModeCovariance, direction: Direction, tol: float = TOL_NUM
) -> float:
    """Gaussian steering measure in the given direction, in nats.

    Computed from the determinant ratio of the steering party's block and
    the full covariance: max(0, (1/2) ln(det sigma_steerer / det sigma)),
    with det sigma = g^2 for the standard form.

    Raises
    ------
    UnphysicalState
        If cm fails the bona fide condition.
    """
    if not is_physical(cm, tol):
        raise UnphysicalState("steering is defined for physical states only")
    alpha = _steerer_alpha(cm, direction)
    det_steerer = alpha * alpha
    det_full = cm.g * cm.g
    return max(0.0, 0.5 * math.log(det_steerer / det_full))


def lmi_steerable(
    cm: TwoModeCovariance, direction: Direction, tol: float = TOL_NUM
) -> bool:
    """Steerability decided from the linear matrix inequality.

    The state is steerable in ``direction`` when
    sigma + i (0_steerer (+) Pi_steered) >= 0 is violated, i.e. when the
    minimum eigenvalue of (Schur complement - i Pi) is negative.  For the
    standard form this reduces to mu < 1 - tol.  The verdict must agree with
    ``steering(...) > 0`` on every physical input.
    """
    if not is_physical(cm, tol):
        raise UnphysicalState("steerability is defined for physical states only")
    schur = schur_complement(cm, direction)
    herm = schur.astype(complex) - 1j * SYMPLECTIC_FORM
    half_trace = 0.5 * (herm[0, 0].real + herm[1, 1].real)
    radius = math.hypot(
        0.5 * (herm[0, 0].real - herm[1, 1].real), abs(herm[0, 1])
    )
    return half_trace - radius < -tol


def classify_regime(
    g12: float, g21: float, eps_steer: float = EPS_STEER
) -> Regime:
    """Label nonnegative steering values as two-way / one-way / no-way.

    A direction counts as steerable when its value exceeds ``eps_steer``.
    """
    fwd = g12 > eps_steer
    bwd = g21 > eps_steer
    if fwd and bwd:
        return Regime.TWO_WAY
    if fwd:
        return Regime.ONE_WAY_FORWARD
    if bwd:
        return Regime.ONE_WAY_BACKWARD
    return Regime.NO_WAY


def steering_report(
    cm: TwoModeCovariance, eps_steer: float = EPS_STEER, tol: float = TOL_NUM
) -> SteeringReport:
    """Steering in both directions and the resulting regime label."""
    g12 = steering(cm, Direction.FORWARD, tol)
    g21 = steering(cm, Direction.BACKWARD, tol)
    return SteeringReport(
        g12=g12,
        g21=g21,
        gmax=max(g12, g21),
        regime=classify_regime(g12, g21, eps_steer),
    )


def renyi2_entanglement(cm: TwoModeCovariance, tol: float = TOL_NUM) -> float:
    """Renyi-2 entanglement of formation for squeezed-thermal states, in nats.

    With s_pm = (alpha1 +- alpha2)/2 and the invariant g:

    * g >= 2 s_plus - 1: the state is separable, E2 = 0 (the boundary is
      assigned to the zero branch);
    * 2|s_minus| + 1 <= g < 2 s_plus - 1:
      E2 = (1/2) ln[ ((g+1) s_plus - sqrt([(g-1)^2 - 4 s_minus^2]
           [s_plus^2 - s_minus^2 - g]))^2 / (4 (s_minus^2 + g)^2) ];
    * g < 2|s_minus| + 1 (beyond tolerance): the closed form does not apply.

    The radicand is clamped to 0 when within tolerance below zero; such
    values arise at the pure-state boundary g = 1.

    Raises
    ------
    UnphysicalState
        If cm fails the bona fide condition.
    OutsideFormulaDomain
        If g < 2|s_minus| + 1 beyond tolerance.
    """
    if not is_physical(cm, tol):
        raise UnphysicalState("entanglement is defined for physical states only")
    g = cm.g
    s_plus = cm.s_plus
    s_minus = cm.s_minus
    if g >= 2.0 * s_plus - 1.0:
        return 0.0
    lower = 2.0 * abs(s_minus) + 1.0
    if g < lower - tol * max(1.0, lower):
        raise OutsideFormulaDomain(
            f"g = {g:g} below the squeezed-thermal bound {lower:g}"
        )
    first = (g - 1.0) * (g - 1.0) - 4.0 * s_minus * s_minus
    second = s_plus * s_plus - s_minus * s_minus - g
    radicand = first * second
    if radicand < 0.0:
        if radicand < -tol * max(1.0, abs(first), abs(second)):
            raise OutsideFormulaDomain(
                f"negative radicand {radicand:g} beyond tolerance"
            )
        radicand = 0.0
    numerator = (g + 1.0) * s_plus - math.sqrt(radicand)
    denominator = 2.0 * (s_minus * s_minus + g)
    value = 0.5 * math.log((numerator / denominator) ** 2)
    return max(0.0, value)
