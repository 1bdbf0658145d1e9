"""Cascade-laser parameters and the stationary Gaussian state of its two modes.

A beam of three-level atoms in a cascade configuration (upper, intermediate,
lower) is injected into a doubly resonant cavity.  After adiabatic
elimination of the atoms, the two cavity modes obey linear moment equations
controlled by three numbers: the gain A, the cavity decay rate kappa (both in
kHz) and the dimensionless population inversion eta.  This module holds the
parameter containers, the closed-form stationary second moments and the
covariance matrix they define.

All rates are in kHz, so times are in ms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import InvalidParameter, NoStationaryState
from .gaussian import TwoModeCovariance

#: Warn when atomic_decay_gamma < GOOD_CAVITY_RATIO * kappa: the adiabatic
#: elimination behind the moment equations assumes gamma >> kappa.
GOOD_CAVITY_RATIO = 5.0


@dataclass(frozen=True)
class AtomCavityParams:
    """Microscopic atom-field parameters the gain derives from.

    injection_rate_rho and coupling_epsilon may be zero (no atoms, no
    coupling); atomic_decay_gamma must be positive.  All in kHz.
    """

    injection_rate_rho: float
    coupling_epsilon: float
    atomic_decay_gamma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.injection_rate_rho) and self.injection_rate_rho >= 0.0):
            raise InvalidParameter("injection_rate_rho must be finite and >= 0")
        if not (math.isfinite(self.coupling_epsilon) and self.coupling_epsilon >= 0.0):
            raise InvalidParameter("coupling_epsilon must be finite and >= 0")
        if not (math.isfinite(self.atomic_decay_gamma) and self.atomic_decay_gamma > 0.0):
            raise InvalidParameter("atomic_decay_gamma must be finite and > 0")


def derive_gain(atom: AtomCavityParams) -> float:
    """Gain A = 2 rho epsilon^2 / gamma^2 in kHz."""
    return (
        2.0
        * atom.injection_rate_rho
        * atom.coupling_epsilon**2
        / atom.atomic_decay_gamma**2
    )


def _population_triple(eta: float) -> tuple[float, float, float]:
    """(rho_uu, rho_ll, rho_ul) for any inversion in [-1, 1]."""
    rho_uu = 0.5 * (1.0 - eta)
    rho_ll = 0.5 * (1.0 + eta)
    rho_ul = 0.5 * math.sqrt((1.0 - eta) * (1.0 + eta))
    return rho_uu, rho_ll, rho_ul


def populations(eta: float) -> tuple[float, float, float]:
    """Steady atomic populations and coherence (rho_uu, rho_ll, rho_ul).

    rho_uu = (1 - eta)/2, rho_ll = (1 + eta)/2, rho_ul = sqrt(1 - eta^2)/2.
    The stationary-state formulas are meaningful for eta in [0, 1] only.
    """
    if not (math.isfinite(eta) and 0.0 <= eta <= 1.0):
        raise InvalidParameter(f"eta = {eta!r} outside [0, 1]")
    return _population_triple(eta)


@dataclass(frozen=True)
class LaserParams:
    """Operating point of the laser: gain, cavity decay, inversion.

    eta is accepted on the full range [-1, 1] the moment equations are
    written for; the stationary-state operations additionally require
    eta >= 0 (below that the stationary formulas lose physical meaning, and
    for kappa + A*eta <= 0 no stationary state exists at all).
    """

    gain_A: float
    kappa: float
    eta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gain_A) and self.gain_A >= 0.0):
            raise InvalidParameter("gain_A must be finite and >= 0")
        if not (math.isfinite(self.kappa) and self.kappa >= 0.0):
            raise InvalidParameter("kappa must be finite and >= 0")
        if not (math.isfinite(self.eta) and -1.0 <= self.eta <= 1.0):
            raise InvalidParameter(f"eta = {self.eta!r} outside [-1, 1]")

    @classmethod
    def from_atomic(
        cls, atom: AtomCavityParams, kappa: float, eta: float
    ) -> "LaserParams":
        """Build the operating point from microscopic atomic parameters.

        Warns (UserWarning) when gamma < GOOD_CAVITY_RATIO * kappa, where the
        good-cavity assumption behind the moment equations becomes doubtful.
        """
        if atom.atomic_decay_gamma < GOOD_CAVITY_RATIO * kappa:
            warnings.warn(
                f"atomic decay gamma = {atom.atomic_decay_gamma:g} kHz is not "
                f"large against kappa = {kappa:g} kHz; the good-cavity "
                "approximation may not hold",
                UserWarning,
                stacklevel=2,
            )
        return cls(gain_A=derive_gain(atom), kappa=kappa, eta=eta)

    @property
    def rho_uu(self) -> float:
        return _population_triple(self.eta)[0]

    @property
    def rho_ll(self) -> float:
        return _population_triple(self.eta)[1]

    @property
    def rho_ul(self) -> float:
        return _population_triple(self.eta)[2]


def decay_rates(params: LaserParams) -> tuple[float, float]:
    """Effective mode decay rates (Gamma_1, Gamma_2) in kHz.

    Gamma_1 = kappa - A rho_uu may be negative (mode 1 sees gain);
    Gamma_2 = kappa + A rho_ll is always >= kappa.
    """
    gamma1 = params.kappa - params.gain_A * params.rho_uu
    gamma2 = params.kappa + params.gain_A * params.rho_ll
    return gamma1, gamma2


@dataclass(frozen=True)
class SteadyStateMoments:
    """Stationary second moments: mean occupations n1 >= n2 and the
    intermodal correlation m = <c1 c2> (real and nonnegative here)."""

    n1: float
    n2: float
    m: float


def _require_stationary(params: LaserParams) -> tuple[float, float]:
    """Validate the stationary-domain preconditions; return (d1, d2) =
    (kappa + A eta, 2 kappa + A eta)."""
    if params.eta < 0.0:
        raise InvalidParameter(
            "stationary formulas are physically meaningful for eta >= 0 only"
        )
    d1 = params.kappa + params.gain_A * params.eta
    if d1 <= 0.0:
        raise NoStationaryState(
            f"kappa + A*eta = {d1:g} <= 0: the moment equations have no "
            "stationary solution"
        )
    return d1, params.kappa + d1


def steady_moments(params: LaserParams) -> SteadyStateMoments:
    """Closed-form stationary second moments.

    The expressions used here are the cancelled rational forms

        n1 = A (1-eta) (A + 4 kappa + 3 A eta) / D,
        n2 = A^2 (1-eta) (1+eta) / D,
        m  = A sqrt((1-eta)(1+eta)) (A + 2 kappa + A eta) / D,

    with D = 4 (kappa + A eta) (2 kappa + A eta).  They are algebraically
    identical to the textbook two-term expressions but remain finite and
    accurate as eta -> 0, where the raw terms individually diverge like
    1/eta.

    Raises
    ------
    InvalidParameter
        If eta < 0.
    NoStationaryState
        If kappa + A*eta <= 0 (e.g. kappa = 0, eta = 0).
    """
    d1, d2 = _require_stationary(params)
    a, eta, kappa = params.gain_A, params.eta, params.kappa
    denom = 4.0 * d1 * d2
    one_minus = 1.0 - eta
    one_plus = 1.0 + eta
    n1 = a * one_minus * (a + 4.0 * kappa + 3.0 * a * eta) / denom
    n2 = a * a * one_minus * one_plus / denom
    m = a * math.sqrt(one_minus * one_plus) * (a + 2.0 * kappa + a * eta) / denom
    return SteadyStateMoments(n1=n1, n2=n2, m=m)


def photon_difference(params: LaserParams) -> float:
    """Stationary occupation difference n1 - n2 = A (1-eta) / (2 (kappa + A eta)).

    This combination is nonnegative for every admissible operating point,
    which is what pins the steering asymmetry to the mode-1 -> mode-2
    direction.
    """
    d1, _ = _require_stationary(params)
    return params.gain_A * (1.0 - params.eta) / (2.0 * d1)


def covariance(params: LaserParams) -> TwoModeCovariance:
    """Standard-form covariance of the stationary state:
    alpha_j = 2 n_j + 1, beta = 2 m."""
    mom = steady_moments(params)
    return TwoModeCovariance(
        alpha1=2.0 * mom.n1 + 1.0,
        alpha2=2.0 * mom.n2 + 1.0,
        beta=2.0 * mom.m,
    )
