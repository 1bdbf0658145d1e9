"""Parameter sweeps over the laser's operating space.

A sweep varies one of the three operating parameters (gain, cavity decay,
population inversion) while the other two stay fixed; a grid crosses two
axes.  Each sample point is evaluated to a flat record carrying the
stationary moments, the covariance entries and the steering and
entanglement measures, ready for delimited export.  Points with no
stationary state are emitted as flagged records rather than dropped, so
downstream consumers can mask them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, TypeVar

import numpy as np

from .errors import InvalidParameter, InvalidSpec, NoStationaryState
from .gaussian import (
    EPS_STEER,
    Regime,
    TwoModeCovariance,
    renyi2_entanglement,
    steering_report,
    symplectic_eigenvalues,
)
from .laser import LaserParams, covariance, steady_moments

STATUS_OK = "ok"
STATUS_NO_STATIONARY = "no_stationary_state"

_T = TypeVar("_T")
_U = TypeVar("_U")


class Varied(Enum):
    """Which operating parameter an axis runs over."""

    ETA = "eta"
    KAPPA = "kappa"
    GAIN = "gain"


#: Admissible closed range for each parameter on a sweep axis.
_AXIS_RANGE: dict[Varied, tuple[float, float]] = {
    Varied.ETA: (0.0, 1.0),
    Varied.KAPPA: (0.0, math.inf),
    Varied.GAIN: (0.0, math.inf),
}


def _check_value(varied: Varied, value: float) -> None:
    lo, hi = _AXIS_RANGE[varied]
    if not (math.isfinite(value) and lo <= value <= hi):
        raise InvalidSpec(
            f"{varied.value} = {value:g} outside the admissible range [{lo:g}, {hi:g}]"
        )


def _params_from(values: Mapping[Varied, float]) -> LaserParams:
    return LaserParams(
        gain_A=values[Varied.GAIN],
        kappa=values[Varied.KAPPA],
        eta=values[Varied.ETA],
    )


@dataclass(frozen=True)
class Axis:
    """A uniformly spaced, endpoint-inclusive run of one parameter."""

    varied: Varied
    start: float
    end: float
    steps: int

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise InvalidSpec("axis needs at least one step")
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise InvalidSpec("axis endpoints must be finite")
        if self.start > self.end:
            raise InvalidSpec("axis start must not exceed its end")
        if self.steps == 1 and self.start != self.end:
            raise InvalidSpec("a single-step axis needs start == end")
        _check_value(self.varied, self.start)
        _check_value(self.varied, self.end)

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.start]
        return [float(v) for v in np.linspace(self.start, self.end, self.steps)]


@dataclass(frozen=True)
class SweepSpec:
    """One varied parameter over [start, end] with the other two fixed."""

    varied: Varied
    start: float
    end: float
    steps: int
    fixed: Mapping[Varied, float]

    def __post_init__(self) -> None:
        if self.steps < 2:
            raise InvalidSpec("a sweep needs at least two steps")
        object.__setattr__(self, "fixed", dict(self.fixed))
        expected = {v for v in Varied if v is not self.varied}
        if set(self.fixed) != expected:
            names = ", ".join(sorted(v.value for v in expected))
            raise InvalidSpec(f"fixed must supply exactly: {names}")
        for varied, value in self.fixed.items():
            _check_value(varied, value)
        self._axis()  # validates the varied range

    def _axis(self) -> Axis:
        return Axis(self.varied, self.start, self.end, self.steps)

    def values(self) -> list[float]:
        return self._axis().values()

    def params_at(self, value: float) -> LaserParams:
        return _params_from({self.varied: value, **self.fixed})


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated operating point, flat for delimited export.

    For a point with no stationary state every measure is NaN, regime is
    None and status is "no_stationary_state".
    """

    gain_A: float
    kappa: float
    eta: float
    n1: float
    n2: float
    m: float
    alpha1: float
    alpha2: float
    beta: float
    nu_minus: float
    g12: float
    g21: float
    gmax: float
    e2: float
    e2_minus_gmax: float
    regime: Regime | None
    status: str


def _failed_record(params: LaserParams) -> SweepRecord:
    nan = math.nan
    return SweepRecord(
        gain_A=params.gain_A,
        kappa=params.kappa,
        eta=params.eta,
        n1=nan,
        n2=nan,
        m=nan,
        alpha1=nan,
        alpha2=nan,
        beta=nan,
        nu_minus=nan,
        g12=nan,
        g21=nan,
        gmax=nan,
        e2=nan,
        e2_minus_gmax=nan,
        regime=None,
        status=STATUS_NO_STATIONARY,
    )


def evaluate_point(
    params: LaserParams, eps_steer: float = EPS_STEER
) -> SweepRecord:
    """Stationary moments plus all derived measures at one operating point."""
    try:
        moments = steady_moments(params)
        cm = covariance(params)
    except NoStationaryState:
        return _failed_record(params)
    nu_minus, _ = symplectic_eigenvalues(cm)
    report = steering_report(cm, eps_steer=eps_steer)
    e2 = renyi2_entanglement(cm)
    return SweepRecord(
        gain_A=params.gain_A,
        kappa=params.kappa,
        eta=params.eta,
        n1=moments.n1,
        n2=moments.n2,
        m=moments.m,
        alpha1=cm.alpha1,
        alpha2=cm.alpha2,
        beta=cm.beta,
        nu_minus=nu_minus,
        g12=report.g12,
        g21=report.g21,
        gmax=report.gmax,
        e2=e2,
        e2_minus_gmax=e2 - report.gmax,
        regime=report.regime,
        status=STATUS_OK,
    )


def _map(
    fn: Callable[[_T], _U], items: Iterable[_T], threads: int
) -> list[_U]:
    """Order-preserving map, optionally fanned out over a thread pool."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_sweep(
    spec: SweepSpec, eps_steer: float = EPS_STEER, threads: int = 1
) -> list[SweepRecord]:
    """Evaluate the sweep, one record per sample, in parameter order."""
    points = [spec.params_at(v) for v in spec.values()]
    return _map(lambda p: evaluate_point(p, eps_steer), points, threads)


def run_grid(
    x_axis: Axis,
    y_axis: Axis,
    fixed: Mapping[Varied, float],
    eps_steer: float = EPS_STEER,
    threads: int = 1,
) -> list[SweepRecord]:
    """Cross-product evaluation, row-major: y varies slowest, x fastest."""
    if x_axis.varied is y_axis.varied:
        raise InvalidSpec("grid axes must vary different parameters")
    (remaining,) = {v for v in Varied} - {x_axis.varied, y_axis.varied}
    if set(fixed) != {remaining}:
        raise InvalidSpec(f"fixed must supply exactly: {remaining.value}")
    _check_value(remaining, fixed[remaining])
    points = [
        _params_from({x_axis.varied: x, y_axis.varied: y, remaining: fixed[remaining]})
        for y in y_axis.values()
        for x in x_axis.values()
    ]
    return _map(lambda p: evaluate_point(p, eps_steer), points, threads)


def find_one_way_boundary(
    gain_A: float,
    kappa: float,
    eta_lo: float,
    eta_hi: float,
    eps_steer: float = EPS_STEER,
    tol: float = 1e-8,
) -> float | None:
    """Population inversion at which backward steering dies out.

    Bisects g21(eta) - eps_steer on [eta_lo, eta_hi] down to an interval of
    width tol and returns its midpoint.  Returns None when the endpoints do
    not bracket a sign change: either backward steering is absent on the
    whole interval or present throughout.
    """
    if not (0.0 <= eta_lo <= eta_hi <= 1.0):
        raise InvalidParameter("need 0 <= eta_lo <= eta_hi <= 1")
    if not (tol > 0.0):
        raise InvalidParameter("tol must be > 0")

    def margin(eta: float) -> float:
        record = evaluate_point(LaserParams(gain_A, kappa, eta), eps_steer)
        if record.status != STATUS_OK:
            return math.nan
        return record.g21 - eps_steer

    f_lo = margin(eta_lo)
    f_hi = margin(eta_hi)
    if math.isnan(f_lo) or math.isnan(f_hi):
        return None
    if f_lo == 0.0:
        return eta_lo
    if f_hi == 0.0:
        return eta_hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        return None

    lo, hi = eta_lo, eta_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = margin(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
