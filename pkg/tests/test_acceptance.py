"""Acceptance gate: one test per shipping criterion.

Each test prints a single ``ACCEPTANCE <n>: PASS/FAIL`` line (run with -s to
see them on success).  Tolerances here are contractual; do not loosen them.
"""

import functools
import math
import subprocess
import sys
import time

import numpy as np
import pytest

import oracles
from trilaser import (
    Axis,
    Direction,
    LaserParams,
    MomentState,
    IntegrationConfig,
    Regime,
    STATUS_OK,
    SweepSpec,
    TwoModeCovariance,
    Varied,
    covariance,
    integrate,
    lmi_steerable,
    photon_difference,
    renyi2_entanglement,
    rk4_flow_steady_state,
    run_grid,
    run_sweep,
    steady_moments,
    steady_state_linear_solve,
    steering,
    steering_mu,
    steering_report,
)


def criterion(number: int, title: str):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {number}: FAIL - {title}")
                raise
            print(f"ACCEPTANCE {number}: PASS - {title}")
        return wrapper
    return decorate


def rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0.0 else 0.0


def max_rel(x: tuple[float, float, float], y: tuple[float, float, float]) -> float:
    return max(rel(a, b) for a, b in zip(x, y))


@pytest.fixture(scope="module")
def grid_reports():
    """Steady state, covariance, and measures at every dense-grid point."""
    out = []
    for gain, kappa, eta in oracles.acceptance_grid():
        params = LaserParams(gain, kappa, eta)
        moments = steady_moments(params)
        report = steering_report(covariance(params))
        out.append((params, moments, report))
    return out


@pytest.fixture(scope="module")
def density_grids():
    kappa_gain = run_grid(
        Axis(Varied.KAPPA, 0.1, 20.0, 100),
        Axis(Varied.GAIN, 1.0, 500.0, 100),
        {Varied.ETA: 0.5},
    )
    eta_gain = run_grid(
        Axis(Varied.ETA, 0.0, 1.0, 100),
        Axis(Varied.GAIN, 1.0, 500.0, 100),
        {Varied.KAPPA: 3.85},
    )
    return kappa_gain, eta_gain


@pytest.fixture(scope="module")
def one_way_sweep():
    return run_sweep(SweepSpec(
        Varied.ETA, 0.0, 1.0, 101, {Varied.GAIN: 50.0, Varied.KAPPA: 3.85}
    ))


@pytest.fixture(scope="module")
def kappa_sweeps():
    return [
        run_sweep(SweepSpec(
            Varied.KAPPA, 0.0, 30.0, 61, {Varied.GAIN: gain, Varied.ETA: 0.25}
        ))
        for gain in (20.0, 100.0)
    ]


@criterion(1, "closed form, linear solve, and RK4 flow agree on the dense grid")
def test_oracle_triangle():
    started = time.monotonic()
    worst_algebraic = 0.0
    worst_dynamic = 0.0
    for gain, kappa, eta in oracles.acceptance_grid():
        params = LaserParams(gain, kappa, eta)
        closed = steady_moments(params)
        closed_t = (closed.n1, closed.n2, closed.m)

        solved = steady_state_linear_solve(params)
        solved_t = (solved.n1, solved.n2, solved.m)

        tol = 1e-8 * kappa * max(1.0, closed.n1)
        state, converged, _ = rk4_flow_steady_state(params, tol)
        assert converged
        flow_t = (state.n1, state.n2, state.m12.real)

        worst_algebraic = max(worst_algebraic, max_rel(closed_t, solved_t))
        worst_dynamic = max(
            worst_dynamic,
            max_rel(closed_t, flow_t),
            max_rel(solved_t, flow_t),
        )
    elapsed = time.monotonic() - started
    assert worst_algebraic <= 1e-10
    assert worst_dynamic <= 1e-6
    assert elapsed < 60.0


@criterion(2, "photon-number difference identity and directional ordering")
def test_difference_identity_and_ordering(grid_reports):
    violations = 0
    for params, moments, report in grid_reports:
        assert rel(moments.n1 - moments.n2, photon_difference(params)) <= 1e-12
        if report.g12 < report.g21:
            violations += 1
    assert violations == 0


@criterion(3, "all measures vanish at full inversion")
def test_vanishing_at_full_inversion():
    rng = np.random.default_rng(170816)
    for _ in range(50):
        gain = rng.uniform(0.0, 2000.0)
        kappa = rng.uniform(0.5, 30.0)
        params = LaserParams(gain, kappa, 1.0)
        moments = steady_moments(params)
        report = steering_report(covariance(params))
        e2 = renyi2_entanglement(covariance(params))
        for value in (moments.n1, moments.n2, moments.m,
                      report.g12, report.g21, e2):
            assert abs(value) < 1e-12


@criterion(4, "entanglement dominates steering across both density grids")
def test_hierarchy_bound(density_grids):
    for records in density_grids:
        assert all(r.status == STATUS_OK for r in records)
        assert len(records) == 10000
        assert min(r.e2_minus_gmax for r in records) >= -1e-10


@criterion(5, "a one-way window exists and backward steering never appears")
def test_one_way_regime(grid_reports, density_grids, one_way_sweep, kappa_sweeps):
    assert any(
        r.e2 > 0.0 and r.g12 > 0.0 and r.g21 == 0.0 for r in one_way_sweep
    )
    regimes = [report.regime for _, _, report in grid_reports]
    for records in (*density_grids, one_way_sweep, *kappa_sweeps):
        regimes.extend(r.regime for r in records)
    assert Regime.ONE_WAY_BACKWARD not in regimes


@criterion(6, "conditional-covariance and determinant-ratio steering paths agree")
def test_measure_cross_validation():
    rng = np.random.default_rng(281115)
    for _ in range(10_000):
        (alpha1, alpha2, beta), _, _ = oracles.sample_squeezed_thermal(rng)
        cm = TwoModeCovariance(alpha1, alpha2, beta)
        for direction in Direction:
            mu = steering_mu(cm, direction)
            from_schur = max(0.0, -math.log(mu))
            measure = steering(cm, direction)
            assert abs(from_schur - measure) <= 1e-10
            assert lmi_steerable(cm, direction) == (measure > 0.0)


@criterion(7, "steering and entanglement decay monotonically in cavity loss")
def test_kappa_monotonicity(kappa_sweeps):
    for records in kappa_sweeps:
        assert records[0].kappa == 0.0
        for field in ("g12", "g21", "e2"):
            values = [getattr(r, field) for r in records]
            assert values[0] == max(values)
            assert all(a >= b for a, b in zip(values, values[1:]))


@criterion(8, "stable rational forms match the two-term forms")
def test_stable_form_equivalence():
    gains = np.linspace(0.0, 2000.0, 20)
    kappas = np.linspace(0.5, 30.0, 20)
    etas = [1e-3, *np.linspace(0.01, 1.0, 20)]
    for gain in gains:
        for kappa in kappas:
            for eta in etas:
                moments = steady_moments(LaserParams(gain, kappa, eta))
                raw = oracles.raw_steady_moments(gain, kappa, eta)
                assert max_rel((moments.n1, moments.n2, moments.m), raw) <= 1e-9
            at_zero = steady_moments(LaserParams(gain, kappa, 0.0))
            near_zero = oracles.raw_steady_moments(gain, kappa, 1e-8)
            assert max_rel((at_zero.n1, at_zero.n2, at_zero.m), near_zero) <= 1e-4


@criterion(9, "integrator error falls at fourth order when dt is halved")
def test_rk4_order():
    # The RK4 fixed point of this affine system IS the exact steady state,
    # so the dt dependence is only visible mid-transient: integrate to a
    # fixed time and compare against the exact propagator solution built
    # from the closed-form steady state.
    params = LaserParams(200.0, 3.85, 0.25)
    t_final = 0.04
    exact = oracles.transient_oracle(200.0, 3.85, 0.25, t_final)

    def error_at(dt: float) -> float:
        cfg = IntegrationConfig(dt=dt, t_max=t_final, convergence_tol=1e-30)
        result = integrate(params, MomentState.vacuum(), cfg)
        got = (result.final.n1, result.final.n2, result.final.m12.real)
        return max(abs(a - b) for a, b in zip(got, exact))

    coarse = error_at(4e-4)
    fine = error_at(2e-4)
    assert fine > 1e-13  # above round-off, so the ratio is meaningful
    assert coarse / fine >= 8.0


@criterion(10, "CLI output is byte-identical across reruns and thread counts")
def test_cli_determinism(tmp_path):
    base = ("sweep", "--param", "eta", "--from", "0", "--to", "1",
            "--steps", "101", "-A", "50", "-k", "3.85")
    outputs = []
    for name, extra in (("a", ()), ("b", ()), ("c", ("--threads", "8"))):
        path = tmp_path / f"{name}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "trilaser", *base, "-o", str(path), *extra],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
