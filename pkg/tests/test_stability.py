import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kickosc.errors import DomainError, RegimeWarning
from kickosc.observables import energy_from_mode
from kickosc.propagator import KickSchedule, evolve_sequential, trace_parameter
from kickosc.stability import (
    BandPoint,
    ProbeResult,
    Regime,
    ScanGrid,
    asymptotic_energy_paper,
    asymptotic_energy_reconciled,
    band_scan,
    classify,
    is_quarter_period,
    log_energy_trajectory,
    lyapunov_exponent,
    resonant_energy_paper,
    resonant_energy_reconciled,
    stable_envelope,
    strong_kick_energy_paper,
    strong_kick_energy_reconciled,
)


def oracle_w(s):
    """W after every kick from the sequential kick_step evolution."""
    return [energy_from_mode(c) for c in evolve_sequential(s)]


@pytest.mark.parametrize("x, regime", [(0.5, Regime.STABLE), (1.0, Regime.EDGE), (2.0, Regime.UNSTABLE),
                                       (-1.0, Regime.EDGE), (-3.0, Regime.UNSTABLE), (-0.2, Regime.STABLE),
                                       (1 + 5e-9, Regime.EDGE), (1 - 5e-9, Regime.EDGE),
                                       (1 + 2e-8, Regime.UNSTABLE), (1 - 2e-8, Regime.STABLE)])
def test_classify(x, regime):
    assert classify(x) is regime


def test_classify_rejects_non_finite():
    with pytest.raises(DomainError):
        classify(math.nan)


def test_regime_labels():
    assert [str(r) for r in Regime] == ["Stable", "Edge", "Unstable"]


def test_lyapunov_examples():
    assert lyapunov_exponent(0.9) == 0.0
    assert lyapunov_exponent(1.0) == 0.0
    assert lyapunov_exponent(2.0) == pytest.approx(math.log(2 + math.sqrt(3)), rel=1e-15)
    assert lyapunov_exponent(2.0) == pytest.approx(1.316958, abs=1e-6)
    assert lyapunov_exponent(-2.0) == lyapunov_exponent(2.0)


@pytest.mark.parametrize("x", [10.0, 1e3, 1e6])
def test_lyapunov_large_x(x):
    assert lyapunov_exponent(x) - math.log(2 * x) == pytest.approx(0.0, abs=1.0 / x**2)


def test_lyapunov_continuous_at_edge():
    vals = [lyapunov_exponent(1 + d) for d in (1e-2, 1e-4, 1e-6, 2e-8)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-3
    # sqrt(2 d) behaviour near the edge
    ref = float(mpmath.acosh(mpmath.mpf(1) + mpmath.mpf("1e-6")))
    assert lyapunov_exponent(1 + 1e-6) == pytest.approx(ref, rel=1e-6)


@given(st.floats(-30, 30))
def test_lyapunov_nonnegative_and_band_zero(x):
    mu = lyapunov_exponent(x)
    assert mu >= 0
    if abs(x) < 1:
        assert mu == 0


@given(st.floats(0.01, 2 * math.pi - 0.01), st.floats(-5, 5))
@settings(max_examples=300)
def test_kappa_flip_symmetry(phase, k):
    a = trace_parameter(KickSchedule(1.0, k, phase, 1))
    b = trace_parameter(KickSchedule(1.0, -k, 2 * math.pi - phase, 1))
    assert b == pytest.approx(a, abs=1e-12)


def test_band_map_symmetry():
    grid = ScanGrid((0.1, 2 * math.pi - 0.1, 41), (-3.0, 3.0, 31))
    pts = band_scan(grid)
    table = {(i, j): pts[i * 31 + j] for i in range(41) for j in range(31)}
    for i in range(41):
        for j in range(31):
            p, q = table[(i, j)], table[(40 - i, 30 - j)]
            assert p.chi_half == pytest.approx(q.chi_half, abs=1e-12)
            if abs(abs(p.chi_half) - 1) > 1e-6:
                assert p.regime is q.regime


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("k", [0.1, 0.5, -1.3, 4.0])
def test_edge_quadratic_growth_exact(m, k):
    s = KickSchedule(1.0, k, 2 * math.pi * m, 50)
    ws = oracle_w(s)
    for n in range(1, 51):
        assert ws[n] == pytest.approx(1 + 2 * k * k * n * n, rel=1e-10)
        assert resonant_energy_reconciled(s.with_kicks(n)) == pytest.approx(ws[n], rel=1e-10)


def test_edge_quadratic_growth_at_minus_one():
    # omega0 tau = pi with kappa = 0 sits at chi/2 = -1, but W stays 1 there;
    # pick a kicked point with chi/2 = -1 instead: cos t + k sin t = -1
    phase = 2.0
    k = (-1 - math.cos(phase)) / math.sin(phase)
    s = KickSchedule(1.0, k, phase, 40)
    assert classify(trace_parameter(s)) is Regime.EDGE
    ws = oracle_w(s)
    for n in (1, 10, 40):
        assert ws[n] == pytest.approx(1 + 2 * k * k * n * n, rel=1e-8)


def test_resonant_examples():
    assert resonant_energy_paper(KickSchedule(1.0, 0.5, 2 * math.pi, 0)) == 1.0
    s = KickSchedule(1.0, 0.5, 2 * math.pi, 3)
    assert resonant_energy_paper(s) == pytest.approx(10.0)
    assert oracle_w(s)[-1] == pytest.approx(5.5, rel=1e-12)
    assert resonant_energy_reconciled(s) == pytest.approx(5.5)


def test_resonant_finite_differences_linear():
    s = KickSchedule(1.0, 0.7, 4 * math.pi, 50)
    ws = np.array(oracle_w(s)[1:])
    d1 = np.diff(ws)
    d2 = np.diff(d1)
    assert np.allclose(d2, 4 * 0.49, rtol=1e-8)


def test_small_kick_bounds_both_hold():
    s = KickSchedule(1.0, 0.05, 0.5 * math.pi, 40)
    ws = oracle_w(s)
    x = trace_parameter(s)
    for n in range(1, 41):
        assert ws[n] <= resonant_energy_paper(s.with_kicks(n))
        assert ws[n] <= stable_envelope(0.05, x)


def test_growth_ratio_tends_to_lambda_squared():
    s = KickSchedule(1.0, 5.0, 0.5 * math.pi, 31)
    ws = oracle_w(s)
    lam = 5 + math.sqrt(24)
    assert ws[31] / ws[30] == pytest.approx(lam * lam, rel=1e-2)


def test_log_trajectory_matches_oracle():
    for s in (KickSchedule(1.3, 0.9, 0.7, 60), KickSchedule(0.8, -4.0, 2.0, 60)):
        lw = log_energy_trajectory(s)
        ws = oracle_w(s)
        assert lw[0] == 0.0
        assert np.allclose(lw, np.log(ws), rtol=0, atol=1e-10)


def test_log_trajectory_survives_overflow():
    s = KickSchedule(1.0, 20.0, 0.5 * math.pi, 2000)
    lw = log_energy_trajectory(s)
    assert np.all(np.isfinite(lw))
    slope = lw[-1] - lw[-2]
    assert slope == pytest.approx(2 * lyapunov_exponent(trace_parameter(s)), rel=1e-12)


def test_asymptotic_domain():
    with pytest.raises(DomainError):
        asymptotic_energy_paper(KickSchedule(1.0, 0.5, 0.5 * math.pi, 10))
    with pytest.raises(DomainError):
        asymptotic_energy_reconciled(KickSchedule(1.0, 0.0, 2 * math.pi, 10))


def test_asymptotic_pole_near_edge():
    phase = 1.0
    k = (1 + 1e-6 - math.cos(phase)) / math.sin(phase)
    s = KickSchedule(1.0, k, phase, 2)
    assert asymptotic_energy_paper(s) > 1e5 * oracle_w(s)[-1]


def test_asymptotic_paper_constant_offset():
    s = KickSchedule(1.0, 5.0, 0.5 * math.pi, 20)
    lw = log_energy_trajectory(s)
    offs = [asymptotic_energy_paper(s.with_kicks(n), log=True) - lw[n] for n in (5, 10, 15, 20)]
    assert max(offs) - min(offs) < 1e-9
    # it over-counts by 4k^2 / (k^2/2) = 8
    assert offs[-1] == pytest.approx(math.log(8.0), abs=1e-9)
    rec = [asymptotic_energy_reconciled(s.with_kicks(n), log=True) - lw[n] for n in (10, 20)]
    assert max(abs(r) for r in rec) < 1e-9


def test_asymptotic_literal_value():
    s = KickSchedule(1.0, 5.0, 0.5 * math.pi, 3)
    x = 5.0
    lit = 4 * 25 * (x + math.sqrt(x * x - 1)) ** 6 / (x * x - 1)
    assert asymptotic_energy_paper(s) == pytest.approx(lit, rel=1e-12)
    big = s.with_kicks(400)
    assert asymptotic_energy_paper(big) == math.inf
    assert math.isfinite(asymptotic_energy_paper(big, log=True))


def test_strong_kick_examples():
    s = KickSchedule(1.0, 10.0, 0.5 * math.pi, 2)
    # 4 * 20^4 evaluates to 640,000 (the quoted 1,600,000 is an arithmetic slip)
    assert strong_kick_energy_paper(s) == pytest.approx(4 * 20**4, rel=1e-14)
    assert 4 * 20**4 == 640_000
    assert strong_kick_energy_reconciled(s) == pytest.approx(0.5 * 20**4, rel=1e-14)
    with pytest.warns(RegimeWarning):
        strong_kick_energy_paper(KickSchedule(1.0, 0.8, 0.5 * math.pi, 2))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        strong_kick_energy_paper(s)


def test_strong_kick_slope_within_two_percent():
    s = KickSchedule(1.0, 10.0, 0.5 * math.pi, 30)
    lw = log_energy_trajectory(s)
    slope = lw[-1] - lw[-2]
    assert abs(slope - 2 * math.log(20)) / (2 * math.log(20)) <= 0.02


def test_strong_kick_slope_improves_with_kappa():
    devs = []
    for k in (2.0, 10.0, 100.0):
        lw = log_energy_trajectory(KickSchedule(1.0, k, 0.5 * math.pi, 30))
        devs.append(abs(lw[-1] - lw[-2] - 2 * math.log(2 * k)))
    assert devs[0] > devs[1] > devs[2]


def test_is_quarter_period():
    assert is_quarter_period(KickSchedule(1.0, 1.0, 0.5 * math.pi, 1))
    assert is_quarter_period(KickSchedule(2.0, 1.0, 2.5 * math.pi / 2, 1))
    assert not is_quarter_period(KickSchedule(1.0, 1.0, 1.0, 1))


def test_scan_grid_validation():
    with pytest.raises(ValueError):
        ScanGrid((0.0, 1.0, 1), (0.0, 1.0, 3))
    with pytest.raises(ValueError):
        ScanGrid((1.0, 1.0, 3), (0.0, 1.0, 3))
    with pytest.raises(ValueError):
        ScanGrid((0.0, 1.0, 3), (2.0, 1.0, 3))
    with pytest.raises(ValueError):
        ScanGrid((0.0, 1.0, 3), (0.0, 1.0, 3), n_probe=1)


def test_band_scan_examples_and_order():
    grid = ScanGrid((0.5 * math.pi, 2 * math.pi, 4), (0.5, 2.0, 2))
    pts = band_scan(grid)
    assert len(pts) == 8
    assert [(p.omega0_tau, p.kappa_over_omega0) for p in pts[:3]] == [
        (0.5 * math.pi, 0.5), (0.5 * math.pi, 2.0), (math.pi, 0.5)]
    assert pts[0].regime is Regime.STABLE and pts[0].lyapunov == 0
    assert pts[1].regime is Regime.UNSTABLE
    assert pts[1].lyapunov == pytest.approx(math.log(2 + math.sqrt(3)), rel=1e-12)
    assert pts[-1].regime is Regime.EDGE and pts[-2].regime is Regime.EDGE


def test_band_scan_parallel_order_independent():
    grid = ScanGrid((0.1, 12.0, 37), (-5.0, 5.0, 29), n_probe=60)
    a = band_scan(grid, probe=True, n_measure=40, workers=1)
    b = band_scan(grid, probe=True, n_measure=40, workers=4)
    assert a == b
    taus, kappas = grid.nodes()
    assert [p.omega0_tau for p in a] == list(taus)
    assert [p.kappa_over_omega0 for p in a] == list(kappas)


def test_band_scan_probe_matches_oracle():
    grid = ScanGrid((0.3, 3.0, 5), (-2.0, 2.0, 5), n_probe=40)
    for p in band_scan(grid, probe=True, n_measure=30):
        ws = oracle_w(KickSchedule(1.0, p.kappa_over_omega0, p.omega0_tau, 40))
        lw = np.log(ws)
        assert p.probe.log_w_first == pytest.approx(lw[1], abs=1e-10)
        assert p.probe.log_w_max == pytest.approx(lw[1:].max(), abs=1e-10)
        assert p.probe.log_w_measure == pytest.approx(lw[30], abs=1e-9)
        assert p.probe.log_w_final == pytest.approx(lw[40], abs=1e-9)
        assert p.probe_consistent()


def test_probe_consistency_rules():
    pr = ProbeResult(100, 50, 0.1, 0.5, 1.0, 1.0, 0.4)
    stable = BandPoint(1.0, 1.0, 0.5, Regime.STABLE, 0.0, pr)
    assert stable.probe_consistent()
    bad = BandPoint(1.0, 0.01, 0.5, Regime.STABLE, 0.0, pr)
    assert not bad.probe_consistent()
    assert BandPoint(1.0, 0.3, 0.5, Regime.STABLE, 0.0).probe_consistent() is None


@given(st.floats(0.05, 4 * math.pi), st.floats(-5, 5))
@settings(max_examples=150, deadline=None)
def test_stable_points_stay_under_envelope(phase, k):
    x = math.cos(phase) + k * math.sin(phase)
    if classify(x) is not Regime.STABLE or abs(x) > 0.999:
        return
    lw = log_energy_trajectory(KickSchedule(1.0, k, phase, 300))
    assert lw.max() <= math.log(stable_envelope(k, x) + 1e-6)
