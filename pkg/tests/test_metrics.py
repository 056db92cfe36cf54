import numpy as np
import pytest

from entanglement_engine import (EngineParams, InitialKind, NoiseKernel, NoSignChange, XState,
                                 ZeroCoherence, concurrence, critical_current, critical_point,
                                 current_coherence_ratio, initial_state, steady_sweep)
from entanglement_engine.metrics import (concurrence_series, current_coherence_ratio_series,
                                         entanglement_margin, witness_failures)
from entanglement_engine.observables import steady_xstate

P = EngineParams()
G = P.big_gamma


def kernel(kind, p=P, t_gamma=20.0):
    return NoiseKernel.build(p, initial_state(kind, p), t_gamma / p.big_gamma, for_noise=False)


def test_concurrence_examples():
    assert concurrence(initial_state("singlet", P)) == pytest.approx(1.0)
    assert concurrence(initial_state("ground", P)) == 0
    assert concurrence(initial_state("thermal", P)) == 0
    s = steady_xstate(P)
    expected = 2 * (abs(s.c) - np.sqrt(s.r1 * s.r4))
    assert concurrence(s) == pytest.approx(expected)
    assert concurrence(s) > 0


def test_margin_sign_matches_concurrence():
    s = XState(0.5, 0.2, 0.2, 0.1, c=0.05)
    assert entanglement_margin(s) < 0 and concurrence(s) == 0


def test_concurrence_bounds_along_trajectories():
    for kind in InitialKind:
        c = concurrence_series(kernel(kind))
        assert c.min() >= 0 and c.max() <= 1 + 1e-12


def test_ratio_requires_coherence():
    k = kernel("ground")
    with pytest.raises(ZeroCoherence):
        current_coherence_ratio(k, 0.0)
    assert np.isnan(current_coherence_ratio_series(k)[0])


def test_singlet_ratio_starts_negative():
    k = kernel("singlet")
    assert current_coherence_ratio(k, 0.5 / G) < 0


def test_ratio_tends_to_one():
    for kind in InitialKind:
        k = kernel(kind, t_gamma=80.0)
        assert current_coherence_ratio(k, 80 / G) == pytest.approx(1.0, abs=1e-6)


def test_thermal_ratio_is_bias_independent():
    series = [current_coherence_ratio_series(kernel("thermal", P.replace(t_l=t))) for t in (0.15, 0.6, 2.0)]
    for s in series[1:]:
        np.testing.assert_allclose(s[1:], series[0][1:], rtol=0, atol=1e-10)


def test_sweep_examples():
    points = steady_sweep(P, [0.1, 0.15, 0.6, 2.0])
    eq = points[0]
    assert abs(eq.steady_current) < 1e-15 and eq.steady_concurrence == 0
    conc = [pt.steady_concurrence for pt in points[1:]]
    assert np.all(np.diff(conc) > 0)
    for pt in points:
        assert pt.recomputed_concurrence == pt.steady_concurrence


def test_sweep_threads_give_identical_results():
    grid = np.linspace(0.12, 3.0, 12)
    a = steady_sweep(P, grid)
    b = steady_sweep(P, grid, threads=4)
    assert [x.steady_current for x in a] == [x.steady_current for x in b]


def test_sweep_rejects_bad_grids():
    with pytest.raises(ValueError):
        steady_sweep(P, [])
    with pytest.raises(ValueError):
        steady_sweep(P, [2.0, 1.0])


def test_critical_point_root_condition():
    t_crit, i_crit = critical_point(P, (P.t_r, 2.0))
    s = steady_xstate(P.replace(t_l=t_crit))
    assert abs(2 * abs(s.c) - 2 * np.sqrt(s.r1 * s.r4)) < 1e-8
    assert i_crit == pytest.approx(critical_current(P, (P.t_r, 2.0)))
    # onset: unentangled below, entangled above
    below, above = steady_sweep(P, [t_crit * 0.95, t_crit * 1.05])
    assert below.steady_concurrence == 0 and above.steady_concurrence > 0
    assert below.steady_current < i_crit < above.steady_current


def test_critical_point_needs_sign_change():
    with pytest.raises(NoSignChange):
        critical_point(P, (0.6, 2.0))


def test_finite_time_witness_failure_exists():
    i_crit = critical_current(P, (P.t_r, 2.0))
    assert witness_failures(kernel("ground"), i_crit).size > 0
