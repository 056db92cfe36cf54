"""Randomized invariants over the physical parameter space."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from entanglement_engine import (AnalyticSelector, BasisTag, EngineParams, InitialKind, NoiseKernel,
                                 Quantity, XState, analytic_transient, concurrence, devectorize,
                                 full_liouvillian, initial_state, reduced_liouvillian, steady_kur,
                                 steady_state, vectorize)
from entanglement_engine.liouville import propagate, trace_row
from entanglement_engine.observables import activity, current, steady_state_noise, steady_xstate

rates_ = st.floats(1e-4, 2e-2)
params = st.builds(
    EngineParams,
    g=st.floats(1e-4, 2e-2),
    gamma_l=rates_,
    gamma_r=rates_,
    t_l=st.floats(0.05, 5.0),
    t_r=st.floats(0.05, 5.0),
    mu_l=st.floats(-2.0, 2.0),
    mu_r=st.floats(-2.0, 2.0),
)
kinds = st.sampled_from(list(InitialKind))


@st.composite
def xstates(draw):
    pops = np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4)))
    if pops.sum() < 1e-3:
        pops = np.array([1.0, 0, 0, 0])
    pops = pops / pops.sum()
    bound = np.sqrt(pops[1] * pops[2])
    mag = draw(st.floats(0.0, 1.0)) * bound
    phase = draw(st.floats(0.0, 2 * np.pi))
    return XState(*pops, c=mag * np.exp(1j * phase))


fast = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@fast
@given(params)
def test_generators_preserve_trace_and_match(p):
    small, big = reduced_liouvillian(p), full_liouvillian(p)
    assert np.abs(trace_row(small.basis) @ small.entries).max() <= 1e-12 * p.big_gamma
    np.testing.assert_allclose(big.restrict().entries, small.entries, atol=1e-16)
    assert np.linalg.eigvals(small.entries).real.max() <= 1e-12


@fast
@given(xstates())
def test_vectorize_round_trip(s):
    for basis in BasisTag:
        back = devectorize(vectorize(s, basis))
        np.testing.assert_allclose(back.populations, s.populations, atol=1e-15)
        assert abs(back.c - s.c) <= 1e-15


@fast
@given(xstates(), params)
def test_activity_bounds_current(s, p):
    for j in "LR":
        assert activity(j, s, p) >= abs(current(j, s, p))
    assert 0 <= concurrence(s) <= 1


@fast
@given(xstates(), params, st.floats(0.0, 30.0))
def test_propagation_keeps_states_physical(s, p, t_gamma):
    v = propagate(reduced_liouvillian(p), vectorize(s), t_gamma / p.big_gamma)
    out = devectorize(v)
    assert out.populations.min() >= -1e-9
    assert out.r2 * out.r3 - abs(out.c) ** 2 >= -1e-9


@fast
@given(params, kinds)
def test_analytic_forms_match_propagation(p, kind):
    t = np.linspace(0, 10, 11) / p.big_gamma
    k = NoiseKernel.build(p, initial_state(kind, p), 10 / p.big_gamma, step=1 / p.big_gamma,
                          for_noise=False)
    i_exact = analytic_transient(AnalyticSelector(kind, Quantity.CURRENT_L), p, t).real
    c_exact = analytic_transient(AnalyticSelector(kind, Quantity.COHERENCE), p, t)
    scale = p.gamma_l
    assert np.abs(k.currents("L") - i_exact).max() <= 1e-8 * scale
    assert np.abs(k.coherences() - c_exact).max() <= 1e-8


@fast
@given(params)
def test_steady_state_relations(p):
    s = steady_xstate(p)
    i_l = current("L", s, p)
    assert abs(i_l + current("R", s, p)) <= 1e-10 * p.big_gamma
    assert abs(i_l - (-2 * p.g * s.c.real)) <= 1e-10 * p.big_gamma
    ll = steady_state_noise("L", "L", p)
    assert abs(steady_state_noise("R", "R", p) - ll) <= 1e-8 * abs(ll)
    assert abs(steady_state_noise("L", "R", p) + ll) <= 1e-8 * abs(ll)


@fast
@given(params)
def test_steady_kur_is_product_of_closed_forms(p):
    from entanglement_engine import steady_activity, steady_current, steady_noise

    if abs(p.f_l - p.f_r) < 1e-6:
        return
    product = steady_noise(p) * steady_activity(p) / steady_current(p) ** 2
    assert np.isclose(steady_kur(p), product, rtol=1e-8)


@fast
@given(params)
def test_steady_state_is_null_vector(p):
    L = reduced_liouvillian(p)
    ss = steady_state(L)
    assert np.abs(L.entries @ ss.entries).max() <= 1e-12 * p.big_gamma
