import numpy as np
import pytest

from entanglement_engine import (BasisTag, EngineParams, InvalidParameter, Regime, XState, fermi,
                                 full_liouvillian, initial_state, jump_superoperators, rates,
                                 reduced_liouvillian, vectorize)
from entanglement_engine.liouville import steady_state
from entanglement_engine.metrics import concurrence
from entanglement_engine.model import no_jump_generator
from entanglement_engine.observables import current, steady_xstate
from entanglement_engine.states import random_xstate

P = EngineParams()


def test_fermi_values():
    assert fermi(1.0, 0.3, 1.0) == 0.5
    assert fermi(1.0, 0.1) == pytest.approx(4.5398e-5, rel=1e-4)
    assert fermi(1.0, 2.0) == pytest.approx(0.37754, rel=1e-5)
    # no overflow deep in the tails
    assert fermi(1.0, 1e-4) == 0.0 or fermi(1.0, 1e-4) < 1e-300


def test_params_validation():
    with pytest.raises(InvalidParameter) as err:
        EngineParams(t_l=-1.0)
    assert err.value.field == "t_l"
    with pytest.raises(InvalidParameter):
        EngineParams(g=-1e-3)
    with pytest.raises(InvalidParameter):
        EngineParams(gamma_r=float("nan"))


def test_eta_and_regime():
    assert P.eta.real == pytest.approx(3.4871e-3, rel=1e-4)
    assert P.regime is Regime.OVERDAMPED
    assert P.replace(g=5e-3).regime is Regime.UNDERDAMPED
    assert P.replace(g=(P.gamma_r - P.gamma_l) / 4).regime is Regime.CRITICAL


def test_rates():
    r = rates(P)
    assert r.plus("R") == pytest.approx(9e-3 * 4.5398e-5, rel=1e-4)
    for j, gamma in (("L", P.gamma_l), ("R", P.gamma_r)):
        assert r.plus(j) + r.minus(j) == gamma
    hot = rates(P.replace(t_l=1e6))
    assert hot.plus("L") == pytest.approx(P.gamma_l / 2, rel=1e-5)
    assert hot.minus("L") == pytest.approx(P.gamma_l / 2, rel=1e-5)


def test_reduced_liouvillian_structure():
    L = reduced_liouvillian(P).entries
    np.testing.assert_allclose(L[:4].sum(axis=0)[:4], 0, atol=1e-18)
    decoupled = reduced_liouvillian(P.replace(g=0.0)).entries
    assert np.all(decoupled[:4, 4:] == 0) and np.all(decoupled[4:, :4] == 0)


def test_eigenvalue_pair():
    w = np.linalg.eigvals(reduced_liouvillian(P).entries)
    G, eta = P.big_gamma, P.eta.real
    for target in (-G / 2 + eta / 2, -G / 2 - eta / 2):
        assert np.abs(w - target).min() < 1e-12


@pytest.mark.parametrize("t_l", [0.15, 2.0])
@pytest.mark.parametrize("g", [1.8e-3, 5e-3])
def test_full_restricts_to_reduced(t_l, g):
    p = P.replace(t_l=t_l, g=g)
    np.testing.assert_allclose(full_liouvillian(p).restrict().entries, reduced_liouvillian(p).entries,
                               atol=1e-14)


def test_x_subspace_is_invariant():
    L = full_liouvillian(P).entries
    x = [0, 5, 10, 15, 6, 9]
    rest = [i for i in range(16) if i not in x]
    assert np.abs(L[np.ix_(rest, x)]).max() == 0


def test_jump_reconstruction():
    for basis in BasisTag:
        p = P.replace(t_l=0.6)
        L = full_liouvillian(p) if basis is BasisTag.FULL else reduced_liouvillian(p)
        L0 = L - jump_superoperators(p, basis).total()
        np.testing.assert_allclose(L0.entries, no_jump_generator(p, basis).entries, atol=1e-18)
    # the no-jump part never increases a population
    L0 = no_jump_generator(P).entries[:4, :4]
    assert np.all(L0 - np.diag(np.diag(L0)) == 0)


def test_jump_left_plus_on_ground():
    jumps = jump_superoperators(P)
    out = jumps.l_plus.entries @ vectorize(XState(1, 0, 0, 0)).entries
    np.testing.assert_allclose(out, [0, 0, rates(P).plus("L"), 0, 0, 0])


def test_jump_parts_are_nonnegative():
    rng = np.random.default_rng(11)
    jumps = jump_superoperators(P)
    for _ in range(100):
        v = vectorize(random_xstate(rng))
        for op in jumps:
            assert op.expectation(v) >= 0


def test_reduced_and_full_jumps_agree():
    small = jump_superoperators(P)
    big = jump_superoperators(P, BasisTag.FULL)
    for a, b in zip(small, big):
        np.testing.assert_allclose(b.restrict().entries, a.entries, atol=1e-18)


def test_initial_states():
    assert initial_state("ground", P) == XState(1, 0, 0, 0)
    cold = P.replace(t_l=0.1)
    assert initial_state("thermal", cold).r4 == pytest.approx(4.5398e-5**2, rel=1e-3)
    assert concurrence(initial_state("singlet", P)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        initial_state("bell", P)


def test_thermal_state_is_grand_canonical():
    p = P.replace(mu_l=2.0, t_l=0.15)
    s = initial_state("thermal", p)
    assert s.n_left == pytest.approx(p.f_l)
    assert s.n_right == pytest.approx(p.f_r)


def test_detailed_balance():
    p = P.replace(t_l=0.3, t_r=0.3, mu_l=0.2, mu_r=0.2)
    s = steady_xstate(p)
    assert abs(s.c) < 1e-12
    assert abs(current("L", s, p)) < 1e-12 and abs(current("R", s, p)) < 1e-12


def test_steady_state_is_unique_for_full_generator():
    ss = steady_state(full_liouvillian(P))
    np.testing.assert_allclose(ss.entries[[0, 5, 10, 15, 6, 9]],
                               steady_state(reduced_liouvillian(P)).entries, atol=1e-12)
