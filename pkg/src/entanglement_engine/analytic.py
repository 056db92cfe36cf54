"""Closed-form transient and steady-state expressions.

These are evaluated independently of the Liouville-space propagation and
serve as its reference.  Transients are written with ``eta`` taken as a
complex square root, so one expression covers the overdamped
(``eta**2 > 0``) and underdamped (``eta**2 < 0``) regimes; only even
functions of ``eta`` appear.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import UncoveredSelector, ZeroBias
from .model import EngineParams, InitialKind

# below this |eta^2| / Gamma^2 the 1/eta^2 prefactors are resolved by averaging over g^2
CRITICAL_EPS = 1e-8
CRITICAL_OFFSET = 1e-5


class Quantity(str, enum.Enum):
    CURRENT_L = "current_L"
    COHERENCE = "coherence"


@dataclass(frozen=True)
class AnalyticSelector:
    initial_kind: InitialKind
    quantity: Quantity

    def __post_init__(self):
        try:
            object.__setattr__(self, "initial_kind", InitialKind(self.initial_kind))
            object.__setattr__(self, "quantity", Quantity(self.quantity))
        except ValueError as exc:
            raise UncoveredSelector(str(exc)) from exc


def _weighted_mean(p: EngineParams, x_l, x_r):
    return (p.gamma_l * x_l + p.gamma_r * x_r) / p.big_gamma


def _ground(p, t, eta2, quantity):
    gl, gr, g, G = p.gamma_l, p.gamma_r, p.g, p.big_gamma
    fl, fr = p.f_l, p.f_r
    K = 4 * g**2 + gl * gr
    eta = np.sqrt(eta2 + 0j)
    decay = np.exp(-G * t / 2)
    ch, esh = np.cosh(eta * t / 2), eta * np.sinh(eta * t / 2)
    mean_f = gl * fl + gr * fr
    if quantity is Quantity.CURRENT_L:
        bracket = (-16 * g**2 / G * K * mean_f
                   + ch * (4 * g**2 * G * mean_f + gl * gr * eta2 * fl)
                   + esh * (4 * g**2 * (-gl * fl + gr * fr) + gl * gr * (gr - gl) * fl))
        return 4 * g**2 * gl * gr / (G * K) * (fl - fr) + gl / (eta2 * K) * decay * bracket
    bracket = (4 * (gl - gr) / G * mean_f
               + G / K * ch * ((gr - gl) * mean_f + eta2 / G * (gl * fl - gr * fr))
               + 2 * gl * gr / K * esh * (fl - fr))
    return -2 * g * gl * gr / (G * K) * (fl - fr) + g / eta2 * decay * bracket


def _thermal(p, t, eta2, quantity):
    gl, gr, g, G = p.gamma_l, p.gamma_r, p.g, p.big_gamma
    bias = p.f_l - p.f_r
    K = 4 * g**2 + gl * gr
    eta = np.sqrt(eta2 + 0j)
    decay = np.exp(-G * t / 2)
    ch, esh = np.cosh(eta * t / 2), eta * np.sinh(eta * t / 2)
    if quantity is Quantity.CURRENT_L:
        bracket = 2 * (gr - gl) / G + (8 * g**2 - gr * (gr - gl)) / K * ch - gr / K * esh
        return 4 * g**2 * gl * gr / (G * K) * bias + 4 * g**2 * gl / eta2 * bias * decay * bracket
    bracket = (gl - gr) ** 2 / G**2 - 4 * g**2 / (G * K) * (G * ch + esh)
    return -2 * g * gl * gr / (G * K) * bias + 2 * g * G / eta2 * bias * decay * bracket


def _singlet(p, t, eta2, quantity):
    gl, gr, g, G = p.gamma_l, p.gamma_r, p.g, p.big_gamma
    fl, fr = p.f_l, p.f_r
    # excess of the initial half filling over the bath occupation, per qubit
    al, ar = 1 - 2 * fl, 1 - 2 * fr
    K = 4 * g**2 + gl * gr
    eta = np.sqrt(eta2 + 0j)
    decay = np.exp(-G * t / 2)
    ch, esh = np.cosh(eta * t / 2), eta * np.sinh(eta * t / 2)
    if quantity is Quantity.CURRENT_L:
        bracket = (32 * g**2 / G * K * (gl * al + gr * ar)
                   + 2 * gl * (gr - gl) * al * ((gr * (gl - gr) + 4 * g**2) * ch - gr * esh)
                   + 16 * g**2 * gl * gr * (fr - fl) * ch
                   + 8 * g**2 * (gl * al - gr * ar) * (gr * ch + esh))
        return 4 * gl * gr * g**2 / (G * K) * (fl - fr) + gl / (4 * K * eta2) * decay * bracket
    bracket = (2 * (gr - gl) / G * K * (gl * al + gr * ar)
               - 2 * ch * (4 * g**2 * (gr * ar - gl * al) + gl * gr * (gr - gl) * (1 - fl - fr))
               + 2 * esh * gl * gr * (fl - fr))
    return (-2 * g * gl * gr / (G * K) * (fl - fr) - 0.5j * decay
            + g / (K * eta2) * decay * bracket)


_FORMS = {
    InitialKind.GROUND: _ground,
    InitialKind.THERMAL: _thermal,
    InitialKind.SINGLET: _singlet,
}


def analytic_transient(sel: AnalyticSelector, p: EngineParams, t):
    """Closed-form ``I_L(t)`` or ``c(t)``; complex, scalar or array like ``t``.

    For the current only the real part is physical (the imaginary part is
    round-off).  At the critical point ``eta = 0`` the removable 1/eta**2
    singularity is resolved by averaging over ``g**2 +/- eps`` chosen so that
    ``eta**2 = -/+ delta``.  The forms are analytic in ``g**2``, so the
    average is exact to O(delta**2); shifting ``g`` rather than ``eta**2``
    alone keeps every term of the bracket consistent.
    """
    if not isinstance(sel, AnalyticSelector):
        raise UncoveredSelector(f"not a selector: {sel!r}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    form = _FORMS[sel.initial_kind]

    def at(q):
        return form(q, t, q.eta_squared, sel.quantity)

    scale = p.big_gamma ** 2
    if abs(p.eta_squared) < CRITICAL_EPS * scale:
        eps = CRITICAL_OFFSET * scale / 16
        g2 = p.g ** 2
        if g2 > eps:
            out = 0.5 * (at(p.replace(g=np.sqrt(g2 + eps))) + at(p.replace(g=np.sqrt(g2 - eps))))
        else:
            # g too small to shift downwards: quadratic extrapolation in g from above
            a = np.sqrt(eps)
            out = (3 * at(p.replace(g=p.g + a)) - 3 * at(p.replace(g=p.g + 2 * a))
                   + at(p.replace(g=p.g + 3 * a)))
    else:
        out = at(p)
    return complex(out) if out.ndim == 0 else out


def _bias_prefactor(p: EngineParams) -> float:
    """``I_ss / (f_L - f_R)``."""
    g, gl, gr = p.g, p.gamma_l, p.gamma_r
    return 4 * g**2 * gl * gr / (p.big_gamma * (4 * g**2 + gl * gr))


def steady_current(p: EngineParams) -> float:
    return _bias_prefactor(p) * (p.f_l - p.f_r)


def steady_coherence(p: EngineParams) -> float:
    """Steady-state coherence ``c``; real for degenerate qubits."""
    g, gl, gr = p.g, p.gamma_l, p.gamma_r
    return -2 * g * gl * gr / (p.big_gamma * (4 * g**2 + gl * gr)) * (p.f_l - p.f_r)


def steady_noise(p: EngineParams) -> float:
    """Zero-frequency auto-correlation ``S_LL`` of the steady state."""
    fl, fr = p.f_l, p.f_r
    G, K = p.big_gamma, 4 * p.g**2 + p.gamma_l * p.gamma_r
    current = steady_current(p)
    # I/(fL-fR) * (fL(1-fR) + fR(1-fL)) with the bias cancelled analytically
    shot = _bias_prefactor(p) * (fl * (1 - fr) + fr * (1 - fl))
    return shot - 2 * current**2 * (1 / G + G / K)


def steady_activity(p: EngineParams) -> float:
    """``A_L + A_R`` in the steady state."""
    g, gl, gr, G = p.g, p.gamma_l, p.gamma_r, p.big_gamma
    fl, fr = p.f_l, p.f_r
    K = 4 * g**2 + gl * gr
    spread = _weighted_mean(p, fl * (1 - fl), fr * (1 - fr))
    return 2 * G / K * (K * spread + 4 * g**2 * gl * gr / G**2 * (fl - fr) ** 2)


def steady_internal_activity(p: EngineParams) -> float:
    g, gl, gr, G = p.g, p.gamma_l, p.gamma_r, p.big_gamma
    fl, fr = p.f_l, p.f_r
    K = 4 * g**2 + gl * gr
    mean_f = _weighted_mean(p, fl, fr)
    return 4 * g**2 / (G * K) * (8 * g**2 * mean_f * (1 - mean_f)
                                 + gl * gr * (fl * (1 - fr) + fr * (1 - fl)))


def steady_kur(p: EngineParams) -> float:
    """Steady-state KUR ratio ``S A / I**2`` written as a single product."""
    g, gl, gr, G = p.g, p.gamma_l, p.gamma_r, p.big_gamma
    fl, fr = p.f_l, p.f_r
    bias = fl - fr
    if abs(bias) < 1e-12:
        raise ZeroBias("f_L == f_R: the steady current vanishes")
    K = 4 * g**2 + gl * gr
    spread = _weighted_mean(p, fl * (1 - fl), fr * (1 - fr))
    first = K * spread + 4 * g**2 * gl * gr / G**2 * bias**2
    second = (G**2 / (8 * g**2 * gl * gr) * ((fl * (1 - fl) + fr * (1 - fr)) / bias**2 + 1)
              - (K + G**2) / K**2)
    return 4 * first * second
