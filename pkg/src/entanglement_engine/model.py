"""Physical model of the two-qubit entanglement engine.

Energies, rates, temperatures and chemical potentials are all expressed in
units of the qubit energy ``eps_s``.  The left/right qubits are each tunnel
coupled to a fermionic reservoir and exchange excitations through a
flip-flop term of strength ``g``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy.special import expit

from .errors import InvalidParameter
from .liouville import BasisTag, LiouvilleOperator
from .states import XState

__all__ = [
    "EngineParams", "Regime", "RateSet", "InitialKind", "JumpSet", "XState",
    "fermi", "rates", "reduced_liouvillian", "full_liouvillian",
    "no_jump_generator", "jump_superoperators", "initial_state",
]


def fermi(eps, T, mu=0.0):
    """Fermi-Dirac occupation ``1 / (1 + exp((eps - mu) / T))``."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise InvalidParameter("T", "temperature must be positive")
    out = expit(-(np.asarray(eps, dtype=float) - mu) / T)
    return float(out) if np.ndim(out) == 0 else out


class Regime(str, enum.Enum):
    OVERDAMPED = "overdamped"
    UNDERDAMPED = "underdamped"
    CRITICAL = "critical"


def _lead(j) -> str:
    j = str(j).upper()
    if j not in ("L", "R"):
        raise ValueError(f"lead must be 'L' or 'R', got {j!r}")
    return j


@dataclass(frozen=True)
class EngineParams:
    """Engine parameters; defaults are the reference set
    (``T_L = 2`` for the hot bath)."""

    eps_s: float = 1.0
    g: float = 1.8e-3
    gamma_l: float = 1e-3
    gamma_r: float = 9e-3
    t_l: float = 2.0
    t_r: float = 0.1
    mu_l: float = 0.0
    mu_r: float = 0.0

    def __post_init__(self):
        for name in ("eps_s", "g", "gamma_l", "gamma_r", "t_l", "t_r", "mu_l", "mu_r"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise InvalidParameter(name, "must be finite")
            object.__setattr__(self, name, value)
        for name in ("eps_s", "gamma_l", "gamma_r", "t_l", "t_r"):
            if getattr(self, name) <= 0:
                raise InvalidParameter(name, "must be > 0")
        if self.g < 0:
            raise InvalidParameter("g", "must be >= 0")

    def replace(self, **changes) -> "EngineParams":
        return replace(self, **changes)

    @property
    def big_gamma(self) -> float:
        return self.gamma_l + self.gamma_r

    @property
    def eta_squared(self) -> float:
        return (self.gamma_l - self.gamma_r) ** 2 - 16 * self.g ** 2

    @property
    def eta(self) -> complex:
        """Principal complex square root of ``eta_squared``."""
        return complex(np.sqrt(complex(self.eta_squared)))

    @property
    def regime(self) -> Regime:
        tol = 1e-12 * self.big_gamma ** 2
        if self.eta_squared > tol:
            return Regime.OVERDAMPED
        if self.eta_squared < -tol:
            return Regime.UNDERDAMPED
        return Regime.CRITICAL

    @property
    def f_l(self) -> float:
        return fermi(self.eps_s, self.t_l, self.mu_l)

    @property
    def f_r(self) -> float:
        return fermi(self.eps_s, self.t_r, self.mu_r)

    def validity_warnings(self) -> list[str]:
        """Departures from the weak-coupling regime the local master equation assumes."""
        out = []
        for name in ("gamma_l", "gamma_r"):
            if getattr(self, name) > 0.1 * self.eps_s:
                out.append(f"{name} is not small compared to eps_s")
        if self.g > max(self.gamma_l, self.gamma_r):
            out.append("g exceeds both bath couplings")
        return out


@dataclass(frozen=True)
class RateSet:
    gamma_l_plus: float
    gamma_l_minus: float
    gamma_r_plus: float
    gamma_r_minus: float

    def plus(self, j) -> float:
        return self.gamma_l_plus if _lead(j) == "L" else self.gamma_r_plus

    def minus(self, j) -> float:
        return self.gamma_l_minus if _lead(j) == "L" else self.gamma_r_minus


def rates(p: EngineParams) -> RateSet:
    f_l, f_r = p.f_l, p.f_r
    lp = p.gamma_l * f_l
    rp = p.gamma_r * f_r
    # complement taken as gamma - gamma^+ so the pair sums to gamma exactly
    return RateSet(lp, p.gamma_l - lp, rp, p.gamma_r - rp)


def reduced_liouvillian(p: EngineParams) -> LiouvilleOperator:
    """6x6 generator on the X-state block (basis order in :mod:`.liouville`)."""
    k = rates(p)
    lp, lm, rp, rm = k.gamma_l_plus, k.gamma_l_minus, k.gamma_r_plus, k.gamma_r_minus
    ig = 1j * p.g
    half = p.big_gamma / 2
    m = np.array([
        [-(lp + rp), rm, lm, 0, 0, 0],
        [rp, -(lp + rm), 0, lm, ig, -ig],
        [lp, 0, -(lm + rp), rm, -ig, ig],
        [0, lp, rp, -(lm + rm), 0, 0],
        [0, ig, -ig, 0, -half, 0],
        [0, -ig, ig, 0, 0, -half],
    ], dtype=complex)
    return LiouvilleOperator(m, BasisTag.REDUCED)


# single-qubit ladder operators in the (|0>, |1>) basis
_SP = np.array([[0.0, 0.0], [1.0, 0.0]])
_SM = _SP.T
_I2 = np.eye(2)
_I4 = np.eye(4)

SIGMA_PLUS = {"L": np.kron(_SP, _I2), "R": np.kron(_I2, _SP)}
SIGMA_MINUS = {"L": np.kron(_SM, _I2), "R": np.kron(_I2, _SM)}


def system_hamiltonian(p: EngineParams) -> np.ndarray:
    n = sum(SIGMA_PLUS[j] @ SIGMA_MINUS[j] for j in "LR")
    flip_flop = SIGMA_PLUS["L"] @ SIGMA_MINUS["R"] + SIGMA_PLUS["R"] @ SIGMA_MINUS["L"]
    return p.eps_s * n + p.g * flip_flop


# row-major vectorization: vec(A rho B) = kron(A, B.T) vec(rho)
def _sandwich(a, b):
    return np.kron(a, b.T)


def _left(a):
    return np.kron(a, _I4)


def _right(a):
    return np.kron(_I4, a.T)


def _full_jumps(p: EngineParams) -> dict:
    k = rates(p)
    out = {}
    for j in "LR":
        sp, sm = SIGMA_PLUS[j], SIGMA_MINUS[j]
        out[j, "+"] = k.plus(j) * _sandwich(sp, sm)
        out[j, "-"] = k.minus(j) * _sandwich(sm, sp)
    return out


def no_jump_generator(p: EngineParams, basis: BasisTag = BasisTag.REDUCED) -> LiouvilleOperator:
    """Coherent plus non-unitary decay part, i.e. the generator with all jump terms removed."""
    k = rates(p)
    H = system_hamiltonian(p)
    m = -1j * (_left(H) - _right(H))
    for j in "LR":
        sp, sm = SIGMA_PLUS[j], SIGMA_MINUS[j]
        anti = k.plus(j) * (sm @ sp) + k.minus(j) * (sp @ sm)
        m = m - 0.5 * (_left(anti) + _right(anti))
    op = LiouvilleOperator(m, BasisTag.FULL)
    return op.restrict() if BasisTag(basis) is BasisTag.REDUCED else op


def full_liouvillian(p: EngineParams) -> LiouvilleOperator:
    """16x16 generator of the local Lindblad equation in the product basis."""
    m = no_jump_generator(p, BasisTag.FULL).entries.copy()
    for jump in _full_jumps(p).values():
        m = m + jump
    return LiouvilleOperator(m, BasisTag.FULL)


class JumpSet(NamedTuple):
    """Jump superoperators ``L_j^+`` (absorption from bath j) and ``L_j^-``."""

    l_plus: LiouvilleOperator
    l_minus: LiouvilleOperator
    r_plus: LiouvilleOperator
    r_minus: LiouvilleOperator

    def plus(self, j) -> LiouvilleOperator:
        return self.l_plus if _lead(j) == "L" else self.r_plus

    def minus(self, j) -> LiouvilleOperator:
        return self.l_minus if _lead(j) == "L" else self.r_minus

    def current(self, j) -> LiouvilleOperator:
        return self.plus(j) - self.minus(j)

    def activity(self, j) -> LiouvilleOperator:
        return self.plus(j) + self.minus(j)

    def total(self) -> LiouvilleOperator:
        return self.l_plus + self.l_minus + self.r_plus + self.r_minus


def jump_superoperators(p: EngineParams, basis: BasisTag = BasisTag.REDUCED) -> JumpSet:
    basis = BasisTag(basis)
    if basis is BasisTag.FULL:
        full = _full_jumps(p)
        return JumpSet(*(LiouvilleOperator(full[key], basis)
                         for key in (("L", "+"), ("L", "-"), ("R", "+"), ("R", "-"))))
    k = rates(p)
    # population transfer only; coherences are annihilated by every jump
    mats = [np.zeros((6, 6)) for _ in range(4)]
    lp, lm, rp, rm = mats
    lp[2, 0] = lp[3, 1] = k.gamma_l_plus    # |00>->|10>, |01>->|11>
    lm[0, 2] = lm[1, 3] = k.gamma_l_minus   # |10>->|00>, |11>->|01>
    rp[1, 0] = rp[3, 2] = k.gamma_r_plus    # |00>->|01>, |10>->|11>
    rm[0, 1] = rm[2, 3] = k.gamma_r_minus   # |01>->|00>, |11>->|10>
    return JumpSet(*(LiouvilleOperator(m, basis) for m in mats))


def generator(p: EngineParams, basis: BasisTag = BasisTag.REDUCED) -> LiouvilleOperator:
    return reduced_liouvillian(p) if BasisTag(basis) is BasisTag.REDUCED else full_liouvillian(p)


class InitialKind(str, enum.Enum):
    GROUND = "ground"
    THERMAL = "thermal"
    SINGLET = "singlet"


def initial_state(kind, p: EngineParams) -> XState:
    """One of the three reference initial states.

    ``thermal`` populates each qubit with the mean occupation of its own
    bath, ``f_j(eps_s)``, chemical potential included.  ``singlet`` is
    ``(|01> + |10>)(<01| + <10|) / 2``.
    """
    kind = InitialKind(kind)
    if kind is InitialKind.GROUND:
        return XState(1.0, 0.0, 0.0, 0.0)
    if kind is InitialKind.THERMAL:
        f_l, f_r = p.f_l, p.f_r
        return XState((1 - f_l) * (1 - f_r), (1 - f_l) * f_r, f_l * (1 - f_r), f_l * f_r)
    return XState(0.0, 0.5, 0.5, 0.0, c=-0.5j)
