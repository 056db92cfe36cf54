"""Liouville-space linear algebra for small dense generators.

States are column vectors and superoperators are square matrices acting on
them.  Two representations are supported:

``BasisTag.REDUCED``
    the 6-dimensional X-state block, ordered |00><00|, |01><01|, |10><10|,
    |11><11|, |01><10|, |10><01|;
``BasisTag.FULL``
    the 16-dimensional row-major vectorization of the 4x4 density matrix,
    i.e. ``vec(rho)[4*a + b] = rho[a, b]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import DegenerateSteadyState, DimensionMismatch, NonPhysicalState
from .states import POPULATION_TOL, TRACE_TOL, XState

EIGVEC_COND_LIMIT = 1e8
NULLSPACE_GAP = 1e-10


class BasisTag(str, enum.Enum):
    REDUCED = "reduced-x-basis"
    FULL = "full-canonical"

    @property
    def dim(self) -> int:
        return 6 if self is BasisTag.REDUCED else 16


# positions of (rho_00,00, rho_01,01, rho_10,10, rho_11,11, rho_01,10, rho_10,01)
X_INDICES = {
    BasisTag.REDUCED: np.arange(6),
    BasisTag.FULL: np.array([0, 5, 10, 15, 6, 9]),
}


def trace_row(basis: BasisTag) -> np.ndarray:
    """Row vector implementing the trace functional."""
    basis = BasisTag(basis)
    row = np.zeros(basis.dim)
    row[X_INDICES[basis][:4]] = 1.0
    return row


def population_indices(basis: BasisTag) -> np.ndarray:
    return X_INDICES[BasisTag(basis)][:4]


@dataclass(frozen=True, eq=False)
class LiouvilleOperator:
    entries: np.ndarray
    basis: BasisTag = BasisTag.REDUCED

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        a.setflags(write=False)
        basis = BasisTag(self.basis)
        if a.shape != (basis.dim, basis.dim):
            raise DimensionMismatch(f"{basis.value} expects {basis.dim}x{basis.dim}, got {a.shape}")
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def _check(self, other):
        if other.basis is not self.basis:
            raise DimensionMismatch(f"basis {other.basis.value} does not match {self.basis.value}")

    def __matmul__(self, other):
        if isinstance(other, VectorizedState):
            self._check(other)
            return VectorizedState(self.entries @ other.entries, self.basis)
        if isinstance(other, LiouvilleOperator):
            self._check(other)
            return LiouvilleOperator(self.entries @ other.entries, self.basis)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, LiouvilleOperator):
            return NotImplemented
        self._check(other)
        return LiouvilleOperator(self.entries + other.entries, self.basis)

    def __sub__(self, other):
        if not isinstance(other, LiouvilleOperator):
            return NotImplemented
        self._check(other)
        return LiouvilleOperator(self.entries - other.entries, self.basis)

    def __neg__(self):
        return LiouvilleOperator(-self.entries, self.basis)

    def restrict(self) -> "LiouvilleOperator":
        """Block acting on the X-state subspace, as a reduced-basis operator."""
        idx = X_INDICES[self.basis]
        return LiouvilleOperator(self.entries[np.ix_(idx, idx)], BasisTag.REDUCED)

    def expectation(self, v: "VectorizedState") -> float:
        """``Tr{O rho}`` for a superoperator ``O``; real part only."""
        self._check(v)
        return float(np.real(trace_row(self.basis) @ self.entries @ v.entries))


@dataclass(frozen=True, eq=False)
class VectorizedState:
    entries: np.ndarray
    basis: BasisTag = BasisTag.REDUCED

    def __post_init__(self):
        v = np.array(self.entries, dtype=complex)
        v.setflags(write=False)
        basis = BasisTag(self.basis)
        if v.shape != (basis.dim,):
            raise DimensionMismatch(f"{basis.value} expects length {basis.dim}, got {v.shape}")
        object.__setattr__(self, "entries", v)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def trace(self) -> complex:
        return complex(trace_row(self.basis) @ self.entries)


def vectorize(state: XState, basis: BasisTag = BasisTag.REDUCED) -> VectorizedState:
    basis = BasisTag(basis)
    v = np.zeros(basis.dim, dtype=complex)
    v[X_INDICES[basis]] = [state.r1, state.r2, state.r3, state.r4,
                           1j * state.c, -1j * np.conj(state.c)]
    return VectorizedState(v, basis)


def devectorize(v: VectorizedState) -> XState:
    """Inverse of :func:`vectorize`.

    Full-basis vectors are read on the X-state entries only.
    """
    x = v.entries[X_INDICES[v.basis]]
    pops = x[:4]
    if np.max(np.abs(pops.imag)) > 1e-10:
        raise NonPhysicalState("populations carry an imaginary part")
    pops = pops.real
    if pops.min() < -POPULATION_TOL:
        raise NonPhysicalState(f"negative population {pops.min():.3e}")
    if abs(pops.sum() - 1.0) > TRACE_TOL:
        raise NonPhysicalState(f"trace deviates from 1 by {pops.sum() - 1.0:.3e}")
    return XState(*pops, c=x[4] / 1j)


@dataclass(frozen=True, eq=False)
class Spectral:
    """Eigendecomposition of a generator, reused for many propagation times.

    Falls back to scaling-and-squaring when the eigenvector matrix is too
    ill-conditioned (near exceptional points the generator is defective).
    """

    generator: np.ndarray
    eigvals: np.ndarray
    eigvecs: np.ndarray
    inv_eigvecs: np.ndarray
    defective: bool

    def expm(self, t: float) -> np.ndarray:
        if self.defective:
            return la.expm(self.generator * t)
        return (self.eigvecs * np.exp(self.eigvals * t)) @ self.inv_eigvecs

    def evolve(self, v0: np.ndarray, times) -> np.ndarray:
        """States at each time as rows of a ``(len(times), dim)`` array."""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if self.defective:
            return np.array([la.expm(self.generator * t) @ v0 for t in times])
        coeffs = self.inv_eigvecs @ v0
        return (np.exp(np.outer(times, self.eigvals)) * coeffs) @ self.eigvecs.T


def spectral(L: LiouvilleOperator) -> Spectral:
    a = L.entries
    w, v = la.eig(a)
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > EIGVEC_COND_LIMIT:
        return Spectral(a, w, v, v, True)
    return Spectral(a, w, v, la.inv(v), False)


def propagator(L: LiouvilleOperator, t: float) -> LiouvilleOperator:
    """``exp(L t)`` as an operator."""
    if t < 0:
        raise ValueError("propagation time must be non-negative")
    return LiouvilleOperator(spectral(L).expm(t), L.basis)


def propagate(L: LiouvilleOperator, v0: VectorizedState, t: float) -> VectorizedState:
    if v0.basis is not L.basis:
        raise DimensionMismatch(f"state in {v0.basis.value}, generator in {L.basis.value}")
    if t < 0:
        raise ValueError("propagation time must be non-negative")
    if t == 0:
        return v0
    return VectorizedState(spectral(L).expm(t) @ v0.entries, L.basis)


def propagate_grid(L: LiouvilleOperator, v0: VectorizedState, step: float, n_steps: int,
                   renormalize_every: int = 1000) -> np.ndarray:
    """States on the uniform grid ``k * step``, ``k = 0..n_steps``.

    A single step propagator is applied repeatedly; the trace is reset to
    one every ``renormalize_every`` steps to stop round-off drift.
    """
    if v0.basis is not L.basis:
        raise DimensionMismatch(f"state in {v0.basis.value}, generator in {L.basis.value}")
    P = spectral(L).expm(step)
    tr = trace_row(L.basis)
    out = np.empty((n_steps + 1, L.dim), dtype=complex)
    out[0] = v0.entries
    for k in range(1, n_steps + 1):
        out[k] = P @ out[k - 1]
        if k % renormalize_every == 0:
            out[k] /= tr @ out[k]
    return out


def steady_state(L: LiouvilleOperator) -> VectorizedState:
    """Unit-trace right null vector of ``L`` from its SVD."""
    _, s, vh = la.svd(L.entries)
    if s[-2] <= NULLSPACE_GAP * s[0]:
        raise DegenerateSteadyState(
            f"null space is not one-dimensional (singular values {s[-2]:.3e}, {s[-1]:.3e})")
    ns = vh[-1].conj()
    norm = trace_row(L.basis) @ ns
    if abs(norm) < 1e-14:
        raise DegenerateSteadyState("null vector has vanishing trace")
    v = ns / norm
    pops = population_indices(L.basis)
    v[pops] = v[pops].real
    return VectorizedState(v, L.basis)


def traceless_pseudoinverse(L: LiouvilleOperator, ss: VectorizedState) -> LiouvilleOperator:
    """Drazin inverse ``R`` of ``L``: ``R L = L R = 1 - |ss><tr|``.

    Lag integrals then follow from
    ``int_0^inf (exp(L tau) - |ss><tr|) dtau = -R``.
    """
    if ss.basis is not L.basis:
        raise DimensionMismatch("steady state and generator live in different bases")
    P0 = np.outer(ss.entries, trace_row(L.basis))
    try:
        inner = la.inv(L.entries - P0)
    except la.LinAlgError as exc:
        raise DegenerateSteadyState(str(exc)) from exc
    if not np.all(np.isfinite(inner)):
        raise DegenerateSteadyState("L - |ss><tr| is singular")
    return LiouvilleOperator(inner + P0, L.basis)
