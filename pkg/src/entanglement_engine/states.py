"""Two-qubit states of X form.

The engine dynamics never leaves the family of density matrices

    | r1   0    0    0  |
    | 0    r2   ic   0  |
    | 0   -ic*  r3   0  |
    | 0    0    0    r4 |

written in the product basis |00>, |01>, |10>, |11> where the first label
is the left qubit and ``1`` means excited.  We store ``c`` itself, so the
|01><10| matrix element is ``1j * c``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPhysicalState

POPULATION_TOL = 1e-9
TRACE_TOL = 1e-8


@dataclass(frozen=True)
class XState:
    r1: float
    r2: float
    r3: float
    r4: float
    c: complex = 0j

    def __post_init__(self):
        for name in ("r1", "r2", "r3", "r4"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "c", complex(self.c))
        pops = self.populations
        if not np.all(np.isfinite(pops)) or not np.isfinite(self.c):
            raise NonPhysicalState("non-finite entries")
        if pops.min() < -POPULATION_TOL:
            raise NonPhysicalState(f"negative population {pops.min():.3e}")
        if abs(pops.sum() - 1.0) > TRACE_TOL:
            raise NonPhysicalState(f"trace deviates from 1 by {pops.sum() - 1.0:.3e}")
        if self.r2 * self.r3 < abs(self.c) ** 2 - POPULATION_TOL:
            raise NonPhysicalState("coherence exceeds sqrt(r2*r3)")

    @property
    def populations(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.r3, self.r4])

    @property
    def n_left(self) -> float:
        """Excitation probability of the left qubit."""
        return self.r3 + self.r4

    @property
    def n_right(self) -> float:
        return self.r2 + self.r4

    def matrix(self) -> np.ndarray:
        """Full 4x4 density matrix in the product basis."""
        rho = np.diag(self.populations).astype(complex)
        rho[1, 2] = 1j * self.c
        rho[2, 1] = -1j * np.conj(self.c)
        return rho

    @classmethod
    def from_matrix(cls, rho) -> "XState":
        rho = np.asarray(rho)
        d = np.real(np.diag(rho))
        return cls(d[0], d[1], d[2], d[3], rho[1, 2] / 1j)


def random_xstate(rng: np.random.Generator) -> XState:
    """Draw a valid X state; used by property tests and the invariant suite."""
    pops = rng.dirichlet(np.ones(4))
    bound = np.sqrt(pops[1] * pops[2])
    c = bound * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return XState(*pops, c=c)
