"""Site-amplitude state vectors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeSpec


def dirac_norm(amps: np.ndarray) -> float:
    """Standard inner-product probability, sum over sites of |psi_j|^2.

    Not conserved when the evolution carries gain/loss.
    """
    a = np.asarray(amps)
    return float(np.real(np.vdot(a, a)))


@dataclass
class StateVector:
    """Complex amplitude per site, with the signed-label convention of the
    generating lattice (``site label = array index - origin``)."""

    amps: np.ndarray
    origin: int = 0
    lattice: LatticeSpec | None = None

    def __post_init__(self) -> None:
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.lattice is not None and len(self.amps) != self.lattice.n_sites:
            raise ValueError(
                f"state has {len(self.amps)} amplitudes but the lattice has "
                f"{self.lattice.n_sites} sites"
            )

    @classmethod
    def for_lattice(cls, amps: np.ndarray, spec: LatticeSpec) -> "StateVector":
        return cls(np.asarray(amps, dtype=complex), spec.origin_offset, spec)

    def __len__(self) -> int:
        return len(self.amps)

    @property
    def site_labels(self) -> np.ndarray:
        return np.arange(len(self.amps)) - self.origin

    def density(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def norm(self) -> float:
        return dirac_norm(self.amps)

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n <= 0:
            raise ValueError("cannot normalize a zero state")
        return StateVector(self.amps / np.sqrt(n), self.origin, self.lattice)

    def window_slice(self, lo: int, hi: int) -> slice:
        """Array slice covering signed labels lo..hi inclusive."""
        return slice(lo + self.origin, hi + self.origin + 1)
