"""Model parameters for the dimerized lattice with staggered gain/loss."""
from __future__ import annotations

from dataclasses import dataclass

EP_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Hopping and gain/loss amplitudes.

    Attributes
    ----------
    J : float
        Uniform-lead hopping and the weak (intercell) bond of the dimerized
        segment. Sets the energy unit.
    delta : float
        Dimerization; the strong (intracell) bond is ``1 + delta``.
    gamma : float
        Gain/loss amplitude of the staggered imaginary on-site potential.
        The sign selects which sublattice carries gain.
    """

    J: float = 1.0
    delta: float = 0.5
    gamma: float = 0.5

    def __post_init__(self) -> None:
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if not 1.0 + self.delta > 0:
            raise ValueError(f"1 + delta must be positive, got delta={self.delta}")

    @property
    def strong_bond(self) -> float:
        return 1.0 + self.delta

    def is_at_ep(self, tol: float = EP_TOL) -> bool:
        """True when |gamma| equals the spectral-degeneracy value |1+delta-J|."""
        return abs(abs(self.gamma) - abs(1.0 + self.delta - self.J)) <= tol

    def replace(self, **kwargs) -> "ModelParams":
        fields = {"J": self.J, "delta": self.delta, "gamma": self.gamma}
        fields.update(kwargs)
        return ModelParams(**fields)


def ep_gamma(params: ModelParams, sign: int = +1) -> float:
    """Gain/loss amplitude at which the two bands coalesce at zero energy.

    Returns ``sign * (1 + delta - J)``; ``sign`` picks the propagation
    orientation of the coalescing zero mode.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign * (1.0 + params.delta - params.J)
