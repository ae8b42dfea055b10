"""Closed-form results: dispersion, interface scattering, zero modes, ring
diagonalization, and the cross-band overlap.

Momentum conventions. Bulk dispersions of the dimerized chain are written
in the cell momentum ``k`` (two sites per cell); the interface scattering
ansatz uses a per-site momentum, half the cell momentum, and the uniform
lead momentum ``K`` with lead dispersion ``E = 2 J cos K``. A wave
``exp(iKj)`` moves right for ``K`` in ``(-pi, 0)``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .params import ModelParams, ep_gamma
from .state import StateVector


class SingularSystemError(RuntimeError):
    """The 2x2 interface matching system is degenerate at this energy."""


class OffEpError(ValueError):
    """Operation requires gamma at the band-coalescence value."""


def dispersion(k, params: ModelParams, band: int = +1):
    """Bulk band energy at cell momentum k.

    ``band * sqrt(J^2 + (1+delta)^2 - 2 J (1+delta) cos k - gamma^2)``;
    complex when the radicand is negative (gain/loss dominated momenta).
    Vectorizes over k.
    """
    if band not in (+1, -1):
        raise ValueError("band must be +1 or -1")
    rad = (
        params.J**2
        + params.strong_bond**2
        - 2 * params.J * params.strong_bond * np.cos(k)
        - params.gamma**2
    )
    return band * np.sqrt(rad.astype(complex) if isinstance(rad, np.ndarray) else complex(rad))


def bloch_g(k, params: ModelParams):
    """Off-diagonal Bloch element g_k = (1+delta) - J e^{ik}."""
    return params.strong_bond - params.J * np.exp(1j * np.asarray(k))


def bloch_matrix(k: float, params: ModelParams) -> np.ndarray:
    """2x2 cell Hamiltonian [[i gamma, conj(g_k)], [g_k, -i gamma]]."""
    g = complex(bloch_g(k, params))
    return np.array([[1j * params.gamma, np.conj(g)], [g, -1j * params.gamma]])


# --- cross-band overlap ------------------------------------------------------

def band_overlap(k, params: ModelParams, small_k: bool = False):
    """Dirac overlap of the two band eigenvectors at cell momentum k.

    ``|gamma| / sqrt(J^2 + (1+delta)^2 - 2 J (1+delta) cos k)``. With
    ``small_k=True`` returns the quadratic-expansion approximation
    ``1/sqrt(1 + J (1+delta) k^2 / gamma^2)`` instead (meaningful near the
    coalescence point). Vectorizes over k.
    """
    if small_k:
        if params.gamma == 0:
            raise ZeroDivisionError("small-k overlap approximation needs gamma != 0")
        return 1.0 / np.sqrt(1.0 + params.J * params.strong_bond * np.square(k) / params.gamma**2)
    denom_sq = (
        params.J**2
        + params.strong_bond**2
        - 2 * params.J * params.strong_bond * np.cos(k)
    )
    if np.any(np.asarray(denom_sq) <= 0):
        raise ZeroDivisionError("overlap denominator vanishes at this momentum")
    return abs(params.gamma) / np.sqrt(denom_sq)


def band_overlap_numeric(k: float, params: ModelParams) -> float:
    """Same overlap from the numerically diagonalized cell Hamiltonian.

    Independent check of :func:`band_overlap`; returns
    ``|<v+|v->|`` for Dirac-normalized eigenvectors.
    """
    _, vecs = np.linalg.eig(bloch_matrix(k, params))
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    return float(abs(np.vdot(vecs[:, 0], vecs[:, 1])))


@dataclass(frozen=True)
class OverlapCurve:
    k: np.ndarray
    values: np.ndarray
    params: ModelParams


def overlap_curve(k_values, params: ModelParams) -> OverlapCurve:
    k = np.asarray(k_values, dtype=float)
    return OverlapCurve(k, np.asarray(band_overlap(k, params), dtype=float), params)


def write_curve_csv(path, k, values) -> None:
    """Curve export with columns (k, value_re, value_im)."""
    vals = np.asarray(values, dtype=complex)
    with open(path, "w") as fh:
        fh.write("k,value_re,value_im\n")
        for ki, vi in zip(np.asarray(k, dtype=float), vals):
            fh.write(f"{ki:.17g},{vi.real:.17g},{vi.imag:.17g}\n")


# --- interface scattering ----------------------------------------------------

@dataclass
class ScatteringSolution:
    """Piecewise plane-wave solution matched at a lead/segment interface.

    Lead side (labels j < 0): ``I e^{iKj} + O e^{-iKj}``. Segment side:
    ``I_A e^{-ikj} + O_A e^{ikj}`` on gain sites (even j) and the B
    counterparts on loss sites, with the per-site momentum k. ``propagating``
    is False when the energy falls in the segment's gap and k acquires an
    imaginary part (evanescent transmitted branch, chosen to decay).
    """

    E: float
    K: float
    k: complex
    I: complex
    O: complex
    I_A: complex
    O_A: complex
    I_B: complex
    O_B: complex
    aux: dict
    propagating: bool
    incident: str

    def wavefunction(self, labels) -> np.ndarray:
        """Amplitudes f_j on signed site labels (vectorized)."""
        j = np.asarray(labels)
        f = np.empty(j.shape, dtype=complex)
        left = j < 0
        f[left] = self.I * np.exp(1j * self.K * j[left]) + self.O * np.exp(
            -1j * self.K * j[left]
        )
        right = ~left
        jr = j[right]
        even = jr % 2 == 0
        inc = np.where(even, self.I_A, self.I_B)
        out = np.where(even, self.O_A, self.O_B)
        f[right] = inc * np.exp(-1j * self.k * jr) + out * np.exp(1j * self.k * jr)
        return f


def _segment_momentum(E: float, params: ModelParams) -> tuple[complex, bool]:
    """Per-site momentum of the transmitted branch at lead energy E.

    Picks the sign so the ``e^{+ikj}`` branch carries energy away from the
    interface: positive group velocity when propagating, decay into the
    segment when evanescent.
    """
    J, s, g = params.J, params.strong_bond, params.gamma
    c2k = (E**2 + g**2 - J**2 - s**2) / (2 * J * s)
    if abs(c2k) <= 1.0:
        half = np.arccos(c2k) / 2.0
        if E > 0:
            return complex(-half), True
        if E < 0:
            return complex(half), True
        # zero energy: gapless only at the coalescence point, where the
        # band closes at half = pi/2; keep the right-moving convention
        return complex(-half), True
    if c2k < -1.0:
        beta = np.arccosh(-c2k)
        return np.pi / 2 + 1j * beta / 2, False
    beta = np.arccosh(c2k)
    return 1j * beta / 2, False


def scattering_solve(K: float, params: ModelParams, incident: str = "lead") -> ScatteringSolution:
    """Solve the interface matching problem at lead momentum K.

    Parameters
    ----------
    K : float
        Lead momentum; the incident energy is ``E = 2 J cos K``. Right-moving
        incidence uses ``K`` in ``(-pi, 0)``.
    incident : {"lead", "ssh"}
        Which side carries the unit incident amplitude: ``I = 1`` from the
        lead or ``I_A = 1`` from the segment.

    The two remaining outgoing amplitudes (O, O_A) solve the pair of
    matching equations at the interface; the B-sublattice amplitudes follow
    from the bulk ratio ``lambda``. Raises :class:`SingularSystemError` when
    the matching matrix is degenerate.
    """
    if incident not in ("lead", "ssh"):
        raise ValueError("incident must be 'lead' or 'ssh'")
    J, s, g = params.J, params.strong_bond, params.gamma
    E = 2.0 * J * np.cos(K)
    k, propagating = _segment_momentum(E, params)

    def branch(kk):
        """Sublattice amplitudes (a, b) of the bulk wave a e^{i kk j}|even,
        b e^{i kk j}|odd. Normalized to a=1 (so b is the usual amplitude
        ratio) except where the wave lives on the odd sublattice alone."""
        v_even = np.array([J * np.exp(-1j * kk) + s * np.exp(1j * kk), E - 1j * g])
        v_odd = np.array([E + 1j * g, s * np.exp(-1j * kk) + J * np.exp(1j * kk)])
        v = v_even if np.linalg.norm(v_even) >= np.linalg.norm(v_odd) else v_odd
        if abs(v[0]) > 1e-10 * np.linalg.norm(v):
            return 1.0 + 0.0j, complex(v[1] / v[0])
        return complex(v[0] / v[1]), 1.0 + 0.0j

    a_in, b_in = branch(-k)
    a_out, b_out = branch(k)
    # j=0 matching combination (E - i gamma) f_0 - strong * f_1 per branch
    mu_in = (E - 1j * g) * a_in - s * b_in * np.exp(-1j * k)
    mu_out = (E - 1j * g) * a_out - s * b_out * np.exp(1j * k)

    def nu(KK):
        return E * np.exp(-1j * KK) - J * np.exp(-2j * KK)

    I, I_ssh = (1.0, 0.0) if incident == "lead" else (0.0, 1.0)
    A = np.array([[-nu(-K), J * a_out], [J * np.exp(1j * K), -mu_out]], dtype=complex)
    rhs = np.array(
        [nu(K) * I - J * a_in * I_ssh, -J * np.exp(-1j * K) * I + mu_in * I_ssh],
        dtype=complex,
    )
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    scale = max(abs(A).max(), 1.0)
    if abs(det) < 1e-12 * scale**2:
        raise SingularSystemError(
            f"interface matching is degenerate at K={K:.6f} (|det|={abs(det):.3e})"
        )
    O, t_out = np.linalg.solve(A, rhs)
    return ScatteringSolution(
        E=float(E),
        K=float(K),
        k=complex(k),
        I=complex(I),
        O=complex(O),
        I_A=complex(a_in * I_ssh),
        O_A=complex(t_out * a_out),
        I_B=complex(b_in * I_ssh),
        O_B=complex(t_out * b_out),
        aux={
            "branch_in": (complex(a_in), complex(b_in)),
            "branch_out": (complex(a_out), complex(b_out)),
            "mu_in": complex(mu_in),
            "mu_out": complex(mu_out),
            "nu_K": complex(nu(K)),
            "nu_mK": complex(nu(-K)),
        },
        propagating=propagating,
        incident=incident,
    )


def zero_energy_interface_state(
    params: ModelParams, sign: int, n_sites: int, origin: int | None = None
) -> StateVector:
    """The zero-energy plane wave ``f_j = e^{∓ i pi j / 2}`` transmitted
    through the interface without reflection.

    Exists when ``gamma = sign * (1 + delta - J)``; ``sign=+1`` gives the
    right-moving wave ``e^{-i pi j/2}`` and ``sign=-1`` its complex
    conjugate. ``origin`` defaults to the chain midpoint.
    """
    target = ep_gamma(params, sign)
    if abs(params.gamma - target) > 1e-12:
        raise OffEpError(
            f"gamma={params.gamma} but the sign={sign:+d} zero mode needs {target}"
        )
    if origin is None:
        origin = n_sites // 2
    j = np.arange(n_sites) - origin
    return StateVector(np.exp(-1j * sign * np.pi * j / 2.0), origin=origin)


def semi_infinite_zero_mode(params: ModelParams, n_check: int = 64) -> dict:
    """Matching coefficients of the would-be zero mode of the half-open
    gain/loss chain, and the resulting site amplitudes.

    At ``gamma = +/-(1+delta-J)`` the zero-energy matching with unit
    incoming amplitude forces the incoming and outgoing branches to cancel
    identically, so the returned amplitudes vanish on every site: the
    half-open chain admits no zero-energy state even though the closed ring
    does. The returned dict holds I_A, I_B, O_A, O_B and the (identically
    zero) state on ``n_check`` sites.
    """
    g = params.gamma
    target = abs(1.0 + params.delta - params.J)
    if abs(abs(g) - target) > 1e-12:
        raise OffEpError(f"|gamma|={abs(g)} but the zero-mode analysis needs {target}")
    # k = pi/2: quarter-turn phases are exact complex integers, so the
    # branch cancellation below is exact rather than rounded
    e_ik, e_2ik, e_3ik = 1j, -1.0 + 0j, -1j
    E = 0.0
    s = params.strong_bond
    denom = s + params.J * e_2ik  # = 1 + delta - J
    I_A = 1.0 + 0j
    I_B = (E - 1j * g) * e_ik / denom
    O_A = -(s * e_2ik + params.J) * e_2ik / denom
    O_B = -(E - 1j * g) * e_3ik / denom
    j = np.arange(n_check)
    even = j % 2 == 0
    inc = np.where(even, I_A, I_B)
    out = np.where(even, O_A, O_B)
    phase_minus = (-1j) ** (j % 4)  # e^{-i pi j / 2}, exact
    phase_plus = (1j) ** (j % 4)
    f = inc * phase_minus + out * phase_plus
    return {
        "I_A": complex(I_A),
        "I_B": complex(I_B),
        "O_A": complex(O_A),
        "O_B": complex(O_B),
        "f": StateVector(f, origin=0),
    }


# --- ring diagonalization ----------------------------------------------------

COALESCENCE_TOL = 1e-10


@dataclass
class RingMode:
    """Analytic eigenpair of the dimerized gain/loss ring.

    ``amplitudes`` is the two-component cell wavefunction (gain site, loss
    site); the full state on 2 n_cells sites carries the cell phase
    ``e^{-i(k+pi) l} / sqrt(n_cells)``. At a momentum where the two bands
    coalesce a single record is emitted with ``band=0``; it carries the
    one surviving eigenvector plus the generalized vector completing the
    2x2 Jordan block. ``broken`` marks momenta with complex energy.
    """

    k: float
    band: int
    energy: complex
    theta: complex
    g: complex
    amplitudes: np.ndarray
    n_cells: int
    coalescing: bool = False
    broken: bool = False
    generalized: np.ndarray | None = None

    def _phases(self) -> np.ndarray:
        l = np.arange(self.n_cells)
        return np.exp(-1j * (self.k + np.pi) * l) / np.sqrt(self.n_cells)

    def state_vector(self) -> np.ndarray:
        ph = self._phases()
        vec = np.empty(2 * self.n_cells, dtype=complex)
        vec[0::2] = self.amplitudes[0] * ph
        vec[1::2] = self.amplitudes[1] * ph
        return vec

    def generalized_state_vector(self) -> np.ndarray | None:
        if self.generalized is None:
            return None
        ph = self._phases()
        vec = np.empty(2 * self.n_cells, dtype=complex)
        vec[0::2] = self.generalized[0] * ph
        vec[1::2] = self.generalized[1] * ph
        return vec


def ring_momenta(n_cells: int) -> np.ndarray:
    """Allowed cell momenta 2 pi m / n_cells - pi, m = 0..n_cells-1."""
    return 2.0 * np.pi * np.arange(n_cells) / n_cells - np.pi


def ring_modes(n_cells: int, params: ModelParams) -> list[RingMode]:
    """Analytic modes of the 2*n_cells-site ring closed by a weak bond.

    Per momentum: two Dirac-normalized band modes in the unbroken region;
    one flagged record with eigen- and generalized vector at a coalescence;
    two ``broken`` records with complex-conjugate energies where gain/loss
    dominates.
    """
    if n_cells < 2:
        raise ValueError("ring needs at least 2 cells")
    out: list[RingMode] = []
    for k in ring_momenta(n_cells):
        g = complex(bloch_g(k, params))
        gg = (g * g.conjugate()).real
        disc = gg - params.gamma**2
        if abs(g) < 1e-12:
            # vanishing cell coupling (undimerized chain at k=0): the cell
            # matrix is diagonal, sublattice states are exact eigenvectors
            for band, amp in ((+1, (1.0, 0.0)), (-1, (0.0, 1.0))):
                out.append(
                    RingMode(
                        k=float(k), band=band,
                        energy=1j * band * params.gamma, theta=0.0, g=g,
                        amplitudes=np.array(amp, dtype=complex),
                        n_cells=n_cells, broken=params.gamma != 0.0,
                    )
                )
            continue
        if abs(disc) < COALESCENCE_TOL and params.gamma != 0.0:
            # defective point: eigenvector v with (H_k - 0) v = 0 and
            # generalized partner w with (H_k - 0) w = v
            c = 1j * params.gamma / g.conjugate()
            amp = np.array([c, 1.0], dtype=complex) / np.sqrt(2)
            block = np.array([[1j * params.gamma, g.conjugate()], [g, -1j * params.gamma]])
            w = np.linalg.lstsq(block, amp, rcond=None)[0]
            theta = -1j * cmath.log(1j)
            out.append(
                RingMode(
                    k=float(k), band=0, energy=0.0, theta=theta, g=g,
                    amplitudes=amp, n_cells=n_cells, coalescing=True,
                    generalized=w,
                )
            )
            continue
        for band in (+1, -1):
            energy = band * np.sqrt(complex(disc))
            c = (energy + 1j * params.gamma) / g.conjugate()
            amp = np.array([c, 1.0], dtype=complex) / np.sqrt(2)
            eith = (energy + 1j * params.gamma) / (band * np.sqrt(complex(gg)))
            out.append(
                RingMode(
                    k=float(k), band=band, energy=complex(energy),
                    theta=complex(-1j * cmath.log(eith)), g=g,
                    amplitudes=amp, n_cells=n_cells, broken=disc < 0,
                )
            )
    return out


def paired_ring_modes(modes: list[RingMode]) -> list[tuple[RingMode, RingMode]]:
    """(plus, minus) pairs by momentum, skipping coalescing and broken
    records, ordered by ascending k."""
    plus = {m.k: m for m in modes if m.band == +1 and not m.broken}
    minus = {m.k: m for m in modes if m.band == -1 and not m.broken}
    return [(plus[k], minus[k]) for k in sorted(set(plus) & set(minus))]


def dirac_probability(C_plus, C_minus, t, modes: list[RingMode]):
    """Closed-form Dirac probability of a two-band ring superposition.

    The state is ``sum_k C_+(k) |k,+> + C_-(k) |k,->`` over the paired
    momenta of ``modes`` (order of :func:`paired_ring_modes`). Because the
    band modes are not orthogonal, the probability carries a cross term
    oscillating at twice the band energy:

    ``P(t) = sum_k (|C+|^2 + |C-|^2)
            + 2 sum_k Re(-i e^{i theta_k} e^{-2 i eps_k t} C+ C-*) sin theta_k``

    with ``theta_k`` and ``eps_k`` of the upper band. Vectorizes over t.
    """
    pairs = paired_ring_modes(modes)
    C_plus = np.asarray(C_plus, dtype=complex)
    C_minus = np.asarray(C_minus, dtype=complex)
    if len(C_plus) != len(pairs) or len(C_minus) != len(pairs):
        raise ValueError(
            f"need one coefficient per paired momentum ({len(pairs)}), got "
            f"{len(C_plus)} and {len(C_minus)}"
        )
    t = np.asarray(t, dtype=float)
    eps = np.array([p.energy.real for p, _ in pairs])
    theta = np.array([complex(p.theta) for p, _ in pairs])
    base = float(np.sum(np.abs(C_plus) ** 2 + np.abs(C_minus) ** 2))
    phase = np.exp(-2j * eps[None, ...] * np.atleast_1d(t)[..., None])
    cross = np.real(
        -1j * np.exp(1j * theta)[None, ...] * phase * (C_plus * np.conj(C_minus))[None, ...]
    ) * np.sin(theta).real[None, ...]
    P = base + 2.0 * np.sum(cross, axis=-1)
    return float(P[0]) if np.isscalar(t) or t.ndim == 0 else P
