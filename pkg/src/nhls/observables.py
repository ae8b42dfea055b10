"""Reductions of states and evolution records to scalar diagnostics.

Transmission and reflection are reported as fractions of the Dirac norm at
the measurement time, so they remain probabilities when the evolution
amplifies or absorbs; the overall growth sits separately in
``gain_factor`` (final over initial norm). Window sums use compensated
summation in a fixed site order, so repeated runs reproduce identical
bytes and a partition of the lattice reproduces the total norm to the
last representable digit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .dynamics import EvolutionRecord
from .lattice import Hamiltonian
from .state import StateVector


class InteractionIncompleteError(RuntimeError):
    """Scattering metrics requested before the packet left the center."""


@dataclass(frozen=True)
class RegionWindow:
    """Inclusive site-label interval ``[lo, hi]``."""

    lo: int
    hi: int
    label: str = "custom"

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"window has lo={self.lo} > hi={self.hi}")

    def slice_for(self, origin: int) -> slice:
        return slice(self.lo + origin, self.hi + origin + 1)


def region_probability(psi: StateVector, window: RegionWindow) -> float:
    """Dirac probability inside the window (compensated sum over sites)."""
    sl = window.slice_for(psi.origin)
    n = len(psi.amps)
    if sl.start < 0 or sl.stop > n:
        raise ValueError(
            f"window [{window.lo}, {window.hi}] leaves the lattice "
            f"(labels [{-psi.origin}, {n - 1 - psi.origin}])"
        )
    return math.fsum(np.abs(psi.amps[sl]) ** 2)


@dataclass
class ScatterReport:
    """Outcome of one scattering run.

    ``transmitted``/``reflected``/``remaining`` are fractions of the norm
    at ``t_final``; ``gain_factor`` is norm(t_final)/norm(0);
    ``train_width`` is the span of the structure left in the incident-side
    window, measured at a fixed fraction of its peak density.
    """

    transmitted: float
    reflected: float
    remaining: float
    gain_factor: float
    train_width: int | None
    train_lobes: int | None
    t_final: float
    norm_final: float


def _train_metrics(density: np.ndarray, threshold_frac: float) -> tuple[int, int]:
    peak = density.max()
    if peak <= 0:
        return 0, 0
    above = density >= threshold_frac * peak
    idx = np.flatnonzero(above)
    width = int(idx[-1] - idx[0] + 1)
    lobes = int(np.sum(np.diff(above.astype(int)) == 1) + int(above[0]))
    return width, lobes


def interaction_complete_time(
    rec: EvolutionRecord, center: RegionWindow, frac: float = 0.01
) -> float:
    """First snapshot time after the center region has emptied.

    The interaction is considered over once the center window holds less
    than ``frac`` of the current norm and never refills. Raises
    :class:`InteractionIncompleteError` when that never happens.
    """
    sl = center.slice_for(rec.origin)
    dens = np.abs(rec.snapshots) ** 2
    center_frac = dens[:, sl].sum(axis=1) / np.maximum(rec.norms, 1e-300)
    busy = np.flatnonzero(center_frac >= frac)
    if len(busy) == 0:
        raise InteractionIncompleteError(
            "the packet never reached the center window; for reflection-only "
            "runs pass an explicit t_final"
        )
    if busy[-1] == len(rec.times) - 1:
        raise InteractionIncompleteError(
            f"center window still holds {center_frac[-1]:.1%} of the norm at "
            f"t={rec.times[-1]:g}"
        )
    return float(rec.times[busy[-1] + 1])


def scatter_report(
    rec: EvolutionRecord,
    windows: dict[str, RegionWindow],
    t_final: float | None = None,
    train_threshold: float = 0.01,
) -> ScatterReport:
    """Transmission/reflection bookkeeping at the end of a scattering run.

    ``windows`` needs ``"transmit"`` and ``"reflect"`` (the incident side);
    an optional ``"center"`` window enables both the remaining-probability
    column and the automatic ``t_final`` detection. Without an explicit
    ``t_final`` the report is taken at the first time the center has
    emptied (or at the last snapshot when no center window is given).
    """
    if "transmit" not in windows or "reflect" not in windows:
        raise ValueError("windows must include 'transmit' and 'reflect'")
    center = windows.get("center")
    if t_final is None:
        t_final = (
            interaction_complete_time(rec, center)
            if center is not None
            else float(rec.times[-1])
        )
    idx = rec.index_at(t_final)
    state = rec.state(idx)
    norm_final = rec.norms[idx]
    norm0 = rec.norms[0]
    if norm_final <= 0 or norm0 <= 0:
        raise ValueError("degenerate norms in the record")
    transmitted = region_probability(state, windows["transmit"]) / norm_final
    reflected = region_probability(state, windows["reflect"]) / norm_final
    remaining = (
        region_probability(state, center) / norm_final if center is not None else 0.0
    )
    rsl = windows["reflect"].slice_for(rec.origin)
    width, lobes = _train_metrics(np.abs(state.amps[rsl]) ** 2, train_threshold)
    return ScatterReport(
        transmitted=transmitted,
        reflected=reflected,
        remaining=remaining,
        gain_factor=norm_final / norm0,
        train_width=width,
        train_lobes=lobes,
        t_final=float(rec.times[idx]),
        norm_final=float(norm_final),
    )


@dataclass
class ConfinementTrace:
    """In-segment probability versus time for a lead + terminal segment.

    The probability collapses and revives once per transit: the packet
    nearly cancels against its own reflection at each end, so the
    meaningful envelope is the sequence of transit peaks. One bounce
    period (a full round trip) spans two consecutive peaks.
    """

    times: np.ndarray
    probability: np.ndarray
    peak_times: np.ndarray
    peak_values: np.ndarray
    entry_time: float | None
    bounce_period: float | None

    def envelope_retention(self, n_periods: float = 3.0) -> float | None:
        """min/max ratio of transit-peak heights across the first
        ``n_periods`` bounce periods after entry."""
        if self.entry_time is None or self.bounce_period is None:
            return None
        horizon = self.entry_time + n_periods * self.bounce_period * 1.05
        sel = (self.peak_times >= self.entry_time) & (self.peak_times <= horizon)
        if sel.sum() < 2:
            return None
        vals = self.peak_values[sel]
        return float(vals.min() / vals.max())

    def leakage_per_period(self, norms: np.ndarray) -> float | None:
        """Average probability escaping to the lead per bounce period,
        over the span of the detected peaks."""
        if self.bounce_period is None or len(self.peak_times) < 2:
            return None
        i0 = int(np.argmin(np.abs(self.times - self.peak_times[0])))
        i1 = int(np.argmin(np.abs(self.times - self.peak_times[-1])))
        leaked = (norms[i1] - self.probability[i1]) - (norms[i0] - self.probability[i0])
        periods = (self.peak_times[-1] - self.peak_times[0]) / self.bounce_period
        return float(leaked / max(periods, 1e-9))


def confinement_trace(
    rec: EvolutionRecord, segment: RegionWindow, peak_prominence: float = 0.05
) -> ConfinementTrace:
    """Extract the in-segment probability series and its transit peaks."""
    sl = segment.slice_for(rec.origin)
    prob = (np.abs(rec.snapshots) ** 2)[:, sl].sum(axis=1)
    prominence = peak_prominence * max(prob.max(), 1e-300)
    peaks, _ = find_peaks(prob, prominence=prominence)
    peak_times = rec.times[peaks]
    peak_values = prob[peaks]
    entry = float(peak_times[0]) if len(peaks) else None
    period = None
    if len(peaks) >= 3:
        # two transits (one per direction) make up one round trip
        period = 2.0 * float(np.mean(np.diff(peak_times)))
    return ConfinementTrace(rec.times, prob, peak_times, peak_values, entry, period)


def absorption_metric(rec: EvolutionRecord) -> float:
    """Final over initial Dirac norm of the record."""
    return float(rec.norms[-1] / rec.norms[0])


def ipr(psi: StateVector, norm_tol: float = 1e-10) -> float:
    """Inverse participation ratio of a unit-norm state.

    ``sum_j |psi_j|^4``: near 1 for a single-site state, 1/N for a uniform
    plane wave. Rejects unnormalized input rather than silently rescaling.
    """
    n = psi.norm()
    if abs(n - 1.0) > norm_tol:
        raise ValueError(f"state norm is {n}, expected 1 within {norm_tol:g}")
    return float(np.sum(np.abs(psi.amps) ** 4))


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    max_imag: float


def spectrum_reality(H: Hamiltonian) -> SpectrumReport:
    """Full spectrum and its largest imaginary part in magnitude."""
    w, _ = H.eig()
    w = np.array(sorted(w, key=lambda z: (z.real, z.imag)))
    return SpectrumReport(w, float(np.max(np.abs(w.imag))))


def eigenstate_iprs(H: Hamiltonian) -> np.ndarray:
    """IPR of every (Dirac-normalized) eigenstate of H."""
    _, V = H.eig()
    Vn = V / np.linalg.norm(V, axis=0, keepdims=True)
    return np.sum(np.abs(Vn) ** 4, axis=0)


def write_metrics_csv(path, run_id: str, metrics: dict[str, float]) -> None:
    """Flat per-run metric export with columns (run_id, metric, value)."""
    with open(path, "w") as fh:
        fh.write("run_id,metric,value\n")
        for name, value in metrics.items():
            fh.write(f"{run_id},{name},{value:.12g}\n")
