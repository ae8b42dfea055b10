import math

import numpy as np
import pytest

from nhls import (
    Method,
    ModelParams,
    PropagatorConfig,
    RegionWindow,
    StateVector,
    assemble,
    gaussian_packet,
    ipr,
    junction_spec,
    propagate,
    region_probability,
    scatter_report,
    spectrum_reality,
)
from nhls.lattice import Boundary, build_uniform_chain
from nhls.observables import (
    InteractionIncompleteError,
    confinement_trace,
    eigenstate_iprs,
    write_metrics_csv,
)


def _unit_state(n, origin=0):
    rng = np.random.default_rng(7)
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    return StateVector(amps / np.linalg.norm(amps), origin)


def test_full_window_probability_is_norm():
    psi = _unit_state(64)
    total = region_probability(psi, RegionWindow(0, 63))
    assert total == math.fsum(np.abs(psi.amps) ** 2)
    np.testing.assert_allclose(total, 1.0, atol=1e-14)


def test_window_additivity():
    psi = _unit_state(64)
    whole = region_probability(psi, RegionWindow(0, 63))
    parts = [
        region_probability(psi, RegionWindow(0, 20)),
        region_probability(psi, RegionWindow(21, 40)),
        region_probability(psi, RegionWindow(41, 63)),
    ]
    assert abs(math.fsum(parts) - whole) < 1e-15


def test_single_site_windows():
    amps = np.zeros(16, dtype=complex)
    amps[5] = 1.0
    psi = StateVector(amps, 0)
    assert region_probability(psi, RegionWindow(5, 5)) == 1.0
    assert region_probability(psi, RegionWindow(0, 4)) == 0.0
    assert region_probability(psi, RegionWindow(6, 15)) == 0.0


def test_window_outside_lattice_rejected():
    psi = _unit_state(16)
    with pytest.raises(ValueError, match="window"):
        region_probability(psi, RegionWindow(0, 16))


def test_ipr_plane_wave_and_single_site():
    n = 125
    j = np.arange(n)
    plane = StateVector(np.exp(1j * 0.3 * j) / np.sqrt(n))
    np.testing.assert_allclose(ipr(plane), 1.0 / n, atol=1e-14)
    localized = np.zeros(n, dtype=complex)
    localized[3] = 1.0
    assert ipr(StateVector(localized)) == 1.0


def test_ipr_invariances(rng):
    psi = _unit_state(50)
    np.testing.assert_allclose(
        ipr(StateVector(psi.amps * np.exp(0.7j))), ipr(psi), atol=1e-14
    )
    perm = rng.permutation(50)
    np.testing.assert_allclose(ipr(StateVector(psi.amps[perm])), ipr(psi), atol=1e-14)


def test_ipr_rejects_unnormalized():
    with pytest.raises(ValueError, match="norm"):
        ipr(StateVector(np.ones(4, dtype=complex)))


def test_spectrum_reality_hermitian():
    H = build_uniform_chain(80, ModelParams(gamma=0.0))
    assert spectrum_reality(H).max_imag < 1e-12


def test_spectrum_reality_periodic_junction(params):
    from nhls import junction_spec

    H = assemble(junction_spec(150, 150, boundary=Boundary.RING), params)
    report = spectrum_reality(H)
    assert report.max_imag < 1e-8
    assert len(report.eigenvalues) == 300


def test_eigenstate_iprs_are_small_for_extended(params):
    H = assemble(junction_spec(100, 100, boundary=Boundary.RING), params)
    iprs = eigenstate_iprs(H)
    assert iprs.max() < 0.05


def _hermitian_scatter_record():
    p = ModelParams(gamma=0.0)
    spec = junction_spec(220, 220)
    H = assemble(spec, p)
    psi0 = gaussian_packet(0.08, -110, -np.pi / 2, spec)
    cfg = PropagatorConfig(t_max=110, dt=0.02, snapshot_stride=250, method=Method.STEPPED)
    return propagate(H, psi0, cfg)


def test_scatter_report_hermitian_conservation():
    rec = _hermitian_scatter_record()
    windows = {
        "reflect": RegionWindow(-220, -1, "left"),
        "transmit": RegionWindow(0, 219, "right"),
    }
    rep = scatter_report(rec, windows, t_final=rec.times[-1])
    # fractions always partition unity; the norm itself must be conserved
    assert abs(rep.transmitted + rep.reflected - 1.0) < 1e-12
    assert abs(rep.gain_factor - 1.0) < 1e-6
    assert rep.transmitted < 0.01  # zero-energy packet is fully reflected


def test_scatter_report_interaction_incomplete(params):
    spec = junction_spec(220, 220)
    H = assemble(spec, params)
    psi0 = gaussian_packet(0.08, -110, -np.pi / 2, spec)
    cfg = PropagatorConfig(t_max=40, dt=0.02, snapshot_stride=250, method=Method.STEPPED)
    rec = propagate(H, psi0, cfg)  # packet still mid-crossing at t=40
    windows = {
        "reflect": RegionWindow(-220, -1, "left"),
        "transmit": RegionWindow(60, 219, "right"),
        "center": RegionWindow(0, 59, "segment"),
    }
    with pytest.raises(InteractionIncompleteError):
        scatter_report(rec, windows)


def test_confinement_trace_detects_round_trip(params):
    # short confinement run: segment of 60 sites behind a 300-site lead
    spec = junction_spec(300, 60)
    H = assemble(spec, params)
    psi0 = gaussian_packet(0.08, -150, -np.pi / 2, spec)
    cfg = PropagatorConfig(t_max=260, dt=0.02, snapshot_stride=50, method=Method.STEPPED)
    rec = propagate(H, psi0, cfg)
    trace = confinement_trace(rec, RegionWindow(0, 59, "segment"))
    assert trace.entry_time is not None and trace.bounce_period is not None
    predicted = 2 * 60 / (2 * np.sqrt(params.J * params.strong_bond))
    assert abs(trace.bounce_period - predicted) / predicted < 0.25


def test_metrics_csv(tmp_path):
    path = tmp_path / "metrics.csv"
    write_metrics_csv(path, "demo", {"a": 1.5, "b": 2.0})
    assert path.read_text().splitlines() == [
        "run_id,metric,value", "demo,a,1.5", "demo,b,2",
    ]
