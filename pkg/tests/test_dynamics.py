import numpy as np
import pytest

from nhls import (
    Method,
    ModelParams,
    PropagatorConfig,
    StateVector,
    assemble,
    gaussian_packet,
    junction_spec,
    propagate,
    quasi_coalescing_packets,
    ring_spec,
)
from nhls.dynamics import DefectiveSpectrumError, SupportClippedError, time_reversed
from nhls.lattice import LatticeSpec, lead


def _uniform_spec(n):
    return LatticeSpec((lead(n),), origin_offset=n // 2)


def test_gaussian_packet_normalized_and_centered(params):
    spec = junction_spec(600, 600)
    psi = gaussian_packet(0.04, -300, -np.pi / 2, spec)
    np.testing.assert_allclose(psi.norm(), 1.0, atol=1e-14)
    sites = psi.site_labels
    assert sites[int(np.argmax(psi.density()))] == -300


def test_gaussian_packet_single_site_limit():
    spec = _uniform_spec(101)
    psi = gaussian_packet(2.0, 7, 0.0, spec)
    dens = psi.density()
    assert psi.site_labels[int(np.argmax(dens))] == 7
    assert dens.max() > 0.9


def test_gaussian_packet_momentum_peak(params):
    # discrete Fourier oracle: the momentum profile peaks at k_c with
    # width of order alpha
    spec = _uniform_spec(1200)
    alpha, k_c = 0.04, -np.pi / 2
    psi = gaussian_packet(alpha, 0, k_c, spec)
    ft = np.fft.fft(psi.amps)
    kgrid = 2 * np.pi * np.fft.fftfreq(len(psi.amps))
    k_peak = kgrid[int(np.argmax(np.abs(ft)))]
    assert abs(k_peak - k_c) < 2 * np.pi / len(psi.amps) + 1e-12
    power = np.abs(ft) ** 2
    mean = np.sum(kgrid * power) / np.sum(power)
    spread = np.sqrt(np.sum((kgrid - mean) ** 2 * power) / np.sum(power))
    assert 0.5 * alpha < spread < 2.0 * alpha


def test_gaussian_packet_clipping_raises():
    spec = _uniform_spec(200)
    with pytest.raises(SupportClippedError):
        gaussian_packet(0.04, 90, 0.0, spec)


def test_first_snapshot_is_initial_state(params):
    spec = junction_spec(100, 100)
    H = assemble(spec, params)
    psi0 = gaussian_packet(0.1, -50, -np.pi / 2, spec)
    for method in (Method.STEPPED, Method.SPECTRAL):
        cfg = PropagatorConfig(t_max=1.0, dt=0.01, snapshot_stride=50, method=method)
        rec = propagate(H, psi0, cfg)
        assert rec.snapshots[0].tobytes() == psi0.amps.tobytes()


def test_hermitian_norm_conservation():
    p = ModelParams(gamma=0.0)
    spec = _uniform_spec(400)
    H = assemble(spec, p)
    psi0 = gaussian_packet(0.05, 0, -np.pi / 2, spec)
    spectral = propagate(
        H, psi0, PropagatorConfig(t_max=40, dt=0.01, snapshot_stride=400,
                                  method=Method.SPECTRAL)
    )
    np.testing.assert_allclose(spectral.norms, 1.0, atol=1e-10)
    stepped = propagate(
        H, psi0, PropagatorConfig(t_max=40, dt=0.01, snapshot_stride=400,
                                  method=Method.STEPPED)
    )
    np.testing.assert_allclose(stepped.norms, 1.0, atol=1e-8)


def test_packet_moves_at_group_velocity():
    # centroid regression oracle: E = 2 J cos K gives speed 2 J |sin k_c|
    p = ModelParams(J=1.0, delta=0.0, gamma=0.0)
    spec = _uniform_spec(700)
    H = assemble(spec, p)
    psi0 = gaussian_packet(0.05, -150, -np.pi / 2, spec)
    cfg = PropagatorConfig(t_max=100, dt=0.02, snapshot_stride=100, method=Method.STEPPED)
    rec = propagate(H, psi0, cfg)
    sites = rec.site_labels()
    dens = rec.density()
    centroids = dens @ sites / dens.sum(axis=1)
    speed = np.polyfit(rec.times, centroids, 1)[0]
    assert abs(speed - 2.0) < 0.04


def test_propagators_cross_validate(params):
    spec = junction_spec(250, 250)
    H = assemble(spec, params)
    psi0 = gaussian_packet(0.04, -120, -np.pi / 2, spec)
    kw = dict(t_max=50.0, dt=0.005, snapshot_stride=10000)
    a = propagate(H, psi0, PropagatorConfig(method=Method.STEPPED, **kw))
    b = propagate(H, psi0, PropagatorConfig(method=Method.SPECTRAL, **kw))
    assert np.max(np.abs(a.snapshots[-1] - b.snapshots[-1])) < 1e-6


def test_propagation_deterministic(params):
    spec = junction_spec(150, 150)
    H = assemble(spec, params)
    psi0 = gaussian_packet(0.06, -70, -np.pi / 2, spec)
    cfg = PropagatorConfig(t_max=20, dt=0.01, snapshot_stride=200, method=Method.STEPPED)
    a = propagate(H, psi0, cfg)
    b = propagate(assemble(spec, params), psi0, cfg)
    assert a.snapshots.tobytes() == b.snapshots.tobytes()


def test_time_reversal_consistency(params):
    # evolving under H(gamma), conjugating, then evolving under H(-gamma)
    # for the same duration returns the conjugated initial state
    spec = junction_spec(150, 150)
    psi0 = gaussian_packet(0.06, -70, -np.pi / 2, spec)
    cfg = PropagatorConfig(t_max=30, dt=0.01, snapshot_stride=3000, method=Method.SPECTRAL)
    fwd = propagate(assemble(spec, params), psi0, cfg)
    back = propagate(
        assemble(spec, params.replace(gamma=-params.gamma)),
        time_reversed(fwd.final_state()),
        cfg,
    )
    assert np.max(np.abs(back.snapshots[-1] - np.conj(psi0.amps))) < 1e-8


def test_defective_spectrum_guard(params):
    # the eigenbasis of a ring at the coalescence point is nearly
    # defective; a tight guard must refuse it
    H = assemble(ring_spec(200), params)
    psi0 = StateVector(np.ones(200, dtype=complex) / np.sqrt(200), 0, H.spec)
    cfg = PropagatorConfig(
        t_max=1.0, dt=0.01, snapshot_stride=100,
        method=Method.SPECTRAL, degeneracy_guard=1e4,
    )
    with pytest.raises(DefectiveSpectrumError):
        propagate(H, psi0, cfg)


def test_quasi_coalescing_packets_overlap(params):
    H = assemble(ring_spec(500), params)
    psi_L, psi_R = quasi_coalescing_packets(H, width=50, center=250)
    np.testing.assert_allclose(psi_L.norm(), 1.0, atol=1e-12)
    np.testing.assert_allclose(psi_R.norm(), 1.0, atol=1e-12)
    assert abs(np.vdot(psi_L.amps, psi_R.amps)) > 0.9


def test_quasi_coalescing_hermitian_control():
    # same construction on the undimerized lossless ring: opposite movers
    # are exactly orthogonal
    p = ModelParams(J=1.0, delta=0.0, gamma=0.0)
    H = assemble(ring_spec(500), p)
    psi_L, psi_R = quasi_coalescing_packets(H, width=50, center=250)
    assert abs(np.vdot(psi_L.amps, psi_R.amps)) < 1e-10


def test_quasi_coalescing_packets_move_apart(params):
    H = assemble(ring_spec(600), params)
    psi_L, psi_R = quasi_coalescing_packets(H, width=50, center=300)
    cfg = PropagatorConfig(t_max=30, dt=0.02, snapshot_stride=1500, method=Method.STEPPED)
    cells = np.arange(600) // 2

    def lump_center(amps):
        dens = np.abs(amps) ** 2
        cell_dens = dens[0::2] + dens[1::2]
        return float(np.argmax(cell_dens))

    for psi, sign in ((psi_L, -1.0), (psi_R, +1.0)):
        rec = propagate(H, psi, cfg)
        drift = lump_center(rec.snapshots[-1]) - lump_center(rec.snapshots[0])
        v_cell = np.sqrt(params.J * params.strong_bond)
        assert abs(drift - sign * v_cell * 30) < 6.0


def test_quasi_coalescing_rejects_off_ep():
    H = assemble(ring_spec(100), ModelParams(gamma=0.2))
    with pytest.raises(ValueError, match="coalescence"):
        quasi_coalescing_packets(H, width=20, center=50)


def test_record_csv_exports(tmp_path, params):
    spec = junction_spec(60, 60)
    H = assemble(spec, params)
    psi0 = gaussian_packet(0.15, -30, -np.pi / 2, spec)
    cfg = PropagatorConfig(t_max=5, dt=0.01, snapshot_stride=250, method=Method.STEPPED)
    rec = propagate(H, psi0, cfg)
    dens_path = tmp_path / "density.csv"
    rec.write_density_csv(dens_path)
    lines = dens_path.read_text().splitlines()
    assert lines[0] == "t,site,re,im,density"
    assert len(lines) == 1 + len(rec.times) * H.dim
    from nhls.observables import RegionWindow

    norm_path = tmp_path / "norms.csv"
    rec.write_norms_csv(norm_path, {"seg": RegionWindow(0, 59, "seg")})
    head = norm_path.read_text().splitlines()[0]
    assert head == "t,dirac_norm,region_seg"
