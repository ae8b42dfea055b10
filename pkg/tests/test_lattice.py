import json

import numpy as np
import pytest

from nhls import (
    Boundary,
    ModelParams,
    assemble,
    build_nh_ssh_segment,
    build_uniform_chain,
    ep_gamma,
    junction_spec,
    lead,
    ring_spec,
    sandwich_spec,
    ssh_segment,
)
from nhls.lattice import LatticeError, LatticeSpec, from_json_document, to_json_document


def test_uniform_two_sites(params):
    H = build_uniform_chain(2, params)
    np.testing.assert_array_equal(H.matrix, [[0, 1], [1, 0]])


def test_uniform_four_site_spectrum(params):
    # oracle: dense diagonalization; closed form 2 J cos(m pi / 5)
    H = build_uniform_chain(4, params)
    eigs = np.sort(np.linalg.eigvalsh(H.matrix.real))
    golden = np.sort(2.0 * np.cos(np.arange(1, 5) * np.pi / 5))
    np.testing.assert_allclose(eigs, golden, atol=1e-12)
    np.testing.assert_allclose(
        eigs, [-1.618033988749895, -0.6180339887498949,
               0.6180339887498949, 1.618033988749895],
        atol=1e-12,
    )


def test_uniform_chain_is_hermitian():
    H = build_uniform_chain(17, ModelParams(J=0.7, delta=0.2, gamma=0.9))
    assert np.max(np.abs(H.matrix - H.matrix.conj().T)) == 0.0


def test_uniform_chain_rejects_tiny():
    with pytest.raises(LatticeError):
        build_uniform_chain(1, ModelParams())


def test_segment_two_sites(params):
    H = build_nh_ssh_segment(2, params, gain_first=True)
    np.testing.assert_array_equal(H.matrix, [[0.5j, 1.5], [1.5, -0.5j]])
    # 2x2 characteristic polynomial gives E^2 = (1+delta)^2 - gamma^2
    eigs = np.sort_complex(np.linalg.eigvals(H.matrix))
    np.testing.assert_allclose(eigs, [-np.sqrt(2), np.sqrt(2)], atol=1e-12)


def test_segment_hermitian_when_gamma_zero():
    H = build_nh_ssh_segment(10, ModelParams(gamma=0.0))
    assert np.max(np.abs(H.matrix - H.matrix.conj().T)) == 0.0


def test_segment_rejects_odd_length(params):
    with pytest.raises(LatticeError):
        build_nh_ssh_segment(7, params)


def test_gain_first_flips_diagonal(params):
    a = build_nh_ssh_segment(6, params, gain_first=True)
    b = build_nh_ssh_segment(6, params, gain_first=False)
    np.testing.assert_array_equal(np.diag(a.matrix), -np.diag(b.matrix))
    np.testing.assert_array_equal(np.triu(a.matrix, 1), np.triu(b.matrix, 1))


@pytest.mark.parametrize("gamma", [0.0, 0.3, 0.5, -0.5, 1.1])
def test_conjugation_identity(gamma):
    # H(gamma) = conj(H(-gamma)) entrywise, for every builder
    p_plus = ModelParams(gamma=gamma)
    p_minus = ModelParams(gamma=-gamma)
    for spec in (
        junction_spec(8, 8),
        sandwich_spec(5, [ssh_segment(4)], 5),
        ring_spec(12),
    ):
        Hp = assemble(spec, p_plus).matrix
        Hm = assemble(spec, p_minus).matrix
        np.testing.assert_array_equal(Hp, np.conj(Hm))
        np.testing.assert_array_equal(Hp, Hm.conj().T)


def test_junction_bond_structure(params):
    spec = junction_spec(3, 4)
    H = assemble(spec, params)
    # lead bonds J, interface bond J, then strong/weak alternation
    np.testing.assert_array_equal(H.hops, [1, 1, 1, 1.5, 1, 1.5])
    np.testing.assert_array_equal(H.diag_gamma, [0, 0, 0, 0.5, -0.5, 0.5, -0.5])
    assert spec.label_of(3) == 0


def test_bandwidth_nearest_neighbor(params):
    H = assemble(sandwich_spec(4, [ssh_segment(4)], 4), params)
    off = np.abs(H.matrix.copy())
    for d in (-1, 0, 1):
        np.fill_diagonal(off[max(0, -d):, max(0, d):], 0.0)
    assert np.max(off) == 0.0
    # ring adds exactly the two corner entries
    Hr = assemble(ring_spec(8), params)
    corners = np.abs(Hr.matrix.copy())
    for d in (-1, 0, 1):
        np.fill_diagonal(corners[max(0, -d):, max(0, d):], 0.0)
    assert corners[0, -1] == params.J and corners[-1, 0] == params.J
    corners[0, -1] = corners[-1, 0] = 0.0
    assert np.max(corners) == 0.0


def test_sandwich_is_pt_symmetric(params):
    # spatial reflection about the segment center conjugates gain and loss
    H = assemble(sandwich_spec(7, [ssh_segment(6)], 7), params).matrix
    P = np.eye(len(H))[::-1]
    np.testing.assert_array_equal(P @ H @ P, H.conj().T)


def test_ring_matches_direct_construction(params):
    n = 12
    H = assemble(ring_spec(n), params).matrix
    ref = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        ref[j, j + 1] = ref[j + 1, j] = params.strong_bond if j % 2 == 0 else params.J
    ref[0, n - 1] = ref[n - 1, 0] = params.J
    for j in range(n):
        ref[j, j] = 1j * params.gamma * (1 if j % 2 == 0 else -1)
    np.testing.assert_array_equal(H, ref)


def test_periodic_junction_spectrum_real(params):
    # closing the lead+segment junction into a ring restores the
    # reflection-conjugation symmetry and with it a real spectrum
    H = assemble(junction_spec(250, 250, boundary=Boundary.RING), params)
    eigs = np.linalg.eigvals(H.matrix)
    assert np.max(np.abs(eigs.imag)) < 1e-8
    n = H.dim
    P = np.zeros((n, n))
    c = 3 * (n // 2) - 1
    for j in range(n):
        P[j, (c - j) % n] = 1.0
    np.testing.assert_array_equal(P @ H.matrix @ P, np.conj(H.matrix))


def test_assemble_deterministic(params):
    spec = sandwich_spec(6, [ssh_segment(4), lead(3), ssh_segment(4)], 6)
    a = assemble(spec, params).matrix
    b = assemble(spec, params).matrix
    assert a.tobytes() == b.tobytes()


def test_ring_with_segment_needs_even_count():
    with pytest.raises(LatticeError):
        LatticeSpec((lead(3), ssh_segment(4)), boundary=Boundary.RING)


def test_empty_spec_rejected():
    with pytest.raises(LatticeError):
        LatticeSpec(())


@pytest.mark.parametrize(
    "J,delta,sign,expected",
    [(1.0, 0.5, +1, 0.5), (1.0, 0.0, +1, 0.0), (1.0, 0.5, -1, -0.5)],
)
def test_ep_gamma(J, delta, sign, expected):
    assert ep_gamma(ModelParams(J=J, delta=delta, gamma=0.1), sign) == expected


def test_is_at_ep():
    assert ModelParams(gamma=0.5).is_at_ep()
    assert ModelParams(gamma=-0.5).is_at_ep()
    assert not ModelParams(gamma=0.5 + 1e-9).is_at_ep()


def test_json_round_trip(tmp_path, params):
    spec = sandwich_spec(10, [ssh_segment(4, gain_first=False)], 10)
    doc = to_json_document(spec, params)
    spec2, params2 = from_json_document(json.loads(json.dumps(doc)))
    assert params2 == params
    assert spec2.segments == spec.segments
    assert spec2.boundary == spec.boundary
    assert spec2.origin_offset == spec.origin_offset
    np.testing.assert_array_equal(
        assemble(spec, params).matrix, assemble(spec2, params2).matrix
    )


@pytest.mark.parametrize(
    "doc,needle",
    [
        ({"segments": [{"kind": "lead", "length": 4}]}, "params"),
        ({"params": {"J": 1, "delta": 0, "gamma": 0}, "segments": []}, "segments"),
        (
            {"params": {"J": 1, "delta": 0, "gamma": 0},
             "segments": [{"kind": "bogus", "length": 4}]},
            "kind",
        ),
        (
            {"params": {"J": 1, "delta": 0, "gamma": 0},
             "segments": [{"kind": "lead", "length": 4}], "boundary": "torus"},
            "boundary",
        ),
    ],
)
def test_json_validation_errors(doc, needle):
    with pytest.raises(LatticeError, match=needle):
        from_json_document(doc)
