"""Parity between the compiled kernel and the numpy fallback."""
import numpy as np
import pytest

from nhls import _kernels_py
from nhls import kernels

compiled = pytest.importorskip(
    "nhls._kernels", reason="compiled extension not built"
)


@pytest.fixture
def banded(rng):
    n = 333
    diag = rng.normal(size=n)
    hops = rng.normal(size=n - 1)
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return diag, hops, psi


@pytest.mark.parametrize("ring", [0.0, 0.8])
def test_matvec_parity(banded, ring):
    diag, hops, psi = banded
    a = compiled.matvec_banded(diag, hops, ring, psi)
    b = _kernels_py.matvec_banded(diag, hops, ring, psi)
    np.testing.assert_allclose(a, b, atol=1e-13)


def test_matvec_against_dense(banded):
    diag, hops, psi = banded
    n = len(diag)
    H = np.diag(1j * diag).astype(complex)
    idx = np.arange(n - 1)
    H[idx, idx + 1] = hops
    H[idx + 1, idx] = hops
    H[0, -1] = H[-1, 0] = 0.8
    got = compiled.matvec_banded(diag, hops, 0.8, psi)
    np.testing.assert_allclose(got, H @ psi, atol=1e-13)


@pytest.mark.parametrize("ring", [0.0, 1.0])
def test_rk4_parity(banded, ring):
    diag, hops, psi = banded
    a = compiled.rk4_evolve(0.1 * diag, hops, ring, psi, 0.01, 400, 100)
    b = _kernels_py.rk4_evolve(0.1 * diag, hops, ring, psi, 0.01, 400, 100)
    assert a.shape == b.shape == (5, len(diag))
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_rk4_rejects_partial_stride(banded):
    diag, hops, psi = banded
    for impl in (compiled, _kernels_py):
        with pytest.raises(ValueError):
            impl.rk4_evolve(diag, hops, 0.0, psi, 0.01, 401, 100)


def test_selected_backend_is_compiled_by_default(monkeypatch):
    assert kernels.backend_name() in ("compiled", "python")
