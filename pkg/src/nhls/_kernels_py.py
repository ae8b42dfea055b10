"""Pure-numpy fallback for the banded propagation kernels.

Same call signatures as the compiled module ``nhls._kernels``; selected at
import time by :mod:`nhls.kernels` when the extension is unavailable.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def matvec_banded(diag_gamma, hops, ring_bond, psi, out=None):
    """y = H @ psi for H with imaginary diagonal i*diag_gamma, real
    nearest-neighbor bonds ``hops`` and an optional ring corner bond."""
    psi = np.asarray(psi)
    if out is None:
        out = np.empty_like(psi)
    np.multiply(psi, 1j * diag_gamma, out=out)
    out[:-1] += hops * psi[1:]
    out[1:] += hops * psi[:-1]
    if ring_bond:
        out[0] += ring_bond * psi[-1]
        out[-1] += ring_bond * psi[0]
    return out


def rk4_evolve(diag_gamma, hops, ring_bond, psi0, dt, n_steps, stride):
    """Fixed-step classical Runge-Kutta integration of i dpsi/dt = H psi.

    Returns an ``(n_steps // stride + 1, n)`` array of snapshots taken every
    ``stride`` steps, starting with psi0. ``n_steps`` must be a multiple of
    ``stride``.
    """
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")
    psi = np.array(psi0, dtype=complex)
    n = len(psi)
    snaps = np.empty((n_steps // stride + 1, n), dtype=complex)
    snaps[0] = psi
    k1 = np.empty(n, dtype=complex)
    k2 = np.empty(n, dtype=complex)
    k3 = np.empty(n, dtype=complex)
    k4 = np.empty(n, dtype=complex)
    tmp = np.empty(n, dtype=complex)

    def deriv(src, dst):
        # dst = -i H src
        matvec_banded(diag_gamma, hops, ring_bond, src, out=dst)
        dst *= -1j

    row = 1
    for step in range(1, n_steps + 1):
        deriv(psi, k1)
        np.multiply(k1, 0.5 * dt, out=tmp)
        tmp += psi
        deriv(tmp, k2)
        np.multiply(k2, 0.5 * dt, out=tmp)
        tmp += psi
        deriv(tmp, k3)
        np.multiply(k3, dt, out=tmp)
        tmp += psi
        deriv(tmp, k4)
        # psi += dt/6 (k1 + 2 k2 + 2 k3 + k4)
        k2 += k3
        k2 *= 2.0
        k1 += k4
        k1 += k2
        k1 *= dt / 6.0
        psi += k1
        if step % stride == 0:
            snaps[row] = psi
            row += 1
    return snaps
