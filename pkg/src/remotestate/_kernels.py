"""Vectorised numpy kernels; the fallback when the compiled extension is absent.

Both backends expose the same three functions and must agree to rounding:

``su2_first_columns(phi1, phi2)``
    ``U(phi1, phi2) e_1`` for arrays of parameters, shape (n, 2).
``su4_first_columns(phis)``
    ``U(phis) e_1`` for the 12-factor SU(4) product, ``phis`` of shape (n, 12).
``receiver_params_grid(psi, transfer)``
    For sender pure states ``psi`` (n, dA) and receiver transfer tensors
    ``transfer`` (nt, dA, dA, 2, 2), the receiver parameters of every
    (time, state) pair, time-major, as three float arrays of length nt*n.
"""
import numpy as np

from .unitary_params import DIAGONAL_TOL, MIXED_TOL, SU4_GENERATORS

# basis index coupled to |00> by each off-diagonal generator used in the product
_PARTNER = {2: 1, 5: 2, 10: 3}


def su2_first_columns(phi1, phi2):
    phi1 = np.asarray(phi1, dtype=float)
    phi2 = np.broadcast_to(np.asarray(phi2, dtype=float), phi1.shape)
    out = np.empty(phi1.shape + (2,), dtype=complex)
    out[..., 0] = np.cos(np.pi * phi1 / 2)
    out[..., 1] = np.exp(2j * np.pi * phi2) * np.sin(np.pi * phi1 / 2)
    return out


def su4_first_columns(phis):
    phis = np.ascontiguousarray(phis, dtype=float)
    n = phis.shape[0]
    v = np.zeros((n, 4), dtype=complex)
    v[:, 0] = 1.0
    # U = F1 F2 ... F12, so the rightmost factor acts first
    for k in range(11, -1, -1):
        g = SU4_GENERATORS[k]
        p = phis[:, k]
        if g == 3:
            e = np.exp(1j * np.pi * p)
            v[:, 0] *= e
            v[:, 1] *= np.conj(e)
        else:
            j = _PARTNER[g]
            c = np.cos(np.pi * p / 2)
            s = np.sin(np.pi * p / 2)
            a = v[:, 0].copy()
            b = v[:, j]
            v[:, 0] = c * a + s * b
            v[:, j] = c * b - s * a
    return v


def params_from_entries(r11, r22, r21):
    """Vectorised counterpart of :func:`remotestate.unitary_params.params_from_entries`."""
    diff = r11 - r22
    off = np.abs(r21)
    radius = np.sqrt(diff * diff / 4 + off * off)
    lam = 0.5 + radius
    mixed = radius <= MIXED_TOL
    diagonal = ~mixed & (off <= DIAGONAL_TOL)
    with np.errstate(invalid="ignore", divide="ignore"):
        cosb = np.clip(diff / (2 * radius), -1.0, 1.0)
    beta1 = np.arccos(cosb) / np.pi
    beta2 = np.mod(np.angle(r21) / (2 * np.pi), 1.0)
    beta2[(beta2 >= 1.0) | (beta1 == 0.0) | (beta1 == 1.0)] = 0.0
    beta1[diagonal] = np.where(diff[diagonal] >= 0, 0.0, 1.0)
    beta2[diagonal] = 0.0
    lam[mixed] = 0.5
    beta1[mixed] = 0.0
    beta2[mixed] = 0.0
    return lam, beta1, beta2


def receiver_params_grid(psi, transfer):
    psi = np.ascontiguousarray(psi, dtype=complex)
    transfer = np.ascontiguousarray(transfer, dtype=complex)
    n, da = psi.shape
    nt = transfer.shape[0]
    r11 = np.zeros((nt, n))
    r22 = np.zeros((nt, n))
    r21 = np.zeros((nt, n), dtype=complex)
    # explicit pair loop keeps the summation order independent of chunking
    for a in range(da):
        for b in range(da):
            w = psi[:, a] * np.conj(psi[:, b])
            m = transfer[:, a, b]
            r11 += (m[:, None, 0, 0] * w[None, :]).real
            r22 += (m[:, None, 1, 1] * w[None, :]).real
            r21 += m[:, None, 1, 0] * w[None, :]
    lam, b1, b2 = params_from_entries(r11.ravel(), r22.ravel(), r21.ravel())
    return lam, b1, b2
