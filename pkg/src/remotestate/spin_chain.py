"""Nearest-neighbour XY Hamiltonian for an open spin-1/2 chain.

Basis convention: site 1 is the leftmost (most significant) tensor factor
and each site is ordered (spin up, spin down), so basis index bits read
left to right are the sites, with spin up = 0.
"""
from dataclasses import dataclass

import numpy as np

from .linalg import SpectralDecomposition, herm_eig

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # I+ = Ix + iIy
SIGMA_MINUS = SIGMA_PLUS.T.copy()
SPIN_Z = np.diag([0.5, -0.5]).astype(complex)


@dataclass(frozen=True)
class ChainSpec:
    """Homogeneous chain: ``n_sites`` spins, coupling ``d``, Larmor frequency ``gamma``."""

    n_sites: int
    d: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError(f"n_sites must be an integer >= 2, got {self.n_sites}")

    @property
    def dim(self):
        return 2 ** self.n_sites


def site_operator(op, site, n_sites):
    """Embed a one-site operator at ``site`` (0-based) of an ``n_sites`` chain."""
    out = np.eye(1, dtype=complex)
    for k in range(n_sites):
        out = np.kron(out, op if k == site else np.eye(2, dtype=complex))
    return out


def total_spin_z(n_sites):
    """``I_z = sum_i I_{z;i}`` (diagonal)."""
    return sum(site_operator(SPIN_Z, k, n_sites) for k in range(n_sites))


def xy_hamiltonian(spec):
    """``H = -sum_j (d/2)(I+_j I-_{j+1} + I-_j I+_{j+1}) + gamma I_z``."""
    n = spec.n_sites
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for j in range(n - 1):
        hop = site_operator(SIGMA_PLUS, j, n) @ site_operator(SIGMA_MINUS, j + 1, n)
        h -= 0.5 * spec.d * (hop + hop.conj().T)
    if spec.gamma:
        h += spec.gamma * total_spin_z(n)
    return h


def chain_spectrum(spec):
    """Spectral decomposition of :func:`xy_hamiltonian`."""
    return herm_eig(xy_hamiltonian(spec))


def spectral_period(h_spec, zero_tol=1e-9):
    """``pi / |lambda|_min`` over eigenvalues with ``|lambda| > zero_tol``.

    Odd chains carry exact zero modes, which ``zero_tol`` excludes.
    """
    w = h_spec.eigenvalues if isinstance(h_spec, SpectralDecomposition) else np.asarray(h_spec)
    nonzero = np.abs(w[np.abs(w) > zero_tol])
    if nonzero.size == 0:
        raise ValueError("no eigenvalue exceeds zero_tol; the period is undefined")
    return float(np.pi / nonzero.min())
