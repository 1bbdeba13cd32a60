"""Dense complex linear algebra for small spin systems.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
Chains in this package are at most 16-dimensional, so exact Hermitian
diagonalisation is used for every matrix exponential.
"""
from dataclasses import dataclass
from functools import reduce

import numpy as np

HERMITIAN_TOL = 1e-12
NUMERIC_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when matrix shapes do not agree with the requested operation."""


class NotHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not."""


def _square(a, name="matrix"):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def dagger(a):
    """Conjugate transpose."""
    return np.conj(np.asarray(a)).T


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - dagger(a)), initial=0.0) <= tol


def is_density(rho, tol=NUMERIC_TOL):
    """True for a unit-trace, Hermitian, positive semidefinite matrix."""
    rho = np.asarray(rho)
    if not is_hermitian(rho):
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    return np.linalg.eigvalsh(rho).min() >= -tol


def kron(*factors):
    """Kronecker product of square matrices, leftmost factor most significant."""
    if not factors:
        raise DimensionError("kron needs at least one factor")
    mats = [_square(f, "factor") for f in factors]
    return reduce(np.kron, mats)


def partial_trace(rho, site_dims, keep):
    """Reduced density matrix on the subsystems listed in ``keep``.

    Parameters
    ----------
    rho : (D, D) array
        Operator on the tensor product space with factor dimensions
        ``site_dims`` (leftmost factor first).
    site_dims : sequence of int
    keep : iterable of int
        Indices of the factors retained, in any order; the result is
        ordered by ascending index.

    Returns
    -------
    ndarray
        Operator of dimension ``prod(site_dims[k] for k in keep)``.  An empty
        ``keep`` returns the scalar trace as a 1x1 matrix.
    """
    rho = _square(rho, "rho")
    dims = [int(d) for d in site_dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != rho.shape[0]:
        raise DimensionError(f"site_dims {dims} incompatible with rho of shape {rho.shape}")
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {n} sites")
    traced = [k for k in range(n) if k not in keep]

    t = rho.reshape(dims + dims)
    # contract each traced site's row index with its column index
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise DimensionError("too many sites for partial_trace")
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for k in traced:
        cols[k] = rows[k]
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    reduced = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(d_keep, d_keep)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigen-pairs of a Hermitian matrix, ``h = V diag(w) V^+``.

    ``eigenvalues`` are ascending.  Columns of ``eigenvectors`` are
    orthonormal with a fixed phase: the largest-magnitude component of
    each column is real and positive (first such component on ties).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)

    def propagator(self, t):
        """``exp(-i t h)``."""
        v = self.eigenvectors
        return (v * np.exp(-1j * self.eigenvalues * t)) @ dagger(v)


def _fix_phases(vecs):
    vecs = vecs.copy()
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        mag = np.abs(col)
        # first index within rounding of the maximum keeps the choice stable
        idx = int(np.argmax(mag >= mag.max() - 1e-12))
        vecs[:, k] = col * (np.conj(col[idx]) / mag[idx])
    return vecs


def herm_eig(h, tol=HERMITIAN_TOL):
    """Hermitian eigendecomposition with ascending eigenvalues.

    Degenerate eigenvalues keep LAPACK's column order, which is
    deterministic for a given input.
    """
    h = _square(h, "h")
    if not is_hermitian(h, tol):
        raise NotHermitianError("herm_eig requires a Hermitian matrix")
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=_fix_phases(v))


def evolve(rho0, h_spec, t):
    """Unitary evolution ``exp(-iHt) rho0 exp(iHt)``."""
    rho0 = _square(rho0, "rho0")
    if rho0.shape[0] != h_spec.dim:
        raise DimensionError(
            f"state dimension {rho0.shape[0]} does not match Hamiltonian dimension {h_spec.dim}"
        )
    p = h_spec.propagator(t)
    return p @ rho0 @ dagger(p)
