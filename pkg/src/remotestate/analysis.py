"""Density function of created states over the (lambda, beta1) rectangle.

Cells are ``(1/2 + i*eps_l, 1/2 + (i+1)*eps_l] x (j*eps_b, (j+1)*eps_b]``
with ``eps_b = eps`` and ``eps_l = eps / 2``.  The first cell of each axis
is closed on the left so that ``lambda = 1/2`` and ``beta1 = 0`` are kept,
and every record lands in exactly one cell.  The density is
``S = counts / (eps_l * eps_b * N)`` so that ``sum S * eps_l * eps_b = 1``.
"""
from dataclasses import dataclass
import math

import numpy as np

# lambda below which states are only hardly creatable (a conditional threshold)
HARDLY_CREATABLE_LAMBDA = 0.52
BOUNDARY_LAMBDA_RANGE = (0.55, 0.99)


@dataclass
class DensityGrid:
    eps_lambda: float
    eps_beta1: float
    counts: np.ndarray
    n_states: int

    @property
    def shape(self):
        return self.counts.shape

    @property
    def S(self):
        return self.counts / (self.eps_lambda * self.eps_beta1 * self.n_states)

    @property
    def lambda_centers(self):
        return 0.5 + self.eps_lambda * (np.arange(self.shape[0]) + 0.5)

    @property
    def beta1_centers(self):
        return self.eps_beta1 * (np.arange(self.shape[1]) + 0.5)

    def same_binning(self, other):
        return (self.shape == other.shape
                and math.isclose(self.eps_lambda, other.eps_lambda)
                and math.isclose(self.eps_beta1, other.eps_beta1))

    def merge(self, other):
        """Combine partial grids over disjoint record sets."""
        if not self.same_binning(other):
            raise ValueError("cannot merge density grids with different binning")
        return DensityGrid(self.eps_lambda, self.eps_beta1, self.counts + other.counts,
                           self.n_states + other.n_states)


@dataclass(frozen=True)
class BoundaryCurve:
    """Per occupied lambda column: the largest and smallest occupied beta1 centers."""

    lam: np.ndarray
    beta1_upper: np.ndarray
    beta1_lower: np.ndarray

    @property
    def samples(self):
        return list(zip(self.lam.tolist(), self.beta1_upper.tolist(), self.beta1_lower.tolist()))

    def __len__(self):
        return self.lam.size


def _cells(eps):
    """Cell counts along lambda and beta1 for spacing ``eps``."""
    n_beta = 1.0 / eps
    if eps <= 0 or abs(n_beta - round(n_beta)) > 1e-9:
        raise ValueError(f"eps must divide [0, 1] evenly, got {eps}")
    return int(round(n_beta)), int(round(n_beta))


def record_arrays(records):
    """``(lam, beta1, beta2)`` arrays from a ScanRecords, a sequence of ScanRecord or a tuple."""
    if hasattr(records, "lam") and hasattr(records, "beta1"):
        return np.asarray(records.lam), np.asarray(records.beta1), np.asarray(records.beta2)
    if isinstance(records, tuple) and len(records) == 3 and np.ndim(records[0]) == 1:
        return tuple(np.asarray(a, dtype=float) for a in records)
    rows = [r.receiver.as_tuple() for r in records]
    arr = np.asarray(rows, dtype=float).reshape(-1, 3)
    return arr[:, 0], arr[:, 1], arr[:, 2]


EDGE_SNAP = 1e-9


def _right_closed_index(q, n):
    """Cell ``k`` holds ``q`` in ``(k, k+1]``; quotients within EDGE_SNAP of an edge sit on it."""
    q = np.asarray(q, dtype=float)
    r = np.round(q)
    q = np.where(np.abs(q - r) < EDGE_SNAP, r, q)
    return np.clip(np.ceil(q).astype(np.int64) - 1, 0, n - 1)


def cell_indices(lam, beta1, eps):
    n_lam, n_beta = _cells(eps)
    i = _right_closed_index((np.asarray(lam) - 0.5) / (eps / 2), n_lam)
    j = _right_closed_index(np.asarray(beta1) / eps, n_beta)
    return i, j


def density_from_arrays(lam, beta1, eps=0.01):
    lam = np.asarray(lam, dtype=float)
    if lam.size == 0:
        raise ValueError("density needs at least one record")
    n_lam, n_beta = _cells(eps)
    i, j = cell_indices(lam, beta1, eps)
    counts = np.bincount(i * n_beta + j, minlength=n_lam * n_beta).reshape(n_lam, n_beta)
    return DensityGrid(eps / 2, eps, counts, int(lam.size))


def density(records, eps=0.01):
    lam, beta1, _ = record_arrays(records)
    return density_from_arrays(lam, beta1, eps)


def density_max(grid):
    """``(S_max, lambda, beta1)`` at the center of the densest cell; ties go to the smallest (i, j)."""
    k = int(np.argmax(grid.counts))
    i, j = np.unravel_index(k, grid.shape)
    return float(grid.S[i, j]), float(grid.lambda_centers[i]), float(grid.beta1_centers[j])


def boundary(grid):
    occupied = grid.counts > 0
    cols = np.flatnonzero(occupied.any(axis=1))
    centers = grid.beta1_centers
    upper = np.array([centers[np.flatnonzero(occupied[i])[-1]] for i in cols])
    lower = np.array([centers[np.flatnonzero(occupied[i])[0]] for i in cols])
    return BoundaryCurve(grid.lambda_centers[cols], upper, lower)


def analytic_boundary(x):
    """Fitted boundary curves ``(upper, lower)`` of the maximal four-site regions.

    ``lower`` bounds the pure-receiver region (its beta1 upper envelope) and
    ``upper`` bounds the region for the opposite receiver state (its beta1
    lower envelope).  ``x`` may be a scalar or an array in ``[1/2, 1]``; the
    ``upper`` base is floored at zero so ``x`` up to 1 is accepted.
    """
    xa = np.asarray(x, dtype=float)
    if np.any((xa < 0.5) | (xa > 1.0)):
        raise ValueError("analytic_boundary is defined for x in [1/2, 1]")
    upper = 0.9914 - 2.0034 * np.maximum(0.9999 - xa, 0.0) ** 0.28
    lower = -0.0100 + 2.0369 * (1.0 - xa) ** 0.28
    if np.ndim(x) == 0:
        return float(upper), float(lower)
    return upper, lower


def boundary_residuals(curve, grid_eps_beta1=0.01):
    """Analytic curves and residuals paired with the envelope each curve bounds.

    The analytic curves are clipped to the range of cell centers.  Returns a
    dict with ``analytic_upper``, ``analytic_lower``, ``residual_upper``
    (upper envelope minus the ``lower`` curve) and ``residual_lower``
    (lower envelope minus the ``upper`` curve).
    """
    au, al = analytic_boundary(np.asarray(curve.lam))
    lo, hi = grid_eps_beta1 / 2, 1 - grid_eps_beta1 / 2
    return {
        "analytic_upper": au,
        "analytic_lower": al,
        "residual_upper": curve.beta1_upper - np.clip(al, lo, hi),
        "residual_lower": curve.beta1_lower - np.clip(au, lo, hi),
    }


def boundary_side(lambdaB):
    """Envelope carrying the nontrivial boundary: ``upper`` for lambdaB > 1/2, else ``lower``."""
    return "upper" if lambdaB > 0.5 else "lower"


def boundary_rms(curve, side, lam_range=BOUNDARY_LAMBDA_RANGE, grid_eps_beta1=0.01):
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    res = boundary_residuals(curve, grid_eps_beta1)[f"residual_{side}"]
    mask = (curve.lam >= lam_range[0]) & (curve.lam <= lam_range[1])
    if not mask.any():
        raise ValueError("no boundary samples inside lam_range")
    return float(np.sqrt(np.mean(res[mask] ** 2)))


def absolutely_unavailable(grids):
    """Cells ``(i, j)`` empty in every grid."""
    grids = list(grids)
    if not grids:
        raise ValueError("need at least one grid")
    for g in grids[1:]:
        if not g.same_binning(grids[0]):
            raise ValueError("grids use different binning")
    empty = np.logical_and.reduce([g.counts == 0 for g in grids])
    return frozenset(zip(*(idx.tolist() for idx in np.nonzero(empty))))


def cell_centers(grid, cells):
    """``(lambda, beta1)`` centers of cells, sorted by index."""
    lc, bc = grid.lambda_centers, grid.beta1_centers
    return [(float(lc[i]), float(bc[j])) for i, j in sorted(cells)]


def creatable_area(grid):
    """Fraction of cells holding at least one record."""
    return float(np.count_nonzero(grid.counts) / grid.counts.size)


def hardly_creatable_fraction(grid, threshold=HARDLY_CREATABLE_LAMBDA):
    """Share of records in cells centered below ``threshold``."""
    return float(grid.counts[grid.lambda_centers < threshold].sum() / grid.n_states)


def combined_z(beta1, beta2):
    """``10*floor(10 beta1) + floor(10 beta2)`` with each floor capped at 9."""
    b1 = np.minimum(np.floor(10 * np.asarray(beta1)), 9).astype(np.int64)
    b2 = np.minimum(np.floor(10 * np.asarray(beta2)), 9).astype(np.int64)
    z = 10 * b1 + b2
    return int(z) if z.ndim == 0 else z


def boundary_beta2_buckets(records, eps_lambda=0.005):
    """Beta2 buckets of records next to the right boundary, per beta1 bucket.

    For each ``floor(10 beta1)`` bucket the boundary-adjacent records are
    those within ``eps_lambda`` of the largest lambda in that bucket.
    Returns ``{beta1_bucket: sorted beta2 buckets}``.
    """
    lam, b1, b2 = record_arrays(records)
    k1 = np.minimum(np.floor(10 * b1), 9).astype(np.int64)
    k2 = np.minimum(np.floor(10 * b2), 9).astype(np.int64)
    out = {}
    for k in np.unique(k1):
        sel = k1 == k
        near = lam[sel] >= lam[sel].max() - eps_lambda
        out[int(k)] = sorted(set(k2[sel][near].tolist()))
    return out
