"""Sender unitaries and the (lambda, beta1, beta2) form of a qubit state.

The one-qubit sender unitary is

    U(phi1, phi2) = [[cos(pi phi1/2), -exp(-2i pi phi2) sin(pi phi1/2)],
                     [exp(2i pi phi2) sin(pi phi1/2), cos(pi phi1/2)]]

and the receiver state is written ``U(beta) diag(lam, 1-lam) U(beta)^+``
with the same matrix form and ``lam >= 1/2``.

The two-qubit sender unitary is an ordered product of twelve one-parameter
exponentials over the SU(4) generators ``gamma(i)``.
"""
from dataclasses import dataclass, field

import numpy as np

from .linalg import is_density

# generator index of each factor in the 12-factor SU(4) product
SU4_GENERATORS = (3, 2, 3, 5, 3, 10, 3, 2, 3, 5, 3, 2)
DEFAULT_TRIAD = (10, 11, 12)
# triads for which the remaining parameters follow phi (odd) and phi/2 (even)
ALTERNATIVE_TRIADS = ((1, 2, 3), (3, 4, 5), (5, 6, 7), (7, 8, 9), (9, 10, 11), (10, 11, 12))

MIXED_TOL = 1e-9
DIAGONAL_TOL = 1e-12

# (row, col) support of each off-diagonal generator
_PAIRS = {1: (0, 1), 2: (0, 1), 4: (0, 2), 5: (0, 2), 6: (1, 2), 7: (1, 2),
          9: (0, 3), 10: (0, 3), 11: (1, 3), 12: (1, 3), 13: (2, 3), 14: (2, 3)}
_SYMMETRIC = {1, 4, 6, 9, 11, 13}


def _check_unit_interval(values, name):
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class OneQubit:
    phi1: float
    phi2: float = 0.0

    def __post_init__(self):
        _check_unit_interval((self.phi1, self.phi2), "OneQubit parameters")


@dataclass(frozen=True)
class TwoQubitFull:
    phis: tuple

    def __post_init__(self):
        object.__setattr__(self, "phis", tuple(float(p) for p in self.phis))
        if len(self.phis) != 12:
            raise ValueError(f"TwoQubitFull needs 12 parameters, got {len(self.phis)}")
        _check_unit_interval(self.phis, "TwoQubitFull parameters")


@dataclass(frozen=True)
class TwoQubitReduced:
    """Three free parameters plus a common ``phi`` driving the other nine.

    With the default triad the free parameters are ``(phi10, phi11, phi12)``.
    """

    free: tuple
    phi: float
    triad: tuple = field(default=DEFAULT_TRIAD)

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(float(p) for p in self.free))
        object.__setattr__(self, "triad", tuple(int(k) for k in self.triad))
        if len(self.free) != 3 or len(self.triad) != 3:
            raise ValueError("TwoQubitReduced needs exactly three free parameters and a triad of three indices")
        if len(set(self.triad)) != 3 or not all(1 <= k <= 12 for k in self.triad):
            raise ValueError(f"invalid triad {self.triad}")
        _check_unit_interval(self.free + (self.phi,), "TwoQubitReduced parameters")

    def expanded(self):
        return expand_reduced(self.free, self.phi, self.triad)


@dataclass(frozen=True)
class ReceiverState:
    """One-qubit state ``U(beta) diag(lam, 1-lam) U(beta)^+`` with ``lam >= 1/2``."""

    lam: float
    beta1: float
    beta2: float

    def as_tuple(self):
        return (self.lam, self.beta1, self.beta2)


def su2(phi1, phi2):
    c = np.cos(np.pi * phi1 / 2)
    s = np.sin(np.pi * phi1 / 2)
    e = np.exp(2j * np.pi * phi2)
    return np.array([[c, -np.conj(e) * s], [e * s, c]], dtype=complex)


def gamma(i):
    """The ``i``-th SU(4) generator, ``1 <= i <= 15``."""
    if not 1 <= i <= 15:
        raise IndexError(f"generator index must be in 1..15, got {i}")
    g = np.zeros((4, 4), dtype=complex)
    if i == 3:
        g[0, 0], g[1, 1] = 1, -1
    elif i == 8:
        g[:] = np.diag([1, 1, -2, 0]) / np.sqrt(3)
    elif i == 15:
        g[:] = np.diag([1, 1, 1, -3]) / np.sqrt(6)
    else:
        a, b = _PAIRS[i]
        if i in _SYMMETRIC:
            g[a, b] = g[b, a] = 1
        else:
            g[a, b], g[b, a] = -1j, 1j
    return g


def expi_generator(i, theta):
    """``exp(i theta gamma_i)`` for a generator with ``gamma^3 = gamma``.

    Holds for every generator except the two normalised diagonals 8 and 15.
    """
    if i in (8, 15):
        return np.diag(np.exp(1j * theta * np.diag(gamma(i)).real))
    g = gamma(i)
    return np.eye(4, dtype=complex) + 1j * np.sin(theta) * g + (np.cos(theta) - 1) * (g @ g)


def su4_angles(phis):
    """Rotation angle of each factor: ``pi phi`` for gamma_3, ``pi phi / 2`` otherwise."""
    return tuple(np.pi * p if g == 3 else np.pi * p / 2 for g, p in zip(SU4_GENERATORS, phis))


def su4_full(controls):
    phis = controls.phis if isinstance(controls, TwoQubitFull) else TwoQubitFull(tuple(controls)).phis
    u = np.eye(4, dtype=complex)
    for g, theta in zip(SU4_GENERATORS, su4_angles(phis)):
        u = u @ expi_generator(g, theta)
    return u


def expand_reduced(free, phi, triad=DEFAULT_TRIAD):
    """12-vector with ``phi`` on odd and ``phi/2`` on even slots, ``free`` on the triad."""
    phis = [phi if k % 2 == 1 else phi / 2 for k in range(1, 13)]
    for k, v in zip(triad, free):
        phis[k - 1] = v
    return tuple(phis)


def su4_reduced(controls):
    return su4_full(TwoQubitFull(controls.expanded()))


def receiver_state(r):
    """Explicit 2x2 density matrix of a :class:`ReceiverState`."""
    lam, b1, b2 = (r.lam, r.beta1, r.beta2) if isinstance(r, ReceiverState) else r
    c = np.cos(np.pi * b1 / 2)
    s = np.sin(np.pi * b1 / 2)
    off = np.exp(2j * np.pi * b2) * (2 * lam - 1) * s * c
    return np.array(
        [[lam * c * c + (1 - lam) * s * s, np.conj(off)],
         [off, lam * s * s + (1 - lam) * c * c]],
        dtype=complex,
    )


def params_from_entries(r11, r22, r21):
    """Closed-form ``(lam, beta1, beta2)`` from the independent entries of a qubit state.

    Degenerate points get fixed values: a maximally mixed state maps to
    ``(1/2, 0, 0)``; a diagonal state gets ``beta2 = 0`` and ``beta1`` 0 or 1
    by the sign of ``r11 - r22``.  ``beta2`` is also 0 whenever ``beta1``
    rounds to exactly 0 or 1.
    """
    diff = r11 - r22
    radius = np.sqrt(diff * diff / 4 + abs(r21) ** 2)
    lam = 0.5 + radius
    if radius <= MIXED_TOL:
        return 0.5, 0.0, 0.0
    if abs(r21) <= DIAGONAL_TOL:
        return lam, (0.0 if diff >= 0 else 1.0), 0.0
    beta1 = np.arccos(np.clip(diff / (2 * radius), -1.0, 1.0)) / np.pi
    beta2 = (np.angle(r21) / (2 * np.pi)) % 1.0
    if beta2 >= 1.0 or beta1 in (0.0, 1.0):
        beta2 = 0.0
    return lam, beta1, beta2


def receiver_params(rho, tol=1e-10):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2) or not is_density(rho, tol):
        raise ValueError("receiver_params needs a 2x2 density matrix")
    lam, b1, b2 = params_from_entries(rho[0, 0].real, rho[1, 1].real, rho[1, 0])
    return ReceiverState(float(lam), float(b1), float(b2))
