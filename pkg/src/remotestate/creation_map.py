"""Sender-to-receiver state-creation maps for 3- and 4-site XY chains.

The chain is split as sender (first one or two sites), transmission line
(the next site) and receiver (the last site).  The initial state is

    (U rho_A U^+) (x) rho_C (x) diag(lambdaB, 1 - lambdaB)

with pure ``rho_A = diag(1, 0, ...)`` and ``rho_C = diag(1, 0)``; it evolves
under the XY Hamiltonian and the receiver state is the marginal on the
last site.

:func:`evaluate` follows these steps literally with full density matrices.
The grid scans use an equivalent linear shortcut: for a pure sender state
``psi`` the receiver marginal is ``sum_ab psi_a conj(psi_b) M[a, b]`` where
``M[a, b]`` is the marginal produced by the operator ``|a><b|`` in the
sender slot.  ``M`` depends only on the chain, ``lambdaB`` and ``t``.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
import csv
import math

import numpy as np

from . import kernels
from .linalg import evolve, kron, partial_trace
from .spin_chain import ChainSpec, chain_spectrum, spectral_period
from .unitary_params import (
    DEFAULT_TRIAD, OneQubit, ReceiverState, TwoQubitFull, TwoQubitReduced,
    receiver_params, su2, su4_full, su4_reduced,
)

THREE_NODE_PERIOD = math.pi * math.sqrt(2)
DEFAULT_T0 = 6.4
CHUNK = 1 << 17


class ConfigError(ValueError):
    """Invalid scan configuration."""


@dataclass(frozen=True)
class GridAxis:
    """Inclusive uniform grid of ``points`` values on ``[lo, hi]``."""

    points: int
    lo: float = 0.0
    hi: float = 1.0

    def values(self):
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class ScanRecord:
    controls: object
    t: float
    receiver: ReceiverState


@dataclass
class ScanConfig:
    """Everything a scan needs.

    ``grid`` maps axis names to :class:`GridAxis`.  Three-site chains use
    ``phi1`` and ``t``; four-site chains use one axis per free parameter of
    the triad (``phi10``, ``phi11``, ``phi12`` by default) plus ``phi``, and
    need ``fixed_t``.
    """

    chain: ChainSpec
    lambdaB: float = 1.0
    grid: dict = field(default_factory=dict)
    fixed_t: float = None
    phi2: float = 0.0
    triad: tuple = DEFAULT_TRIAD
    workers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.lambdaB <= 1.0:
            raise ConfigError(f"lambdaB must lie in [0, 1], got {self.lambdaB}")
        if not 0.0 <= self.phi2 <= 1.0:
            raise ConfigError(f"phi2 must lie in [0, 1], got {self.phi2}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.chain.n_sites not in (3, 4):
            raise ConfigError("scans are defined for 3- and 4-site chains")
        for name, axis in self.grid.items():
            if axis.points < 1:
                raise ConfigError(f"axis {name} needs at least one point")
            if axis.hi < axis.lo:
                raise ConfigError(f"axis {name} has hi < lo")
            if name == "t":
                if axis.lo < 0:
                    raise ConfigError("time axis must start at t >= 0")
            elif axis.lo < 0 or axis.hi > 1:
                raise ConfigError(f"control axis {name} must stay inside [0, 1]")
        missing = [k for k in self.axis_names() if k not in self.grid]
        if missing:
            raise ConfigError(f"grid is missing axes {missing}")
        if self.fixed_t is not None and self.fixed_t < 0:
            raise ConfigError("fixed_t must be >= 0")

    @property
    def sender_sites(self):
        return self.chain.n_sites - 2

    def axis_names(self):
        if self.chain.n_sites == 3:
            return ("phi1", "t")
        return tuple(f"phi{k}" for k in self.triad) + ("phi",)

    @property
    def n_points(self):
        return int(np.prod([self.grid[k].points for k in self.axis_names()]))

    @classmethod
    def three_node(cls, lambdaB=1.0, phi1_points=400, t_points=2400, t_max=THREE_NODE_PERIOD,
                   phi2=0.0, chain=None, workers=1):
        chain = chain or ChainSpec(3)
        grid = {"phi1": GridAxis(phi1_points), "t": GridAxis(t_points, 0.0, t_max)}
        return cls(chain=chain, lambdaB=lambdaB, grid=grid, phi2=phi2, workers=workers)

    @classmethod
    def four_node(cls, lambdaB=1.0, t0=DEFAULT_T0, points=(51, 26, 51, 26), triad=DEFAULT_TRIAD,
                  chain=None, workers=1):
        chain = chain or ChainSpec(4)
        names = tuple(f"phi{k}" for k in triad) + ("phi",)
        grid = {k: GridAxis(p) for k, p in zip(names, points)}
        return cls(chain=chain, lambdaB=lambdaB, grid=grid, fixed_t=t0, triad=tuple(triad), workers=workers)


class ScanRecords:
    """Column store for scan output; indexes and iterates as :class:`ScanRecord`."""

    def __init__(self, control_names, controls, t, lam, beta1, beta2, triad=DEFAULT_TRIAD):
        self.control_names = tuple(control_names)
        self.controls = np.asarray(controls, dtype=float).reshape(len(lam), len(self.control_names))
        self.t = np.asarray(t, dtype=float)
        self.lam = np.asarray(lam, dtype=float)
        self.beta1 = np.asarray(beta1, dtype=float)
        self.beta2 = np.asarray(beta2, dtype=float)
        self.triad = tuple(triad)

    def __len__(self):
        return self.lam.shape[0]

    def _controls(self, row):
        if self.control_names == ("phi1", "phi2"):
            return OneQubit(row[0], row[1])
        return TwoQubitReduced(free=tuple(row[:3]), phi=row[3], triad=self.triad)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        return ScanRecord(
            controls=self._controls(self.controls[k]),
            t=float(self.t[k]),
            receiver=ReceiverState(float(self.lam[k]), float(self.beta1[k]), float(self.beta2[k])),
        )

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    @property
    def columns(self):
        return self.control_names + ("t", "lambda", "beta1", "beta2")

    def as_array(self):
        return np.column_stack([self.controls, self.t, self.lam, self.beta1, self.beta2])

    def identical(self, other):
        """Bitwise equality of all columns."""
        return (
            self.columns == other.columns
            and len(self) == len(other)
            and np.array_equal(self.as_array(), other.as_array())
        )

    def to_csv(self, path, chunk=200_000):
        data = self.as_array()
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(self.columns) + "\n")
            for s in range(0, len(data), chunk):
                # %.17g round-trips every double exactly
                np.savetxt(fh, data[s:s + chunk], fmt="%.17g", delimiter=",")

    @classmethod
    def from_csv(cls, path, triad=DEFAULT_TRIAD):
        with open(path, encoding="utf-8", newline="") as fh:
            header = next(csv.reader(fh))
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        expected_tail = ["t", "lambda", "beta1", "beta2"]
        if header[-4:] != expected_tail or len(header) < 5:
            raise ValueError(f"{path}: unexpected header {header}")
        if data.size == 0:
            data = np.empty((0, len(header)))
        k = len(header) - 4
        return cls(header[:k], data[:, :k], data[:, k], data[:, k + 1], data[:, k + 2], data[:, k + 3], triad)

    @classmethod
    def concat(cls, parts):
        parts = list(parts)
        first = parts[0]
        return cls(
            first.control_names,
            np.concatenate([p.controls for p in parts]),
            np.concatenate([p.t for p in parts]),
            np.concatenate([p.lam for p in parts]),
            np.concatenate([p.beta1 for p in parts]),
            np.concatenate([p.beta2 for p in parts]),
            first.triad,
        )


@lru_cache(maxsize=None)
def _spectrum(chain):
    return chain_spectrum(chain)


def _probability_vector(p, name):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < -1e-12) or abs(p.sum() - 1) > 1e-10:
        raise ValueError(f"{name} must be a probability vector, got {p}")
    return p


def pure_diag(dim):
    d = np.zeros(dim)
    d[0] = 1.0
    return d


def initial_state(sender_diag, transmission_diag, lambdaB, u_sender):
    """``(U diag(sender) U^+) (x) diag(transmission) (x) diag(lambdaB, 1-lambdaB)``."""
    sender_diag = _probability_vector(sender_diag, "sender_diag")
    transmission_diag = _probability_vector(transmission_diag, "transmission_diag")
    u = np.asarray(u_sender, dtype=complex)
    if u.shape != (sender_diag.size, sender_diag.size):
        raise ValueError(f"u_sender shape {u.shape} does not match sender dimension {sender_diag.size}")
    if not 0.0 <= lambdaB <= 1.0:
        raise ValueError(f"lambdaB must lie in [0, 1], got {lambdaB}")
    rho_a = u @ np.diag(sender_diag) @ u.conj().T
    return kron(rho_a, np.diag(transmission_diag), np.diag([lambdaB, 1.0 - lambdaB]))


def sender_unitary(controls):
    if isinstance(controls, OneQubit):
        return su2(controls.phi1, controls.phi2)
    if isinstance(controls, TwoQubitFull):
        return su4_full(controls)
    if isinstance(controls, TwoQubitReduced):
        return su4_reduced(controls)
    raise TypeError(f"unsupported controls {controls!r}")


def _sender_sites(controls):
    return 1 if isinstance(controls, OneQubit) else 2


def evaluate(cfg, controls, t):
    """Receiver state for one control setting, via full density matrices."""
    n = cfg.chain.n_sites
    sites = _sender_sites(controls)
    if n != sites + 2:
        raise ConfigError(f"{type(controls).__name__} controls need a {sites + 2}-site chain, got {n}")
    rho0 = initial_state(pure_diag(2 ** sites), pure_diag(2), cfg.lambdaB, sender_unitary(controls))
    rho = evolve(rho0, _spectrum(cfg.chain), t)
    return receiver_params(partial_trace(rho, [2] * n, keep=[n - 1]))


def transfer_tensors(chain, lambdaB, times, sender_sites):
    """Receiver-marginal images of the sender operators ``|a><b|``.

    Returns an array of shape (len(times), dA, dA, 2, 2) with
    ``M[t, a, b] = Tr_{A,C} P(t) (|a><b| (x) rho_C (x) rho_B) P(t)^+``.
    """
    spec = _spectrum(chain)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    da = 2 ** sender_sites
    dim = 2 ** chain.n_sites
    drest = dim // da
    rest = np.kron(pure_diag(drest // 2), [lambdaB, 1.0 - lambdaB])
    v = spec.eigenvectors
    phases = np.exp(-1j * np.outer(times, spec.eigenvalues))
    out = np.zeros((times.size, da, da, 2, 2), dtype=complex)
    for k in np.flatnonzero(rest):
        # columns of P(t) for the inputs |a>|k>, a = 0..dA-1
        rows = v[[a * drest + k for a in range(da)], :].conj()
        cols = np.einsum("ij,tj,aj->tai", v, phases, rows).reshape(times.size, da, dim // 2, 2)
        out += rest[k] * np.einsum("tami,tbmj->tabij", cols, cols.conj())
    return out


def _map(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _scan3_block(task):
    chain, lambdaB, phi1, phi2, times = task
    psi = kernels.su2_first_columns(phi1, np.full_like(phi1, phi2))
    return kernels.receiver_params_grid(psi, transfer_tensors(chain, lambdaB, times, 1))


def scan3(cfg):
    """Scan ``{phi1, t} -> {lambda, beta1, beta2}`` on a 3-site chain, time-major."""
    if cfg.chain.n_sites != 3:
        raise ConfigError("scan3 needs a 3-site chain")
    phi1 = cfg.grid["phi1"].values()
    times = cfg.grid["t"].values()
    per_block = max(1, CHUNK // phi1.size)
    blocks = [times[s:s + per_block] for s in range(0, times.size, per_block)]
    parts = _map(_scan3_block, [(cfg.chain, cfg.lambdaB, phi1, cfg.phi2, b) for b in blocks], cfg.workers)
    lam, b1, b2 = (np.concatenate([p[i] for p in parts]) for i in range(3))
    controls = np.column_stack([np.tile(phi1, times.size), np.full(lam.size, cfg.phi2)])
    return ScanRecords(("phi1", "phi2"), controls, np.repeat(times, phi1.size), lam, b1, b2)


def _four_node_controls(cfg, start, stop):
    names = cfg.axis_names()
    axes = [cfg.grid[k].values() for k in names]
    idx = np.unravel_index(np.arange(start, stop), [a.size for a in axes])
    return np.column_stack([a[i] for a, i in zip(axes, idx)])


def expand_reduced_batch(controls, triad=DEFAULT_TRIAD):
    """Rows ``(free1, free2, free3, phi)`` to full 12-parameter rows."""
    controls = np.asarray(controls, dtype=float)
    phi = controls[:, 3]
    full = np.empty((controls.shape[0], 12))
    for k in range(1, 13):
        full[:, k - 1] = phi if k % 2 == 1 else phi / 2
    for j, k in enumerate(triad):
        full[:, k - 1] = controls[:, j]
    return full


def four_node_states(cfg, start=0, stop=None):
    """Sender pure states ``U e_1`` for grid points ``start:stop``."""
    stop = cfg.n_points if stop is None else stop
    controls = _four_node_controls(cfg, start, stop)
    return controls, kernels.su4_first_columns(expand_reduced_batch(controls, cfg.triad))


def _scan4_block(task):
    cfg, transfer, start, stop = task
    controls, psi = four_node_states(cfg, start, stop)
    lam, b1, b2 = kernels.receiver_params_grid(psi, transfer)
    return controls, lam, b1, b2


def scan4(cfg):
    """Scan the reduced two-qubit map at ``cfg.fixed_t``, lexicographic in the axes."""
    if cfg.chain.n_sites != 4:
        raise ConfigError("scan4 needs a 4-site chain")
    if cfg.fixed_t is None:
        raise ConfigError("scan4 needs fixed_t")
    transfer = transfer_tensors(cfg.chain, cfg.lambdaB, [cfg.fixed_t], 2)
    n = cfg.n_points
    tasks = [(cfg, transfer, s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]
    parts = _map(_scan4_block, tasks, cfg.workers)
    controls = np.concatenate([p[0] for p in parts])
    lam, b1, b2 = (np.concatenate([p[i] for p in parts]) for i in (1, 2, 3))
    return ScanRecords(cfg.axis_names(), controls, np.full(n, float(cfg.fixed_t)), lam, b1, b2, cfg.triad)


def scan(cfg):
    return scan3(cfg) if cfg.chain.n_sites == 3 else scan4(cfg)


def t0_grid(period, t_points):
    """Uniform grid on ``(0, period]`` with ``t_points`` points, the last at ``period``."""
    return period * np.arange(1, t_points + 1) / t_points


def _t0_block(task):
    from .analysis import creatable_area, density_from_arrays

    cfg, psi, times, eps = task
    transfer = transfer_tensors(cfg.chain, cfg.lambdaB, times, 2)
    scores = []
    for m in transfer:
        lam, b1, _ = kernels.receiver_params_grid(psi, m[None])
        scores.append(creatable_area(density_from_arrays(lam, b1, eps)))
    return scores


def t0_scores(cfg, t_points, eps=0.02):
    """Creatable-area score of the four-site scan at each time of :func:`t0_grid`.

    Returns ``(period, times, scores)``.
    """
    if cfg.chain.n_sites != 4:
        raise ConfigError("choose_t0 needs a 4-site chain")
    if t_points < 1:
        raise ConfigError("t_points must be >= 1")
    period = spectral_period(_spectrum(ChainSpec(cfg.chain.n_sites, cfg.chain.d)))
    times = t0_grid(period, t_points)
    _, psi = four_node_states(cfg)
    per = max(1, math.ceil(times.size / cfg.workers))
    blocks = [times[s:s + per] for s in range(0, times.size, per)]
    scores = np.concatenate(_map(_t0_block, [(cfg, psi, b, eps) for b in blocks], cfg.workers))
    return period, times, scores


def choose_t0(cfg, t_points=52, eps=0.02):
    """Time in ``(0, T]`` maximising the creatable area; ties go to the earlier time."""
    _, times, scores = t0_scores(cfg, t_points, eps)
    return float(times[int(np.argmax(scores))])


def transfer_phase_gamma(t=THREE_NODE_PERIOD):
    """Larmor frequency that cancels the end-to-end phase of 3-site transfer at ``t``.

    At ``t = pi sqrt(2)`` the single-excitation amplitude from site 1 to
    site 3 is -1 and the field adds a relative phase ``exp(i gamma t)``, so
    ``gamma = pi / t`` makes the receiver phase equal the sender phase.
    """
    return math.pi / t


def transfer_map(chain, controls, t, lambdaB=1.0):
    """Receiver state for fixed one-qubit sender controls under ``H + gamma I_z``."""
    if not isinstance(controls, OneQubit):
        raise TypeError("transfer_map takes OneQubit controls")
    cfg = ScanConfig(chain=chain, lambdaB=lambdaB, grid={"phi1": GridAxis(1), "t": GridAxis(1)})
    return evaluate(cfg, controls, t)
