"""Remote creation of one-qubit mixed states through short XY spin chains."""
from .analysis import (
    BoundaryCurve, DensityGrid, absolutely_unavailable, analytic_boundary, boundary, boundary_rms,
    combined_z, creatable_area, density, density_max,
)
from .creation_map import (
    ConfigError, GridAxis, ScanConfig, ScanRecord, ScanRecords, choose_t0, evaluate, initial_state,
    scan3, scan4, transfer_map, transfer_phase_gamma,
)
from .kernels import BACKEND
from .spin_chain import ChainSpec, chain_spectrum, spectral_period, xy_hamiltonian
from .unitary_params import OneQubit, ReceiverState, TwoQubitFull, TwoQubitReduced, receiver_params

__version__ = "0.1.0"
