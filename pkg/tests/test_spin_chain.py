import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from remotestate.linalg import herm_eig
from remotestate.spin_chain import (
    ChainSpec, chain_spectrum, spectral_period, total_spin_z, xy_hamiltonian,
)


def single_excitation_indices(n):
    return [1 << (n - 1 - k) for k in range(n)]  # site 1 is the most significant bit


def test_two_site_hamiltonian():
    h = xy_hamiltonian(ChainSpec(2))
    expected = np.zeros((4, 4))
    expected[1, 2] = expected[2, 1] = -0.5
    assert np.array_equal(h, expected)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_single_excitation_block_is_path_graph(n):
    h = xy_hamiltonian(ChainSpec(n, d=1.3))
    idx = single_excitation_indices(n)
    adj = np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
    assert np.allclose(h[np.ix_(idx, idx)], -0.65 * adj, atol=1e-15)


def test_spectral_constants():
    ev4 = chain_spectrum(ChainSpec(4)).eigenvalues
    nonzero = np.abs(ev4)[np.abs(ev4) > 1e-9]
    assert abs(nonzero.min() - (np.sqrt(5) - 1) / 4) < 1e-12
    assert 10.16 <= spectral_period(chain_spectrum(ChainSpec(4))) <= 10.18
    assert abs(spectral_period(chain_spectrum(ChainSpec(3))) - np.pi * np.sqrt(2)) < 1e-12
    assert spectral_period(np.array([2.0, -2.0, 0.0])) == pytest.approx(np.pi / 2, abs=1e-15)


def test_spectral_period_all_zero():
    with pytest.raises(ValueError):
        spectral_period(np.zeros(3))


def test_chain_spec_validation():
    with pytest.raises(ValueError):
        ChainSpec(1)
    assert ChainSpec(4).dim == 16


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 5), d=st.floats(0.1, 3.0), g=st.floats(-3.0, 3.0))
def test_hamiltonian_hermitian_and_conserves_iz(n, d, g):
    h = xy_hamiltonian(ChainSpec(n, d, g))
    iz = total_spin_z(n)
    assert np.abs(h - h.conj().T).max() < 1e-12
    assert np.abs(h @ iz - iz @ h).max() < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_zero_field_spectrum_symmetric(n):
    ev = herm_eig(xy_hamiltonian(ChainSpec(n))).eigenvalues
    assert np.allclose(np.sort(ev), np.sort(-ev), atol=1e-10)


def test_field_shifts_by_magnetisation():
    h0 = xy_hamiltonian(ChainSpec(3))
    h1 = xy_hamiltonian(ChainSpec(3, gamma=0.7))
    assert np.allclose(h1 - h0, 0.7 * total_spin_z(3), atol=1e-15)
    # spin up = 0: |000> carries I_z = +3/2
    assert total_spin_z(3)[0, 0] == 1.5
