"""Gibbs states of the coupled pair and reduced states of its two halves.

Thermalization with a bath at temperature T puts the pair in the Gibbs state
P_n = exp(-E_n/T)/Z. Weights are always computed relative to the ground
energy so the exponentials stay in range at any coupling strength; the log
partition function is reported as log(sum of shifted weights) - E_min/T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_algebra import PairHamiltonian, Spectrum, Spin, build_hamiltonian, diagonalize

__all__ = [
    "ThermalState",
    "ReducedState",
    "boltzmann_weights",
    "gibbs_state",
    "equilibrium",
    "partial_trace",
]


@dataclass(frozen=True)
class ThermalState:
    """Gibbs state: probabilities aligned with the spectrum order, plus the
    density matrix in the product basis."""

    temperature: float
    probabilities: np.ndarray
    log_partition: float
    rho: np.ndarray


@dataclass(frozen=True)
class ReducedState:
    """State of one subsystem after tracing out the other."""

    subsystem: str  # "A" or "B"
    dimension: int
    rho_loc: np.ndarray


def boltzmann_weights(energies, T) -> np.ndarray:
    """Normalized Boltzmann weights of a level list, in the given order."""
    if T <= 0:
        raise ValueError(f"temperature must be positive, got {T}")
    energies = np.asarray(energies, dtype=float)
    shifted = np.exp(-(energies - energies.min()) / T)
    return shifted / shifted.sum()


def gibbs_state(spectrum: Spectrum, T) -> ThermalState:
    """Thermal state of a diagonalized Hamiltonian at temperature T > 0."""
    if T <= 0:
        raise ValueError(f"temperature must be positive, got {T}")
    energies = spectrum.energies
    shifted = np.exp(-(energies - energies[0]) / T)  # energies are ascending
    z = shifted.sum()
    probabilities = shifted / z
    log_partition = float(np.log(z) - energies[0] / T)
    v = spectrum.eigenvectors
    rho = (v * probabilities) @ v.T
    rho = 0.5 * (rho + rho.T)  # exact symmetry, so antisymmetric traces vanish
    return ThermalState(
        temperature=float(T),
        probabilities=probabilities,
        log_partition=log_partition,
        rho=rho,
    )


def equilibrium(s, J, B, T) -> tuple[PairHamiltonian, ThermalState]:
    """Build, diagonalize and thermalize the pair in one step."""
    h = build_hamiltonian(s, J, B)
    return h, gibbs_state(diagonalize(h), T)


def partial_trace(rho, s, keep: str) -> ReducedState:
    """Trace out one half of a pair state.

    rho is a 2(2s+1) x 2(2s+1) unit-trace matrix in the product basis with
    the spin-1/2 factor slowest. keep = "A" returns the 2x2 state of the
    spin-1/2, keep = "B" the (2s+1) x (2s+1) state of the partner.
    """
    s = Spin.coerce(s)
    rho = np.asarray(rho, dtype=float)
    d = s.pair_dim
    if rho.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} state for s = {s}, got {rho.shape}")
    if abs(np.trace(rho) - 1.0) > 1e-9:
        raise ValueError("state must have unit trace")
    blocks = rho.reshape(2, s.dim, 2, s.dim)
    if keep == "A":
        reduced = np.trace(blocks, axis1=1, axis2=3)
    elif keep == "B":
        reduced = np.trace(blocks, axis1=0, axis2=2)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return ReducedState(subsystem=keep, dimension=reduced.shape[0], rho_loc=reduced)
