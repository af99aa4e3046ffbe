# !/usr/bin/env python3

import logging
from dataclasses import dataclass

import numpy as np
import qutip as qt

from src.utils.errors import CapacityError, InstabilityError, ValidationError

logger = logging.getLogger(__name__)

BOGOLIUBOV_CAPACITY = 500
FOCK_CAPACITY = 5000


@dataclass(frozen=True, eq=False)
class QuadraticBosonProblem:
    """harmonic matter coupled to photon modes in ladder operator form

    Note:
        - H = sum eps b^+b + sum omega a^+a
            + sum_a sqrt(omega_a / 2) g_a (a + a^+)
            + 1/2 sum_a g_a^2, with g_a = sum_S g_aS (b_S + b_S^+);
            the dipole self energy is always included.

    Attributes:
        matter_energies (np.ndarray): eps_S, shape (S,)
        photon_energies (np.ndarray): omega_a, shape (M,)
        couplings (np.ndarray): g_aS = lambda_a . d_S, shape (M, S)
    """

    matter_energies: np.ndarray
    photon_energies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self) -> None:
        matter = np.atleast_1d(np.asarray(self.matter_energies, dtype=float))
        photon = np.atleast_1d(np.asarray(self.photon_energies, dtype=float))
        couplings = np.asarray(self.couplings, dtype=float).reshape(photon.size, matter.size)
        if np.any(matter <= 0) or np.any(photon <= 0):
            raise ValidationError("oscillator energies must be positive")
        object.__setattr__(self, "matter_energies", matter)
        object.__setattr__(self, "photon_energies", photon)
        object.__setattr__(self, "couplings", couplings)

    @classmethod
    def from_vectors(
        cls,
        matter_energies: np.ndarray,
        dipoles: np.ndarray,
        photon_energies: np.ndarray,
        coupling_vectors: np.ndarray,
    ) -> "QuadraticBosonProblem":
        """problem from dipole and coupling vectors

        Args:
            matter_energies (np.ndarray): eps_S
            dipoles (np.ndarray): d_S, shape (S, 3)
            photon_energies (np.ndarray): omega_a
            coupling_vectors (np.ndarray): lambda_a, shape (M, 3)

        Returns:
            QuadraticBosonProblem: problem with g_aS = lambda_a . d_S
        """
        couplings = np.atleast_2d(coupling_vectors) @ np.atleast_2d(dipoles).T
        return cls(matter_energies, photon_energies, couplings)

    @property
    def dimension(self) -> int:
        return self.matter_energies.size + self.photon_energies.size


def _ladder_blocks(problem: QuadraticBosonProblem) -> tuple[np.ndarray, np.ndarray]:
    """normal (A) and anomalous (B) coefficient matrices of the Hamiltonian

    Note:
        - H = sum A_ij c_i^+ c_j + 1/2 sum B_ij (c_i^+ c_j^+ + c_i c_j) + const,
            c = (b_1 .. b_S, a_1 .. a_M).
    """
    n_matter = problem.matter_energies.size
    g = problem.couplings

    # every bilinear (c_i + c_i^+)(c_j + c_j^+) contributes equally to A and B
    mixing = np.zeros((problem.dimension,) * 2)
    mixing[:n_matter, :n_matter] = g.T @ g
    cross = np.sqrt(problem.photon_energies / 2.0)[:, None] * g
    mixing[n_matter:, :n_matter] = cross
    mixing[:n_matter, n_matter:] = cross.T

    normal = np.diag(np.concatenate([problem.matter_energies, problem.photon_energies]))
    return normal + mixing, mixing


def bogoliubov_spectrum(problem: QuadraticBosonProblem, tolerance: float = 1e-9) -> np.ndarray:
    """normal mode frequencies from the symplectic dynamical matrix

    Args:
        problem (QuadraticBosonProblem): quadratic problem
        tolerance (float, optional): relative imaginary part accepted. Defaults to 1e-9.

    Raises:
        CapacityError: dimension above 500
        InstabilityError: complex or vanishing normal mode frequencies

    Returns:
        np.ndarray: positive frequencies, ascending
    """
    if problem.dimension > BOGOLIUBOV_CAPACITY:
        raise CapacityError(
            f"Bogoliubov dimension {problem.dimension} exceeds {BOGOLIUBOV_CAPACITY}"
        )
    normal, anomalous = _ladder_blocks(problem)
    dynamical = np.block([[normal, anomalous], [-anomalous, -normal]])
    eigvals = np.linalg.eigvals(dynamical)

    scale = float(np.max(np.abs(eigvals)))
    if np.any(np.abs(eigvals.imag) > tolerance * scale):
        raise InstabilityError("dynamical matrix has complex normal mode frequencies")

    frequencies = np.sort(eigvals.real)[problem.dimension :]
    if frequencies[0] <= 0:
        raise InstabilityError("dynamical matrix is not positive definite")
    return frequencies


def analytic_two_by_two(
    energy: float, omega: float, coupling: float
) -> tuple[float, float]:
    """closed form polaritons of one transition and one mode

    Args:
        energy (float): transition energy eps
        omega (float): photon frequency
        coupling (float): g = lambda . d

    Returns:
        tuple[float, float]: (lower, upper) polariton frequencies
    """
    upper_left = energy**2 + 2.0 * energy * coupling**2
    off_diagonal = np.sqrt(2.0 * energy) * omega * coupling
    lower_right = omega**2
    trace = upper_left + lower_right
    gap = np.hypot(upper_left - lower_right, 2.0 * off_diagonal)
    # product form for the small root avoids cancellation
    determinant = upper_left * lower_right - off_diagonal**2
    large = 0.5 * (trace + gap)
    return float(np.sqrt(determinant / large)), float(np.sqrt(large))


@dataclass(frozen=True)
class FockSpectrum:
    """lowest excitation energies from exact diagonalization

    Attributes:
        excitations (np.ndarray): E_i - E_0, ascending
        n_max (int): photon number cutoff per mode
        truncation_shift (float): max change of the excitations against n_max - 1
    """

    excitations: np.ndarray
    n_max: int
    truncation_shift: float


def _pauli_fierz(
    energies: np.ndarray,
    dipoles: np.ndarray,
    modes: np.ndarray,
    couplings: np.ndarray,
    n_max: int,
) -> qt.Qobj:
    """truncated Pauli-Fierz Hamiltonian of two level emitters"""
    n_levels, n_modes = energies.size, modes.size
    dims = [2] * n_levels + [n_max + 1] * n_modes

    def embed(op: qt.Qobj, slot: int) -> qt.Qobj:
        ops = [qt.qeye(dim) for dim in dims]
        ops[slot] = op
        return qt.tensor(ops)

    hamiltonian = 0
    dipole_ops = []
    for s in range(n_levels):
        hamiltonian += 0.5 * energies[s] * embed(qt.sigmaz(), s)
        dipole_ops.append(embed(qt.sigmax(), s))

    for a in range(n_modes):
        destroy = embed(qt.destroy(n_max + 1), n_levels + a)
        projected = sum(
            float(np.dot(couplings[a], dipoles[s])) * dipole_ops[s] for s in range(n_levels)
        )
        hamiltonian += modes[a] * destroy.dag() * destroy
        hamiltonian += np.sqrt(modes[a] / 2.0) * projected * (destroy + destroy.dag())
        hamiltonian += 0.5 * projected * projected

    return hamiltonian


def fock_ed_spectrum(
    energies: np.ndarray,
    dipoles: np.ndarray,
    modes: np.ndarray,
    couplings: np.ndarray,
    n_max: int = 4,
    levels: int = 4,
    capacity: int = FOCK_CAPACITY,
) -> FockSpectrum:
    """exact diagonalization of two level emitters in truncated Fock space

    Args:
        energies (np.ndarray): two level splittings, shape (S,)
        dipoles (np.ndarray): transition dipoles, shape (S, 3)
        modes (np.ndarray): photon frequencies, shape (M,)
        couplings (np.ndarray): coupling vectors, shape (M, 3)
        n_max (int, optional): photon cutoff per mode. Defaults to 4.
        levels (int, optional): excitations returned. Defaults to 4.
        capacity (int, optional): maximum Hilbert dimension. Defaults to 5000.

    Raises:
        ValidationError: n_max < 1
        CapacityError: Hilbert dimension above capacity

    Returns:
        FockSpectrum: lowest excitations and truncation shift
    """
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    dipoles = np.atleast_2d(np.asarray(dipoles, dtype=float))
    modes = np.atleast_1d(np.asarray(modes, dtype=float))
    couplings = np.atleast_2d(np.asarray(couplings, dtype=float))
    if n_max < 1:
        raise ValidationError(f"photon cutoff must be >= 1, got {n_max}")

    dimension = 2**energies.size * (n_max + 1) ** modes.size
    if dimension > capacity:
        raise CapacityError(f"Fock space dimension {dimension} exceeds capacity {capacity}")

    def excitations(cutoff: int) -> np.ndarray:
        hamiltonian = _pauli_fierz(energies, dipoles, modes, couplings, cutoff)
        count = min(levels + 1, hamiltonian.shape[0])
        spectrum = np.sort(hamiltonian.eigenenergies())[:count]
        return spectrum[1:] - spectrum[0]

    converged = excitations(n_max)
    shift = 0.0
    if n_max > 1:
        previous = excitations(n_max - 1)
        common = min(previous.size, converged.size)
        shift = float(np.max(np.abs(converged[:common] - previous[:common])))
    logger.debug("Fock ED n_max = %d, truncation shift %.3e", n_max, shift)

    return FockSpectrum(converged, n_max, shift)
