# !/usr/bin/env python3

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np
from scipy import linalg

from src.polariton.matter import MatterSystem
from src.polariton.photon_grid import PhotonModeSet
from src.utils.errors import CapacityError, InstabilityError, NumericalError, ValidationError
from src.utils.tables import write_table
from src.utils.units import from_internal

logger = logging.getLogger(__name__)

DEFAULT_CAPACITY = 20000
STABILITY_TOLERANCE = 1e-10
RANK_TOLERANCE = 1e-14


@dataclass(frozen=True, eq=False)
class HopfieldMatrix:
    """real symmetric squared frequency matrix of the coupled problem

    Note:
        - ordering: matter pairs first, then the assembled photon modes.
        - `dark_frequencies` holds photon modes decoupled analytically by the
            compressed assembly; they never enter `matrix`.

    Attributes:
        matrix (np.ndarray): U, V and diag(omega^2) blocks, shape (S + M, S + M)
        n_matter (int): number of matter pairs S
        photon_frequencies (np.ndarray): assembled photon frequencies, shape (M,)
        dark_frequencies (np.ndarray): decoupled photon frequencies
        origin (float): lowest bare photon frequency
    """

    matrix: np.ndarray
    n_matter: int
    photon_frequencies: np.ndarray
    dark_frequencies: np.ndarray
    origin: float

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def matter_block(self) -> np.ndarray:
        """U"""
        return self.matrix[: self.n_matter, : self.n_matter]

    @property
    def cross_block(self) -> np.ndarray:
        """V"""
        return self.matrix[: self.n_matter, self.n_matter :]


def _assemble(
    energies: np.ndarray, couplings: np.ndarray, photon_frequencies: np.ndarray
) -> np.ndarray:
    """assemble U, V and diag(omega^2)

    Args:
        energies (np.ndarray): matter energies eps_S, shape (S,)
        couplings (np.ndarray): g_aS = lambda_a . d_S, shape (M, S)
        photon_frequencies (np.ndarray): omega_a, shape (M,)

    Returns:
        np.ndarray: symmetric matrix, shape (S + M, S + M)
    """
    n_matter = energies.size
    root = np.sqrt(energies)
    self_energy = couplings.T @ couplings

    matrix = np.zeros((n_matter + photon_frequencies.size,) * 2)
    matrix[:n_matter, :n_matter] = np.diag(energies**2) + 2.0 * np.outer(root, root) * self_energy
    cross = np.sqrt(2.0 * energies)[:, None] * (couplings * photon_frequencies[:, None]).T
    matrix[:n_matter, n_matter:] = cross
    matrix[n_matter:, :n_matter] = cross.T
    matrix[n_matter:, n_matter:] = np.diag(photon_frequencies**2)

    return matrix


def _compress(
    modes: PhotonModeSet, dipoles: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """rotate the degenerate orientations of every grid point onto the coupling span

    Args:
        modes (PhotonModeSet): mode set
        dipoles (np.ndarray): transition dipoles, shape (S, 3)

    Returns:
        tuple: bright couplings (M_b, S), bright frequencies (M_b,), dark frequencies
    """
    per_point = modes.couplings @ dipoles.T
    scale = max(float(np.max(np.abs(per_point))), np.finfo(float).tiny)

    bright, bright_omega, dark_omega = [], [], []
    for omega, block in zip(modes.frequencies, per_point):
        _, singular, rows = linalg.svd(block, full_matrices=False)
        rank = int(np.count_nonzero(singular > RANK_TOLERANCE * scale))
        bright.append(singular[:rank, None] * rows[:rank])
        bright_omega.extend([omega] * rank)
        dark_omega.extend([omega] * (block.shape[0] - rank))

    couplings = np.concatenate(bright) if bright_omega else np.zeros((0, dipoles.shape[0]))
    return couplings, np.asarray(bright_omega), np.asarray(dark_omega)


def build_matrix(
    matter: MatterSystem,
    photons: PhotonModeSet,
    compress: bool = False,
    capacity: int = DEFAULT_CAPACITY,
) -> HopfieldMatrix:
    """assemble the generalized Casida / Hopfield matrix

    Note:
        - U = eps^2 delta + 2 sqrt(eps eps') sum_a (lambda_a . d)(lambda_a . d')
        - V = sqrt(2 eps) omega_a (lambda_a . d), photon diagonal omega_a^2
        - compress=True keeps only the orientation combinations that couple to
            the dipoles; the spectrum equals the dense one.

    Args:
        matter (MatterSystem): transitions
        photons (PhotonModeSet): photon modes
        compress (bool, optional): drop dark orientation combinations. Defaults to False.
        capacity (int, optional): maximum matrix dimension. Defaults to 20000.

    Raises:
        CapacityError: dimension above capacity

    Returns:
        HopfieldMatrix: assembled matrix
    """
    energies = matter.energies
    dipoles = matter.dipoles

    if compress:
        couplings, photon_frequencies, dark = _compress(photons, dipoles)
    else:
        couplings = photons.vectors @ dipoles.T
        photon_frequencies = photons.omega
        dark = np.zeros(0)

    dimension = energies.size + photon_frequencies.size
    if dimension > capacity:
        raise CapacityError(
            f"Hopfield dimension {dimension} exceeds capacity {capacity}; "
            "reduce the photon window or sampling density, or enable compression"
        )
    logger.info(
        "Hopfield matrix: %d pairs + %d photon modes (%d dark, %s path)",
        energies.size,
        photon_frequencies.size,
        dark.size,
        "compressed" if compress else "dense",
    )

    return HopfieldMatrix(
        matrix=_assemble(energies, couplings, photon_frequencies),
        n_matter=energies.size,
        photon_frequencies=photon_frequencies,
        dark_frequencies=dark,
        origin=float(photons.frequencies[0]),
    )


@dataclass(frozen=True, eq=False)
class PolaritonSolution:
    """eigen decomposition of a Hopfield matrix

    Note:
        - rows of `matter` and `photon` are the F_I and P_I blocks of the
            normalized eigenvectors; dark excitations (compressed assembly) are
            pure photon states whose amplitude lies outside the assembled basis.

    Attributes:
        frequencies (np.ndarray): Omega_I ascending, shape (n,)
        matter (np.ndarray): F blocks, shape (n, S)
        photon (np.ndarray): P blocks in the assembled photon basis, shape (n, M)
        dark (np.ndarray): True for analytically decoupled photon excitations
        origin (float): lowest bare photon frequency
    """

    frequencies: np.ndarray
    matter: np.ndarray
    photon: np.ndarray
    dark: np.ndarray
    origin: float

    @property
    def size(self) -> int:
        return self.frequencies.size


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """make the first nonzero component of every column positive"""
    scale = np.max(np.abs(vectors), axis=0, keepdims=True)
    significant = np.abs(vectors) > 1e-12 * scale
    first = np.argmax(significant, axis=0)
    signs = np.sign(vectors[first, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def solve(matrix: HopfieldMatrix) -> PolaritonSolution:
    """full symmetric eigen decomposition

    Args:
        matrix (HopfieldMatrix): assembled matrix

    Raises:
        NumericalError: eigensolver failure
        InstabilityError: negative squared frequency beyond tolerance

    Returns:
        PolaritonSolution: ascending frequencies and eigenvector blocks
    """
    try:
        eigvals, eigvecs = linalg.eigh(matrix.matrix)
    except linalg.LinAlgError as err:
        raise NumericalError(f"eigensolver failed: {err}") from err

    scale = max(float(np.max(np.abs(eigvals))), np.finfo(float).tiny)
    if eigvals[0] < -STABILITY_TOLERANCE * scale:
        raise InstabilityError(
            f"negative squared frequency {eigvals[0]:.3e}, unphysical coupling input"
        )
    eigvecs = _fix_signs(eigvecs)

    n_matter = matrix.n_matter
    n_dark = matrix.dark_frequencies.size
    frequencies = np.concatenate([np.sqrt(np.clip(eigvals, 0.0, None)), matrix.dark_frequencies])
    matter = np.vstack([eigvecs[:n_matter].T, np.zeros((n_dark, n_matter))])
    photon = np.vstack([eigvecs[n_matter:].T, np.zeros((n_dark, eigvecs.shape[0] - n_matter))])
    dark = np.concatenate([np.zeros(eigvals.size, dtype=bool), np.ones(n_dark, dtype=bool)])

    order = np.argsort(frequencies, kind="stable")
    logger.info(
        "solved %d excitations in [%.4f, %.4f] eV",
        frequencies.size,
        from_internal(frequencies[order[0]], "eV"),
        from_internal(frequencies[order[-1]], "eV"),
    )
    return PolaritonSolution(
        frequencies[order], matter[order], photon[order], dark[order], matrix.origin
    )


def oscillator_strengths(solution: PolaritonSolution, matter: MatterSystem) -> np.ndarray:
    """oscillator strengths of the coupled excitations

    Note:
        - f_I = (2/3) sum_mu (sum_S sqrt(eps_S) d_S,mu F_I,S)^2, which sums to the
            bare total for any coupling.

    Args:
        solution (PolaritonSolution): solved system
        matter (MatterSystem): transitions used to build the matrix

    Returns:
        np.ndarray: f_I, shape (n,)
    """
    weighted = np.sqrt(matter.energies)[:, None] * matter.dipoles
    amplitudes = solution.matter @ weighted
    return 2.0 / 3.0 * np.sum(amplitudes**2, axis=1)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """unbroadened binned strength function

    Attributes:
        centers (np.ndarray): bin centres, atomic units
        values (np.ndarray): summed oscillator strength per bin
        bin_width (float): bin width, atomic units
        origin (float): bin anchor, a left bin edge
    """

    centers: np.ndarray
    values: np.ndarray
    bin_width: float
    origin: float

    @property
    def edges(self) -> np.ndarray:
        return np.append(self.centers - 0.5 * self.bin_width, self.centers[-1] + 0.5 * self.bin_width)


def strength_function(
    solution: PolaritonSolution,
    strengths: np.ndarray,
    bin_width: float,
    origin: Optional[float] = None,
    window: Optional[tuple[float, float]] = None,
) -> Spectrum:
    """histogram of oscillator strengths over excitation frequencies

    Note:
        - bins are left closed with an edge at `origin`; anchoring at the bare
            photon frequencies puts one bright eigenvalue in each bin.
        - no broadening is applied.

    Args:
        solution (PolaritonSolution): solved system
        strengths (np.ndarray): oscillator strengths f_I
        bin_width (float): bin width, atomic units
        origin (Optional[float], optional): bin anchor. Defaults to the lowest
            bare photon frequency.
        window (Optional[tuple[float, float]], optional): binned range. Defaults
            to the span of the excitations.

    Raises:
        ValidationError: non positive bin width

    Returns:
        Spectrum: binned spectrum
    """
    if not bin_width > 0:
        raise ValidationError(f"bin width must be positive, got {bin_width}")
    anchor = solution.origin if origin is None else origin
    low, high = window or (solution.frequencies[0], solution.frequencies[-1])

    first = int(np.floor((low - anchor) / bin_width))
    last = int(np.floor((high - anchor) / bin_width))
    edges = anchor + bin_width * np.arange(first, last + 2)

    index = np.floor((solution.frequencies - anchor) / bin_width).astype(int) - first
    inside = (index >= 0) & (index < edges.size - 1)
    values = np.bincount(index[inside], weights=strengths[inside], minlength=edges.size - 1)

    return Spectrum(0.5 * (edges[:-1] + edges[1:]), values, bin_width, anchor)


def _check_index(solution: PolaritonSolution, index: int) -> None:
    if not -solution.size <= index < solution.size:
        raise ValidationError(f"excitation index {index} out of range [0, {solution.size})")


def photonic_fraction(solution: PolaritonSolution, index: int) -> float:
    """|P_I|^2

    Args:
        solution (PolaritonSolution): solved system
        index (int): excitation index

    Raises:
        ValidationError: index out of range

    Returns:
        float: photonic fraction in [0, 1]
    """
    _check_index(solution, index)
    if solution.dark[index]:
        return 1.0
    return float(np.sum(solution.photon[index] ** 2))


def matter_fraction(solution: PolaritonSolution, index: int) -> float:
    """|F_I|^2"""
    _check_index(solution, index)
    return float(np.sum(solution.matter[index] ** 2))


def photonic_fractions(solution: PolaritonSolution) -> np.ndarray:
    """|P_I|^2 for every excitation"""
    fractions = np.sum(solution.photon**2, axis=1)
    return np.where(solution.dark, 1.0, fractions)


def export_excitations(
    solution: PolaritonSolution,
    strengths: np.ndarray,
    path: Path,
    metadata: Optional[Mapping[str, Any]] = None,
    timestamp: bool = True,
) -> Path:
    """write (Omega_I eV, f_I, photonic fraction)"""
    return write_table(
        path,
        ["omega_eV", "oscillator_strength", "photonic_fraction"],
        [from_internal(solution.frequencies, "eV"), strengths, photonic_fractions(solution)],
        metadata=metadata,
        timestamp=timestamp,
    )


def export_spectrum(
    spectrum: Spectrum,
    path: Path,
    metadata: Optional[Mapping[str, Any]] = None,
    timestamp: bool = True,
) -> Path:
    """write (bin centre eV, S value)"""
    header = {"bin_width_eV": from_internal(spectrum.bin_width, "eV"), **(metadata or {})}
    return write_table(
        path,
        ["omega_eV", "strength"],
        [from_internal(spectrum.centers, "eV"), spectrum.values],
        metadata=header,
        timestamp=timestamp,
    )
