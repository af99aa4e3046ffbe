# !/usr/bin/env python3

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import linalg

from src.utils.errors import (
    DegenerateBasisError,
    PassivityError,
    RankDeficiencyError,
    ValidationError,
)
from src.utils.typing import CouplingFunc
from src.utils.units import SPEED_OF_LIGHT

logger = logging.getLogger(__name__)

PASSIVITY_TOLERANCE = 1e-9
RANK_TOLERANCE = 1e-12

# omega -> 3x3 Im G(r0, r0, omega)
GreenProvider = Callable[[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class EmitterConfig:
    """emitter location and dipole orientations coupled to the field

    Attributes:
        position (str): emitter location label, the cavity centre or planar sample point
        orientations (np.ndarray): unit vectors n_j, shape (N, 3), 1 <= N <= 3
    """

    position: str = "center"
    orientations: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self) -> None:
        orientations = np.atleast_2d(np.asarray(self.orientations, dtype=float))
        if orientations.shape[1] != 3 or not 1 <= orientations.shape[0] <= 3:
            raise ValidationError(
                f"orientations must have shape (N, 3) with 1 <= N <= 3, "
                f"got {orientations.shape}"
            )
        norms = np.linalg.norm(orientations, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValidationError(f"orientations must have unit norm, got {norms}")
        object.__setattr__(self, "orientations", orientations)

    @property
    def count(self) -> int:
        """number of orientations"""
        return self.orientations.shape[0]


def spectral_density(im_green, omega):
    """square root of the dipole spectral density

    Args:
        im_green (float | np.ndarray): orientation projected Im G
        omega (float | np.ndarray): angular frequency, atomic units

    Raises:
        PassivityError: Im G below -1e-9

    Returns:
        float | np.ndarray: G_j = (2 omega / c) sqrt(Im G)
    """
    im_green = np.asarray(im_green, dtype=float)
    if np.any(im_green < -PASSIVITY_TOLERANCE):
        raise PassivityError(f"negative spectral density, Im G = {np.min(im_green):.3e}")
    density = 2.0 * np.asarray(omega) / SPEED_OF_LIGHT * np.sqrt(np.clip(im_green, 0.0, None))
    return density if density.ndim else float(density)


def overlap_matrix(im_green_matrix: np.ndarray, omega: float) -> np.ndarray:
    """overlap of the emitter centred modes of different orientations

    Args:
        im_green_matrix (np.ndarray): n_i . Im G . n_j, shape (N, N)
        omega (float): angular frequency, atomic units

    Raises:
        DegenerateBasisError: dark orientation with nonzero off diagonal row

    Returns:
        np.ndarray: symmetric overlap S with unit diagonal
    """
    matrix = 0.5 * (im_green_matrix + im_green_matrix.T)
    densities = spectral_density(np.diag(matrix), omega)
    densities = np.atleast_1d(densities)
    prefactor = 4.0 * omega**2 / SPEED_OF_LIGHT**2

    dark = densities == 0
    for j in np.flatnonzero(dark):
        off_diagonal = np.delete(matrix[j], j)
        if np.any(np.abs(off_diagonal) > PASSIVITY_TOLERANCE):
            raise DegenerateBasisError(
                f"orientation {j} has zero spectral density but couples to others"
            )

    scale = np.where(dark, 1.0, densities)
    overlap = prefactor * matrix / np.outer(scale, scale)
    overlap[dark, :] = 0.0
    overlap[:, dark] = 0.0
    np.fill_diagonal(overlap, 1.0)

    return overlap


def orthogonalizer(overlap: np.ndarray) -> np.ndarray:
    """symmetric Lowdin orthogonalizer V = S^(-1/2)

    Args:
        overlap (np.ndarray): symmetric positive definite overlap

    Raises:
        RankDeficiencyError: smallest eigenvalue below 1e-12

    Returns:
        np.ndarray: real symmetric V with V S V^T = I
    """
    eigvals, eigvecs = linalg.eigh(overlap)
    if eigvals[0] < RANK_TOLERANCE:
        raise RankDeficiencyError(
            f"overlap matrix is singular (min eigenvalue {eigvals[0]:.3e}); "
            "drop linearly dependent or dark orientations"
        )
    transform = (eigvecs / np.sqrt(eigvals)) @ eigvecs.T
    return 0.5 * (transform + transform.T)


@dataclass(frozen=True, eq=False)
class BrightModeBasis:
    """emitter centred bright modes at one frequency

    Attributes:
        omega (float): angular frequency, atomic units
        densities (np.ndarray): spectral densities G_j, shape (N,)
        overlap (np.ndarray): overlap S, shape (N, N)
        transform (np.ndarray): orthogonalizer V, shape (N, N)
        couplings (np.ndarray): coupling vectors lambda_i, shape (N, 3)
    """

    omega: float
    densities: np.ndarray
    overlap: np.ndarray
    transform: np.ndarray
    couplings: np.ndarray


def bright_mode_basis(
    im_green: np.ndarray, omega: float, config: EmitterConfig
) -> BrightModeBasis:
    """bright modes for a 3x3 Im G tensor at the emitter

    Args:
        im_green (np.ndarray): Im G(r0, r0, omega), shape (3, 3)
        omega (float): angular frequency, atomic units
        config (EmitterConfig): emitter orientations

    Returns:
        BrightModeBasis: densities, overlap, orthogonalizer and couplings
    """
    n = config.orientations
    projected = n @ im_green @ n.T
    densities = np.atleast_1d(spectral_density(np.diag(projected), omega))
    overlap = overlap_matrix(projected, omega)
    transform = orthogonalizer(overlap)

    prefactor = 4.0 * omega**2 / SPEED_OF_LIGHT**2
    fields = prefactor * (n @ im_green.T)
    safe = np.where(densities > 0, densities, 1.0)
    fields = np.where(densities[:, None] > 0, fields / safe[:, None], 0.0)
    couplings = np.sqrt(2.0 / omega) * transform @ fields

    return BrightModeBasis(omega, densities, overlap, transform, couplings)


def coupling_vectors(im_green: np.ndarray, omega: float, config: EmitterConfig) -> np.ndarray:
    """per orientation coupling vectors lambda_i(omega)

    Args:
        im_green (np.ndarray): Im G(r0, r0, omega), shape (3, 3)
        omega (float): angular frequency, atomic units
        config (EmitterConfig): emitter orientations

    Returns:
        np.ndarray: coupling vectors, shape (N, 3)
    """
    return bright_mode_basis(im_green, omega, config).couplings


def coupling_provider(
    green: GreenProvider, config: EmitterConfig
) -> CouplingFunc:
    """continuous coupling function built from an Im G provider

    Args:
        green (GreenProvider): omega -> 3x3 Im G at the emitter
        config (EmitterConfig): emitter orientations

    Returns:
        CouplingFunc: omega grid -> couplings, shape (M, N, 3)
    """

    def provider(omega: np.ndarray) -> np.ndarray:
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        return np.stack([coupling_vectors(green(w), w, config) for w in omega])

    return provider
