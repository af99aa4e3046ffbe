# !/usr/bin/env python3

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping, Optional

import numpy as np

from src.utils.errors import ValidationError
from src.utils.tables import write_table
from src.utils.typing import CouplingFunc
from src.utils.units import from_internal

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PhotonModeSet:
    """discretized photon modes on a uniform midpoint grid

    Attributes:
        frequencies (np.ndarray): grid frequencies omega_k, shape (K,)
        couplings (np.ndarray): coupling vectors lambda_k per orientation, shape (K, N, 3)
        spacing (float): grid spacing
        window (tuple[float, float]): (omega_min, omega_max)
    """

    frequencies: np.ndarray
    couplings: np.ndarray
    spacing: float
    window: tuple[float, float]

    def __post_init__(self) -> None:
        frequencies = np.asarray(self.frequencies, dtype=float)
        couplings = np.asarray(self.couplings, dtype=float)
        if frequencies.ndim != 1 or frequencies.size == 0:
            raise ValidationError("photon mode set needs at least one frequency")
        if couplings.ndim != 3 or couplings.shape[0] != frequencies.size or couplings.shape[2] != 3:
            raise ValidationError(
                f"couplings must have shape (K, N, 3), got {couplings.shape}"
            )
        if np.any(frequencies <= 0):
            raise ValidationError("photon frequencies must be positive")
        if frequencies.size > 1:
            steps = np.diff(frequencies)
            if np.any(np.abs(steps - self.spacing) > 1e-12 * max(self.spacing, frequencies[-1])):
                raise ValidationError("photon frequencies must be uniformly spaced")
        object.__setattr__(self, "frequencies", frequencies)
        object.__setattr__(self, "couplings", couplings)

    @property
    def orientation_count(self) -> int:
        """orientations per grid point"""
        return self.couplings.shape[1]

    @property
    def size(self) -> int:
        """number of photon modes, grid points x orientations"""
        return self.couplings.shape[0] * self.couplings.shape[1]

    @property
    def omega(self) -> np.ndarray:
        """mode frequencies, one per (grid point, orientation)"""
        return np.repeat(self.frequencies, self.orientation_count)

    @property
    def vectors(self) -> np.ndarray:
        """mode coupling vectors, shape (size, 3)"""
        return self.couplings.reshape(-1, 3)

    def spectral_weight(self) -> float:
        """sum of |lambda_k|^2 over all modes"""
        return float(np.sum(self.couplings**2))


def discretize(
    coupling: CouplingFunc,
    window: tuple[float, float],
    sampling_density: float,
    orientations: Optional[np.ndarray] = None,
) -> PhotonModeSet:
    """discretize a continuous coupling function on a midpoint grid

    Note:
        - the cell count is the nearest integer to width x density, the spacing
            is then width / count so the cells tile the window exactly.
        - `coupling` returns either per-orientation magnitudes, shape (M,),
            combined with `orientations`, or vectors with shape (M, N, 3).

    Args:
        coupling (CouplingFunc): continuous coupling lambda(omega)
        window (tuple[float, float]): (omega_min, omega_max), atomic units
        sampling_density (float): points per unit energy, atomic units
        orientations (Optional[np.ndarray], optional): unit vectors, shape (N, 3).
            Defaults to the Cartesian axes.

    Raises:
        ValidationError: non positive window or density

    Returns:
        PhotonModeSet: lambda_k = sqrt(d_omega) lambda(omega_k)
    """
    omega_min, omega_max = window
    if not omega_min > 0:
        raise ValidationError(f"photon window must lie above 0, got {omega_min}")
    if not omega_max > omega_min:
        raise ValidationError("photon window must have omega_max > omega_min")
    if not sampling_density > 0:
        raise ValidationError("sampling density must be positive")

    width = omega_max - omega_min
    count = max(1, int(round(width * sampling_density)))
    spacing = width / count
    frequencies = omega_min + (np.arange(count) + 0.5) * spacing

    values = np.asarray(coupling(frequencies), dtype=float)
    if values.ndim == 1:
        axes = np.eye(3) if orientations is None else np.atleast_2d(orientations)
        vectors = values[:, None, None] * axes[None, :, :]
    else:
        vectors = values

    logger.info(
        "photon grid: %d points x %d orientations in [%.4f, %.4f] eV",
        count,
        vectors.shape[1],
        from_internal(omega_min, "eV"),
        from_internal(omega_max, "eV"),
    )
    return PhotonModeSet(frequencies, np.sqrt(spacing) * vectors, spacing, (omega_min, omega_max))


def convergence_check(
    build: Callable[[float], float], base_density: float
) -> tuple[float, float]:
    """observable at a density and at twice the density

    Args:
        build (Callable[[float], float]): sampling density -> real observable
        base_density (float): base sampling density

    Returns:
        tuple[float, float]: (value at 2 x density, |difference|)
    """
    coarse = build(base_density)
    fine = build(2.0 * base_density)
    logger.info("convergence check: %.10e -> %.10e", coarse, fine)
    return fine, abs(fine - coarse)


def export(
    modes: PhotonModeSet,
    path: Path,
    metadata: Optional[Mapping[str, Any]] = None,
    timestamp: bool = True,
) -> Path:
    """write the mode set, one row per (grid point, orientation)

    Args:
        modes (PhotonModeSet): mode set
        path (Path): destination
        metadata (Optional[Mapping[str, Any]], optional): header parameters.
            Defaults to None.
        timestamp (bool, optional): timestamp line. Defaults to True.

    Returns:
        Path: destination
    """
    header = {"spacing_eV": from_internal(modes.spacing, "eV"), **(metadata or {})}
    vectors = modes.vectors
    return write_table(
        path,
        ["omega_eV", "lambda_x", "lambda_y", "lambda_z"],
        [from_internal(modes.omega, "eV"), vectors[:, 0], vectors[:, 1], vectors[:, 2]],
        metadata=header,
        timestamp=timestamp,
    )
