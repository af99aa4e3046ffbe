# !/usr/bin/env python3

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np
from scipy import integrate, optimize, signal

from src.cavity.materials import DielectricModel, Vacuum
from src.utils.errors import (
    BracketingError,
    EvaluationError,
    PassivityError,
    ValidationError,
)
from src.utils.tables import write_table
from src.utils.typing import PeakSummary
from src.utils.units import SPEED_OF_LIGHT, ev, from_internal

logger = logging.getLogger(__name__)

VACUUM_SHELL_TOLERANCE = 1e-9
PASSIVITY_TOLERANCE = 1e-9
TUNE_TOLERANCE = ev(1e-3)


@dataclass(frozen=True)
class SphericalCavity:
    """three layer spherical microcavity with the emitter at its centre

    Note:
        - the shell is treated as infinitely thick, `outer` is descriptive only.

    Attributes:
        radius (float): inner radius R, atomic units
        shell (DielectricModel): shell medium
        inner (DielectricModel): inner medium, must be vacuum
        outer (DielectricModel): outer medium
    """

    radius: float
    shell: DielectricModel
    inner: DielectricModel = field(default_factory=Vacuum)
    outer: DielectricModel = field(default_factory=Vacuum)

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValidationError(f"cavity radius must be positive, got {self.radius}")
        if not self.inner.is_vacuum:
            raise ValidationError("centre-of-cavity formulas need a vacuum interior")


@dataclass(frozen=True)
class ResonancePeak:
    """cavity resonance found on a Purcell scan

    Attributes:
        center (float): peak centre, atomic units
        fwhm (float): full width at half maximum, atomic units
        integrated_weight (float): 3 * integral of lambda^2 over the peak region
        purcell (float): Purcell enhancement at the centre
    """

    center: float
    fwhm: float
    integrated_weight: float
    purcell: float = float("nan")

    def __post_init__(self) -> None:
        if not self.fwhm > 0:
            raise ValidationError(f"peak width must be positive, got {self.fwhm}")
        if not self.integrated_weight > 0:
            raise ValidationError("peak integrated weight must be positive")

    @property
    def region(self) -> tuple[float, float]:
        """FWHM interval extended by one FWHM on each side"""
        return (self.center - 1.5 * self.fwhm, self.center + 1.5 * self.fwhm)

    def summary(self) -> PeakSummary:
        """peak in user units

        Returns:
            PeakSummary: centre (eV), FWHM (meV), Purcell, integrated weight
        """
        return {
            "center_eV": from_internal(self.center, "eV"),
            "fwhm_meV": 1e3 * from_internal(self.fwhm, "eV"),
            "purcell": self.purcell,
            "integrated_weight": self.integrated_weight,
        }


"""
Green's function at the centre
"""


def reflection_coefficient_n1(cavity: SphericalCavity, omega):
    """reflection coefficient of the lowest order channel seen from the centre

    Args:
        cavity (SphericalCavity): cavity
        omega (float | np.ndarray): angular frequency, atomic units

    Raises:
        EvaluationError: non finite closed form

    Returns:
        complex | np.ndarray: r_{n=1}(omega)
    """
    omega = np.asarray(omega, dtype=float)
    rho = cavity.radius * omega / SPEED_OF_LIGHT
    n = np.asarray(cavity.shell.refractive_index(omega), dtype=complex)
    n = np.broadcast_to(n, rho.shape)

    reflectionless = np.abs(n - 1.0) < VACUUM_SHELL_TOLERANCE
    # placeholder index keeps n^2 / (n^2 - 1) finite where the limit is imposed
    n_safe = np.where(reflectionless, 2.0 + 0j, n)

    sin, cos = np.sin(rho), np.cos(rho)
    with np.errstate(all="ignore"):
        numerator = (
            1j
            + rho * (n_safe + 1.0)
            - 1j * rho**2 * n_safe
            - rho**3 * n_safe**2 / (n_safe + 1.0)
        ) * np.exp(1j * rho)
        denominator = (
            sin
            - rho * (cos + 1j * n_safe * sin)
            + 1j * rho**2 * n_safe * cos
            - rho**3 * (cos - 1j * n_safe * sin) * n_safe**2 / (n_safe**2 - 1.0)
        )
        r = numerator / denominator
    r = np.where(reflectionless, 0.0 + 0j, r)

    if not np.all(np.isfinite(r)):
        bad = omega[~np.isfinite(r)] if omega.ndim else omega
        raise EvaluationError(
            f"reflection coefficient not finite at omega = "
            f"{np.atleast_1d(from_internal(bad, 'eV'))[:5]} eV "
            f"(R = {from_internal(cavity.radius, 'nm'):.3f} nm)"
        )

    return r if r.ndim else complex(r)


def _passive(enhancement: np.ndarray) -> np.ndarray:
    """clip tiny negative 1 + Re r, reject passivity violations

    Args:
        enhancement (np.ndarray): 1 + Re r

    Raises:
        PassivityError: value below -1e-9

    Returns:
        np.ndarray: clipped values
    """
    if np.any(enhancement < -PASSIVITY_TOLERANCE):
        raise PassivityError(
            f"1 + Re r = {np.min(enhancement):.3e} < 0, shell medium is not passive"
        )
    if np.any(enhancement < 0):
        logger.debug("clipping 1 + Re r = %.3e to 0", np.min(enhancement))
    return np.clip(enhancement, 0.0, None)


def purcell_center(cavity: SphericalCavity, omega):
    """Purcell enhancement at the cavity centre, 1 + Re r_{n=1}

    Args:
        cavity (SphericalCavity): cavity
        omega (float | np.ndarray): angular frequency, atomic units

    Returns:
        float | np.ndarray: Purcell enhancement
    """
    enhancement = _passive(1.0 + np.real(reflection_coefficient_n1(cavity, omega)))
    return enhancement if enhancement.ndim else float(enhancement)


def im_dgf_center(cavity: SphericalCavity, omega):
    """diagonal element of Im G(0, 0, omega)

    Args:
        cavity (SphericalCavity): cavity
        omega (float | np.ndarray): angular frequency, atomic units

    Returns:
        float | np.ndarray: omega / (6 pi c) * (1 + Re r)
    """
    return np.asarray(omega) / (6.0 * np.pi * SPEED_OF_LIGHT) * purcell_center(
        cavity, omega
    )


def im_dgf_tensor(cavity: SphericalCavity, omega: float) -> np.ndarray:
    """Im G(0, 0, omega) as a 3x3 tensor

    Args:
        cavity (SphericalCavity): cavity
        omega (float): angular frequency, atomic units

    Returns:
        np.ndarray: isotropic tensor
    """
    return float(im_dgf_center(cavity, omega)) * np.eye(3)


def vacuum_coupling_strength(omega):
    """free space coupling strength per orientation

    Args:
        omega (float | np.ndarray): angular frequency, atomic units

    Returns:
        float | np.ndarray: (2 omega / c) sqrt(1 / (3 pi c))
    """
    c = SPEED_OF_LIGHT
    return 2.0 * np.asarray(omega) / c * np.sqrt(1.0 / (3.0 * np.pi * c))


def coupling_strength(cavity: SphericalCavity, omega):
    """continuous coupling strength per Cartesian orientation at the centre

    Note:
        - the global sign is fixed to lambda >= 0; only |lambda| and
            lambda lambda^T enter the observables.

    Args:
        cavity (SphericalCavity): cavity
        omega (float | np.ndarray): angular frequency, atomic units

    Returns:
        float | np.ndarray: lambda(omega), atomic units
    """
    return vacuum_coupling_strength(omega) * np.sqrt(purcell_center(cavity, omega))


def mode_structure(cavity: SphericalCavity, omega: np.ndarray) -> dict[str, np.ndarray]:
    """Purcell enhancement and coupling strength on a frequency grid

    Args:
        cavity (SphericalCavity): cavity
        omega (np.ndarray): angular frequencies, atomic units

    Returns:
        dict[str, np.ndarray]: omega, purcell, coupling
    """
    omega = np.asarray(omega, dtype=float)
    purcell = np.atleast_1d(purcell_center(cavity, omega))
    coupling = vacuum_coupling_strength(omega) * np.sqrt(purcell)

    return {"omega": omega, "purcell": purcell, "coupling": coupling}


"""
Resonances
"""


def _parabolic_center(x: np.ndarray, y: np.ndarray, idx: int) -> float:
    """vertex of the parabola through three samples around a local maximum"""
    y0, y1, y2 = y[idx - 1], y[idx], y[idx + 1]
    curvature = y0 - 2.0 * y1 + y2
    if curvature >= 0:
        return float(x[idx])
    offset = 0.5 * (y0 - y2) / curvature
    return float(x[idx] + offset * (x[1] - x[0]))


def peak_weight(cavity: SphericalCavity, low: float, high: float, points: int = 401) -> float:
    """3 * integral of lambda(omega)^2 over [low, high]

    Args:
        cavity (SphericalCavity): cavity
        low (float): lower bound, atomic units
        high (float): upper bound, atomic units
        points (int, optional): trapezoid samples. Defaults to 401.

    Returns:
        float: integrated weight summed over the three orientations
    """
    omega = np.linspace(max(low, 1e-12), high, points)
    return 3.0 * float(integrate.trapezoid(coupling_strength(cavity, omega) ** 2, omega))


def find_resonances(
    cavity: SphericalCavity,
    omega_min: float,
    omega_max: float,
    sampling_density: float,
    prominence_factor: float = 2.0,
    table: Optional[Path] = None,
    metadata: Optional[Mapping[str, Any]] = None,
    timestamp: bool = True,
) -> list[ResonancePeak]:
    """scan the Purcell enhancement and extract resonance peaks

    Note:
        - a peak is a local maximum at least `prominence_factor` times the scan
            median, with prominence at least the median.
        - the FWHM is measured at half prominence by linear interpolation.

    Args:
        cavity (SphericalCavity): cavity
        omega_min (float): scan start, atomic units
        omega_max (float): scan end, atomic units
        sampling_density (float): points per unit energy (atomic units)
        prominence_factor (float, optional): height threshold over the median.
            Defaults to 2.0.
        table (Optional[Path], optional): write omega (eV), purcell, lambda (a.u.).
            Defaults to None.
        metadata (Optional[Mapping[str, Any]], optional): table header. Defaults to None.
        timestamp (bool, optional): timestamp line in the table. Defaults to True.

    Raises:
        ValidationError: empty window or non positive density

    Returns:
        list[ResonancePeak]: peaks ordered by centre
    """
    if not omega_min < omega_max:
        raise ValidationError("omega_min must be smaller than omega_max")
    if not sampling_density > 0:
        raise ValidationError("sampling density must be positive")

    points = int(np.ceil((omega_max - omega_min) * sampling_density)) + 1
    omega = np.linspace(omega_min, omega_max, max(points, 3))
    scan = mode_structure(cavity, omega)
    purcell = scan["purcell"]

    if table is not None:
        write_table(
            table,
            ["omega_eV", "purcell", "lambda_au"],
            [from_internal(omega, "eV"), purcell, scan["coupling"]],
            metadata=metadata,
            timestamp=timestamp,
        )

    background = float(np.median(purcell))
    indices, _ = signal.find_peaks(
        purcell, height=prominence_factor * background, prominence=background
    )
    if indices.size == 0:
        logger.debug(
            "no resonances in [%.4f, %.4f] eV",
            from_internal(omega_min, "eV"),
            from_internal(omega_max, "eV"),
        )
        return []

    widths, _, _, _ = signal.peak_widths(purcell, indices, rel_height=0.5)
    step = omega[1] - omega[0]

    peaks = []
    for idx, width in zip(indices, widths):
        center = _parabolic_center(omega, purcell, int(idx))
        fwhm = float(width * step)
        weight = peak_weight(cavity, center - 1.5 * fwhm, center + 1.5 * fwhm)
        peaks.append(
            ResonancePeak(
                center=center,
                fwhm=fwhm,
                integrated_weight=weight,
                purcell=float(purcell_center(cavity, center)),
            )
        )
        logger.debug("peak candidate %s", peaks[-1].summary())

    return peaks


def _nearest_offset(
    shell: DielectricModel,
    radius: float,
    target: float,
    window: float,
    sampling_density: float,
) -> Optional[float]:
    """signed distance between the target and the nearest resonance"""
    peaks = find_resonances(
        SphericalCavity(radius, shell),
        max(target - window, 0.5 * target),
        target + window,
        sampling_density,
    )
    if not peaks:
        return None
    nearest = min(peaks, key=lambda peak: abs(peak.center - target))
    return nearest.center - target


class _NoPeak(Exception):
    """no resonance inside the tuning window"""


def tune_radius(
    shell: DielectricModel,
    target: float,
    radius_bracket: tuple[float, float],
    window: float = ev(0.5),
    sampling_density: float = 2e4 / ev(1.0),
    scan_points: int = 41,
) -> float:
    """find the inner radius that puts a resonance at `target`

    Args:
        shell (DielectricModel): shell medium
        target (float): target resonance frequency, atomic units
        radius_bracket (tuple[float, float]): radius search interval, atomic units
        window (float, optional): half width of the scan around the target.
            Defaults to 0.5 eV.
        sampling_density (float, optional): scan points per unit energy.
            Defaults to 20 points per meV.
        scan_points (int, optional): coarse radius grid size. Defaults to 41.

    Raises:
        ValidationError: invalid bracket
        BracketingError: no verified root inside the bracket

    Returns:
        float: tuned radius, atomic units
    """
    low, high = radius_bracket
    if not 0 < low < high:
        raise ValidationError("radius bracket must satisfy 0 < low < high")

    def offset(radius: float) -> float:
        value = _nearest_offset(shell, radius, target, window, sampling_density)
        if value is None:
            raise _NoPeak(radius)
        logger.debug(
            "R = %.4f nm, offset = %.4f meV",
            from_internal(radius, "nm"),
            1e3 * from_internal(value, "eV"),
        )
        return value

    radii = np.linspace(low, high, scan_points)
    offsets = [
        _nearest_offset(shell, radius, target, window, sampling_density)
        for radius in radii
    ]

    for (r_a, f_a), (r_b, f_b) in zip(
        zip(radii[:-1], offsets[:-1]), zip(radii[1:], offsets[1:])
    ):
        if f_a is None or f_b is None or f_a * f_b > 0:
            continue
        try:
            root = optimize.brentq(offset, r_a, r_b, xtol=1e-8 * r_b)
            residual = offset(root)
        except _NoPeak:
            continue
        if abs(residual) <= TUNE_TOLERANCE:
            logger.info(
                "tuned R = %.4f nm for %.4f eV (residual %.3f meV)",
                from_internal(root, "nm"),
                from_internal(target, "eV"),
                1e3 * from_internal(residual, "eV"),
            )
            return float(root)
        logger.debug("rejected spurious sign change near R = %.3f nm", from_internal(root, "nm"))

    def centers(radius: float) -> list[float]:
        peaks = find_resonances(
            SphericalCavity(radius, shell),
            max(target - window, 0.5 * target),
            target + window,
            sampling_density,
        )
        return [from_internal(peak.center, "eV") for peak in peaks]

    raise BracketingError(
        f"no resonance crosses {from_internal(target, 'eV'):.4f} eV for R in "
        f"[{from_internal(low, 'nm'):.3f}, {from_internal(high, 'nm'):.3f}] nm",
        centers(low),
        centers(high),
    )
