# !/usr/bin/env python3

import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import integrate, signal

from src.cavity.spherical import ResonancePeak
from src.polariton.solver import Spectrum
from src.utils.errors import ValidationError
from src.utils.typing import CouplingFunc
from src.utils.units import from_internal

logger = logging.getLogger(__name__)

RABI_PROMINENCE = 0.1
REPORT_FIELDS = (
    "center_eV",
    "lambda_c",
    "g_eff",
    "dipole_norm",
    "rabi_splitting_meV",
    "purcell",
)


@dataclass(frozen=True)
class CouplingReport:
    """effective coupling summary of one emitter / cavity pair

    Attributes:
        center (float): cavity peak centre, atomic units
        lambda_c (float): peak integrated coupling, atomic units
        g_eff (float): sqrt(omega_c) lambda_c |d|, atomic units
        dipole_norm (float): |d|, atomic units
        rabi_splitting (Optional[float]): polariton splitting, atomic units
        purcell (float): Purcell enhancement at the peak centre
    """

    center: float
    lambda_c: float
    g_eff: float
    dipole_norm: float
    rabi_splitting: Optional[float] = None
    purcell: float = float("nan")

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if value is not None and value < 0:
                raise ValidationError(f"coupling report field {name} must be >= 0")

    def row(self) -> list[float]:
        """summary row matching REPORT_FIELDS"""
        splitting = (
            float("nan")
            if self.rabi_splitting is None
            else 1e3 * from_internal(self.rabi_splitting, "eV")
        )
        return [
            from_internal(self.center, "eV"),
            self.lambda_c,
            self.g_eff,
            self.dipole_norm,
            splitting,
            self.purcell,
        ]

    def block(self) -> str:
        """key: value text block"""
        lines = []
        for key, value in zip(REPORT_FIELDS, self.row()):
            text = "absent" if key == "rabi_splitting_meV" and np.isnan(value) else f"{value:.10g}"
            lines.append(f"{key}: {text}")
        return "\n".join(lines) + "\n"


def _directional_weight(
    coupling: CouplingFunc, omega: np.ndarray, unit: np.ndarray
) -> np.ndarray:
    """|lambda_d(omega)|^2 summed over the orientation modes"""
    values = np.asarray(coupling(omega), dtype=float)
    if values.ndim == 1:
        # isotropic per orientation magnitude: any direction couples identically
        return values**2
    return np.sum((values @ unit) ** 2, axis=1)


def effective_coupling(
    peak: ResonancePeak,
    coupling: CouplingFunc,
    dipole: np.ndarray,
    points: int = 2001,
) -> tuple[float, float]:
    """peak integrated coupling and effective coupling strength

    Note:
        - lambda_c = sqrt(int_p |lambda_d|^2 d omega) over the FWHM interval
            extended by one FWHM on each side; g_eff = sqrt(omega_c) lambda_c |d|.

    Args:
        peak (ResonancePeak): cavity resonance
        coupling (CouplingFunc): continuous coupling, magnitudes
            (M,) or vectors (M, N, 3)
        dipole (np.ndarray): transition dipole, atomic units
        points (int, optional): trapezoid samples. Defaults to 2001.

    Raises:
        ValidationError: zero width peak or vanishing dipole

    Returns:
        tuple[float, float]: (lambda_c, g_eff)
    """
    if not peak.fwhm > 0:
        raise ValidationError("peak must have positive width")
    dipole = np.asarray(dipole, dtype=float)
    norm = float(np.linalg.norm(dipole))
    if not norm > 0:
        raise ValidationError("dipole must be nonzero")

    low, high = peak.region
    omega = np.linspace(max(low, 1e-12), high, points)
    weight = integrate.trapezoid(_directional_weight(coupling, omega, dipole / norm), omega)
    lambda_c = float(np.sqrt(weight))

    return lambda_c, float(np.sqrt(peak.center) * lambda_c * norm)


def _peak_centers(spectrum: Spectrum, prominence: float) -> tuple[np.ndarray, np.ndarray]:
    """refined centres and heights of prominent peaks"""
    values = spectrum.values
    if values.size == 0 or not np.max(values) > 0:
        return np.zeros(0), np.zeros(0)
    # zero padding lets edge bins count as peaks
    padded = np.concatenate([[0.0], values, [0.0]])
    indices, _ = signal.find_peaks(padded, prominence=prominence * np.max(values))
    indices = indices - 1

    centers = []
    for idx in indices:
        center = spectrum.centers[idx]
        if 0 < idx < values.size - 1:
            y0, y1, y2 = values[idx - 1 : idx + 2]
            curvature = y0 - 2.0 * y1 + y2
            if curvature < 0:
                center += 0.5 * (y0 - y2) / curvature * spectrum.bin_width
        centers.append(center)
    return np.asarray(centers), values[indices]


def polariton_peaks(
    spectrum: Spectrum,
    prominence: float = RABI_PROMINENCE,
    transition: Optional[float] = None,
    search_width: Optional[float] = None,
) -> np.ndarray:
    """centres of the two dominant peaks, ascending

    Args:
        spectrum (Spectrum): binned strength function
        prominence (float, optional): minimum prominence relative to the maximum bin.
            Defaults to 0.1.
        transition (Optional[float], optional): bare transition energy to search around.
            Defaults to None (whole spectrum).
        search_width (Optional[float], optional): half width of the search window
            around `transition`. Defaults to None (whole spectrum).

    Returns:
        np.ndarray: at most two peak centres, atomic units
    """
    centers, heights = _peak_centers(spectrum, prominence)
    if transition is not None and search_width is not None:
        near = np.abs(centers - transition) <= search_width
        centers, heights = centers[near], heights[near]
    return np.sort(centers[np.argsort(heights, kind="stable")[-2:]])


def extract_rabi_splitting(
    spectrum: Spectrum,
    prominence: float = RABI_PROMINENCE,
    transition: Optional[float] = None,
    search_width: Optional[float] = None,
) -> Optional[float]:
    """distance between the two dominant peaks

    Args:
        spectrum (Spectrum): binned strength function
        prominence (float, optional): minimum prominence relative to the maximum bin.
            Defaults to 0.1.
        transition (Optional[float], optional): bare transition energy to search around.
            Defaults to None (whole spectrum).
        search_width (Optional[float], optional): half width of the search window
            around `transition`. Defaults to None (whole spectrum).

    Returns:
        Optional[float]: splitting, atomic units, or None for a single peak
    """
    dominant = polariton_peaks(spectrum, prominence, transition, search_width)
    if dominant.size < 2:
        logger.debug("fewer than two prominent peaks, no splitting")
        return None
    return float(dominant[1] - dominant[0])


def spectrum_fwhm(spectrum: Spectrum) -> float:
    """full width at half maximum of the highest peak

    Args:
        spectrum (Spectrum): binned strength function

    Raises:
        ValidationError: empty spectrum

    Returns:
        float: FWHM, atomic units, at least one bin width
    """
    values = spectrum.values
    if values.size == 0 or not np.max(values) > 0:
        raise ValidationError("spectrum has no weight")
    top = int(np.argmax(values))
    half = 0.5 * values[top]

    left = top
    while left > 0 and values[left - 1] > half:
        left -= 1
    right = top
    while right < values.size - 1 and values[right + 1] > half:
        right += 1

    def crossing(inner: int, outer: int) -> float:
        if outer < 0 or outer >= values.size:
            return spectrum.centers[inner]
        y_in, y_out = values[inner], values[outer]
        fraction = (y_in - half) / (y_in - y_out)
        return spectrum.centers[inner] + fraction * (spectrum.centers[outer] - spectrum.centers[inner])

    width = crossing(right, right + 1) - crossing(left, left - 1)
    return float(max(width, spectrum.bin_width))


def extract_purcell_from_spectrum(cavity: Spectrum, reference: Spectrum) -> float:
    """ratio of the cavity and reference linewidths

    Args:
        cavity (Spectrum): spectrum with the cavity mode set
        reference (Spectrum): spectrum with the reference mode set

    Raises:
        ValidationError: multi peak input

    Returns:
        float: FWHM(cavity) / FWHM(reference)
    """
    for name, spectrum in (("cavity", cavity), ("reference", reference)):
        centers, _ = _peak_centers(spectrum, RABI_PROMINENCE)
        if centers.size > 1:
            raise ValidationError(
                f"{name} spectrum has {centers.size} peaks; "
                "use extract_rabi_splitting for split spectra"
            )
    return spectrum_fwhm(cavity) / spectrum_fwhm(reference)


def coupling_report(
    peak: ResonancePeak,
    coupling: CouplingFunc,
    dipole: np.ndarray,
    rabi_splitting: Optional[float] = None,
) -> CouplingReport:
    """assemble a coupling report

    Args:
        peak (ResonancePeak): cavity resonance
        coupling (CouplingFunc): continuous coupling
        dipole (np.ndarray): transition dipole
        rabi_splitting (Optional[float], optional): measured splitting. Defaults to None.

    Returns:
        CouplingReport: report
    """
    lambda_c, g_eff = effective_coupling(peak, coupling, dipole)
    return CouplingReport(
        center=peak.center,
        lambda_c=lambda_c,
        g_eff=g_eff,
        dipole_norm=float(np.linalg.norm(dipole)),
        rabi_splitting=rabi_splitting,
        purcell=peak.purcell,
    )
