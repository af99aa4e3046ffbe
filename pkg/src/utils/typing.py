# !/usr/bin/env python3

from typing import Callable, Literal, TypedDict

import numpy as np

LogLevel = Literal["debug", "info", "warning", "error"]
UnitTag = Literal["eV", "nm", "s-1", "dimensionless"]
Polarization = Literal["TE", "TM"]
Orientation = Literal["horizontal", "vertical"]

# omega grid -> coupling magnitudes (M,) or vectors (M, N, 3), atomic units
CouplingFunc = Callable[[np.ndarray], np.ndarray]


class PeakSummary(TypedDict):
    """resonance peak summary in user units

    Attributes:
        center_eV (float): peak centre
        fwhm_meV (float): full width at half maximum
        purcell (float): Purcell enhancement at the centre
        integrated_weight (float): integrated coupling weight, dimensionless
    """

    center_eV: float
    fwhm_meV: float
    purcell: float
    integrated_weight: float

