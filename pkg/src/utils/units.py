# !/usr/bin/env python3

from dataclasses import dataclass

import numpy as np

from src.utils.errors import ConfigError
from src.utils.typing import UnitTag

"""
Hartree atomic units: hbar = e = m_e = 1, 4 pi eps0 = 1, c = 1 / alpha.
"""


@dataclass(frozen=True)
class UnitSystem:
    """internal unit system

    Attributes:
        hartree_in_eV (float): eV per Hartree
        bohr_in_nm (float): nm per bohr
        inverse_fine_structure (float): speed of light in atomic units
        atomic_time_in_s (float): seconds per atomic unit of time
    """

    hartree_in_eV: float = 27.211386
    bohr_in_nm: float = 0.05291772
    inverse_fine_structure: float = 137.035999
    atomic_time_in_s: float = 2.4188843265857e-17

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if not value > 0:
                raise ConfigError(f"unit constant {name} must be positive, got {value}")

    @property
    def c(self) -> float:
        """speed of light in atomic units"""
        return self.inverse_fine_structure


UNITS = UnitSystem()

SPEED_OF_LIGHT = UNITS.c

_ALIASES: dict[str, UnitTag] = {
    "eV": "eV",
    "ev": "eV",
    "nm": "nm",
    "s-1": "s-1",
    "s^-1": "s-1",
    "1/s": "s-1",
    "s⁻¹": "s-1",
    "dimensionless": "dimensionless",
    "": "dimensionless",
}


def _factor(unit: str, system: UnitSystem) -> float:
    """multiplier taking a value in `unit` to atomic units

    Args:
        unit (str): unit tag
        system (UnitSystem): unit constants

    Raises:
        ConfigError: unknown unit tag

    Returns:
        float: conversion factor
    """
    tag = _ALIASES.get(unit)
    if tag is None:
        raise ConfigError(
            f"unknown unit tag {unit!r}, expected one of eV, nm, s-1, dimensionless"
        )
    if tag == "eV":
        return 1.0 / system.hartree_in_eV
    if tag == "nm":
        return 1.0 / system.bohr_in_nm
    if tag == "s-1":
        return system.atomic_time_in_s
    return 1.0


def to_internal(value, unit: str, system: UnitSystem = UNITS):
    """convert a user-facing quantity to Hartree atomic units

    Args:
        value (float | np.ndarray): quantity
        unit (str): one of eV, nm, s-1, dimensionless
        system (UnitSystem, optional): unit constants. Defaults to UNITS.

    Returns:
        float | np.ndarray: quantity in atomic units
    """
    factor = _factor(unit, system)
    if np.ndim(value):
        return np.asarray(value, dtype=float) * factor
    return float(value) * factor


def from_internal(value, unit: str, system: UnitSystem = UNITS):
    """convert an atomic-unit quantity back to a user-facing unit

    Args:
        value (float | np.ndarray): quantity in atomic units
        unit (str): one of eV, nm, s-1, dimensionless
        system (UnitSystem, optional): unit constants. Defaults to UNITS.

    Returns:
        float | np.ndarray: quantity in `unit`
    """
    factor = _factor(unit, system)
    if np.ndim(value):
        return np.asarray(value, dtype=float) / factor
    return float(value) / factor


def ev(value):
    """shorthand for to_internal(value, "eV")"""
    return to_internal(value, "eV")


def nm(value):
    """shorthand for to_internal(value, "nm")"""
    return to_internal(value, "nm")


def wavelength_to_energy(wavelength: float) -> float:
    """vacuum wavelength to photon energy, both atomic units

    Args:
        wavelength (float): vacuum wavelength

    Returns:
        float: angular frequency 2 pi c / wavelength
    """
    return 2.0 * np.pi * SPEED_OF_LIGHT / wavelength


def energy_to_wavelength(omega: float) -> float:
    """photon energy to vacuum wavelength, both atomic units

    Args:
        omega (float): angular frequency

    Returns:
        float: vacuum wavelength
    """
    return 2.0 * np.pi * SPEED_OF_LIGHT / omega
