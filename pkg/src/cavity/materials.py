# !/usr/bin/env python3

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import interpolate

from src.utils.errors import OutOfRangeError, ValidationError
from src.utils.units import ev, from_internal

GOLD_PLASMA_EV = 8.5
GOLD_DAMPING_EV = 0.048
DAMPING_FRACTIONS: tuple[float, ...] = (1.0, 0.25, 0.10, 0.05)

"""
Basic dielectric model
"""


class DielectricModel:
    """frequency dependent relative permittivity of a material region

    Attributes:
        name (str): model name
    """

    name: str = "dielectric"

    def permittivity(self, omega):
        """complex relative permittivity

        Args:
            omega (float | np.ndarray): angular frequency, atomic units

        Raises:
            NotImplementedError: must override
        """
        raise NotImplementedError("Must override!!")

    def refractive_index(self, omega):
        """complex refractive index with Im n >= 0

        Args:
            omega (float | np.ndarray): angular frequency, atomic units

        Returns:
            complex | np.ndarray: refractive index
        """
        n = np.sqrt(np.asarray(self.permittivity(omega), dtype=complex))
        n = np.where(n.imag < 0, -n, n)
        return n if n.ndim else complex(n)

    @property
    def is_vacuum(self) -> bool:
        """True for the reflectionless vacuum model"""
        return False


def _check_frequency(omega) -> np.ndarray:
    """validate angular frequencies

    Args:
        omega (float | np.ndarray): angular frequency

    Raises:
        ValidationError: non positive frequency

    Returns:
        np.ndarray: frequencies as float array
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise ValidationError("angular frequency must be positive")
    return omega


def _scalar_or_array(values: np.ndarray):
    return values if values.ndim else complex(values)


"""
Concrete models
"""


@dataclass(frozen=True)
class Vacuum(DielectricModel):
    """vacuum, eps = 1"""

    name: str = "vacuum"

    def permittivity(self, omega):
        omega = _check_frequency(omega)
        return _scalar_or_array(np.ones_like(omega, dtype=complex))

    @property
    def is_vacuum(self) -> bool:
        return True


@dataclass(frozen=True)
class Constant(DielectricModel):
    """non dispersive lossless dielectric

    Attributes:
        epsilon_r (float): relative permittivity, >= 1
    """

    epsilon_r: float = 1.0
    name: str = "constant"

    def __post_init__(self) -> None:
        if not self.epsilon_r >= 1.0:
            raise ValidationError(f"epsilon_r must be >= 1, got {self.epsilon_r}")

    def permittivity(self, omega):
        omega = _check_frequency(omega)
        return _scalar_or_array(np.full(omega.shape, self.epsilon_r, dtype=complex))


@dataclass(frozen=True)
class Drude(DielectricModel):
    """free electron metal, eps = 1 - wp^2 / (w^2 + i gamma w)

    Attributes:
        plasma (float): plasma frequency, atomic units
        damping (float): damping rate, atomic units
    """

    plasma: float
    damping: float
    name: str = "drude"

    def __post_init__(self) -> None:
        if not self.plasma > 0:
            raise ValidationError(f"plasma frequency must be positive, got {self.plasma}")
        if not self.damping >= 0:
            raise ValidationError(f"damping must be non negative, got {self.damping}")

    def permittivity(self, omega):
        omega = _check_frequency(omega)
        eps = 1.0 - self.plasma**2 / (omega**2 + 1j * self.damping * omega)
        return _scalar_or_array(eps)

    def scaled(self, damping_fraction: float) -> "Drude":
        """copy with the damping rate scaled

        Args:
            damping_fraction (float): multiplier on the damping rate

        Returns:
            Drude: scaled model
        """
        return Drude(self.plasma, self.damping * damping_fraction, self.name)


@dataclass(frozen=True, eq=False)
class Tabulated(DielectricModel):
    """linearly interpolated permittivity table

    Attributes:
        omega (np.ndarray): strictly ascending frequency grid, atomic units
        epsilon (np.ndarray): complex permittivity on the grid
    """

    omega: np.ndarray
    epsilon: np.ndarray
    name: str = "tabulated"
    _real: interpolate.interp1d = field(init=False, repr=False, compare=False)
    _imag: interpolate.interp1d = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        grid = np.asarray(self.omega, dtype=float)
        eps = np.asarray(self.epsilon, dtype=complex)
        if grid.ndim != 1 or grid.size < 2 or eps.shape != grid.shape:
            raise ValidationError("tabulated model needs at least 2 (omega, eps) points")
        if np.any(np.diff(grid) <= 0):
            raise ValidationError("tabulated frequencies must be strictly ascending")
        if np.any(eps.imag < 0):
            raise ValidationError("tabulated Im eps must be >= 0 (passive medium)")

        object.__setattr__(self, "omega", grid)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "_real", interpolate.interp1d(grid, eps.real))
        object.__setattr__(self, "_imag", interpolate.interp1d(grid, eps.imag))

    def permittivity(self, omega):
        omega = _check_frequency(omega)
        low, high = self.omega[0], self.omega[-1]
        if np.any((omega < low) | (omega > high)):
            raise OutOfRangeError(
                f"frequency outside tabulated range "
                f"[{from_internal(low, 'eV'):.4f}, {from_internal(high, 'eV'):.4f}] eV"
            )
        return _scalar_or_array(self._real(omega) + 1j * self._imag(omega))


"""
Module level operations
"""


def permittivity(model: DielectricModel, omega):
    """complex permittivity of `model` at `omega`

    Args:
        model (DielectricModel): dielectric model
        omega (float | np.ndarray): angular frequency, atomic units

    Returns:
        complex | np.ndarray: relative permittivity
    """
    return model.permittivity(omega)


def refractive_index(model: DielectricModel, omega):
    """complex refractive index of `model` at `omega`, Im n >= 0

    Args:
        model (DielectricModel): dielectric model
        omega (float | np.ndarray): angular frequency, atomic units

    Returns:
        complex | np.ndarray: refractive index
    """
    return model.refractive_index(omega)


def gold(
    damping_fraction: float = 1.0,
    plasma_eV: float = GOLD_PLASMA_EV,
    damping_eV: float = GOLD_DAMPING_EV,
) -> Drude:
    """Drude gold preset

    Args:
        damping_fraction (float, optional): fraction of the gold damping. Defaults to 1.0.
        plasma_eV (float, optional): plasma frequency in eV. Defaults to 8.5.
        damping_eV (float, optional): full damping rate in eV. Defaults to 0.048.

    Returns:
        Drude: gold model
    """
    return Drude(ev(plasma_eV), ev(damping_eV) * damping_fraction, name="gold")


def load_tabulated(path: Path | str) -> Tabulated:
    """read a permittivity table

    Note:
        - columns: omega (eV), Re eps[, Im eps]; '#' starts a comment,
            comma or whitespace separated.

    Args:
        path (Path | str): table file

    Raises:
        ValidationError: unreadable or malformed table

    Returns:
        Tabulated: interpolated model
    """
    text = Path(path).read_text(encoding="utf-8").replace(",", " ")
    try:
        data = np.loadtxt(io.StringIO(text), comments="#", ndmin=2)
    except ValueError as err:
        raise ValidationError(f"malformed permittivity table {path}: {err}") from err

    if data.shape[1] not in (2, 3):
        raise ValidationError(
            f"permittivity table {path} must have 2 or 3 columns, got {data.shape[1]}"
        )
    imag = data[:, 2] if data.shape[1] == 3 else np.zeros(data.shape[0])

    return Tabulated(ev(data[:, 0]), data[:, 1] + 1j * imag, name=Path(path).stem)


def build_material(name: str, **args) -> DielectricModel:
    """build dielectric model

    Args:
        name (str): one of vacuum, constant, drude, gold, tabulated

    Raises:
        ValidationError: undefined material

    Returns:
        DielectricModel: dielectric model
    """
    if name == "vacuum":
        return Vacuum()
    if name == "constant":
        return Constant(epsilon_r=args["epsilon_r"])
    if name == "drude":
        return Drude(ev(args["plasma_eV"]), ev(args["damping_eV"]))
    if name == "gold":
        return gold(**args)
    if name == "tabulated":
        return load_tabulated(args["path"])
    raise ValidationError(
        f"material must be [vacuum, constant, drude, gold, tabulated], got {name!r}"
    )
