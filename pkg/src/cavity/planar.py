# !/usr/bin/env python3

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from src.cavity.materials import DielectricModel, Vacuum
from src.utils.errors import PoleError, QuadratureError, ValidationError
from src.utils.typing import Orientation, Polarization
from src.utils.units import SPEED_OF_LIGHT, energy_to_wavelength

logger = logging.getLogger(__name__)

MAX_IDEAL_REFLECTIVITY = 1.0 - 1e-6
POLE_TOLERANCE = 1e-14
EVANESCENT_ENVELOPE = 1e-12
QUAD_EPSREL = 1e-6
QUAD_LIMIT = 500

"""
Mirrors
"""


class MirrorModel:
    """reflecting boundary of a planar cavity"""

    name: str = "mirror"

    def reflection(
        self,
        polarization: Polarization,
        cavity_medium: DielectricModel,
        omega: float,
        q,
    ):
        """amplitude reflection coefficient seen from the cavity side

        Args:
            polarization (Polarization): TE or TM
            cavity_medium (DielectricModel): medium between the mirrors
            omega (float): angular frequency, atomic units
            q (float | np.ndarray): in-plane wavenumber, atomic units

        Raises:
            NotImplementedError: must override
        """
        raise NotImplementedError("Must override!!")


@dataclass(frozen=True)
class MaterialMirror(MirrorModel):
    """semi-infinite half space of a dielectric model

    Attributes:
        material (DielectricModel): mirror medium
    """

    material: DielectricModel = field(default_factory=Vacuum)
    name: str = "material"

    def reflection(self, polarization, cavity_medium, omega, q):
        return fresnel(polarization, cavity_medium, self.material, omega, q)


@dataclass(frozen=True)
class IdealMirror(MirrorModel):
    """q independent mirror with a constant intensity reflectivity

    Note:
        - phases follow the perfect electric conductor limit of the Fresnel
            formulas: r_TE = -sqrt(R), r_TM = +sqrt(R).
        - the reflectivity is capped at 1 - 1e-6 to keep the in-plane poles
            off the real axis.

    Attributes:
        reflectivity (float): intensity reflectivity R_I in [0, 1]
    """

    reflectivity: float = 0.0
    name: str = "ideal"

    def __post_init__(self) -> None:
        if not 0.0 <= self.reflectivity <= 1.0:
            raise ValidationError(
                f"mirror reflectivity must lie in [0, 1], got {self.reflectivity}"
            )

    @property
    def amplitude(self) -> float:
        """sqrt of the capped intensity reflectivity"""
        return float(np.sqrt(min(self.reflectivity, MAX_IDEAL_REFLECTIVITY)))

    def reflection(self, polarization, cavity_medium, omega, q):
        sign = -1.0 if polarization == "TE" else 1.0
        r = np.full(np.shape(q), sign * self.amplitude, dtype=complex)
        return r if r.ndim else complex(r)


def _kz(epsilon, omega: float, q):
    """normal wavenumber with Im kz >= 0"""
    kz = np.sqrt(epsilon * (omega / SPEED_OF_LIGHT) ** 2 - np.asarray(q) ** 2 + 0j)
    return np.where(kz.imag < 0, -kz, kz)


def fresnel(
    polarization: Polarization,
    medium_a: DielectricModel,
    medium_b: DielectricModel | MirrorModel,
    omega: float,
    q,
):
    """amplitude Fresnel coefficient for a wave in `medium_a` reflected by `medium_b`

    Args:
        polarization (Polarization): TE or TM
        medium_a (DielectricModel): incidence medium
        medium_b (DielectricModel | MirrorModel): reflecting medium or mirror
        omega (float): angular frequency, atomic units
        q (float | np.ndarray): in-plane wavenumber >= 0, atomic units

    Raises:
        ValidationError: undefined polarization or negative q

    Returns:
        complex | np.ndarray: reflection coefficient
    """
    if polarization not in ("TE", "TM"):
        raise ValidationError(f"polarization must be TE or TM, got {polarization!r}")
    if np.any(np.asarray(q) < 0):
        raise ValidationError("in-plane wavenumber must be non negative")
    if isinstance(medium_b, MirrorModel):
        return medium_b.reflection(polarization, medium_a, omega, q)

    eps_a = medium_a.permittivity(omega)
    eps_b = medium_b.permittivity(omega)
    kz_a, kz_b = _kz(eps_a, omega, q), _kz(eps_b, omega, q)

    if polarization == "TE":
        r = (kz_a - kz_b) / (kz_a + kz_b)
    else:
        r = (eps_b * kz_a - eps_a * kz_b) / (eps_b * kz_a + eps_a * kz_b)
    return r if r.ndim else complex(r)


"""
Cavity
"""


@dataclass(frozen=True)
class PlanarCavity:
    """Fabry-Perot cavity with the emitter between two mirrors

    Attributes:
        top (MirrorModel): top mirror
        bottom (MirrorModel): bottom mirror
        t (float): emitter to top mirror distance, atomic units
        b (float): emitter to bottom mirror distance, atomic units
        cavity_medium (DielectricModel): lossless medium between the mirrors
    """

    top: MirrorModel
    bottom: MirrorModel
    t: float
    b: float
    cavity_medium: DielectricModel = field(default_factory=Vacuum)

    def __post_init__(self) -> None:
        if not (self.t > 0 and self.b > 0):
            raise ValidationError(
                f"mirror distances must be positive, got t = {self.t}, b = {self.b}"
            )

    @property
    def d(self) -> float:
        """mirror spacing"""
        return self.t + self.b

    def swapped(self) -> "PlanarCavity":
        """cavity mirrored through the emitter plane"""
        return PlanarCavity(self.bottom, self.top, self.b, self.t, self.cavity_medium)

    def wavenumber(self, omega: float) -> float:
        """wavenumber inside the cavity medium

        Args:
            omega (float): angular frequency, atomic units

        Raises:
            ValidationError: absorbing cavity medium

        Returns:
            float: k = n omega / c
        """
        n = complex(self.cavity_medium.refractive_index(omega))
        if abs(n.imag) > 1e-12:
            raise ValidationError("cavity medium must be lossless")
        return n.real * omega / SPEED_OF_LIGHT


def reflection_functions(cavity: PlanarCavity, omega: float, q):
    """multiple reflection functions at the emitter plane

    Args:
        cavity (PlanarCavity): cavity
        omega (float): angular frequency, atomic units
        q (float | np.ndarray): in-plane wavenumber, atomic units

    Raises:
        PoleError: vanishing multiple reflection denominator

    Returns:
        tuple: (R_perp^TM, R_par^TE, R_par^TM)
    """
    medium = cavity.cavity_medium
    kz = _kz(medium.permittivity(omega), omega, q)
    phase_b = np.exp(2j * kz * cavity.b)
    phase_t = np.exp(2j * kz * cavity.t)
    phase_d = np.exp(2j * kz * cavity.d)

    def _denominator(polarization: Polarization):
        r_b = cavity.bottom.reflection(polarization, medium, omega, q)
        r_t = cavity.top.reflection(polarization, medium, omega, q)
        denominator = 1.0 - r_b * r_t * phase_d
        if np.any(np.abs(denominator) < POLE_TOLERANCE):
            raise PoleError(
                f"multiple reflection pole at omega = {omega:.6e}, "
                f"q = {np.atleast_1d(q)[np.argmin(np.abs(np.atleast_1d(denominator)))]:.6e}"
            )
        return r_b * phase_b, r_t * phase_t, denominator

    te_b, te_t, te_den = _denominator("TE")
    tm_b, tm_t, tm_den = _denominator("TM")

    perp_tm = (1.0 + tm_b) * (1.0 + tm_t) / tm_den
    par_te = (1.0 + te_b) * (1.0 + te_t) / te_den
    par_tm = (1.0 - tm_b) * (1.0 - tm_t) / tm_den

    return perp_tm, par_te, par_tm


@dataclass(frozen=True)
class GreenDiagonal:
    """Green's function diagonal at the emitter point

    Note:
        - only the imaginary parts are evaluated, the real part of the free
            space term is singular at the source point.
        - xx = yy (horizontal) and zz (vertical); cross terms vanish identically.

    Attributes:
        xx (complex): horizontal component, i Im G_xx
        zz (complex): vertical component, i Im G_zz
        error_xx (float): quadrature error bound of Im G_xx
        error_zz (float): quadrature error bound of Im G_zz
    """

    xx: complex
    zz: complex
    error_xx: float = 0.0
    error_zz: float = 0.0

    def tensor(self) -> np.ndarray:
        """Im G as a 3x3 tensor"""
        return np.diag([self.xx.imag, self.xx.imag, self.zz.imag])

    def component(self, orientation: Orientation) -> float:
        """Im G projected on a dipole orientation"""
        if orientation == "horizontal":
            return self.xx.imag
        if orientation == "vertical":
            return self.zz.imag
        raise ValidationError(
            f"orientation must be horizontal or vertical, got {orientation!r}"
        )

    def error(self, orientation: Orientation) -> float:
        """quadrature error bound of the projected Im G"""
        return self.error_xx if orientation == "horizontal" else self.error_zz


def _resonance_angles(cavity: PlanarCavity, omega: float, k: float) -> list[float]:
    """propagating angles of the multiple reflection resonances"""
    angles = []
    medium = cavity.cavity_medium
    for polarization in ("TE", "TM"):
        product = cavity.bottom.reflection(polarization, medium, omega, 0.0) * (
            cavity.top.reflection(polarization, medium, omega, 0.0)
        )
        phase = np.angle(product) if abs(product) > 0 else 0.0
        orders = np.arange(0, int(np.ceil(k * cavity.d / np.pi)) + 2)
        kz = (2.0 * np.pi * orders - phase) / (2.0 * cavity.d)
        kz = kz[(kz > 0) & (kz < k)]
        angles.extend(np.arccos(kz / k).tolist())
    return sorted(set(a for a in angles if 0 < a < np.pi / 2))


def _quad(
    integrand: Callable[[float], float],
    upper: float,
    points: Optional[Sequence[float]],
    label: str,
    epsrel: float,
) -> tuple[float, float]:
    """adaptive quadrature with convergence checks"""
    value, error = integrate.quad(
        integrand,
        0.0,
        upper,
        epsabs=0.0,
        epsrel=epsrel,
        limit=QUAD_LIMIT,
        points=points or None,
    )
    tolerance = max(epsrel * abs(value), 1e-300)
    if error > 10.0 * tolerance and error > 1e-12:
        raise QuadratureError(f"{label} quadrature did not converge", value, error)
    if error > tolerance and error > 1e-12:
        logger.warning("%s quadrature error %.3e above tolerance", label, error)
    logger.debug("%s = %.6e +- %.1e", label, value, error)
    return value, error


def dgf_diagonal(
    cavity: PlanarCavity, omega: float, epsrel: float = QUAD_EPSREL
) -> GreenDiagonal:
    """Green's function diagonal at the emitter from the angular spectrum

    Note:
        - the free space part k / 6 pi is added analytically and only R - 1 is
            integrated.
        - propagating sector: q = k sin(theta); evanescent sector: q = k cosh(u),
            cut where exp(-2 kappa min(t, b)) < 1e-12.

    Args:
        cavity (PlanarCavity): cavity
        omega (float): angular frequency, atomic units
        epsrel (float, optional): quadrature relative tolerance. Defaults to 1e-6.

    Raises:
        ValidationError: non positive frequency
        QuadratureError: quadrature did not converge

    Returns:
        GreenDiagonal: imaginary parts of G_xx and G_zz
    """
    if not omega > 0:
        raise ValidationError("angular frequency must be positive")
    k = cavity.wavenumber(omega)
    u_max = np.arcsinh(
        np.log(1.0 / EVANESCENT_ENVELOPE) / (2.0 * k * min(cavity.t, cavity.b))
    )
    points = _resonance_angles(cavity, omega, k)

    def propagating(theta: float) -> tuple:
        return reflection_functions(cavity, omega, k * np.sin(theta))

    def evanescent(u: float) -> tuple:
        return reflection_functions(cavity, omega, k * np.cosh(u))

    # integrals in units of k (TE) and k^3 (TM), normalised to k / 6 pi below
    par_te_prop, err_1 = _quad(
        lambda x: np.sin(x) * np.real(propagating(x)[1] - 1.0),
        np.pi / 2,
        points,
        "TE parallel propagating",
        epsrel,
    )
    par_te_evan, err_2 = _quad(
        lambda x: np.cosh(x) * np.imag(evanescent(x)[1] - 1.0),
        u_max,
        None,
        "TE parallel evanescent",
        epsrel,
    )
    par_tm_prop, err_3 = _quad(
        lambda x: np.sin(x) * np.cos(x) ** 2 * np.real(propagating(x)[2] - 1.0),
        np.pi / 2,
        points,
        "TM parallel propagating",
        epsrel,
    )
    par_tm_evan, err_4 = _quad(
        lambda x: -np.cosh(x) * np.sinh(x) ** 2 * np.imag(evanescent(x)[2] - 1.0),
        u_max,
        None,
        "TM parallel evanescent",
        epsrel,
    )
    perp_prop, err_5 = _quad(
        lambda x: np.sin(x) ** 3 * np.real(propagating(x)[0] - 1.0),
        np.pi / 2,
        points,
        "TM perpendicular propagating",
        epsrel,
    )
    perp_evan, err_6 = _quad(
        lambda x: np.cosh(x) ** 3 * np.imag(evanescent(x)[0] - 1.0),
        u_max,
        None,
        "TM perpendicular evanescent",
        epsrel,
    )

    free = k / (6.0 * np.pi)
    horizontal = 1.0 + 0.75 * (par_te_prop + par_te_evan + par_tm_prop + par_tm_evan)
    vertical = 1.0 + 1.5 * (perp_prop + perp_evan)

    return GreenDiagonal(
        xx=1j * free * horizontal,
        zz=1j * free * vertical,
        error_xx=0.75 * free * (err_1 + err_2 + err_3 + err_4),
        error_zz=1.5 * free * (err_5 + err_6),
    )


def purcell_planar_estimate(
    cavity: PlanarCavity,
    omega: float,
    orientation: Orientation,
    epsrel: float = QUAD_EPSREL,
) -> tuple[float, float]:
    """Purcell enhancement with its quadrature error bound

    Args:
        cavity (PlanarCavity): cavity
        omega (float): angular frequency, atomic units
        orientation (Orientation): horizontal or vertical dipole
        epsrel (float, optional): quadrature relative tolerance. Defaults to 1e-6.

    Returns:
        tuple[float, float]: Purcell enhancement and its absolute error bound
    """
    green = dgf_diagonal(cavity, omega, epsrel)
    reference = cavity.wavenumber(omega) / (6.0 * np.pi)
    value = max(green.component(orientation), 0.0) / reference
    return value, green.error(orientation) / reference


def purcell_planar(
    cavity: PlanarCavity,
    omega: float,
    orientation: Orientation,
    epsrel: float = QUAD_EPSREL,
) -> float:
    """Purcell enhancement relative to the unbounded cavity medium

    Args:
        cavity (PlanarCavity): cavity
        omega (float): angular frequency, atomic units
        orientation (Orientation): horizontal or vertical dipole
        epsrel (float, optional): quadrature relative tolerance. Defaults to 1e-6.

    Returns:
        float: Purcell enhancement
    """
    return purcell_planar_estimate(cavity, omega, orientation, epsrel)[0]


def ldos(cavity: PlanarCavity, omega: float, orientation: Orientation) -> float:
    """orientation projected local density of states

    Args:
        cavity (PlanarCavity): cavity
        omega (float): angular frequency, atomic units
        orientation (Orientation): horizontal or vertical dipole

    Returns:
        float: (6 omega / pi c^2) n.Im G.n
    """
    green = dgf_diagonal(cavity, omega)
    return 6.0 * omega / (np.pi * SPEED_OF_LIGHT**2) * green.component(orientation)


def sweep_mirror_distance(
    cavity_factory: Callable[[float, float], PlanarCavity],
    omega: float,
    d_over_lambda: np.ndarray,
    position: float = 0.5,
    epsrel: float = QUAD_EPSREL,
) -> dict[str, np.ndarray]:
    """Purcell enhancement against mirror spacing at fixed frequency

    Args:
        cavity_factory (Callable[[float, float], PlanarCavity]): (t, b) -> cavity
        omega (float): angular frequency, atomic units
        d_over_lambda (np.ndarray): spacings in units of the vacuum wavelength
        position (float, optional): emitter height b / d. Defaults to 0.5 (centred).
        epsrel (float, optional): quadrature relative tolerance. Defaults to 1e-6.

    Raises:
        ValidationError: emitter position outside the cavity
        QuadratureError: failing sweep point, named in the message

    Returns:
        dict[str, np.ndarray]: d_over_lambda0, purcell_horizontal, purcell_vertical
    """
    if not 0.0 < position < 1.0:
        raise ValidationError(f"emitter position must lie in (0, 1), got {position}")
    ratios = np.asarray(d_over_lambda, dtype=float)
    wavelength = energy_to_wavelength(omega)

    horizontal = np.zeros_like(ratios)
    vertical = np.zeros_like(ratios)
    for i, ratio in enumerate(ratios):
        d = ratio * wavelength
        cavity = cavity_factory((1.0 - position) * d, position * d)
        try:
            horizontal[i] = purcell_planar(cavity, omega, "horizontal", epsrel)
            vertical[i] = purcell_planar(cavity, omega, "vertical", epsrel)
        except QuadratureError as err:
            raise QuadratureError(
                f"sweep point d/lambda0 = {ratio:.6f}: {err.reason}",
                err.estimate,
                err.error_bound,
            ) from err

    logger.info("planar sweep over %d spacings done", ratios.size)
    return {
        "d_over_lambda0": ratios,
        "purcell_horizontal": horizontal,
        "purcell_vertical": vertical,
    }
