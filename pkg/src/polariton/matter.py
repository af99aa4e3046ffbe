# !/usr/bin/env python3

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from src.utils.errors import TransitionParseError, ValidationError
from src.utils.units import ev, from_internal
from src.utils.utils import atomic_write_text

logger = logging.getLogger(__name__)

BENZENE_ENERGY_EV = 6.808
TRANSITION_HEADER = "# label, energy [eV], d_x, d_y, d_z [atomic units]"


@dataclass(frozen=True, eq=False)
class Transition:
    """electronic pair transition

    Attributes:
        label (str): transition name
        energy (float): excitation energy, atomic units
        dipole (np.ndarray): transition dipole, atomic units
    """

    label: str
    energy: float
    dipole: np.ndarray

    def __post_init__(self) -> None:
        dipole = np.asarray(self.dipole, dtype=float)
        if dipole.shape != (3,):
            raise ValidationError(f"transition dipole must be a 3-vector, got {dipole.shape}")
        if not self.energy > 0:
            raise ValidationError(f"transition energy must be positive, got {self.energy}")
        object.__setattr__(self, "dipole", dipole)


@dataclass(frozen=True)
class MatterSystem:
    """transitions of all emitters at the emitter point

    Attributes:
        transitions (tuple[Transition, ...]): ordered transitions
        replication_count (int): identical copies folded into `transitions`
    """

    transitions: tuple[Transition, ...]
    replication_count: int = 1

    def __post_init__(self) -> None:
        if len(self.transitions) == 0:
            raise ValidationError("matter system needs at least one transition")
        if self.replication_count < 1:
            raise ValidationError("replication count must be >= 1")
        object.__setattr__(self, "transitions", tuple(self.transitions))

    @property
    def size(self) -> int:
        return len(self.transitions)

    @property
    def energies(self) -> np.ndarray:
        """excitation energies, shape (S,)"""
        return np.array([transition.energy for transition in self.transitions])

    @property
    def dipoles(self) -> np.ndarray:
        """transition dipoles, shape (S, 3)"""
        return np.stack([transition.dipole for transition in self.transitions])

    @property
    def labels(self) -> list[str]:
        return [transition.label for transition in self.transitions]


def _parse_row(row: list[str], line_number: int) -> Transition:
    if len(row) != 5:
        raise TransitionParseError(
            f"expected 5 fields (label, energy, d_x, d_y, d_z), got {len(row)}", line_number
        )
    label = row[0].strip()
    try:
        energy_eV = float(row[1])
        dipole = np.array([float(value) for value in row[2:]])
    except ValueError as err:
        raise TransitionParseError(f"non numeric field: {err}", line_number) from err
    if not energy_eV > 0:
        raise ValidationError(f"line {line_number}: transition energy must be positive")

    return Transition(label, ev(energy_eV), dipole)


def load_transitions(path: Path | str) -> MatterSystem:
    """read a transition file

    Note:
        - rows: label, energy (eV), d_x, d_y, d_z (atomic units); '#' starts a
            comment line, blank lines are skipped.

    Args:
        path (Path | str): transition file

    Raises:
        TransitionParseError: malformed row
        ValidationError: non positive energy or no transitions

    Returns:
        MatterSystem: transitions in file order
    """
    transitions = []
    with open(path, encoding="utf-8", newline="") as stream:
        for line_number, line in enumerate(stream, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            row = next(csv.reader([line], skipinitialspace=True))
            transitions.append(_parse_row(row, line_number))

    if not transitions:
        raise ValidationError(f"no transitions in {path}")
    logger.info("loaded %d transitions from %s", len(transitions), path)

    return MatterSystem(tuple(transitions))


def save_transitions(system: MatterSystem, path: Path | str) -> Path:
    """write a transition file readable by load_transitions

    Args:
        system (MatterSystem): matter system
        path (Path | str): destination

    Returns:
        Path: destination
    """
    lines = [TRANSITION_HEADER]
    for transition in system.transitions:
        values = [from_internal(transition.energy, "eV"), *transition.dipole]
        lines.append(", ".join([transition.label] + [repr(float(v)) for v in values]))

    return atomic_write_text(Path(path), "\n".join(lines) + "\n")


def replicate(system: MatterSystem, count: int) -> MatterSystem:
    """identical copies of every transition at the emitter point

    Args:
        system (MatterSystem): matter system
        count (int): number of copies N >= 1

    Raises:
        ValidationError: N < 1

    Returns:
        MatterSystem: N x S transitions with suffixed labels
    """
    if count < 1:
        raise ValidationError(f"replication count must be >= 1, got {count}")
    if count == 1:
        return system

    copies = tuple(
        Transition(f"{transition.label}#{i}", transition.energy, transition.dipole)
        for i in range(count)
        for transition in system.transitions
    )
    return MatterSystem(copies, system.replication_count * count)


def bare_oscillator_strengths(system: MatterSystem) -> np.ndarray:
    """dipole oscillator strengths f_S = (2/3) eps_S |d_S|^2

    Args:
        system (MatterSystem): matter system

    Returns:
        np.ndarray: oscillator strengths, shape (S,)
    """
    return 2.0 / 3.0 * system.energies * np.sum(system.dipoles**2, axis=1)


"""
Presets
"""


def _dipole_vector(dipole: float | Sequence[float], axis: Sequence[float]) -> np.ndarray:
    if np.ndim(dipole) == 0:
        direction = np.asarray(axis, dtype=float)
        return float(dipole) * direction / np.linalg.norm(direction)
    return np.asarray(dipole, dtype=float)


def benzene(
    dipole: float | Sequence[float], axis: Sequence[float] = (1.0, 0.0, 0.0)
) -> MatterSystem:
    """single pi -> pi* transition at 6.808 eV

    Args:
        dipole (float | Sequence[float]): dipole magnitude or vector, atomic units
        axis (Sequence[float], optional): dipole direction for a magnitude.
            Defaults to x.

    Returns:
        MatterSystem: one transition
    """
    return MatterSystem(
        (Transition("pi-pistar", ev(BENZENE_ENERGY_EV), _dipole_vector(dipole, axis)),)
    )


def acene_family(
    ring_counts: Sequence[int],
    energy_eV: float,
    energy_step_eV: float,
    dipole: float,
    dipole_step: float,
    axis: Sequence[float] = (1.0, 0.0, 0.0),
) -> list[MatterSystem]:
    """linear acene like family with redshifting energy and growing dipole

    Note:
        - ring count n: eps_n = eps_1 - (n - 1) step_eps, |d_n| = d_1 + (n - 1) step_d

    Args:
        ring_counts (Sequence[int]): ring counts n >= 1
        energy_eV (float): one ring excitation energy, eV
        energy_step_eV (float): redshift per added ring, eV
        dipole (float): one ring dipole magnitude, atomic units
        dipole_step (float): dipole growth per added ring, atomic units
        axis (Sequence[float], optional): dipole direction. Defaults to x.

    Raises:
        ValidationError: non positive ring count or energy

    Returns:
        list[MatterSystem]: one single transition system per ring count
    """
    family = []
    for rings in ring_counts:
        if rings < 1:
            raise ValidationError(f"ring count must be >= 1, got {rings}")
        energy = energy_eV - (rings - 1) * energy_step_eV
        magnitude = dipole + (rings - 1) * dipole_step
        if not energy > 0:
            raise ValidationError(f"{rings} rings: excitation energy {energy} eV <= 0")
        family.append(
            MatterSystem(
                (Transition(f"acene-{rings}", ev(energy), _dipole_vector(magnitude, axis)),)
            )
        )
    return family
