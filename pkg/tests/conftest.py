# !/usr/bin/env python3

from pathlib import Path

import numpy as np
import pytest

from src.cavity.materials import Drude, gold
from src.polariton.matter import MatterSystem, Transition
from src.utils.units import ev
from src.utils.utils import set_seed


@pytest.fixture(autouse=True)
def fixed_seed() -> None:
    set_seed(0)


@pytest.fixture
def gold_shell() -> Drude:
    return gold()


@pytest.fixture
def benzene_like() -> MatterSystem:
    """one 6.808 eV transition with |d| = 2.5 a.u. along x"""
    return MatterSystem((Transition("benzene", ev(6.808), np.array([2.5, 0.0, 0.0])),))


def lorentzian(center: float, width: float, amplitude: float):
    """isotropic coupling magnitude with a Lorentzian weight lambda^2"""

    def coupling(omega: np.ndarray) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        weight = amplitude * (0.5 * width) ** 2 / ((omega - center) ** 2 + (0.5 * width) ** 2)
        return np.sqrt(weight)

    return coupling


@pytest.fixture
def lorentzian_coupling():
    return lorentzian


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    path = tmp_path / "outputs"
    path.mkdir()
    return path
