# !/usr/bin/env python3

import numpy as np
import pytest
from scipy import integrate

from src.polariton.photon_grid import PhotonModeSet, convergence_check, discretize, export
from src.utils.errors import ValidationError
from src.utils.tables import read_table
from src.utils.units import from_internal


def test_midpoint_grid():
    modes = discretize(lambda omega: np.full(omega.shape, 2.0), (1.0, 2.0), 10.0)
    assert modes.frequencies.size == 10
    assert modes.spacing == pytest.approx(0.1)
    np.testing.assert_allclose(modes.frequencies, 1.05 + 0.1 * np.arange(10))
    np.testing.assert_allclose(modes.couplings[:, 0], 2.0 * np.sqrt(0.1) * np.array([1.0, 0.0, 0.0]))
    assert modes.window == (1.0, 2.0)


def test_count_rounds_to_nearest():
    modes = discretize(lambda omega: np.ones(omega.shape), (1.0, 2.0), 10.4)
    assert modes.frequencies.size == 10
    assert modes.spacing * modes.frequencies.size == pytest.approx(1.0)
    assert modes.spacing == pytest.approx(1.0 / 10.4, rel=1.0 / (2 * modes.frequencies.size))

    narrow = discretize(lambda omega: np.ones(omega.shape), (1.0, 1.01), 10.0)
    assert narrow.frequencies.size == 1
    assert narrow.spacing == pytest.approx(0.01)


def test_orientation_layout():
    axes = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    modes = discretize(lambda omega: np.ones(omega.shape), (1.0, 1.5), 4.0, orientations=axes)
    assert modes.orientation_count == 2
    assert modes.size == 4
    np.testing.assert_allclose(modes.omega, np.repeat(modes.frequencies, 2))
    np.testing.assert_allclose(modes.vectors[1], np.sqrt(modes.spacing) * axes[1])


def test_vector_coupling():
    def coupling(omega):
        vectors = np.zeros((omega.size, 2, 3))
        vectors[:, 0, 0] = omega
        vectors[:, 1, 1] = 2.0 * omega
        return vectors

    modes = discretize(coupling, (1.0, 2.0), 5.0)
    assert modes.couplings.shape == (5, 2, 3)
    np.testing.assert_allclose(modes.couplings[:, 1, 1], 2.0 * np.sqrt(0.2) * modes.frequencies)


def test_spectral_weight_matches_quadrature(lorentzian_coupling):
    coupling = lorentzian_coupling(1.0, 0.1, 1e-3)
    modes = discretize(coupling, (0.5, 1.5), 500.0)
    reference, _ = integrate.quad(lambda omega: 3.0 * coupling(omega) ** 2, 0.5, 1.5, points=[1.0])
    assert modes.spectral_weight() == pytest.approx(reference, rel=1e-4)


@pytest.mark.parametrize(
    "window, density",
    [((0.0, 1.0), 10.0), ((2.0, 1.0), 10.0), ((1.0, 2.0), 0.0)],
)
def test_invalid_grid(window, density):
    with pytest.raises(ValidationError):
        discretize(lambda omega: np.ones(omega.shape), window, density)


def test_non_uniform_modes():
    with pytest.raises(ValidationError):
        PhotonModeSet(np.array([1.0, 1.1, 1.3]), np.zeros((3, 1, 3)), 0.1, (0.95, 1.35))
    with pytest.raises(ValidationError):
        PhotonModeSet(np.array([1.0, 1.1]), np.zeros((2, 3)), 0.1, (0.95, 1.15))


def test_convergence_check():
    fine, difference = convergence_check(lambda density: 1.0 / density, 10.0)
    assert fine == pytest.approx(0.05)
    assert difference == pytest.approx(0.05)


def test_export(tmp_path):
    modes = discretize(lambda omega: np.ones(omega.shape), (0.2, 0.3), 100.0)
    path = export(modes, tmp_path / "photon_modes.csv", {"density": 100.0}, timestamp=False)
    table = read_table(path)
    assert list(table) == ["omega_eV", "lambda_x", "lambda_y", "lambda_z"]
    assert table["omega_eV"].size == modes.size
    np.testing.assert_allclose(table["omega_eV"], from_internal(modes.omega, "eV"), rtol=1e-9)

    header = path.read_text().splitlines()[:2]
    assert header[0].startswith("# spacing_eV: ")
    assert header[1] == "# density: 100.0"
