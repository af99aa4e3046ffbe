# !/usr/bin/env python3

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.cavity.materials import DAMPING_FRACTIONS, Constant, Vacuum, gold
from src.cavity.spherical import (
    ResonancePeak,
    SphericalCavity,
    coupling_strength,
    find_resonances,
    im_dgf_center,
    im_dgf_tensor,
    mode_structure,
    purcell_center,
    reflection_coefficient_n1,
    tune_radius,
    vacuum_coupling_strength,
)
from src.utils.errors import BracketingError, ValidationError
from src.utils.tables import read_table
from src.utils.units import SPEED_OF_LIGHT, ev, from_internal, nm

DENSITY = 20.0 / ev(1e-3)


def test_vacuum_shell_is_reflectionless():
    omega = ev(np.linspace(1.0, 12.0, 1101))
    cavity = SphericalCavity(nm(50.0), Vacuum())
    np.testing.assert_allclose(purcell_center(cavity, omega), 1.0, atol=1e-6)
    np.testing.assert_array_equal(reflection_coefficient_n1(cavity, omega), 0.0)


def test_vacuum_coupling():
    cavity = SphericalCavity(nm(20.0), Vacuum())
    omega = ev(np.array([2.0, 6.808]))
    np.testing.assert_allclose(coupling_strength(cavity, omega), vacuum_coupling_strength(omega))


def test_coupling_formula(gold_shell):
    cavity = SphericalCavity(nm(16.0), gold_shell)
    omega = ev(6.5)
    purcell = purcell_center(cavity, omega)
    expected = 2.0 * omega / SPEED_OF_LIGHT * np.sqrt(purcell / (3.0 * np.pi * SPEED_OF_LIGHT))
    assert coupling_strength(cavity, omega) == pytest.approx(expected)


def test_im_dgf(gold_shell):
    cavity = SphericalCavity(nm(16.0), gold_shell)
    omega = ev(6.7)
    center = im_dgf_center(cavity, omega)
    assert center == pytest.approx(omega / (6.0 * np.pi * SPEED_OF_LIGHT) * purcell_center(cavity, omega))
    np.testing.assert_allclose(im_dgf_tensor(cavity, omega), center * np.eye(3))


@settings(deadline=None, max_examples=50)
@given(
    st.floats(min_value=5.0, max_value=200.0),
    st.floats(min_value=1.0, max_value=12.0),
    st.sampled_from(DAMPING_FRACTIONS),
)
def test_gold_passive(radius_nm, energy, fraction):
    assert purcell_center(SphericalCavity(nm(radius_nm), gold(fraction)), ev(energy)) >= 0.0


def test_scalar_and_array_agree(gold_shell):
    cavity = SphericalCavity(nm(30.0), gold_shell)
    grid = ev(np.linspace(5.0, 8.0, 5))
    values = purcell_center(cavity, grid)
    for omega, value in zip(grid, values):
        assert purcell_center(cavity, omega) == pytest.approx(value)


def test_mode_structure_keys(gold_shell):
    scan = mode_structure(SphericalCavity(nm(16.0), gold_shell), ev(np.linspace(6.0, 7.0, 11)))
    assert set(scan) == {"omega", "purcell", "coupling"}
    assert scan["purcell"].shape == (11,)


def test_invalid_cavity(gold_shell):
    with pytest.raises(ValidationError):
        SphericalCavity(0.0, gold_shell)
    with pytest.raises(ValidationError):
        SphericalCavity(nm(10.0), gold_shell, inner=Constant(2.0))


def test_resonance_peak_region():
    peak = ResonancePeak(center=1.0, fwhm=0.1, integrated_weight=1e-3, purcell=10.0)
    assert peak.region == pytest.approx((0.85, 1.15))
    assert peak.summary()["center_eV"] == pytest.approx(from_internal(1.0, "eV"))
    with pytest.raises(ValidationError):
        ResonancePeak(center=1.0, fwhm=0.0, integrated_weight=1.0)


def test_no_resonance_in_vacuum(tmp_path):
    table = tmp_path / "modes.csv"
    peaks = find_resonances(
        SphericalCavity(nm(16.0), Vacuum()), ev(5.0), ev(9.0), 1.0 / ev(1e-3), table=table
    )
    assert peaks == []
    np.testing.assert_allclose(read_table(table)["purcell"], 1.0)


def test_find_resonances_window():
    with pytest.raises(ValidationError):
        find_resonances(SphericalCavity(nm(16.0), gold()), ev(7.0), ev(6.0), DENSITY)


def test_quasi_static_resonance(gold_shell):
    # small voids resonate where eps = -1/2
    peaks = find_resonances(SphericalCavity(nm(3.0), gold_shell), ev(6.3), ev(7.5), DENSITY)
    assert len(peaks) == 1
    assert from_internal(peaks[0].center, "eV") == pytest.approx(8.5 / np.sqrt(1.5), abs=0.05)
    assert peaks[0].purcell > 100


def test_linewidth_grows_with_damping():
    widths = []
    for fraction in sorted(DAMPING_FRACTIONS):
        cavity = SphericalCavity(nm(140.0), gold(fraction))
        peaks = find_resonances(cavity, ev(6.9), ev(7.3), DENSITY)
        nearest = min(peaks, key=lambda peak: abs(peak.center - ev(7.1)))
        assert abs(from_internal(nearest.center, "eV") - 7.1) <= 0.2
        widths.append(nearest.fwhm)
    assert np.all(np.diff(widths) > 0)


def test_no_resonance_above_plasma_frequency(gold_shell):
    for radius in (14.0, 140.0):
        cavity = SphericalCavity(nm(radius), gold_shell)
        assert find_resonances(cavity, ev(9.0), ev(12.0), 1.0 / ev(1e-3)) == []


def test_tune_radius():
    radius = tune_radius(gold(), ev(6.808), (nm(10.0), nm(20.0)))
    assert 13.0 < from_internal(radius, "nm") < 19.0

    peaks = find_resonances(SphericalCavity(radius, gold()), ev(6.5), ev(7.1), DENSITY)
    nearest = min(peaks, key=lambda peak: abs(peak.center - ev(6.808)))
    assert abs(from_internal(nearest.center, "eV") - 6.808) < 2e-3
    assert 1750 < nearest.purcell < 7000


def test_tune_radius_no_crossing():
    with pytest.raises(BracketingError) as info:
        tune_radius(gold(), ev(6.808), (nm(2.0), nm(3.0)), scan_points=5)
    assert info.value.lower_centers
    assert all(center > 6.808 for center in info.value.lower_centers)


def test_tune_radius_bracket():
    with pytest.raises(ValidationError):
        tune_radius(gold(), ev(6.808), (nm(20.0), nm(10.0)))


@pytest.mark.slow
def test_large_gold_cavity():
    cavity = SphericalCavity(nm(140.0), gold())
    peaks = find_resonances(cavity, ev(5.0), ev(9.0), 10.0 / ev(1e-3))
    centers = [from_internal(peak.center, "eV") for peak in peaks]
    assert any(abs(center - 7.1) <= 0.2 for center in centers)
