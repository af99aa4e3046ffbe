# !/usr/bin/env python3

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from src.cavity.emitter import EmitterConfig, coupling_provider
from src.cavity.materials import gold
from src.cavity.spherical import ResonancePeak, SphericalCavity, im_dgf_tensor, tune_radius
from src.polariton.analysis import (
    CouplingReport,
    coupling_report,
    effective_coupling,
    extract_purcell_from_spectrum,
    extract_rabi_splitting,
    polariton_peaks,
    spectrum_fwhm,
)
from src.polariton.matter import MatterSystem, replicate
from src.polariton.photon_grid import discretize
from src.polariton.solver import Spectrum, build_matrix, oscillator_strengths, solve, strength_function
from src.utils.errors import ValidationError
from src.utils.units import ev, nm

BIN = ev(1e-3)
ORIGIN = ev(6.0)


def binned(values) -> Spectrum:
    values = np.asarray(values, dtype=float)
    centers = ORIGIN + (np.arange(values.size) + 0.5) * BIN
    return Spectrum(centers, values, BIN, ORIGIN)


@given(
    st.integers(min_value=0, max_value=60),
    st.integers(min_value=2, max_value=60),
    st.floats(min_value=0.2, max_value=1.0),
    st.floats(min_value=0.2, max_value=1.0),
)
def test_rabi_two_deltas(first, gap, low, high):
    values = np.zeros(130)
    values[first] = low
    values[first + gap] = high
    assert extract_rabi_splitting(binned(values)) == pytest.approx(gap * BIN)


@given(st.integers(min_value=0, max_value=20), st.integers(min_value=3, max_value=20))
def test_rabi_ignores_weak_peaks(first, gap):
    second = first + gap
    third = second + gap
    assume(third < 70)
    values = np.zeros(70)
    values[[first, second, third]] = [1.0, 0.8, 0.05]
    assert extract_rabi_splitting(binned(values)) == pytest.approx(gap * BIN)


def test_rabi_single_peak():
    assert extract_rabi_splitting(binned([0.0, 0.5, 1.0, 0.5, 0.0])) is None
    assert extract_rabi_splitting(binned(np.zeros(5))) is None


def test_rabi_search_window():
    values = np.zeros(100)
    values[[10, 50, 60]] = [1.0, 0.9, 0.8]
    spectrum = binned(values)
    transition = spectrum.centers[55]
    assert extract_rabi_splitting(spectrum) == pytest.approx(40 * BIN)
    assert extract_rabi_splitting(spectrum, transition=transition, search_width=10 * BIN) == (
        pytest.approx(10 * BIN)
    )
    np.testing.assert_allclose(
        polariton_peaks(spectrum, transition=transition, search_width=10 * BIN),
        spectrum.centers[[50, 60]],
    )
    assert polariton_peaks(binned([0.0, 1.0, 0.0])).size == 1


def test_rabi_refines_centres():
    values = np.zeros(40)
    values[9:12] = [0.5, 1.0, 0.5]
    values[29:32] = [0.5, 1.0, 1.0]
    assert extract_rabi_splitting(binned(values)) == pytest.approx(20.5 * BIN)


def test_fwhm():
    assert spectrum_fwhm(binned([0.0, 0.5, 1.0, 0.5, 0.0])) == pytest.approx(2 * BIN)
    assert spectrum_fwhm(binned([0.0, 1.0, 0.0])) == pytest.approx(BIN)
    with pytest.raises(ValidationError):
        spectrum_fwhm(binned(np.zeros(3)))


def test_purcell_from_triangles():
    narrow = binned([0.0, 0.5, 1.0, 0.5, 0.0])
    wide = binned(1.0 - np.abs(np.arange(-4, 5)) / 4.0)
    assert spectrum_fwhm(wide) == pytest.approx(4 * BIN)
    assert extract_purcell_from_spectrum(wide, narrow) == pytest.approx(2.0)


def test_purcell_rejects_split_spectra():
    values = np.zeros(20)
    values[[3, 15]] = 1.0
    with pytest.raises(ValidationError, match="extract_rabi_splitting"):
        extract_purcell_from_spectrum(binned(values), binned([0.0, 1.0, 0.0]))


def test_effective_coupling_constant():
    peak = ResonancePeak(ev(6.8), ev(0.1), 1.0, purcell=50.0)
    magnitude = 1e-3
    lambda_c, g_eff = effective_coupling(peak, lambda omega: np.full(omega.shape, magnitude), [2.0, 0, 0])
    assert lambda_c == pytest.approx(magnitude * np.sqrt(3.0 * ev(0.1)))
    assert g_eff == pytest.approx(np.sqrt(ev(6.8)) * lambda_c * 2.0)

    _, doubled = effective_coupling(peak, lambda omega: np.full(omega.shape, magnitude), [4.0, 0, 0])
    assert doubled == pytest.approx(2.0 * g_eff)


def test_effective_coupling_directional():
    peak = ResonancePeak(ev(6.8), ev(0.1), 1.0)

    def along_z(omega):
        vectors = np.zeros((omega.size, 1, 3))
        vectors[:, 0, 2] = 1e-3
        return vectors

    assert effective_coupling(peak, along_z, [1.0, 0.0, 0.0]) == (0.0, 0.0)
    assert effective_coupling(peak, along_z, [0.0, 0.0, 1.0])[0] > 0
    with pytest.raises(ValidationError):
        effective_coupling(peak, along_z, [0.0, 0.0, 0.0])


def test_coupling_report():
    peak = ResonancePeak(ev(6.8), ev(0.1), 1.0, purcell=50.0)
    report = coupling_report(peak, lambda omega: np.full(omega.shape, 1e-3), np.array([0.0, 3.0, 4.0]))
    assert report.dipole_norm == pytest.approx(5.0)
    assert report.purcell == 50.0
    assert "rabi_splitting_meV: absent" in report.block()

    row = CouplingReport(ev(6.8), 1e-3, 1e-4, 2.5, rabi_splitting=ev(0.1)).row()
    assert row[0] == pytest.approx(6.8)
    assert row[4] == pytest.approx(100.0)
    assert np.isnan(row[5])

    with pytest.raises(ValidationError):
        CouplingReport(ev(6.8), -1.0, 1e-4, 2.5)


def polariton_solution(matter: MatterSystem, coupling, density_per_meV: float = 2.0):
    modes = discretize(coupling, (ev(6.3), ev(7.3)), density_per_meV / ev(1e-3))
    return modes, solve(build_matrix(matter, modes, compress=True))


def polariton_spectrum(matter: MatterSystem, coupling, density_per_meV: float = 2.0) -> Spectrum:
    modes, solution = polariton_solution(matter, coupling, density_per_meV)
    return strength_function(solution, oscillator_strengths(solution, matter), modes.spacing)


def flat(weight: float):
    return lambda omega: np.full(omega.shape, np.sqrt(weight))


def lorentzian_amplitude(splitting: float, width: float, dipole: float) -> float:
    """peak weight of a Lorentzian coupling giving a resonant splitting"""
    lambda_c = splitting / (np.sqrt(2.0 * ev(6.808)) * dipole)
    return lambda_c**2 / (np.pi * 0.5 * width)


@pytest.mark.slow
def test_purcell_from_flat_continuum(benzene_like):
    # FWHM = pi omega lambda^2 |d|^2 set to 20 meV for the reference
    weight = ev(0.02) / (np.pi * ev(6.808) * 2.5**2)
    reference = polariton_spectrum(benzene_like, flat(weight))
    cavity = polariton_spectrum(benzene_like, flat(3.0 * weight))

    assert spectrum_fwhm(reference) == pytest.approx(ev(0.02), rel=0.1)
    assert extract_purcell_from_spectrum(cavity, reference) == pytest.approx(3.0, rel=0.1)


@pytest.mark.slow
def test_strong_and_weak_coupling(benzene_like, lorentzian_coupling):
    width = ev(0.02)
    strong = lorentzian_coupling(ev(6.808), width, lorentzian_amplitude(ev(0.2), width, 2.5))
    weak = lorentzian_coupling(ev(6.808), width, lorentzian_amplitude(ev(0.0005), width, 2.5))

    assert extract_rabi_splitting(polariton_spectrum(benzene_like, strong)) == pytest.approx(
        ev(0.2), rel=0.1
    )
    assert extract_rabi_splitting(polariton_spectrum(benzene_like, weak)) is None


@pytest.mark.slow
def test_gold_cavity_doublet_appears_with_lower_damping(benzene_like):
    radius = tune_radius(gold(), ev(6.808), (nm(10.0), nm(20.0)))
    splittings = {}
    for fraction in (1.0, 0.25):
        cavity = SphericalCavity(radius, gold(fraction))
        coupling = coupling_provider(
            lambda omega, cavity=cavity: im_dgf_tensor(cavity, omega), EmitterConfig()
        )
        splittings[fraction] = extract_rabi_splitting(
            polariton_spectrum(benzene_like, coupling), transition=ev(6.808), search_width=ev(0.1)
        )

    assert splittings[1.0] is None
    assert splittings[0.25] is not None
    assert ev(0.002) < splittings[0.25] < ev(0.03)


@pytest.mark.slow
@pytest.mark.parametrize("count", [1, 2, 3, 4])
def test_collective_scaling(benzene_like, lorentzian_coupling, count):
    width = ev(0.02)
    coupling = lorentzian_coupling(ev(6.808), width, lorentzian_amplitude(ev(0.1), width, 2.5))
    single = extract_rabi_splitting(polariton_spectrum(benzene_like, coupling))
    collective = extract_rabi_splitting(polariton_spectrum(replicate(benzene_like, count), coupling))

    assert collective / single == pytest.approx(np.sqrt(count), rel=0.05)


@pytest.mark.slow
def test_spectrum_converges_with_density(benzene_like, lorentzian_coupling):
    width = ev(0.02)
    coupling = lorentzian_coupling(ev(6.808), width, lorentzian_amplitude(ev(0.2), width, 2.5))
    lowest, lower_peaks, splittings = [], [], []
    # 1000 against 2000 modes across the window
    for density, size in ((1.0, 1000), (2.0, 2000)):
        modes, solution = polariton_solution(benzene_like, coupling, density)
        assert modes.size == size
        spectrum = strength_function(solution, oscillator_strengths(solution, benzene_like), modes.spacing)
        lowest.append(np.min(solution.frequencies))
        lower_peaks.append(polariton_peaks(spectrum)[0])
        splittings.append(extract_rabi_splitting(spectrum))

    assert lowest[1] == pytest.approx(lowest[0], rel=1e-3)
    assert lower_peaks[1] == pytest.approx(lower_peaks[0], rel=1e-3)
    assert splittings[1] == pytest.approx(splittings[0], abs=2 * ev(1e-3))
