# !/usr/bin/env python3

from pathlib import Path

import numpy as np
import pytest

from app import main
from src.app.cli import CliBuilder
from src.app.commands import COMMANDS, REPOSITORY_ROOT, SpectrumCommand, build_command
from src.app.config import RunConfig, load_config
from src.cavity.materials import gold, permittivity
from src.polariton.matter import benzene
from src.polariton.solver import Spectrum
from src.utils.tables import read_table
from src.utils.units import ev

PLANAR = """
geometry:
  planar:
    top: {kind: ideal, reflectivity: 0.95}
    bottom: {kind: ideal, reflectivity: 0.95}
    d_over_lambda: [0.2, 0.6]
    sweep_points: 3
"""

SMALL_SPHERE = """
geometry:
  spherical:
    radius_nm: 3.0
grid:
  window_eV: [6.8, 7.0]
  points_per_meV: 0.5
analysis:
  scan_eV: [6.5, 7.5]
"""


def write_config(tmp_path: Path, text: str, name: str = "run.yaml") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def run(*argv) -> int:
    return CliBuilder()([str(arg) for arg in argv])


def test_commands_registered():
    assert set(COMMANDS) == {"modes", "spectrum", "purcell-planar", "tune-radius", "geff", "materials"}
    with pytest.raises(ValueError):
        build_command("unknown")


def test_purcell_planar(tmp_path, out_dir, capsys):
    config = write_config(tmp_path, PLANAR)
    assert run("purcell-planar", "--config", config, "--out", out_dir) == 0

    table = read_table(out_dir / "purcell_planar.csv")
    np.testing.assert_allclose(table["d_over_lambda0"], [0.2, 0.4, 0.6])
    assert np.all(table["purcell_horizontal"] > 0)
    assert np.all(table["purcell_vertical"] > 0)
    assert (out_dir / "plot_purcell_planar.py").is_file()
    assert load_config(out_dir / "resolved_config.yaml").geometry.planar.sweep_points == 3
    assert "max purcell_horizontal" in capsys.readouterr().out


def test_no_timestamp_is_deterministic(tmp_path, out_dir):
    config = write_config(tmp_path, PLANAR)
    contents = []
    for _ in range(2):
        assert run("purcell-planar", "--config", config, "--out", out_dir, "--no-timestamp") == 0
        contents.append((out_dir / "purcell_planar.csv").read_bytes())
    assert contents[0] == contents[1]
    assert b"# generated:" not in contents[0]
    assert contents[0].startswith(b"# command: purcell-planar\n")


def test_timestamp_line(tmp_path, out_dir):
    config = write_config(tmp_path, PLANAR)
    assert run("purcell-planar", "--config", config, "--out", out_dir) == 0
    assert "# generated:" in (out_dir / "purcell_planar.csv").read_text()


def test_materials(tmp_path, out_dir):
    config = write_config(tmp_path, "geometry:\n  spherical: {}\n")
    assert run("materials", "--config", config, "--out", out_dir, "--density", 0.01) == 0

    table = read_table(out_dir / "materials.csv")
    assert table["omega_eV"].size == 41
    eps = permittivity(gold(), ev(table["omega_eV"]))
    np.testing.assert_allclose(table["eps_real"], np.real(eps), rtol=1e-9)
    np.testing.assert_allclose(table["eps_imag"], np.imag(eps), rtol=1e-9)
    assert np.all(table["n_imag"] >= 0)


def test_config_error_exit_code(tmp_path, out_dir, capsys):
    config = write_config(tmp_path, "geometry:\n  spherical: {}\ngrid:\n  points_per_meV: -1\n")
    assert run("materials", "--config", config, "--out", out_dir) == 2
    assert "grid.points_per_meV" in capsys.readouterr().err


def test_missing_geometry_exit_code(tmp_path, out_dir, capsys):
    config = write_config(tmp_path, PLANAR)
    assert run("modes", "--config", config, "--out", out_dir) == 2
    assert "geometry.spherical" in capsys.readouterr().err


def test_capacity_exit_code(tmp_path, out_dir, capsys):
    text = SMALL_SPHERE.replace("  points_per_meV: 0.5\n", "  points_per_meV: 0.5\n  capacity: 50\n")
    config = write_config(tmp_path, text)
    assert run("spectrum", "--config", config, "--out", out_dir) == 4
    assert "capacity" in capsys.readouterr().err


def test_modes(tmp_path, out_dir, capsys):
    config = write_config(tmp_path, SMALL_SPHERE)
    assert run("modes", "--config", config, "--out", out_dir, "--no-timestamp") == 0

    modes = read_table(out_dir / "modes.csv")
    assert modes["omega_eV"][0] == pytest.approx(6.5)
    assert np.max(modes["purcell"]) > 100

    peaks = (out_dir / "peaks.csv").read_text().splitlines()
    rows = [line for line in peaks if not line.startswith("#")]
    assert rows[0] == "center_eV,fwhm_meV,purcell,integrated_weight"
    assert len(rows) == 2
    assert float(rows[1].split(",")[0]) == pytest.approx(6.94, abs=0.05)

    photons = read_table(out_dir / "photon_modes.csv")
    assert photons["omega_eV"].size == 3 * 100
    assert (out_dir / "plot_modes.py").is_file()
    assert "peaks: 1" in capsys.readouterr().out


def test_main_entry(tmp_path, out_dir, monkeypatch):
    config = write_config(tmp_path, PLANAR)
    monkeypatch.setattr(
        "sys.argv", ["cavity-polariton", "purcell-planar", "--config", str(config), "--out", str(out_dir)]
    )
    assert main() == 0


def test_argument_errors():
    with pytest.raises(SystemExit) as info:
        run("unknown")
    assert info.value.code == 2


@pytest.mark.slow
def test_spectrum(tmp_path, out_dir, capsys):
    config = write_config(tmp_path, SMALL_SPHERE)
    assert run("spectrum", "--config", config, "--out", out_dir) == 0

    excitations = read_table(out_dir / "excitations.csv")
    bare = 2.0 / 3.0 * ev(6.808) * 2.5**2
    assert np.sum(excitations["oscillator_strength"]) == pytest.approx(bare, rel=1e-8)
    assert np.all((excitations["photonic_fraction"] >= 0) & (excitations["photonic_fraction"] <= 1 + 1e-12))

    spectrum = read_table(out_dir / "spectrum.csv")
    assert np.sum(spectrum["strength"]) == pytest.approx(bare, rel=1e-6)
    assert "rabi_splitting_meV" in capsys.readouterr().out


@pytest.mark.slow
def test_tune_radius(tmp_path, out_dir):
    config = write_config(
        tmp_path,
        "geometry:\n  spherical:\n    tune_target_eV: 6.808\n    radius_bracket_nm: [10.0, 20.0]\n",
    )
    assert run("tune-radius", "--config", config, "--out", out_dir, "--density", 1) == 0

    lines = (out_dir / "tune_radius.txt").read_text().splitlines()
    values = dict(line.split(": ") for line in lines if not line.startswith("#"))
    assert float(values["target_eV"]) == pytest.approx(6.808)
    assert 13.0 < float(values["radius_nm"]) < 19.0


@pytest.mark.slow
def test_geff_reports_bracketing_failure(tmp_path, out_dir):
    config = write_config(
        tmp_path,
        "geometry:\n  spherical:\n    radius_bracket_nm: [2.0, 3.0]\n"
        "matter:\n  family:\n    - {label: benzene, energy_eV: 6.808, dipole: 2.5}\n",
    )
    assert run("geff", "--config", config, "--out", out_dir, "--density", 1) == 0

    rows = [
        line
        for line in (out_dir / "geff.csv").read_text().splitlines()
        if not line.startswith("#")
    ]
    assert rows[1].split(",")[:2] == ["benzene", "6.8080000000e+00"]
    assert rows[1].split(",")[3] == "bracketing_failed"
    assert not (out_dir / "geff_trend.csv").exists()


def test_spectrum_rabi_search_ignores_far_cavity_features(tmp_path):
    width = ev(0.01)
    origin = ev(5.0)
    values = np.zeros(400)
    values[[50, 350]] = [1.0, 0.9]
    values[[177, 183]] = 0.5
    spectrum = Spectrum(origin + (np.arange(400) + 0.5) * width, values, width, origin)

    command = SpectrumCommand(RunConfig(), out_dir=tmp_path)
    assert command.rabi_splitting(spectrum, benzene(2.5)) == pytest.approx(6 * width)

    command.config.analysis.rabi_search_eV = 0.02
    assert command.rabi_splitting(spectrum, benzene(2.5)) is None


@pytest.mark.slow
def test_geff_decreases_along_acene_family(out_dir, capsys):
    config = REPOSITORY_ROOT / "configs" / "geff_acene.yaml"
    assert run("geff", "--config", config, "--out", out_dir, "--density", 1) == 0

    rows = [
        line.split(",")
        for line in (out_dir / "geff.csv").read_text().splitlines()
        if not line.startswith("#")
    ]
    assert [row[3] for row in rows[1:]] == ["ok"] * 4

    trend = read_table(out_dir / "geff_trend.csv")
    np.testing.assert_allclose(trend["energy_eV"], [6.808, 6.508, 6.208, 5.908])
    assert np.all(np.diff(trend["radius_nm"]) > 0)
    assert np.all(np.diff(trend["g_eff"]) < 0)
    assert capsys.readouterr().out.count("g_eff") >= 4
