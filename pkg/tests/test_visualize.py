# !/usr/bin/env python3

import numpy as np
import pytest

from src.app import visualize
from src.utils.errors import ValidationError
from src.utils.tables import write_table

OMEGA = np.linspace(6.0, 7.0, 11)

TABLES = {
    "modes": (["omega_eV", "purcell", "lambda_au"], [OMEGA, 1.0 + OMEGA, 1e-3 * OMEGA]),
    "spectrum": (["omega_eV", "strength"], [OMEGA, np.exp(-((OMEGA - 6.5) ** 2))]),
    "excitations": (
        ["omega_eV", "oscillator_strength", "photonic_fraction"],
        [OMEGA, np.full(11, 0.1), np.linspace(0.0, 1.0, 11)],
    ),
    "purcell_planar": (
        ["d_over_lambda0", "purcell_horizontal", "purcell_vertical"],
        [np.linspace(0.1, 1.0, 11), np.ones(11), np.full(11, 2.0)],
    ),
    "geff": (
        ["index", "energy_eV", "radius_nm", "g_eff"],
        [np.arange(1, 5), np.array([6.8, 6.5, 6.2, 5.9]), np.full(4, 15.0), np.array([1.0, 1.2, 1.3, 1.5])],
    ),
    "materials": (
        ["omega_eV", "eps_real", "eps_imag", "n_real", "n_imag"],
        [OMEGA, -OMEGA, 0.1 * OMEGA, 0.1 * OMEGA, OMEGA],
    ),
}


@pytest.mark.parametrize("kind", sorted(TABLES))
def test_render(tmp_path, kind):
    names, columns = TABLES[kind]
    table = write_table(tmp_path / f"{kind}.csv", names, columns)
    image = visualize.render(kind, table)
    assert image == tmp_path / f"{kind}.png"
    assert image.stat().st_size > 0


def test_render_output_path(tmp_path):
    names, columns = TABLES["spectrum"]
    table = write_table(tmp_path / "spectrum.csv", names, columns)
    assert visualize.render("spectrum", table, tmp_path / "custom.png").is_file()


def test_unknown_kind(tmp_path):
    with pytest.raises(ValidationError):
        visualize.render("histogram", tmp_path / "absent.csv")


def test_update_table():
    names, columns = TABLES["geff"]
    visualizer = visualize.Visualizer({})
    visualizer.update_table(dict(zip(names, columns)))
    fig, axes = visualize.create_figure()
    visualizer.geff(axes)
    np.testing.assert_allclose(axes.lines[0].get_ydata(), [1.0, 1.2, 1.3, 1.5])
    visualize.plt.close(fig)


def test_plot_script(tmp_path):
    source = visualize.plot_script("modes", tmp_path / "modes.csv", tmp_path)
    assert f"sys.path.insert(0, {str(tmp_path)!r})" in source
    assert "visualize.render('modes', Path(__file__).with_name('modes.csv'))" in source
    compile(source, "plot_modes.py", "exec")
