# !/usr/bin/env python3

from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  pylint: disable=wrong-import-position
import numpy as np  # noqa: E402  pylint: disable=wrong-import-position

from src.utils.errors import ValidationError  # noqa: E402  pylint: disable=wrong-import-position
from src.utils.tables import read_table  # noqa: E402  pylint: disable=wrong-import-position

PLOT_SCRIPT = '''# !/usr/bin/env python3
"""render {table} with matplotlib"""

import sys
from pathlib import Path

sys.path.insert(0, {root!r})

from src.app import visualize  # noqa: E402

if __name__ == "__main__":
    visualize.render({kind!r}, Path(__file__).with_name({table!r}))
'''


class Visualizer:
    """table visualizer

    Attributes:
        table (dict[str, np.ndarray]): column name -> values
    """

    def __init__(self, table: dict[str, np.ndarray]) -> None:
        """initiation

        Args:
            table (dict[str, np.ndarray]): column name -> values
        """
        self.table = table

    def update_table(self, table: dict[str, np.ndarray]) -> None:
        """update table

        Args:
            table (dict[str, np.ndarray]): column name -> values
        """
        self.table = table

    def mode_structure(self, axes: plt.Axes) -> plt.Axes:
        """create Purcell enhancement plot

        Args:
            axes (plt.Axes): figure axis

        Returns:
            plt.Axes: figure axis on mode structure plot
        """
        axes.semilogy(self.table["omega_eV"], self.table["purcell"], color="black")
        axes.axhline(y=1.0, linestyle="--", color="grey", alpha=0.5)
        axes.set_title("Mode structure at the cavity centre")
        axes.set_xlabel("Energy [eV]")
        axes.set_ylabel("Purcell enhancement")

        return axes

    def spectrum(self, axes: plt.Axes) -> plt.Axes:
        """create unbroadened strength function plot"""
        axes.plot(self.table["omega_eV"], self.table["strength"], color="black", lw=0.8)
        axes.set_title("Strength function")
        axes.set_xlabel("Energy [eV]")
        axes.set_ylabel("S(omega)")

        return axes

    def excitations(self, axes: plt.Axes) -> plt.Axes:
        """create stick plot of oscillator strengths coloured by photonic fraction"""
        omega = self.table["omega_eV"]
        strength = self.table["oscillator_strength"]
        axes.vlines(omega, 0.0, strength, color="grey", lw=0.5)
        points = axes.scatter(
            omega, strength, c=self.table["photonic_fraction"], s=4, cmap="viridis", vmin=0, vmax=1
        )
        axes.figure.colorbar(points, ax=axes, label="photonic fraction")
        axes.set_xlabel("Energy [eV]")
        axes.set_ylabel("Oscillator strength")

        return axes

    def purcell_planar(self, axes: plt.Axes) -> plt.Axes:
        """create Purcell enhancement against mirror spacing plot"""
        ratio = self.table["d_over_lambda0"]
        axes.plot(ratio, self.table["purcell_horizontal"], label="horizontal")
        axes.plot(ratio, self.table["purcell_vertical"], label="vertical")
        axes.axhline(y=1.0, linestyle="--", color="black", alpha=0.5)
        axes.set_xlabel("d / lambda0")
        axes.set_ylabel("Purcell enhancement")
        axes.legend(bbox_to_anchor=(1.01, 1), loc="upper left", borderaxespad=0)

        return axes

    def geff(self, axes: plt.Axes) -> plt.Axes:
        """create effective coupling trend plot"""
        g_eff = self.table["g_eff"]
        index = np.arange(1, g_eff.size + 1)
        axes.plot(index, g_eff / g_eff[0], marker="o", color="black")
        axes.set_xlabel("Molecule")
        axes.set_ylabel("g_eff / g_eff[1]")

        return axes

    def permittivity(self, axes: plt.Axes) -> plt.Axes:
        """create dielectric function plot"""
        omega = self.table["omega_eV"]
        axes.plot(omega, self.table["eps_real"], label="Re eps")
        axes.plot(omega, self.table["eps_imag"], label="Im eps")
        axes.axhline(y=0.0, linestyle="--", color="black", alpha=0.5)
        axes.set_xlabel("Energy [eV]")
        axes.legend(bbox_to_anchor=(1.01, 1), loc="upper left", borderaxespad=0)

        return axes


PLOTS = {
    "modes": Visualizer.mode_structure,
    "spectrum": Visualizer.spectrum,
    "excitations": Visualizer.excitations,
    "purcell_planar": Visualizer.purcell_planar,
    "geff": Visualizer.geff,
    "materials": Visualizer.permittivity,
}


def create_figure(**args) -> tuple[plt.Figure, plt.Axes]:
    """create basic figure

    Returns:
        tuple[plt.Figure, plt.Axes]: figure and axes
    """
    fig, axes = plt.subplots(**args)

    return fig, axes


def render(kind: str, table: Path, output: Optional[Path] = None) -> Path:
    """render a table to an image

    Args:
        kind (str): plot kind, a key of PLOTS
        table (Path): comma separated table
        output (Optional[Path], optional): image path. Defaults to the table with .png.

    Raises:
        ValidationError: undefined plot kind

    Returns:
        Path: image path
    """
    if kind not in PLOTS:
        raise ValidationError(f"plot kind must be one of {list(PLOTS)}, got {kind!r}")
    output = output or Path(table).with_suffix(".png")

    fig, axes = create_figure(figsize=(8, 4), tight_layout=True)
    PLOTS[kind](Visualizer(read_table(table)), axes)
    fig.savefig(output, dpi=150)
    plt.close(fig)

    return output


def plot_script(kind: str, table: Path, root: Path) -> str:
    """source of a standalone plot script for `table`

    Args:
        kind (str): plot kind
        table (Path): table path; the script is written next to it
        root (Path): repository root added to sys.path

    Returns:
        str: script source
    """
    return PLOT_SCRIPT.format(table=Path(table).name, root=str(root), kind=kind)
