# !/usr/bin/env python3

import logging
from pathlib import Path
from typing import Any, Optional

import numpy as np

from src.app import visualize
from src.app.config import (
    PlanarConfig,
    RunConfig,
    SphericalConfig,
    build_dielectric,
    build_family,
    build_matter,
    build_spherical,
    dump_config,
    flatten,
    planar_factory,
)
from src.cavity.emitter import EmitterConfig, coupling_provider
from src.cavity.materials import DielectricModel, permittivity, refractive_index
from src.cavity.planar import sweep_mirror_distance
from src.cavity.spherical import (
    SphericalCavity,
    coupling_strength,
    find_resonances,
    im_dgf_tensor,
    tune_radius,
)
from src.polariton import photon_grid
from src.polariton.analysis import (
    REPORT_FIELDS,
    coupling_report,
    extract_rabi_splitting,
    spectrum_fwhm,
)
from src.polariton.matter import MatterSystem, bare_oscillator_strengths
from src.polariton.solver import (
    Spectrum,
    build_matrix,
    export_excitations,
    export_spectrum,
    oscillator_strengths,
    solve,
    strength_function,
)
from src.utils.errors import BracketingError, ConfigError, NumericalError
from src.utils.tables import format_metadata, write_rows, write_table
from src.utils.typing import PeakSummary
from src.utils.units import ev, from_internal, nm
from src.utils.utils import atomic_write_text

logger = logging.getLogger(__name__)

REPOSITORY_ROOT = Path(__file__).resolve().parents[2]
PEAK_FIELDS = tuple(PeakSummary.__annotations__)
GEFF_FIELDS = ("label", "energy_eV", "radius_nm", "status", *REPORT_FIELDS)


class CommandRunner:
    """basic command runner

    Attributes:
        name (str): subcommand name
        config (RunConfig): validated run configuration
        out_dir (Path): output directory
        timestamp (bool): timestamp line in table headers
        written (list[Path]): files written by the command
    """

    name = "command"

    def __init__(
        self, config: RunConfig, out_dir: Optional[Path] = None, timestamp: bool = True
    ) -> None:
        """initiation

        Args:
            config (RunConfig): validated run configuration
            out_dir (Optional[Path], optional): output directory.
                Defaults to config.output.
            timestamp (bool, optional): timestamp line in table headers. Defaults to True.
        """
        self.config = config
        self.out_dir = Path(out_dir or config.output)
        self.timestamp = timestamp
        self.written: list[Path] = []

    def __call__(self) -> int:
        return self.execute()

    @property
    def metadata(self) -> dict[str, Any]:
        """command name and every resolved configuration value"""
        return {"command": self.name, **flatten(self.config)}

    @property
    def sampling_density(self) -> float:
        """photon grid points per unit energy, atomic units"""
        return self.config.grid.points_per_meV / ev(1e-3)

    def execute(self) -> int:
        """prepare the output directory and run

        Returns:
            int: exit code
        """
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.written.append(dump_config(self.config, self.out_dir / "resolved_config.yaml"))

        code = self.run()
        for path in self.written:
            logger.info("wrote %s", path)
        return code

    def run(self) -> int:
        """command body

        Raises:
            NotImplementedError: Must override!!

        Returns:
            int: exit code
        """
        raise NotImplementedError("Must override!!")

    def table(self, kind: str, path: Path) -> Path:
        """register a table and emit its plot script"""
        script = path.with_name(f"plot_{path.stem}.py")
        atomic_write_text(script, visualize.plot_script(kind, path, REPOSITORY_ROOT))
        self.written.extend([path, script])
        return path

    def spherical(self) -> SphericalConfig:
        spherical = self.config.geometry.spherical
        if spherical is None:
            raise ConfigError(f"{self.name} needs a spherical cavity", field="geometry.spherical")
        return spherical

    def planar(self) -> PlanarConfig:
        planar = self.config.geometry.planar
        if planar is None:
            raise ConfigError(f"{self.name} needs a planar cavity", field="geometry.planar")
        return planar

    def tuned_radius(self, shell: DielectricModel, target: float) -> float:
        """radius putting a resonance of `shell` at `target`"""
        spherical = self.spherical()
        analysis = self.config.analysis
        return tune_radius(
            shell,
            target,
            (nm(spherical.radius_bracket_nm[0]), nm(spherical.radius_bracket_nm[1])),
            window=ev(analysis.tune_window_eV),
            scan_points=analysis.tune_scan_points,
        )

    def cavity(self) -> SphericalCavity:
        """configured spherical cavity, tuned when a target is set"""
        spherical = self.spherical()
        if spherical.tune_target_eV is None:
            return build_spherical(spherical)
        shell = build_dielectric(spherical.shell)
        return SphericalCavity(self.tuned_radius(shell, ev(spherical.tune_target_eV)), shell)


class ModesCommand(CommandRunner):
    """mode structure scan and photon mode set export"""

    name = "modes"

    def run(self) -> int:
        cavity = self.cavity()
        analysis = self.config.analysis
        metadata = {**self.metadata, "radius_nm": from_internal(cavity.radius, "nm")}

        modes_table = self.out_dir / "modes.csv"
        peaks = find_resonances(
            cavity,
            ev(analysis.scan_eV[0]),
            ev(analysis.scan_eV[1]),
            self.sampling_density,
            analysis.prominence_factor,
            table=modes_table,
            metadata=metadata,
            timestamp=self.timestamp,
        )
        self.table("modes", modes_table)
        if not peaks:
            logger.warning("no resonances in %s eV", analysis.scan_eV)

        summaries = [peak.summary() for peak in peaks]
        self.written.append(
            write_rows(
                self.out_dir / "peaks.csv",
                PEAK_FIELDS,
                [[summary[key] for key in PEAK_FIELDS] for summary in summaries],
                metadata=metadata,
                timestamp=self.timestamp,
            )
        )

        provider = coupling_provider(lambda omega: im_dgf_tensor(cavity, omega), EmitterConfig())
        modes = photon_grid.discretize(
            provider, tuple(ev(np.asarray(self.config.grid.window_eV))), self.sampling_density
        )
        self.written.append(
            photon_grid.export(
                modes, self.out_dir / "photon_modes.csv", metadata, timestamp=self.timestamp
            )
        )

        print(f"radius_nm: {from_internal(cavity.radius, 'nm'):.6g}")
        print(f"peaks: {len(summaries)}")
        for summary in summaries:
            print(", ".join(f"{key}: {summary[key]:.6g}" for key in PEAK_FIELDS))
        return 0


class SpectrumCommand(CommandRunner):
    """polariton spectrum of the configured matter in the spherical cavity"""

    name = "spectrum"

    def rabi_splitting(self, spectrum: Spectrum, matter: MatterSystem) -> Optional[float]:
        """doublet splitting around the brightest bare transition

        Args:
            spectrum (Spectrum): binned strength function
            matter (MatterSystem): bare matter system

        Returns:
            Optional[float]: splitting, atomic units, or None for a single peak
        """
        analysis = self.config.analysis
        bright = int(np.argmax(bare_oscillator_strengths(matter)))
        return extract_rabi_splitting(
            spectrum,
            analysis.rabi_prominence,
            transition=float(matter.energies[bright]),
            search_width=ev(analysis.rabi_search_eV),
        )

    def run(self) -> int:
        cavity = self.cavity()
        grid = self.config.grid
        analysis = self.config.analysis
        matter = build_matter(self.config.matter)

        provider = coupling_provider(lambda omega: im_dgf_tensor(cavity, omega), EmitterConfig())
        photons = photon_grid.discretize(
            provider, tuple(ev(np.asarray(grid.window_eV))), self.sampling_density
        )
        matrix = build_matrix(matter, photons, compress=grid.compress, capacity=grid.capacity)
        solution = solve(matrix)
        strengths = oscillator_strengths(solution, matter)
        logger.info(
            "sum of oscillator strengths %.10e, bare %.10e",
            float(np.sum(strengths)),
            float(np.sum(bare_oscillator_strengths(matter))),
        )

        bin_width = (
            photons.spacing
            if analysis.bin_width_meV is None
            else ev(1e-3 * analysis.bin_width_meV)
        )
        spectrum = strength_function(solution, strengths, bin_width)
        metadata = {
            **self.metadata,
            "radius_nm": from_internal(cavity.radius, "nm"),
            "photon_modes": photons.size,
            "resolved_bin_width_meV": 1e3 * from_internal(bin_width, "eV"),
        }
        self.table(
            "excitations",
            export_excitations(
                solution,
                strengths,
                self.out_dir / "excitations.csv",
                metadata,
                timestamp=self.timestamp,
            ),
        )
        self.table(
            "spectrum",
            export_spectrum(
                spectrum, self.out_dir / "spectrum.csv", metadata, timestamp=self.timestamp
            ),
        )

        splitting = self.rabi_splitting(spectrum, matter)
        print(f"radius_nm: {from_internal(cavity.radius, 'nm'):.6g}")
        print(f"photon_modes: {photons.size}")
        print(f"hopfield_dimension: {matrix.dimension}")
        if splitting is None:
            print("rabi_splitting_meV: absent")
            print(f"fwhm_meV: {1e3 * from_internal(spectrum_fwhm(spectrum), 'eV'):.6g}")
        else:
            print(f"rabi_splitting_meV: {1e3 * from_internal(splitting, 'eV'):.6g}")
        return 0


class PurcellPlanarCommand(CommandRunner):
    """Purcell enhancement against the mirror spacing"""

    name = "purcell-planar"

    def run(self) -> int:
        planar = self.planar()
        ratios = np.linspace(*planar.d_over_lambda, planar.sweep_points)
        sweep = sweep_mirror_distance(
            planar_factory(planar),
            ev(planar.energy_eV),
            ratios,
            position=planar.position,
            epsrel=planar.epsrel,
        )
        self.table(
            "purcell_planar",
            write_table(
                self.out_dir / "purcell_planar.csv",
                list(sweep),
                list(sweep.values()),
                metadata=self.metadata,
                timestamp=self.timestamp,
            ),
        )

        top = int(np.argmax(sweep["purcell_horizontal"]))
        print(
            f"max purcell_horizontal: {sweep['purcell_horizontal'][top]:.6g} "
            f"at d/lambda0 = {ratios[top]:.6g}"
        )
        return 0


class TuneRadiusCommand(CommandRunner):
    """radius placing a resonance at the configured target"""

    name = "tune-radius"

    def run(self) -> int:
        spherical = self.spherical()
        if spherical.tune_target_eV is None:
            raise ConfigError("must be set", field="geometry.spherical.tune_target_eV")
        radius = self.tuned_radius(
            build_dielectric(spherical.shell), ev(spherical.tune_target_eV)
        )

        block = (
            f"target_eV: {spherical.tune_target_eV:.10g}\n"
            f"radius_nm: {from_internal(radius, 'nm'):.10g}\n"
        )
        self.written.append(
            atomic_write_text(
                self.out_dir / "tune_radius.txt",
                format_metadata(self.metadata, self.timestamp) + block,
            )
        )
        print(block, end="")
        return 0


class GeffCommand(CommandRunner):
    """effective coupling of a molecule family, cavity re-tuned per molecule"""

    name = "geff"

    def report_row(self, shell: DielectricModel, label: str, energy: float, dipole) -> list:
        radius = self.tuned_radius(shell, energy)
        cavity = SphericalCavity(radius, shell)
        window = ev(self.config.analysis.tune_window_eV)
        peaks = find_resonances(
            cavity,
            max(energy - window, 0.5 * energy),
            energy + window,
            self.sampling_density,
            self.config.analysis.prominence_factor,
        )
        if not peaks:
            raise NumericalError(f"tuned cavity for {label} shows no resonance")
        peak = min(peaks, key=lambda candidate: abs(candidate.center - energy))

        report = coupling_report(peak, lambda omega: coupling_strength(cavity, omega), dipole)
        print(f"[{label}]\n{report.block()}", end="")
        return [
            label,
            from_internal(energy, "eV"),
            from_internal(radius, "nm"),
            "ok",
            *report.row(),
        ]

    def run(self) -> int:
        shell = build_dielectric(self.spherical().shell)
        rows = []
        for system in build_family(self.config.matter):
            transition = system.transitions[0]
            try:
                rows.append(
                    self.report_row(shell, transition.label, transition.energy, transition.dipole)
                )
            except BracketingError as err:
                logger.warning("%s: %s", transition.label, err)
                rows.append(
                    [
                        transition.label,
                        from_internal(transition.energy, "eV"),
                        float("nan"),
                        "bracketing_failed",
                        *[float("nan")] * len(REPORT_FIELDS),
                    ]
                )

        self.written.append(
            write_rows(
                self.out_dir / "geff.csv",
                GEFF_FIELDS,
                rows,
                metadata=self.metadata,
                timestamp=self.timestamp,
            )
        )

        tuned = [row for row in rows if row[3] == "ok"]
        if tuned:
            g_eff = GEFF_FIELDS.index("g_eff")
            self.table(
                "geff",
                write_table(
                    self.out_dir / "geff_trend.csv",
                    ["index", "energy_eV", "radius_nm", "g_eff"],
                    [
                        np.arange(1, len(tuned) + 1),
                        [row[1] for row in tuned],
                        [row[2] for row in tuned],
                        [row[g_eff] for row in tuned],
                    ],
                    metadata=self.metadata,
                    timestamp=self.timestamp,
                ),
            )
        return 0


class MaterialsCommand(CommandRunner):
    """dielectric function and refractive index of the configured material"""

    name = "materials"

    def material(self) -> DielectricModel:
        if self.config.geometry.spherical is not None:
            return build_dielectric(self.config.geometry.spherical.shell)
        planar = self.planar()
        if planar.top.kind == "material":
            return build_dielectric(planar.top.material)
        return build_dielectric(planar.cavity_medium)

    def run(self) -> int:
        model = self.material()
        low, high = self.config.analysis.scan_eV
        points = int(round((high - low) * 1e3 * self.config.grid.points_per_meV)) + 1
        omega_eV = np.linspace(low, high, max(points, 2))
        omega = ev(omega_eV)

        eps = np.asarray(permittivity(model, omega), dtype=complex)
        index = np.asarray(refractive_index(model, omega), dtype=complex)
        self.table(
            "materials",
            write_table(
                self.out_dir / "materials.csv",
                ["omega_eV", "eps_real", "eps_imag", "n_real", "n_imag"],
                [omega_eV, eps.real, eps.imag, index.real, index.imag],
                metadata={**self.metadata, "material": model.name},
                timestamp=self.timestamp,
            ),
        )
        print(f"material: {model.name}, {omega_eV.size} points")
        return 0


COMMANDS: dict[str, type[CommandRunner]] = {
    runner.name: runner
    for runner in (
        ModesCommand,
        SpectrumCommand,
        PurcellPlanarCommand,
        TuneRadiusCommand,
        GeffCommand,
        MaterialsCommand,
    )
}


def build_command(name: str, **args) -> CommandRunner:
    """build command runner

    Args:
        name (str): subcommand name

    Raises:
        ValueError: undefined command

    Returns:
        CommandRunner: command runner
    """
    if name not in COMMANDS:
        raise ValueError(f"command must be one of {list(COMMANDS)}, got {name!r}")

    return COMMANDS[name](**args)
