# !/usr/bin/env python3

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, List, Optional

from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from src.cavity.materials import (
    GOLD_DAMPING_EV,
    GOLD_PLASMA_EV,
    DielectricModel,
    build_material,
)
from src.cavity.planar import IdealMirror, MaterialMirror, MirrorModel, PlanarCavity
from src.cavity.spherical import SphericalCavity
from src.polariton.matter import (
    MatterSystem,
    Transition,
    acene_family,
    benzene,
    load_transitions,
    replicate,
)
from src.utils.errors import CavityError, ConfigError
from src.utils.units import ev, nm
from src.utils.utils import atomic_write_text

MATERIALS = ("vacuum", "constant", "drude", "gold", "tabulated")

"""
Schema
"""


@dataclass
class MaterialConfig:
    name: str = "gold"
    epsilon_r: float = 1.0
    plasma_eV: float = GOLD_PLASMA_EV
    damping_eV: float = GOLD_DAMPING_EV
    damping_fraction: float = 1.0
    path: Optional[str] = None


@dataclass
class SphericalConfig:
    radius_nm: float = 16.0
    shell: MaterialConfig = field(default_factory=MaterialConfig)
    tune_target_eV: Optional[float] = None
    radius_bracket_nm: List[float] = field(default_factory=lambda: [10.0, 20.0])


@dataclass
class MirrorConfig:
    kind: str = "ideal"
    reflectivity: float = 0.95
    material: MaterialConfig = field(default_factory=MaterialConfig)


@dataclass
class PlanarConfig:
    top: MirrorConfig = field(default_factory=MirrorConfig)
    bottom: MirrorConfig = field(default_factory=MirrorConfig)
    cavity_medium: MaterialConfig = field(default_factory=lambda: MaterialConfig(name="vacuum"))
    energy_eV: float = 6.808
    d_over_lambda: List[float] = field(default_factory=lambda: [0.05, 1.5])
    sweep_points: int = 146
    position: float = 0.5
    epsrel: float = 1e-6


@dataclass
class GeometryConfig:
    spherical: Optional[SphericalConfig] = None
    planar: Optional[PlanarConfig] = None


@dataclass
class GridConfig:
    window_eV: List[float] = field(default_factory=lambda: [6.3, 7.3])
    points_per_meV: float = 10.0
    compress: bool = True
    capacity: int = 20000


@dataclass
class FamilyEntry:
    label: str = "molecule"
    energy_eV: float = 6.808
    dipole: float = 1.0


@dataclass
class AceneConfig:
    ring_counts: List[int] = field(default_factory=lambda: [1, 2, 3, 4])
    energy_eV: float = 6.808
    energy_step_eV: float = 0.3
    dipole: float = 2.5
    dipole_step: float = 0.5


@dataclass
class MatterConfig:
    path: Optional[str] = None
    preset: Optional[str] = "benzene"
    dipole: float = 2.5
    dipole_axis: List[float] = field(default_factory=lambda: [1.0, 0.0, 0.0])
    replication: int = 1
    family: List[FamilyEntry] = field(default_factory=list)
    acene: Optional[AceneConfig] = None


@dataclass
class AnalysisConfig:
    bin_width_meV: Optional[float] = None
    rabi_prominence: float = 0.1
    rabi_search_eV: float = 0.5
    prominence_factor: float = 2.0
    scan_eV: List[float] = field(default_factory=lambda: [5.0, 9.0])
    tune_window_eV: float = 0.5
    tune_scan_points: int = 41


@dataclass
class RunConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    matter: MatterConfig = field(default_factory=MatterConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    output: str = "outputs"


OPTIONAL_SECTIONS = {
    "geometry.spherical": SphericalConfig,
    "geometry.planar": PlanarConfig,
    "matter.acene": AceneConfig,
}


"""
Loading and validation
"""


def load_config(
    path: Optional[Path | str] = None, overrides: Optional[dict[str, Any]] = None
) -> RunConfig:
    """merge a YAML file and dotted overrides into the schema

    Args:
        path (Optional[Path | str], optional): YAML config. Defaults to None.
        overrides (Optional[dict[str, Any]], optional): dotted key -> value.
            Defaults to None.

    Raises:
        ConfigError: unknown key, wrong type or failed validation

    Returns:
        RunConfig: validated configuration
    """
    overrides = overrides or {}
    try:
        merged = OmegaConf.structured(RunConfig)
        if path is not None:
            if not Path(path).is_file():
                raise ConfigError(f"config file {path} not found", field="--config")
            loaded = OmegaConf.load(path)
            _expand_sections(merged, _dotted(OmegaConf.to_container(loaded)))
            merged = OmegaConf.merge(merged, loaded)
        _expand_sections(merged, overrides)
        for key, value in overrides.items():
            OmegaConf.update(merged, key, value, merge=True)
        config = OmegaConf.to_object(merged)
    except OmegaConfBaseException as err:
        message = str(err).splitlines()[0]
        raise ConfigError(message, field=getattr(err, "full_key", None) or None) from err

    validate(config)
    return config


def _dotted(node: Any, prefix: str = "") -> dict[str, Any]:
    """dotted key -> leaf value of a nested container"""
    if not isinstance(node, dict) or not node:
        return {prefix: node}
    flat: dict[str, Any] = {}
    for key, value in node.items():
        flat.update(_dotted(value, f"{prefix}.{key}" if prefix else str(key)))
    return flat


def _expand_sections(config: DictConfig, keys: Iterable[str]) -> None:
    """fill the unset optional sections named by `keys` with their defaults"""
    keys = list(keys)
    for section, schema in OPTIONAL_SECTIONS.items():
        named = any(key == section or key.startswith(f"{section}.") for key in keys)
        if named and OmegaConf.select(config, section) is None:
            OmegaConf.update(config, section, schema(), merge=False)


def dump_config(config: RunConfig, path: Path) -> Path:
    """write the resolved configuration as YAML"""
    return atomic_write_text(path, OmegaConf.to_yaml(OmegaConf.structured(config)))


def flatten(config: RunConfig) -> dict[str, Any]:
    """dotted key -> value view of the resolved configuration"""
    return _dotted(OmegaConf.to_container(OmegaConf.structured(config)))


def _check(condition: bool, message: str, key: str) -> None:
    if not condition:
        raise ConfigError(message, field=key)


def _validate_material(material: MaterialConfig, key: str) -> None:
    _check(material.name in MATERIALS, f"must be one of {list(MATERIALS)}", f"{key}.name")
    if material.name == "tabulated":
        _check(
            material.path is not None and Path(material.path).is_file(),
            f"permittivity table {material.path} not found",
            f"{key}.path",
        )
    _check(material.damping_fraction >= 0, "must be >= 0", f"{key}.damping_fraction")


def _validate_window(window: List[float], key: str) -> None:
    _check(len(window) == 2, "must be [low, high]", key)
    _check(0 < window[0] < window[1], "must satisfy 0 < low < high", key)


def validate(config: RunConfig) -> None:
    """semantic checks run before any computation

    Args:
        config (RunConfig): merged configuration

    Raises:
        ConfigError: first failed check, with its field path
    """
    spherical, planar = config.geometry.spherical, config.geometry.planar
    _check(
        (spherical is None) != (planar is None),
        "exactly one of spherical / planar must be set",
        "geometry",
    )
    if spherical is not None:
        _check(spherical.radius_nm > 0, "must be positive", "geometry.spherical.radius_nm")
        _validate_material(spherical.shell, "geometry.spherical.shell")
        _validate_window(spherical.radius_bracket_nm, "geometry.spherical.radius_bracket_nm")
        if spherical.tune_target_eV is not None:
            _check(spherical.tune_target_eV > 0, "must be positive", "geometry.spherical.tune_target_eV")
    if planar is not None:
        for name in ("top", "bottom"):
            mirror = getattr(planar, name)
            key = f"geometry.planar.{name}"
            _check(mirror.kind in ("ideal", "material"), "must be ideal or material", f"{key}.kind")
            _check(0 <= mirror.reflectivity <= 1, "must lie in [0, 1]", f"{key}.reflectivity")
            if mirror.kind == "material":
                _validate_material(mirror.material, f"{key}.material")
        _validate_material(planar.cavity_medium, "geometry.planar.cavity_medium")
        _check(planar.energy_eV > 0, "must be positive", "geometry.planar.energy_eV")
        _validate_window(planar.d_over_lambda, "geometry.planar.d_over_lambda")
        _check(planar.sweep_points >= 1, "must be >= 1", "geometry.planar.sweep_points")
        _check(0 < planar.position < 1, "must lie in (0, 1)", "geometry.planar.position")

    _validate_window(config.grid.window_eV, "grid.window_eV")
    _check(config.grid.points_per_meV > 0, "must be positive", "grid.points_per_meV")
    _check(config.grid.capacity >= 1, "must be >= 1", "grid.capacity")

    matter = config.matter
    if matter.path is not None:
        _check(Path(matter.path).is_file(), f"transition file {matter.path} not found", "matter.path")
    else:
        _check(matter.preset in ("benzene", None), "must be benzene or null", "matter.preset")
    _check(matter.replication >= 1, "must be >= 1", "matter.replication")
    _check(len(matter.dipole_axis) == 3, "must be a 3-vector", "matter.dipole_axis")
    _check(any(v != 0 for v in matter.dipole_axis), "must be nonzero", "matter.dipole_axis")
    for i, entry in enumerate(matter.family):
        _check(entry.energy_eV > 0, "must be positive", f"matter.family[{i}].energy_eV")

    analysis = config.analysis
    if analysis.bin_width_meV is not None:
        _check(analysis.bin_width_meV > 0, "must be positive", "analysis.bin_width_meV")
    _check(0 < analysis.rabi_prominence < 1, "must lie in (0, 1)", "analysis.rabi_prominence")
    _check(analysis.rabi_search_eV > 0, "must be positive", "analysis.rabi_search_eV")
    _check(analysis.prominence_factor > 0, "must be positive", "analysis.prominence_factor")
    _validate_window(analysis.scan_eV, "analysis.scan_eV")
    _check(analysis.tune_window_eV > 0, "must be positive", "analysis.tune_window_eV")
    _check(analysis.tune_scan_points >= 2, "must be >= 2", "analysis.tune_scan_points")


"""
Builders
"""


def build_dielectric(material: MaterialConfig) -> DielectricModel:
    """dielectric model of a material section"""
    if material.name == "gold":
        return build_material(
            "gold",
            damping_fraction=material.damping_fraction,
            plasma_eV=material.plasma_eV,
            damping_eV=material.damping_eV,
        )
    if material.name == "drude":
        return build_material(
            "drude",
            plasma_eV=material.plasma_eV,
            damping_eV=material.damping_eV * material.damping_fraction,
        )
    return build_material(material.name, epsilon_r=material.epsilon_r, path=material.path)


def build_spherical(config: SphericalConfig, radius_nm: Optional[float] = None) -> SphericalCavity:
    """spherical cavity of the configured shell"""
    return SphericalCavity(nm(radius_nm or config.radius_nm), build_dielectric(config.shell))


def build_mirror(config: MirrorConfig) -> MirrorModel:
    """mirror of a mirror section"""
    if config.kind == "ideal":
        return IdealMirror(config.reflectivity)
    return MaterialMirror(build_dielectric(config.material))


def planar_factory(config: PlanarConfig) -> Callable[[float, float], PlanarCavity]:
    """(t, b) -> planar cavity with the configured mirrors"""
    top, bottom = build_mirror(config.top), build_mirror(config.bottom)
    medium = build_dielectric(config.cavity_medium)

    def factory(t: float, b: float) -> PlanarCavity:
        return PlanarCavity(top, bottom, t, b, medium)

    return factory


def build_matter(config: MatterConfig) -> MatterSystem:
    """matter system of the matter section, replication applied"""
    try:
        if config.path is not None:
            system = load_transitions(config.path)
        else:
            system = benzene(config.dipole, config.dipole_axis)
    except CavityError as err:
        if isinstance(err, ConfigError) and err.field is None:
            raise ConfigError(str(err), field="matter.path" if config.path else "matter") from err
        raise
    return replicate(system, config.replication)


def build_family(config: MatterConfig) -> list[MatterSystem]:
    """molecule family of the matter section"""
    if config.family:
        systems = []
        for entry in config.family:
            transition = Transition(
                entry.label,
                ev(entry.energy_eV),
                benzene(entry.dipole, config.dipole_axis).dipoles[0],
            )
            systems.append(MatterSystem((transition,)))
        return systems
    if config.acene is not None:
        acene = config.acene
        return acene_family(
            acene.ring_counts,
            acene.energy_eV,
            acene.energy_step_eV,
            acene.dipole,
            acene.dipole_step,
            config.dipole_axis,
        )
    raise ConfigError("geff needs matter.family or matter.acene", field="matter")
