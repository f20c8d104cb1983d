"""Run configuration for the command-line tool.

A config is a JSON object; every key carries its unit as a suffix.  All
sections are optional at load time and each subcommand checks for the ones
it needs.  Relative file references resolve against the config file's
directory (coefficient files additionally against ``$QFCLINK_MODEL_DIR`` and
the shipped data folder).
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .conversion import BeamGeometry, beam_overlap_fraction
from .dispersion import SHIPPED_MODEL
from .netlink import LinkScenario, Topology
from .phasematching import ProcessSpec
from .photonstats import DetectionChain, PulseTrain, photon_energy_J

__all__ = ["ConfigError", "RunConfig", "load_config"]


class ConfigError(ValueError):
    pass


@dataclass
class CrystalSection:
    length_mm: float = 19.97
    temperature_c: float = 160.0
    poling_period_um: float | None = None


@dataclass
class ProcessSection:
    lambda_in_nm: float
    lambda_pump_nm: float
    kind: str = "SFG"
    bracket_nm: list | None = None
    dt_k: float = 1.0

    def bracket(self) -> tuple[float, float]:
        if self.bracket_nm is None:
            return (self.lambda_in_nm - 50.0, self.lambda_in_nm + 50.0)
        if len(self.bracket_nm) != 2:
            raise ConfigError("process.bracket_nm must be a [low, high] pair")
        return tuple(float(v) for v in self.bracket_nm)


@dataclass
class CurveSection:
    start_nm: float
    stop_nm: float
    step_nm: float


@dataclass
class ConversionSection:
    length_mm: float = 19.97
    waist_pump_um: float | None = None
    waist_input_um: float | None = None
    overlap: float | None = None
    eta_max: float = 1.0
    points_csv: str | None = None
    predict_pump_mw: list = field(default_factory=list)


@dataclass
class PulseTrainSection:
    tau_pump_ps: float
    rep_rate_mhz: float
    regime: str = "CW"
    tau_input_ps: float | None = None


@dataclass
class InputSection:
    lambda_nm: float
    power_nw: float | None = None
    photons_per_pulse: float | None = None


@dataclass
class DetectionSection:
    component_transmissions: list
    detector_efficiency: float
    dead_time_ns: float


@dataclass
class LinkSection:
    distances_km: list = field(default_factory=lambda: [0.0, 10.0])
    alpha_blue_db_per_km: float = 50.0
    alpha_ir_db_per_km: float = 0.18
    eta_down: float = 0.011
    eta_up: float = 0.094
    summary_distance_km: float = 10.0


_SECTIONS = {
    "crystal": CrystalSection,
    "process": ProcessSection,
    "curve": CurveSection,
    "conversion": ConversionSection,
    "pulse_train": PulseTrainSection,
    "input": InputSection,
    "detection": DetectionSection,
    "link": LinkSection,
}
_SCALARS = {"dispersion_model", "allow_extrapolation", "counts_csv"}


@dataclass
class RunConfig:
    base_dir: Path = field(default_factory=Path.cwd)
    dispersion_model: str = SHIPPED_MODEL
    allow_extrapolation: bool = False
    counts_csv: str | None = None
    crystal: CrystalSection = field(default_factory=CrystalSection)
    process: ProcessSection | None = None
    curve: CurveSection | None = None
    conversion: ConversionSection | None = None
    pulse_train: PulseTrainSection | None = None
    input: InputSection | None = None
    detection: DetectionSection | None = None
    link: LinkSection = field(default_factory=LinkSection)

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError(f"config is missing section(s): {', '.join(missing)}")

    def process_spec(self) -> ProcessSpec:
        self.require("process")
        p = self.process
        return ProcessSpec.from_inputs(p.kind, p.lambda_in_nm, p.lambda_pump_nm)

    def pulse_train_obj(self) -> PulseTrain:
        self.require("pulse_train")
        t = self.pulse_train
        tau_in = None if t.tau_input_ps is None else t.tau_input_ps * 1e-12
        return PulseTrain(t.tau_pump_ps * 1e-12, t.rep_rate_mhz * 1e6, t.regime, tau_in)

    def detection_chain(self) -> DetectionChain:
        self.require("detection")
        d = self.detection
        return DetectionChain(tuple(d.component_transmissions), d.detector_efficiency, d.dead_time_ns * 1e-9)

    def input_power_W(self, D: float) -> float:
        """Input power, given directly or solved from a photons-per-pulse target."""
        self.require("input", "pulse_train")
        i = self.input
        if (i.power_nw is None) == (i.photons_per_pulse is None):
            raise ConfigError("input needs exactly one of power_nw, photons_per_pulse")
        if i.power_nw is not None:
            return i.power_nw * 1e-9
        rep = self.pulse_train.rep_rate_mhz * 1e6
        return i.photons_per_pulse * rep * photon_energy_J(i.lambda_nm) / D

    def overlap(self) -> float:
        self.require("conversion")
        c = self.conversion
        if c.overlap is not None:
            if c.waist_pump_um is not None or c.waist_input_um is not None:
                raise ConfigError("conversion: give either overlap or the two waists, not both")
            return float(c.overlap)
        if c.waist_pump_um is None or c.waist_input_um is None:
            return 1.0
        return beam_overlap_fraction(BeamGeometry(c.waist_pump_um, c.waist_input_um))

    def link_template(self) -> LinkScenario:
        k = self.link
        return LinkScenario(
            Topology.A, 0.0, k.alpha_blue_db_per_km, k.alpha_ir_db_per_km, k.eta_down, k.eta_up
        )

    def validate(self) -> None:
        """Build every domain object the present sections describe."""
        if self.process is not None:
            self.process_spec()
            self.process.bracket()
        if self.pulse_train is not None:
            self.pulse_train_obj()
        if self.detection is not None:
            self.detection_chain()
        if self.conversion is not None:
            self.overlap()
        self.link_template()
        for d in self.link.distances_km:
            if not float(d) >= 0:
                raise ConfigError(f"link.distances_km contains negative entry {d!r}")

    def path(self, ref: str) -> Path:
        p = Path(ref)
        return p if p.is_absolute() else self.base_dir / p

    def existing_path(self, ref: str) -> Path:
        p = self.path(ref)
        if not p.is_file():
            raise FileNotFoundError(f"referenced file not found: {p}")
        return p


def _section(cls, data, name):
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be an object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown key(s) in {name!r}: {sorted(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"section {name!r}: {exc}") from exc


def config_from_dict(data: dict, base_dir=None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - set(_SECTIONS) - _SCALARS
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    kwargs = {k: data[k] for k in _SCALARS if k in data}
    for name, cls in _SECTIONS.items():
        if name in data:
            kwargs[name] = _section(cls, data[name], name)
    cfg = RunConfig(base_dir=Path(base_dir or Path.cwd()), **kwargs)
    for ref in (cfg.counts_csv, cfg.conversion.points_csv if cfg.conversion else None):
        if ref is not None:
            cfg.existing_path(ref)
    cfg.validate()
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return config_from_dict(data, base_dir=path.parent)
