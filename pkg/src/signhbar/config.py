"""JSON run configuration for the ``verify`` and ``evolve`` commands."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

from .grid1d import EvolutionParams, Grid, HamiltonianSpec, Potential

SUITES = ("classical", "algebra", "grid", "spin", "mirror", "crosscheck")

DEFAULT_TOLERANCES = {
    "algebra": 1e-12,
    "antiunitarity": 1e-12,
    "ccr": 1e-6,
    "crosscheck": 1e-6,
    "ehrenfest": 1e-4,
    "expr": 1e-10,
    "ground_state": 1e-6,
    "hamiltonian_k": 1e-12,
    "hermitian": 1e-9,
    "k_momentum": 1e-10,
    "matrix_element": 1e-10,
    "mirror": 1e-8,
    "momentum": 1e-8,
    "norm": 1e-10,
    "plane_wave": 1e-12,
    "spin": 1e-14,
}


class ConfigError(ValueError):
    pass


def _build(cls, data: Any, where: str):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


@dataclass(frozen=True)
class GridConfig:
    n: int = 512
    length: float = 40.0

    def __post_init__(self) -> None:
        Grid(self.n, self.length)

    def grid(self) -> Grid:
        return Grid(self.n, self.length)


@dataclass(frozen=True)
class PacketConfig:
    x0: float = -2.0
    p0: float = 1.0
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class HamiltonianConfig:
    m: float = 1.0
    e: float = 1.0
    c: float = 1.0
    hbar: float = 1.0
    expression: Optional[str] = None
    phi: dict = field(default_factory=lambda: {"kind": "zero"})
    A: dict = field(default_factory=lambda: {"kind": "zero"})

    def __post_init__(self) -> None:
        self.spec()

    def spec(self) -> HamiltonianSpec:
        return HamiltonianSpec(
            self.m, self.e, self.c, self.hbar, Potential.from_dict(self.phi), Potential.from_dict(self.A)
        )


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float = 1e-3
    steps: int = 2000

    def __post_init__(self) -> None:
        self.params()

    def params(self) -> EvolutionParams:
        return EvolutionParams(self.dt, self.steps)


@dataclass(frozen=True)
class MirrorConfig:
    """Grid and stepping for the mirror-dynamics suite."""

    n: int = 256
    length: float = 40.0
    dt: float = 1e-3
    steps: int = 2000

    def __post_init__(self) -> None:
        Grid(self.n, self.length)
        EvolutionParams(self.dt, self.steps)


@dataclass(frozen=True)
class CcrConfig:
    n: int = 1024
    window: float = 0.5

    def __post_init__(self) -> None:
        Grid(self.n, 40.0)
        if not 0 < self.window <= 1:
            raise ValueError("window must be in (0, 1]")


@dataclass(frozen=True)
class CrosscheckConfig:
    levels: int = 200
    window: float = 0.9

    def __post_init__(self) -> None:
        if self.levels < 8:
            raise ValueError("levels must be >= 8")
        if not 0 < self.window < 1:
            raise ValueError("window must be in (0, 1)")


@dataclass(frozen=True)
class SuiteConfig:
    suites: tuple[str, ...] = SUITES
    seed: int = 42
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    grid: GridConfig = field(default_factory=GridConfig)
    packet: PacketConfig = field(default_factory=PacketConfig)
    hamiltonian: HamiltonianConfig = field(default_factory=HamiltonianConfig)
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    mirror: MirrorConfig = field(default_factory=MirrorConfig)
    ccr: CcrConfig = field(default_factory=CcrConfig)
    crosscheck: CrosscheckConfig = field(default_factory=CrosscheckConfig)

    @classmethod
    def from_dict(cls, data: dict) -> SuiteConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        suites = data.get("suites", list(SUITES))
        if isinstance(suites, str) or not all(isinstance(s, str) for s in suites):
            raise ConfigError("suites must be a list of names")
        seed = data.get("seed", 42)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError("seed must be an integer")
        return cls(
            suites=normalize_suites(suites),
            seed=seed,
            tolerances=merge_tolerances(data.get("tolerances", {})),
            grid=_build(GridConfig, data.get("grid"), "grid"),
            packet=_build(PacketConfig, data.get("packet"), "packet"),
            hamiltonian=_build(HamiltonianConfig, data.get("hamiltonian"), "hamiltonian"),
            evolution=_build(EvolutionConfig, data.get("evolution"), "evolution"),
            mirror=_build(MirrorConfig, data.get("mirror"), "mirror"),
            ccr=_build(CcrConfig, data.get("ccr"), "ccr"),
            crosscheck=_build(CrosscheckConfig, data.get("crosscheck"), "crosscheck"),
        )

    @classmethod
    def load(cls, path: str | Path) -> SuiteConfig:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["suites"] = list(self.suites)
        return d


def normalize_suites(names) -> tuple[str, ...]:
    names = list(names)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
    if not names:
        raise ConfigError("no suites selected")
    return tuple(s for s in SUITES if s in names)


def merge_tolerances(overrides: dict) -> dict:
    if not isinstance(overrides, dict):
        raise ConfigError("tolerances must be an object")
    out = dict(DEFAULT_TOLERANCES)
    for name, value in overrides.items():
        if name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance {name!r}")
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not (value > 0 and math.isfinite(value)):
            raise ConfigError(f"tolerance {name!r} must be a positive finite number")
        out[name] = float(value)
    return out
