"""Flat ``section.key = value`` run configuration.

Example::

    cosmology.kind = lambda
    alice.omega = 10
    bob.switch_on = 2
    separation.mode = proper
    separation.value = 1/2
    sweep.variable = T_iB

Blank lines and ``#`` comments are ignored.  Numbers may be written as
simple fractions (``2/3``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

from .causality import Comoving, CommPair, DetectorConfig, Proper
from .cosmology import CosmologyModel, normalized_pair
from .errors import ConfigError

SWEEP_VARIABLES = ("T_iB", "Omega", "Delta", "sqrt_lambda", "R", "P")


@dataclass(frozen=True)
class DetectorBlock:
    omega: float = 10.0
    coupling: float = 1.0
    switch_on: float = 2.0 / 3.0
    duration: float = 0.01

    def to_detector(self) -> DetectorConfig:
        return DetectorConfig(self.omega, self.coupling, self.switch_on, self.duration)


@dataclass(frozen=True)
class SweepSpec:
    variable: str = "T_iB"
    min: float = 1.5
    max: float = 10.0
    points: int = 50
    scale: str = "lin"

    def values(self) -> list[float]:
        import numpy as np

        if self.points == 1:
            return [float(self.min)]
        if self.scale == "log":
            return [float(v) for v in np.geomspace(self.min, self.max, self.points)]
        return [float(v) for v in np.linspace(self.min, self.max, self.points)]


@dataclass(frozen=True)
class RunConfig:
    cosmology: str = "matter"
    anchor: float = 2.0 / 3.0
    kappa1: float | None = None
    kappa2: float | None = None
    sqrt_lambda: float | None = None
    alice: DetectorBlock = field(default_factory=DetectorBlock)
    bob: DetectorBlock = field(default_factory=lambda: DetectorBlock(switch_on=2.0))
    separation_mode: str = "comoving"
    separation_value: float = 0.5
    method: str = "auto"
    sweep: SweepSpec = field(default_factory=SweepSpec)
    output_path: str | None = None
    output_format: str = "csv"

    def model(self) -> CosmologyModel:
        matter, de_sitter = normalized_pair(self.anchor)
        if self.cosmology == "matter":
            return CosmologyModel.matter(self.kappa1 if self.kappa1 is not None else matter.kappa1)
        return CosmologyModel.de_sitter(
            self.kappa2 if self.kappa2 is not None else de_sitter.kappa2,
            self.sqrt_lambda if self.sqrt_lambda is not None else de_sitter.sqrt_lambda,
        )

    def pair(self) -> CommPair:
        if self.separation_mode == "comoving":
            sep = Comoving(self.separation_value)
        else:
            sep = Proper(self.separation_value)
        return CommPair(self.alice.to_detector(), self.bob.to_detector(), sep)

    def with_sweep_value(self, value: float) -> "RunConfig":
        var = self.sweep.variable
        if var == "T_iB":
            return replace(self, bob=replace(self.bob, switch_on=value))
        if var == "Omega":
            return replace(self, alice=replace(self.alice, omega=value), bob=replace(self.bob, omega=value))
        if var == "Delta":
            return replace(self, alice=replace(self.alice, duration=value), bob=replace(self.bob, duration=value))
        if var == "sqrt_lambda":
            return replace(self, sqrt_lambda=value)
        if var == "R":
            return replace(self, separation_mode="comoving", separation_value=value)
        if var == "P":
            return replace(self, separation_mode="proper", separation_value=value)
        raise ConfigError(f"unknown sweep variable {var!r}")


def _parse_number(text: str, line: int) -> float:
    try:
        if "/" in text:
            return float(Fraction(text))
        value = float(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"expected a number, got {text!r}", line) from None
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {text!r}", line)
    return value


def _parse_int(text: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}", line) from None


def _choice(text: str, options, line: int) -> str:
    if text not in options:
        raise ConfigError(f"expected one of {', '.join(options)}, got {text!r}", line)
    return text


_DETECTOR_KEYS = {f.name for f in fields(DetectorBlock)}


def parse_config(text: str) -> RunConfig:
    """Parse the flat key-value format; errors carry 1-based line numbers."""
    top: dict = {}
    det: dict[str, dict] = {"alice": {}, "bob": {}}
    sweep: dict = {}
    seen: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        seen.add(key)
        section, _, name = key.partition(".")

        if section in det and name in _DETECTOR_KEYS:
            det[section][name] = _parse_number(value, lineno)
        elif key == "cosmology.kind":
            top["cosmology"] = _choice(value, ("matter", "lambda"), lineno)
        elif key in ("cosmology.anchor", "cosmology.kappa1", "cosmology.kappa2", "cosmology.sqrt_lambda"):
            number = _parse_number(value, lineno)
            if number <= 0:
                raise ConfigError(f"{key} must be positive", lineno)
            top[name] = number
        elif key == "separation.mode":
            top["separation_mode"] = _choice(value, ("comoving", "proper"), lineno)
        elif key == "separation.value":
            top["separation_value"] = _parse_number(value, lineno)
            if top["separation_value"] < 0:
                raise ConfigError("separation must be non-negative", lineno)
        elif key == "method":
            top["method"] = _choice(value, ("auto", "closed", "quadrature"), lineno)
        elif key == "sweep.variable":
            sweep["variable"] = _choice(value, SWEEP_VARIABLES, lineno)
        elif key in ("sweep.min", "sweep.max"):
            sweep[name] = _parse_number(value, lineno)
        elif key == "sweep.points":
            sweep["points"] = _parse_int(value, lineno)
            if sweep["points"] < 1:
                raise ConfigError("sweep.points must be at least 1", lineno)
        elif key == "sweep.scale":
            sweep["scale"] = _choice(value, ("lin", "log"), lineno)
        elif key == "output.path":
            top["output_path"] = value
        elif key == "output.format":
            top["output_format"] = _choice(value, ("csv", "json"), lineno)
        else:
            raise ConfigError(f"unknown key {key!r}", lineno)

    for who in ("alice", "bob"):
        block = det[who]
        if block.get("duration", 1.0) <= 0:
            raise ConfigError(f"{who}.duration must be positive")
        if block.get("omega", 0.0) < 0:
            raise ConfigError(f"{who}.omega must be non-negative")
    cfg = RunConfig(
        **top,
        alice=DetectorBlock(**det["alice"]),
        bob=DetectorBlock(**{"switch_on": 2.0, **det["bob"]}),
        sweep=SweepSpec(**sweep),
    )
    if cfg.sweep.scale == "log" and not (cfg.sweep.min > 0 and cfg.sweep.max > 0):
        raise ConfigError("log sweeps need positive bounds")
    if cfg.cosmology == "matter" and cfg.sweep.variable == "sqrt_lambda":
        raise ConfigError("sqrt_lambda sweeps need cosmology.kind = lambda")
    return cfg


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def apply_overrides(cfg: RunConfig, assignments: list[str]) -> RunConfig:
    """Re-parse the canonical form with ``key=value`` overrides appended."""
    if not assignments:
        return cfg
    base = dict(_canonical_items(cfg))
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        base[key] = value
    return parse_config("\n".join(f"{k} = {v}" for k, v in base.items()))


def _fmt(x: float) -> str:
    return repr(float(x))


def _canonical_items(cfg: RunConfig) -> list[tuple[str, str]]:
    items = [("cosmology.kind", cfg.cosmology), ("cosmology.anchor", _fmt(cfg.anchor))]
    for name in ("kappa1", "kappa2", "sqrt_lambda"):
        value = getattr(cfg, name)
        if value is not None:
            items.append((f"cosmology.{name}", _fmt(value)))
    for who in ("alice", "bob"):
        block = getattr(cfg, who)
        for f in fields(DetectorBlock):
            items.append((f"{who}.{f.name}", _fmt(getattr(block, f.name))))
    items += [
        ("separation.mode", cfg.separation_mode),
        ("separation.value", _fmt(cfg.separation_value)),
        ("method", cfg.method),
        ("sweep.variable", cfg.sweep.variable),
        ("sweep.min", _fmt(cfg.sweep.min)),
        ("sweep.max", _fmt(cfg.sweep.max)),
        ("sweep.points", str(cfg.sweep.points)),
        ("sweep.scale", cfg.sweep.scale),
    ]
    if cfg.output_path is not None:
        items.append(("output.path", cfg.output_path))
    items.append(("output.format", cfg.output_format))
    return items


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; ``parse_config(serialize_config(c)) == c``."""
    return "".join(f"{k} = {v}\n" for k, v in _canonical_items(cfg))
