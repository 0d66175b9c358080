"""Experiment configuration: defaults, JSON loading, and CLI overrides."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Any

from .channel import ChannelParams
from .errors import ConfigError
from .game import EnergyModel
from .gaussfield import CorrelationParams

_INITIAL_PROFILES = ("all-transmit", "all-sleep", "random")

# accepted spellings for nested keys -> dataclass field names
_ALIASES = {
    "correlation": {"lambda": "lam", "length_scale": "lam"},
    "energy": {"e": "energy_per_slot"},
}
_BASE_ALIASES = {"natural": "natural", "e": "natural", "base-2": "base-2", "2": "base-2", "bits": "base-2"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment point; field names double as config-file keys."""

    side_length: float = 100.0
    m: int = 1000
    r: float = 2.0
    p_e: float = 0.1
    runs: int = 1000
    master_seed: int = 0
    channel: ChannelParams = field(default_factory=ChannelParams)
    correlation: CorrelationParams = field(default_factory=CorrelationParams)
    energy: EnergyModel = field(default_factory=EnergyModel)
    sink_layout: str = "center"
    initial_profile: str = "all-transmit"
    max_passes: int = 50
    energy_weight: float = 1.0

    def __post_init__(self):
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.side_length <= 0:
            raise ConfigError(f"side_length must be > 0, got {self.side_length}")
        if self.r < 0:
            raise ConfigError(f"r must be >= 0, got {self.r}")
        if not 0.0 <= self.p_e <= 1.0:
            raise ConfigError(f"p_e must be in [0, 1], got {self.p_e}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.max_passes < 1:
            raise ConfigError(f"max_passes must be >= 1, got {self.max_passes}")
        if self.initial_profile not in _INITIAL_PROFILES:
            raise ConfigError(
                f"initial_profile must be one of {_INITIAL_PROFILES}, got {self.initial_profile!r}"
            )
        if self.energy_weight < 0:
            raise ConfigError(f"energy_weight must be >= 0, got {self.energy_weight}")


_NESTED = {"channel": ChannelParams, "correlation": CorrelationParams, "energy": EnergyModel}


def _build_nested(name: str, cls, data: dict) -> Any:
    if not isinstance(data, dict):
        raise ConfigError(f"{name} must be a mapping, got {type(data).__name__}")
    aliases = _ALIASES.get(name, {})
    fields = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        key = aliases.get(key, key)
        if key not in fields:
            raise ConfigError(f"unknown {name} field {key!r}")
        if key == "entropy_log_base":
            value = _BASE_ALIASES.get(str(value), value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {name} config: {exc}") from exc


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    fields = {f.name for f in dataclasses.fields(ExperimentConfig)}
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"unknown config field {key!r}")
        if key in _NESTED:
            value = _build_nested(key, _NESTED[key], value)
        kwargs[key] = value
    try:
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config: {exc}") from exc


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def apply_overrides(config: ExperimentConfig, overrides: list[str]) -> ExperimentConfig:
    """Apply `--set key=value` pairs; dotted keys reach nested sections."""
    if not overrides:
        return config
    data = _to_dict(config)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        parts = key.strip().split(".")
        node = data
        for part in parts[:-1]:
            if part not in node or not isinstance(node[part], dict):
                raise ConfigError(f"unknown config section {part!r} in {key!r}")
            node = node[part]
        node[parts[-1]] = value
    return config_from_dict(data)


def _to_dict(config: ExperimentConfig) -> dict:
    out = {}
    for f in dataclasses.fields(ExperimentConfig):
        value = getattr(config, f.name)
        if f.name in _NESTED:
            value = {
                g.name: getattr(value, g.name)
                for g in dataclasses.fields(value)
                if getattr(value, g.name) is not None
            }
        out[f.name] = value
    return out
