"""Strict INI-style scenario configuration.

Flat sectioned key=value text; every section and key must belong to the
schema below, and monitor names must exist in the registry.  Unknown keys
are errors that name the offending key, which keeps configs diff-stable.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .monitors import REGISTRY_NAMES

SCHEMA = {
    "scenario": {"model", "preset"},
    "grid": {"length", "n"},
    "time": {"t_final", "steps", "output_every"},
    "params": {"lambda", "kappa", "connection", "connection_strength",
               "target", "q", "delta"},
    "initial": {"kind", "seed", "amplitude", "n_modes", "mode", "branch", "a", "b"},
    "monitors": {"names"},
    "output": {"directory", "plots"},
}

MODELS = ("free", "massive", "twisted", "thirring", "dirac_wave_map")


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    data: dict = field(default_factory=dict)  # section -> {key: str}

    def get(self, section: str, key: str, default=None, cast=str):
        value = self.data.get(section, {}).get(key)
        if value is None:
            return default
        try:
            if cast is bool:
                low = value.strip().lower()
                if low in ("true", "yes", "1", "on"):
                    return True
                if low in ("false", "no", "0", "off"):
                    return False
                raise ValueError(value)
            return cast(value)
        except (TypeError, ValueError):
            raise ConfigError(
                f"key '{key}' in section [{section}] has invalid value {value!r}")

    def require(self, section: str, key: str, cast=str):
        value = self.get(section, key, None, cast)
        if value is None:
            raise ConfigError(f"missing key '{key}' in section [{section}]")
        return value


def _validate(data: dict) -> None:
    for section, keys in data.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in keys:
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
    model = data.get("scenario", {}).get("model")
    if model is not None and model not in MODELS:
        raise ConfigError(f"unknown model '{model}' in section [scenario]")
    names = data.get("monitors", {}).get("names", "all")
    if names != "all":
        for name in [n.strip() for n in names.split(",") if n.strip()]:
            if name not in REGISTRY_NAMES:
                raise ConfigError(f"unknown monitor '{name}' in section [monitors]")


def merge(base: dict, override: dict) -> dict:
    out = {section: dict(keys) for section, keys in base.items()}
    for section, keys in override.items():
        out.setdefault(section, {}).update(keys)
    return out


def load_config(path: str, presets: dict) -> ScenarioConfig:
    """Parse, merge with the named preset (if any) and validate."""
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file '{path}'")
    data = {section: dict(parser.items(section)) for section in parser.sections()}
    _validate(data)
    preset_name = data.get("scenario", {}).get("preset")
    if preset_name is not None:
        if preset_name not in presets:
            raise ConfigError(f"unknown preset '{preset_name}' in section [scenario]")
        data = merge(presets[preset_name], data)
        _validate(data)
    return ScenarioConfig(data)


def from_preset(name: str, presets: dict) -> ScenarioConfig:
    if name not in presets:
        raise ConfigError(f"unknown preset '{name}'")
    data = {section: dict(keys) for section, keys in presets[name].items()}
    _validate(data)
    return ScenarioConfig(data)
