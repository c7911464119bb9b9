"""Strict scenario configuration: schema, presets, merging, casts."""

import pytest

from diracsim.config import (
    ConfigError,
    ScenarioConfig,
    from_preset,
    load_config,
    merge,
)
from diracsim.presets import PRESETS, preset_names


def write(tmp_path, text):
    path = tmp_path / "scenario.ini"
    path.write_text(text)
    return str(path)


def test_presets_all_validate():
    for name in preset_names():
        cfg = from_preset(name, PRESETS)
        assert cfg.require("scenario", "model")


def test_unknown_preset_rejected():
    with pytest.raises(ConfigError, match="unknown preset"):
        from_preset("no_such_thing", PRESETS)


def test_load_config_with_inheritance(tmp_path):
    path = write(tmp_path, "[scenario]\npreset = free_chiral\n\n[grid]\nn = 128\n")
    cfg = load_config(path, PRESETS)
    assert cfg.get("grid", "n", cast=int) == 128  # overridden
    assert cfg.get("initial", "kind") == "chiral"  # inherited


def test_unknown_section_and_key_are_named(tmp_path):
    with pytest.raises(ConfigError, match=r"\[nonsense\]"):
        load_config(write(tmp_path, "[nonsense]\nx = 1\n"), PRESETS)
    with pytest.raises(ConfigError, match="wavelength"):
        load_config(write(tmp_path, "[scenario]\nmodel = free\n\n[params]\nwavelength = 2\n"),
                    PRESETS)


def test_unknown_model_and_monitor_are_named(tmp_path):
    with pytest.raises(ConfigError, match="heat_equation"):
        load_config(write(tmp_path, "[scenario]\nmodel = heat_equation\n"), PRESETS)
    with pytest.raises(ConfigError, match="E99"):
        load_config(write(tmp_path,
                          "[scenario]\nmodel = free\n\n[monitors]\nnames = E1, E99\n"),
                    PRESETS)


def test_missing_file_and_missing_key():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/no/such/file.ini", PRESETS)
    cfg = ScenarioConfig({"scenario": {"model": "free"}})
    with pytest.raises(ConfigError, match="lambda"):
        cfg.require("params", "lambda", float)


def test_casts_and_invalid_values():
    cfg = ScenarioConfig({"time": {"steps": "16"}, "output": {"plots": "false"},
                          "params": {"lambda": "oops"}})
    assert cfg.get("time", "steps", cast=int) == 16
    assert cfg.get("output", "plots", True, bool) is False
    assert cfg.get("grid", "n", 64, int) == 64  # default
    with pytest.raises(ConfigError, match="lambda"):
        cfg.get("params", "lambda", cast=float)
    cfg2 = ScenarioConfig({"output": {"plots": "maybe"}})
    with pytest.raises(ConfigError, match="plots"):
        cfg2.get("output", "plots", True, bool)


def test_merge_is_shallow_per_section():
    base = {"grid": {"n": "64", "length": "1.0"}}
    override = {"grid": {"n": "128"}, "time": {"steps": "8"}}
    out = merge(base, override)
    assert out["grid"] == {"n": "128", "length": "1.0"}
    assert out["time"] == {"steps": "8"}
    assert base["grid"]["n"] == "64"  # base untouched
