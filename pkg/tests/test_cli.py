"""Command-line entry point: presets, outputs, exit codes, determinism."""

import os

import numpy as np
import pytest

from diracsim.cli import main
from diracsim.presets import preset_names


@pytest.fixture()
def out_root(tmp_path, monkeypatch):
    root = tmp_path / "out"
    monkeypatch.setenv("DIRACSIM_OUTPUT_ROOT", str(root))
    return root


def run_config(tmp_path, out_root, text, name="scenario.ini"):
    path = tmp_path / name
    path.write_text(text)
    return main(["run", str(path)]), out_root / path.stem


def test_list_names_every_preset(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in preset_names():
        assert name in out


def test_every_preset_runs(tmp_path, out_root):
    """All built-in presets complete with exit code 0 at their N=64 sizes
    (figures disabled here to keep the smoke test fast)."""
    for name in preset_names():
        code, out_dir = run_config(
            tmp_path, out_root,
            f"[scenario]\npreset = {name}\n\n[output]\nplots = false\n",
            name=f"{name}.ini")
        assert code == 0, name
        assert (out_dir / "series.csv").exists()
        assert (out_dir / "report.txt").exists()
        assert not (out_dir / "monitors.png").exists()


def test_run_by_preset_name_renders_figures(out_root):
    assert main(["run", "free_chiral"]) == 0
    out_dir = out_root / "free_chiral"
    assert (out_dir / "series.csv").exists()
    assert (out_dir / "monitors.png").exists()
    assert (out_dir / "E1.png").exists()
    header = (out_dir / "series.csv").read_text().splitlines()[0]
    assert header.split(",")[0] == "t"


def test_reruns_are_bit_identical(tmp_path, out_root):
    text = "[scenario]\npreset = thirring_massive\n\n[output]\nplots = false\n"
    code_a, dir_a = run_config(tmp_path, out_root, text, "run_a.ini")
    code_b, dir_b = run_config(tmp_path, out_root, text, "run_b.ini")
    assert code_a == code_b == 0
    assert (dir_a / "series.csv").read_bytes() == (dir_b / "series.csv").read_bytes()


def test_config_error_exit_code_names_key(tmp_path, out_root, capsys):
    code, _ = run_config(tmp_path, out_root,
                         "[scenario]\nmodel = free\n\n[grid]\nresolution = 64\n")
    assert code == 2
    assert "resolution" in capsys.readouterr().err
    assert main(["run", "not_a_preset_or_file"]) == 2


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_instability_exit_code_names_step(tmp_path, out_root, capsys):
    code, _ = run_config(tmp_path, out_root, (
        "[scenario]\npreset = thirring_massive\n\n"
        "[params]\nkappa = 1e8\n\n"
        "[initial]\namplitude = 5.0\nn_modes = 8\n\n"
        "[output]\nplots = false\n"))
    assert code == 3
    assert "instability detected at step" in capsys.readouterr().err


def test_gronwall_pair_emits_envelope_series(tmp_path, out_root):
    code, out_dir = run_config(
        tmp_path, out_root,
        "[scenario]\npreset = gronwall_pair\n\n[output]\nplots = false\n")
    assert code == 0
    header = (out_dir / "series.csv").read_text().splitlines()[0]
    assert "gronwall_envelope" in header
    assert "gronwall_envelope" in (out_dir / "report.txt").read_text()


def test_monitor_subset_selection(tmp_path, out_root):
    code, out_dir = run_config(tmp_path, out_root, (
        "[scenario]\npreset = free_chiral\n\n"
        "[monitors]\nnames = E1, E4\n\n[output]\nplots = false\n"))
    assert code == 0
    header = (out_dir / "series.csv").read_text().splitlines()[0]
    assert header == "t,E1,E4"


def test_explicit_output_directory(tmp_path, monkeypatch):
    monkeypatch.delenv("DIRACSIM_OUTPUT_ROOT", raising=False)
    target = tmp_path / "explicit"
    path = tmp_path / "cfg.ini"
    path.write_text("[scenario]\npreset = free_chiral\n\n"
                    f"[output]\ndirectory = {target}\nplots = false\n")
    assert main(["run", str(path)]) == 0
    assert (target / "series.csv").exists()


def test_sweep_runs_matching_configs(tmp_path, out_root, capsys):
    for k in (0, 1):
        (tmp_path / f"sweep{k}.ini").write_text(
            "[scenario]\npreset = free_chiral\n\n[output]\nplots = false\n")
    assert main(["sweep", str(tmp_path / "sweep*.ini"), "--jobs", "2"]) == 0
    assert main(["sweep", str(tmp_path / "nothing*.ini")]) == 2
