"""Command-line entry point: run / list / sweep.

Exit codes: 0 success, 2 configuration error (message names the offending
key), 3 detected instability (message names the first bad step index).
"""

from __future__ import annotations

import argparse
import glob
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import ConfigError, from_preset, load_config
from .presets import PRESETS, preset_names
from .reports import write_series_csv
from .runner import build_report
from .scenarios import run_scenario

OUTPUT_ROOT_ENV = "DIRACSIM_OUTPUT_ROOT"


def _resolve_config(spec: str):
    """A path to an INI file, or a bare preset name."""
    if os.path.exists(spec):
        return load_config(spec, PRESETS)
    if spec in PRESETS:
        return from_preset(spec, PRESETS)
    raise ConfigError(f"'{spec}' is neither a config file nor a preset name")


def _output_dir(cfg, spec: str) -> Path:
    configured = cfg.get("output", "directory")
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if configured is not None:
        path = Path(configured)
        if root is not None and not path.is_absolute():
            path = Path(root) / path
    else:
        stem = Path(spec).stem if os.path.exists(spec) else spec
        path = Path(root) / stem if root is not None else Path("out") / stem
    path.mkdir(parents=True, exist_ok=True)
    return path


def run_one(spec: str) -> int:
    try:
        cfg = _resolve_config(spec)
        out_dir = _output_dir(cfg, spec)
        result, monitors, metadata = run_scenario(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if not result.stable:
        print(f"instability detected at step {result.instability_step}",
              file=sys.stderr)
        return 3

    write_series_csv(out_dir / "series.csv", result.times, result.series)
    report = build_report(result, monitors, metadata)
    (out_dir / "report.txt").write_text(report.render())
    if cfg.get("output", "plots", True, bool):
        from .plotting import render_series_figures
        render_series_figures(out_dir, result.times, result.series)
    print(f"wrote {out_dir / 'series.csv'}")
    return 0


def cmd_list() -> int:
    print("available presets:")
    for name in preset_names():
        model = PRESETS[name]["scenario"]["model"]
        print(f"  {name:<24} (model: {model})")
    return 0


def cmd_sweep(pattern: str, jobs: int) -> int:
    paths = sorted(glob.glob(pattern))
    if not paths:
        print(f"config error: glob '{pattern}' matches no files", file=sys.stderr)
        return 2
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        codes = list(pool.map(run_one, paths))
    worst = max(codes)
    for path, code in zip(paths, codes):
        print(f"{path}: exit {code}")
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="diracsim",
        description="scenario runner for 1+1-dimensional Dirac-type equations")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario (config path or preset name)")
    p_run.add_argument("config")

    sub.add_parser("list", help="list built-in presets")

    p_sweep = sub.add_parser("sweep", help="run every config matching a glob")
    p_sweep.add_argument("pattern")
    p_sweep.add_argument("--jobs", type=int, default=2)

    args = parser.parse_args(argv)
    if args.command == "run":
        return run_one(args.config)
    if args.command == "list":
        return cmd_list()
    if args.command == "sweep":
        return cmd_sweep(args.pattern, args.jobs)
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
