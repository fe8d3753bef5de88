"""Command-line scenario runner.

Verbs:
  run <config>       execute a scenario, write CSV tables and a manifest
  validate <config>  parse and physics-check a config without running it
  list-scenarios     list the reference configs shipped with the package

Exit codes: 0 success, 1 config error, 2 numerical-convergence failure
(at least one output row flagged by the grid-refinement residual gate).
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .scenarios import ConfigError, parse_config, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CONVERGENCE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zrdelay",
        description="Scattering-delay and Larmor-clock scenario runner.")
    parser.add_argument("--version", action="version", version=f"zrdelay {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", help="execute a scenario config")
    run.add_argument("config", help="config file path or shipped scenario name")
    run.add_argument("--out", default=".", help="output directory (default: cwd)")
    run.add_argument("--grid-scale", type=float, default=1.0,
                     help="multiply every grid size by this factor")
    run.add_argument("--jobs", type=int, default=1,
                     help="worker processes for independent sweep points")
    run.add_argument("--strict", action="store_true",
                     help="reject unknown config keys instead of warning")
    run.add_argument("--dump-waves", action="store_true",
                     help="also write packet densities at one representative "
                          "width (transmission/reflection scenarios)")

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("config", help="config file path or shipped scenario name")
    val.add_argument("--strict", action="store_true",
                     help="reject unknown config keys instead of warning")

    sub.add_parser("list-scenarios", help="list shipped reference configs")
    return parser


def _shipped_configs() -> dict[str, str]:
    root = resources.files("zrdelay").joinpath("configs")
    out = {}
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".cfg"):
            out[entry.name[:-4]] = entry.read_text()
    return out


def _load_config(name: str) -> str:
    path = Path(name)
    if path.exists():
        return path.read_text()
    shipped = _shipped_configs()
    stem = name[:-4] if name.endswith(".cfg") else name
    if stem in shipped:
        return shipped[stem]
    raise FileNotFoundError(
        f"no config file {name!r} and no shipped scenario of that name "
        f"(shipped: {', '.join(sorted(shipped))})")


def _warn_unknown_keys(text: str) -> None:
    from .scenarios import _KNOWN_KEYS, _read_pairs

    pairs, _ = _read_pairs(text)
    for key in sorted(k for k in pairs if k not in _KNOWN_KEYS):
        print(f"warning: ignoring unknown config key {key!r}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.verb == "list-scenarios":
        for name, text in _shipped_configs().items():
            mode = next((line.split("=", 1)[1].strip()
                         for line in text.splitlines()
                         if line.split("#")[0].strip().startswith("scenario.mode")), "?")
            print(f"{name}\t{mode}")
        return EXIT_OK

    try:
        text = _load_config(args.config)
    except (FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        scenario = parse_config(text, strict=args.strict)
    except ConfigError as exc:
        print("config errors:", file=sys.stderr)
        for err in exc.errors:
            print(f"  - {err}", file=sys.stderr)
        return EXIT_CONFIG
    if not args.strict:
        _warn_unknown_keys(text)

    if args.verb == "validate":
        print(f"ok: {scenario.mode} scenario "
              f"({_point_count(scenario)} sweep points, prefix {scenario.prefix!r})")
        return EXIT_OK

    if args.dump_waves and scenario.mode not in ("transmit_sweep", "reflect_sweep",
                                                 "single_shot"):
        print(f"warning: --dump-waves has no effect for {scenario.mode} scenarios",
              file=sys.stderr)
    result = run_scenario(scenario, Path(args.out), grid_scale=args.grid_scale,
                          jobs=args.jobs, dump_waves=args.dump_waves)
    for path in result.files:
        print(f"wrote {path}")
    skipped = sum(1 for r in result.rows if str(r["status"]).startswith("skipped"))
    if skipped:
        print(f"{skipped} point(s) skipped (reasons recorded in the table)")
    if result.flagged:
        print(f"error: {len(result.flagged)} row(s) flagged by the grid-residual gate",
              file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def _point_count(scenario) -> int:
    if scenario.mode == "radial_sweep":
        return len(scenario.alpha_values) * len(scenario.dx_values)
    if scenario.mode == "larmor_sweep":
        return len(scenario.df_values)
    return len(scenario.laws) * len(scenario.dx_values)


if __name__ == "__main__":
    sys.exit(main())
