"""Command-line entry point: ``itlab run`` and ``itlab list``.

Exit codes: 0 on success, 1 on a configuration or validation error, 2 on a
numerical failure or a failed check.
"""
from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

from .errors import ConfigError, NumericalError, ValidationError
from .scenarios import SCENARIOS, ScenarioResult, get_scenario, run_scenario
from .tables import format_value

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


def read_config(path: str | Path) -> tuple[str, dict[str, str]]:
    """Parse a flat ``key = value`` file with exactly one ``[scenario]`` header.

    The section header names the scenario, e.g. ``[fig2]``.
    """
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    parser.optionxform = str  # keep key case
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None
    sections = parser.sections()
    if len(sections) != 1:
        raise ConfigError(f"config file needs exactly one [scenario] section, found {len(sections)}")
    name = sections[0]
    return name, dict(parser.items(name))


def parse_assignments(items: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        out[key] = value
    return out


def write_result(result: ScenarioResult, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for label, table in result.tables.items():
        written.append(table.write(out_dir / f"{result.name}_{label}.csv"))
    if result.checks:
        written.append(result.checks_table().write(out_dir / f"{result.name}_checks.csv"))
    lines = [f"scenario = {result.name}"]
    lines += [f"{k} = {format_value(v)}" for k, v in result.summary.items()]
    for name, value, tol, ok in result.checks:
        lines.append(f"check {name}: {'PASS' if ok else 'FAIL'} "
                     f"(value {format_value(value)}, tolerance {format_value(tol)})")
    if result.checks:
        lines.append(f"status = {'pass' if result.passed else 'fail'}")
    summary = out_dir / f"{result.name}_summary.txt"
    with open(summary, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    written.append(summary)
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itlab", description="Imaging-theorem scenarios written as CSV tables."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--scenario", help="scenario name (overrides the config file section)")
    run.add_argument("--config", help="flat key = value file with one [scenario] header")
    run.add_argument("--out", default="itlab_out", help="output directory (default: itlab_out)")
    run.add_argument("--set", dest="assignments", action="append", default=[],
                     metavar="KEY=VALUE", help="override a parameter; repeatable")
    sub.add_parser("list", help="list scenarios and their parameters")
    return parser


def _list() -> int:
    for scenario in SCENARIOS.values():
        print(f"{scenario.name}: {scenario.description}")
        for p in scenario.params:
            default = ",".join(format_value(v) for v in p.default) \
                if isinstance(p.default, tuple) else format_value(p.default)
            print(f"    {p.name} = {default}")
    return EXIT_OK


def _run(args) -> int:
    overrides: dict[str, str] = {}
    name = None
    if args.config:
        name, overrides = read_config(args.config)
    if args.scenario:
        name = args.scenario
    if name is None:
        raise ConfigError("no scenario given (use --scenario or a config file)")
    get_scenario(name)
    overrides.update(parse_assignments(args.assignments))
    result = run_scenario(name, overrides)
    for path in write_result(result, Path(args.out)):
        print(path)
    for key, value in result.summary.items():
        print(f"{key} = {format_value(value)}")
    for check, value, tol, ok in result.checks:
        print(f"{'PASS' if ok else 'FAIL'} {check}: {format_value(value)} (tol {format_value(tol)})")
    return EXIT_OK if result.passed else EXIT_NUMERIC


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _list()
        return _run(args)
    except ValidationError as exc:
        print(f"itlab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"itlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
