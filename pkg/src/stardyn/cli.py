"""Command-line entry point: run scenarios, list them, self-test, render."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import ConfigError, CoverageError, DomainError, InvariantError
from .lab import list_scenarios, run_scenario, selftest, write_run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lab",
        description="Seeded growth experiments for induced interval and "
                    "star dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and write outputs")
    p_run.add_argument("scenario", help="scenario name (see 'lab list')")
    p_run.add_argument("--config", help="JSON file with config overrides")
    p_run.add_argument("--out", default=None,
                       help="output directory (default runs/<scenario>)")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: all available cores); "
                            "outputs do not depend on this")

    p_list = sub.add_parser("list", help="list scenarios and their claims")
    p_list.add_argument("--json", action="store_true", dest="as_json")

    sub.add_parser("selftest", help="run every scenario on a small schedule")

    p_rep = sub.add_parser("report", help="render figures for a finished run")
    p_rep.add_argument("run_dir", help="directory written by 'lab run'")
    return parser


def _load_overrides(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("/config", f"cannot read {path}: {exc.strerror}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("/config", f"invalid JSON: {exc}")
    if not isinstance(data, dict):
        raise ConfigError("/config", "expected a JSON object")
    return data


def _cmd_run(args) -> int:
    overrides = _load_overrides(args.config)
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    result, cfg = run_scenario(args.scenario, overrides,
                               seed=args.seed, threads=threads)
    outdir = Path(args.out) if args.out else Path("runs") / args.scenario
    files = write_run(outdir, args.scenario, cfg, args.seed, result)
    for name, flag in sorted(result.verdicts.items()):
        print(f"[{'PASS' if flag else 'FAIL'}] {name}")
    print(f"wrote {', '.join(files)} to {outdir}")
    return 0 if result.passed else 1


def _cmd_list(args) -> int:
    catalog = list_scenarios()
    if args.as_json:
        payload = {e["name"]: {"claim": e["claim"], "defaults": e["defaults"]}
                   for e in catalog}
        print(json.dumps(payload, sort_keys=True, indent=2))
        return 0
    for entry in catalog:
        print(entry["name"])
        print(f"    {entry['claim']}")
    return 0


def _cmd_report(args) -> int:
    from .report import render_report

    figures = render_report(args.run_dir)
    if not figures:
        print(f"no recognized tables in {args.run_dir}")
        return 0
    for path in figures:
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "list":
            return _cmd_list(args)
        if args.command == "selftest":
            return 0 if selftest() else 1
        if args.command == "report":
            return _cmd_report(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, InvariantError, CoverageError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
