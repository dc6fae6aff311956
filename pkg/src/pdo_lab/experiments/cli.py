"""``pdo-lab`` command line: ``run`` and ``list``."""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, config_from_dict, load_config
from .registry import list_scenarios
from .runner import CaseError, run, write_reports

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdo-lab", description="Desk-scale pseudodifferential operator experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="JSON config file")
    src.add_argument("--scenario", help="registered scenario with its defaults")
    r.add_argument("--out", help="output directory")
    r.add_argument("--workers", type=int, help="parallel case workers")
    sub.add_parser("list", help="list registered scenarios")
    return p


def _cmd_list() -> int:
    for sc in list_scenarios():
        print(f"{sc.name:26s} {sc.description}  [{'; '.join(sc.anchors)}]")
    return EXIT_PASS


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config) if args.config else config_from_dict({"scenario": args.scenario})
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("--workers must be >= 1")
            from dataclasses import replace

            cfg = replace(cfg, workers=args.workers)
    except ConfigError as exc:
        print(f"pdo-lab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run(cfg)
    except CaseError as exc:
        print(f"pdo-lab: runtime error in {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    files = write_reports(result, args.out)
    counts = {v: sum(r.verdict == v for r in result.records) for v in ("pass", "fail", "flagged")}
    for r in result.records:
        print(f"{r.verdict:8s} {r.scenario}/{r.case_id}")
    print(f"{cfg.scenario}: {counts['pass']} pass, {counts['fail']} fail, {counts['flagged']} flagged "
          f"-> {files['csv']}")
    return result.status


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    if args.command == "list":
        return _cmd_list()
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
