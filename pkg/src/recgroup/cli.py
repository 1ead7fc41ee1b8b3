"""Command-line entry point.

Exit codes: 0 success, 1 validation error, 2 resource cap, 3 theorem
violation.
"""
from __future__ import annotations

import argparse
import sys
import time

from .analysis import build_system, run_analysis
from .config import load_config
from .errors import RecgroupError
from .report import emit_report, export_chain_graph_dot

VERBS = {
    "analyze": None,  # the config's run list
    "verify": ["verify"],
    "shadowing": ["shadowing"],
    "quotient": ["quotient"],
    "entropy": ["entropy"],
    "addition": ["addition"],
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="system configuration file")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--cap", type=int, metavar="N", help="override the element/state cap")
    common.add_argument("--seed", type=int, default=0, metavar="N",
                        help="accepted for harness compatibility; analyses are deterministic")
    common.add_argument("--timing", action="store_true", help="print wall time to stderr")

    parser = argparse.ArgumentParser(prog="recgroup", description="Recurrence, shadowing and entropy "
                                     "for endomorphisms of finite abelian groups.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        sub.add_parser(verb, parents=[common])
    dot = sub.add_parser("export-dot", parents=[common], help="chain graph of one base level as DOT")
    dot.add_argument("--entourage", type=int, default=0, metavar="INDEX", help="base level (0 = coarsest)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = load_config(args.config)
        if args.cap is not None:
            cfg.cap = args.cap
        if args.verb == "export-dot":
            system = build_system(cfg)
            if not 0 <= args.entourage < len(system.base):
                print(f"error: --entourage must be in 0..{len(system.base) - 1}", file=sys.stderr)
                return 1
            out = export_chain_graph_dot(system.f, system.base[args.entourage]).encode()
            code = 0
        else:
            report = run_analysis(cfg, VERBS[args.verb])
            out = emit_report(report, args.format)
            code = report.exit_code
    except RecgroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    if code == 3:
        print("THEOREM VIOLATION reported; see the report for details", file=sys.stderr)
    if args.timing:
        print(f"time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
