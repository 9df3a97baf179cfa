from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

from .bounds import THEOREMS, BoundInput, evaluate_theorem
from .engine import run_corpus, verify_file
from .errors import InputError
from .report import jsonable, render_text

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def _json_print(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True, default=str))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fibra", description="Exact verification of canonically fibred 3-fold constructions"
    )
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = p.add_subparsers(dest="cmd", required=True)

    ver = sub.add_parser("verify", help="Run the verification pipeline on one construction file")
    ver.add_argument("file", help="Construction file (JSON, schema fibra.construction/1)")
    ver.add_argument("--emit-json", default=None, metavar="PATH", help="Write the JSON report here ('-' for stdout)")

    cor = sub.add_parser("corpus", help="Verify every bundled construction and print a summary")
    cor.add_argument("--parallel", action="store_true", help="Verify independent files in worker processes")
    cor.add_argument("--dir", default=None, help="Corpus directory (default: $FIBRA_CORPUS_DIR or the bundled one)")
    cor.add_argument("--emit-json", default=None, metavar="PATH", help="Write the summary and reports here ('-' for stdout)")

    bnd = sub.add_parser("bounds", help="Evaluate one boundedness inequality or threshold exactly")
    bnd.add_argument("--theorem", required=True, help=f"One of {', '.join(THEOREMS)}")
    bnd.add_argument("--pg", type=int, default=None, help="p_g(X)")
    bnd.add_argument("--b", type=int, default=None, choices=[0, 1], help="Genus of the base curve")
    bnd.add_argument("--qF", default=None, choices=["zero", "positive"], help="Irregularity of the fiber")
    bnd.add_argument("--g", type=int, default=None, help="Genus of the fiber curve")
    bnd.add_argument("--p", type=_fraction, default=None)
    bnd.add_argument("--beta", type=_fraction, default=None)
    bnd.add_argument("--xi", type=_fraction, default=None)
    bnd.add_argument("--k2", type=int, default=None, help="K^2 of the minimal fiber surface")
    bnd.add_argument("--k3", type=_fraction, default=None, help="K_X^3")
    bnd.add_argument("--chi", type=_fraction, default=None, help="chi(omega_X)")
    bnd.add_argument("--emit-json", action="store_true", help="Print JSON instead of a table")

    return p


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _write_json(target: str, obj: Any) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, default=str)
    if target == "-":
        print(text)
        return
    Path(target).write_text(text + "\n", encoding="utf-8")
    log.info("wrote %s", target)


def _table(result: Dict[str, Any], prefix: str = "") -> List[str]:
    lines: List[str] = []
    for key in sorted(result):
        value = result[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            lines.extend(_table(value, prefix=f"{name}."))
        else:
            lines.append(f"{name:<32} {value}")
    return lines


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        if args.cmd == "verify":
            report = verify_file(args.file)
            if args.emit_json != "-":
                print(render_text(report))
            if args.emit_json:
                _write_json(args.emit_json, report.to_dict())
            return EXIT_OK if report.passed else EXIT_FAILED

        if args.cmd == "corpus":
            summary, reports = run_corpus(args.dir, parallel=args.parallel)
            if args.emit_json != "-":
                print(summary.render_text())
            if args.emit_json:
                _write_json(
                    args.emit_json,
                    {"summary": summary.to_dict(), "reports": [r.to_dict() for r in reports]},
                )
            return EXIT_OK if summary.passed else EXIT_FAILED

        if args.cmd == "bounds":
            inp = BoundInput(
                pg=args.pg,
                b=args.b,
                qF=args.qF,
                g=args.g,
                p=args.p,
                beta=args.beta,
                xi=args.xi,
                k2=args.k2,
                k3=args.k3,
                chi=args.chi,
            )
            try:
                result = jsonable(evaluate_theorem(args.theorem, inp))
            except ValueError as e:
                print(f"fibra: {e}", file=sys.stderr)
                return EXIT_INPUT
            if args.emit_json:
                _json_print({"theorem": args.theorem, "result": result})
            else:
                print(f"theorem {args.theorem}")
                for line in _table(result):
                    print(f"  {line}")
            holds = result.get("holds")
            return EXIT_FAILED if holds is False else EXIT_OK
    except InputError as e:
        print(f"fibra: {e.kind}: {e.message}", file=sys.stderr)
        return EXIT_INPUT

    raise RuntimeError(f"Unknown cmd: {args.cmd}")


if __name__ == "__main__":
    raise SystemExit(main())
