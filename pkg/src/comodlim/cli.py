"""Command-line entry point: ``comodlim {check,run,corpus,selftest}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .coalg import corpus
from .dsl.jsonio import coalgebra_json
from .dsl.runtime import EXIT_CERTIFICATE, EXIT_FATAL, EXIT_INVALID, EXIT_OK, Runner, run_text
from .dsl.syntax import ParseError, parse_session


def _read(path: str) -> str | None:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        print(f"{path}: {e}", file=sys.stderr)
        return None


def cmd_check(args) -> int:
    text = _read(args.file)
    if text is None:
        return EXIT_INVALID
    try:
        session = parse_session(text)
    except ParseError as e:
        print(f"{args.file}:{e}", file=sys.stderr)
        return EXIT_INVALID
    t = Runner(certify=False, keep_going=True, definitions_only=True).run(session)
    for e in t.entries:
        if not e.ok:
            print(f"{args.file}:{e.error}", file=sys.stderr)
    if t.exit_code == EXIT_OK:
        print(f"{args.file}: ok ({len(session.directives)} directives)")
    return t.exit_code


def cmd_run(args) -> int:
    text = _read(args.file)
    if text is None:
        return EXIT_INVALID
    t = run_text(text, certify=not args.no_certify, keep_going=args.keep_going)
    if args.json:
        print(json.dumps(t.to_dict(), indent=2))
        return t.exit_code
    for e in t.entries:
        if e.json is not None:
            print(e.json)
        elif e.ok:
            label = f"{e.directive} {e.name}" if e.name else e.directive
            bits = ", ".join(f"{k}={v}" for k, v in e.summary.items())
            cert = ""
            if e.certificate is not None:
                cert = " certificate " + ("ok" if e.certificate["ok"] else "FAILED")
            print(f"{label}: {bits}{cert}")
        if not e.ok:
            print(f"{args.file}:{e.error}", file=sys.stderr)
    return t.exit_code


def cmd_corpus(args) -> int:
    print(json.dumps([coalgebra_json(c) for c in corpus().values()], indent=2))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    numbers = args.only or None
    results = run_selftest(args.seed, numbers)
    for r in results:
        print(r.line())
    if any(r.fatal for r in results):
        return EXIT_FATAL
    if not all(r.passed for r in results):
        return EXIT_CERTIFICATE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="comodlim", description="Limits and colimits of comodules, exactly.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate definitions without running constructions")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("run", help="run a session file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="print the transcript as JSON")
    p.add_argument("--keep-going", action="store_true", help="continue after a failed directive")
    p.add_argument("--no-certify", action="store_true", help="skip certificates")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("corpus", help="print the standard coalgebras as JSON")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("selftest", help="run the seeded property suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--only", type=int, action="append", metavar="N", help="run only criterion N")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
