"""Command line interface.

``polcheck run <session-file>`` executes a session and prints a report.
Exit codes: 0 all commands pass, 1 any refutation or inapplicable
check, 2 usage or parse error, 3 internal inconsistency (the engine
disagreed with the independent oracle under --oracle-check).
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ParseError, PolcheckError
from .session import RunOptions, emit_report, parse_session, run_session


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polcheck",
        description="Verify and classify functional equations f(P(x)) = Q(f(x)) "
                    "for generalized polynomials, with exact arithmetic.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    run = sub.add_parser("run", help="execute a session file")
    run.add_argument("session", help="path to the session file")
    run.add_argument("--format", choices=("json", "text"), default="text")
    run.add_argument("--seed", type=int, default=None,
                     help="sampling seed (default: POLCHECK_SEED or 0)")
    run.add_argument("--samples", type=int, default=20,
                     help="default number of seeded samples per check")
    run.add_argument("--max-arity", type=int, default=8,
                     help="cap on form arity for span checks (hard ceiling 8)")
    run.add_argument("--oracle-check", action="store_true",
                     help="recompute every engine value with the naive oracle")
    run.add_argument("--out", default=None, help="write the report to a file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        seed = args.seed
    else:
        seed = int(os.environ.get("POLCHECK_SEED", "0"))
    try:
        with open(args.session, "r", encoding="utf-8") as handle:
            source = handle.read()
    except OSError as exc:
        print(f"polcheck: cannot read session: {exc}", file=sys.stderr)
        return 2
    try:
        session = parse_session(source)
    except (ParseError, PolcheckError) as exc:
        print(f"polcheck: {exc}", file=sys.stderr)
        return 2
    options = RunOptions(seed=seed, samples=args.samples,
                         max_arity=args.max_arity, oracle_check=args.oracle_check)
    doc = run_session(session, options)
    payload = emit_report(doc, args.format)
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(payload)
    else:
        sys.stdout.buffer.write(payload)
    return doc.exit_code


if __name__ == "__main__":
    sys.exit(main())
