"""webdirq command line: validate | audit | score | simulate.

Exit codes: 0 success, 1 findings (violations, failed audit, unreachable
simulation targets), 2 usage or input errors. Data goes to stdout or --out,
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from typing import IO, Iterator

from webdirq.directory import (
    DirectoryError,
    NavConfig,
    ParseError,
    UnreachableError,
    ValidationError,
    WebDirectory,
    load_directory,
    skip_level,
)
from webdirq.metrics import (
    InconsistentSessionError,
    SessionFormatError,
    aggregate,
    dump_jsonl,
    non_edge_transitions,
    read_numbered_sessions,
    score_session,
    write_sessions,
)
from webdirq.semantics import MODES, SemanticsConfig, audit, is_ideal, is_realistically_ideal
from webdirq.simulator import MAX_SEED, POLICIES, Policy, SimConfig, batch_simulate

OK, FINDINGS, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _open_directory(path: str) -> WebDirectory:
    try:
        with open(path, "rb") as fh:
            return load_directory(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except ParseError as exc:
        raise InputError(f"{path}: parse error: {exc}") from None


@contextmanager
def _output(path: str | None) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    with fh:
        yield fh


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        with open(args.directory, "rb") as fh:
            load_directory(fh)
    except OSError as exc:
        raise InputError(f"{args.directory}: {exc.strerror or exc}") from None
    except ParseError as exc:
        raise InputError(f"{args.directory}: parse error: {exc}") from None
    except ValidationError as exc:
        for v in exc.violations:
            print(f"VIOLATION: {v.rule}: {v.message}")
        return FINDINGS
    return OK


def cmd_audit(args) -> int:
    wd = _load_valid(args.directory)
    for level in sorted(set(args.skip_level), reverse=True):
        try:
            wd = skip_level(wd, level)
        except ValueError as exc:
            raise InputError(f"--skip-level {level}: {exc}") from None
    cfg = SemanticsConfig(mode=args.mode, epsilon=args.epsilon)
    gaps = audit(wd, cfg)
    order = {cid: i for i, cid in enumerate(wd.categories)}
    ranked = sorted(gaps.items(), key=lambda kv: (-kv[1].size, order[kv[0]]))
    for cid, g in ranked:
        if not g.vacuous:
            print(f"gap\t{cid}\t{g.size}\t{g.normalized:.6f}")
    for cid, g in ranked:
        if g.vacuous:
            print(f"vacuous\t{cid}\t{g.size}")
    ideal = is_ideal(wd, cfg)
    realistic = is_realistically_ideal(wd, cfg)
    print(f"ideal\t{'yes' if ideal else 'no'}")
    print(f"realistically_ideal\t{'yes' if realistic else 'no'}\tepsilon={cfg.epsilon}")
    verdict = "ideal" if ideal else "realistically ideal" if realistic else "not ideal"
    print(f"verdict\t{verdict}")
    return OK if realistic else FINDINGS


def cmd_score(args) -> int:
    wd = _load_valid(args.directory)
    cfg = SemanticsConfig(mode=args.mode, dist_cap=args.dist_cap, epsilon=args.epsilon)
    nav = NavConfig(allow_up=args.allow_up)
    try:
        fh = open(args.sessions, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{args.sessions}: {exc.strerror or exc}") from None
    results = []
    lines = []
    with fh:
        try:
            for index, (lineno, session) in enumerate(read_numbered_sessions(fh, wd)):
                for step, a, b in non_edge_transitions(wd, session, nav) if args.strict_edges else ():
                    _err(f"WARNING: line {lineno} step {step}: {a} -> {b} is not a navigable edge")
                try:
                    m = score_session(wd, session, cfg, nav)
                except (InconsistentSessionError, UnreachableError) as exc:
                    raise InputError(f"{args.sessions}: line {lineno}: {exc}") from None
                results.append(m)
                lines.append(dump_jsonl({"session": index, **m.to_dict()}))
        except SessionFormatError as exc:
            raise InputError(f"{args.sessions}: {exc}") from None

    report = aggregate(results)
    with _output(args.out) as out:
        out.writelines(lines)
    with _output(args.report) as out:
        if args.format == "csv":
            csv.writer(out, lineterminator="\n").writerows(report.csv_rows())
        else:
            out.write(json.dumps(report.to_dict(), indent=2) + "\n")
    return OK


def cmd_simulate(args) -> int:
    wd = _load_valid(args.directory)
    if args.targets == "all":
        targets = [rid for rid in wd.resources if wd.holders(rid)]
    else:
        targets = [t for t in args.targets.split(",") if t]
        unknown = [t for t in targets if t not in wd.resources]
        if unknown:
            raise InputError(f"unknown target resource: {', '.join(unknown)}")
    if args.start is not None and args.start not in wd.categories:
        raise InputError(f"unknown start category: {args.start}")
    try:
        policy = Policy(args.policy, args.noise, args.max_steps)
        cfg = SimConfig(
            seed=args.seed,
            nav=NavConfig(allow_up=args.allow_up),
            semantics=SemanticsConfig(mode=args.mode, dist_cap=args.dist_cap),
            start=args.start,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    batch = batch_simulate(wd, targets, policy, cfg, args.count)
    with _output(args.out) as out:
        write_sessions(batch, out)
    for target, reason in batch.failures.items():
        _err(f"unreachable target {target}: {reason}")
    return FINDINGS if batch.failures else OK


def _load_valid(path: str) -> WebDirectory:
    try:
        return _open_directory(path)
    except ValidationError as exc:
        for v in exc.violations:
            _err(f"VIOLATION: {v.rule}: {v.message}")
        raise InputError(f"{path}: invalid directory ({len(exc.violations)} violations)") from None


# -- argument parsing -------------------------------------------------------------

def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return value


def _cap(text: str) -> float:
    value = float(text)
    if not value >= 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="webdirq", description="Web directory structure audits and browse-session metrics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a directory dump against the structural rules")
    p.add_argument("directory")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("audit", help="ideality audit of category content")
    p.add_argument("directory")
    p.add_argument("--epsilon", type=_non_negative_int, default=0, help="tolerated gap size (default 0)")
    p.add_argument("--mode", choices=MODES, default="auto", help="content definition for child aggregation")
    p.add_argument("--skip-level", type=int, action="append", default=[], metavar="L",
                   help="drop level L before auditing; repeatable, applied highest level first")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("score", help="score a session log")
    p.add_argument("directory")
    p.add_argument("--sessions", required=True, help="JSON Lines session log")
    p.add_argument("--dist-cap", type=_cap, default=1000.0, help="distance used when similarity is 0 (default 1000)")
    p.add_argument("--epsilon", type=_non_negative_int, default=0)
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--allow-up", action="store_true", help="child -> parent moves count as navigable")
    p.add_argument("--strict-edges", action="store_true", help="warn about transitions that are not navigable edges")
    p.add_argument("--out", help="per-session metrics JSON Lines (default stdout)")
    p.add_argument("--report", help="aggregate report (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="aggregate report format")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("simulate", help="generate a session log")
    p.add_argument("directory")
    p.add_argument("--policy", choices=POLICIES, default="optimal")
    p.add_argument("--noise", type=float, default=None, help="random-move probability (noisy_greedy)")
    p.add_argument("--targets", default="all", help="'all' or comma-separated resource ids")
    p.add_argument("--count", type=_non_negative_int, default=1, help="sessions per target (default 1)")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--start", default=None, help="start category (default root)")
    p.add_argument("--max-steps", type=_non_negative_int, default=None,
                   help="move budget before completing by the shortest walk (default 10 x categories)")
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--dist-cap", type=_cap, default=1000.0)
    p.add_argument("--allow-up", action="store_true")
    p.add_argument("--out", help="session log path (default stdout)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InputError as exc:
        _err(str(exc))
        return INPUT_ERROR
    except DirectoryError as exc:
        _err(str(exc))
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
