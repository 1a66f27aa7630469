"""Per-session browse metrics (path ratio, maximum revisit, distance decrease progression) and aggregation."""
from __future__ import annotations

import json
import statistics
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import accumulate
from typing import IO, Iterable, Iterator, NamedTuple

from webdirq.directory import NavConfig, WebDirectory, shortest_path_length
from webdirq.semantics import SemanticsConfig, distance


class InconsistentSessionError(ValueError):
    """A session walk is shorter than the directory allows."""


class SessionFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class BrowseSession:
    target_resource: str
    target_category: str
    visits: tuple[str, ...]
    truncated: bool = False

    def __post_init__(self):
        if not self.visits:
            raise ValueError("a session needs at least one visit")
        if self.visits[-1] != self.target_category:
            raise ValueError(f"last visit {self.visits[-1]} is not the target category {self.target_category}")
        object.__setattr__(self, "visits", tuple(self.visits))

    def check(self, wd: WebDirectory) -> None:
        """Raise ValueError unless every id exists in ``wd`` and the target category holds the resource."""
        for cid in self.visits:
            if cid not in wd.categories:
                raise ValueError(f"unknown category {cid}")
        if self.target_resource not in wd.resources:
            raise ValueError(f"unknown resource {self.target_resource}")
        if self.target_resource not in wd.categories[self.target_category].resources:
            raise ValueError(f"category {self.target_category} does not hold resource {self.target_resource}")

    def to_dict(self) -> dict:
        out = {
            "target_resource": self.target_resource,
            "target_category": self.target_category,
            "visits": list(self.visits),
        }
        if self.truncated:
            out["truncated"] = True
        return out


@dataclass(frozen=True)
class SessionMetrics:
    pr: float
    mr: int
    ddp_steps: tuple[float, ...]
    ddp_partial_sums: tuple[float, ...]
    ddp_total: float
    monotone: bool

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ddp_steps"] = list(self.ddp_steps)
        out["ddp_partial_sums"] = list(self.ddp_partial_sums)
        return out


def path_ratio(wd: WebDirectory, s: BrowseSession, nav: NavConfig = NavConfig()) -> float:
    shortest = shortest_path_length(wd, s.visits[0], s.target_category, nav)
    length = len(s.visits)
    if length < shortest:
        raise InconsistentSessionError(
            f"session of {length} visits is shorter than the minimum walk of {shortest}")
    return 1.0 - shortest / length


def max_revisit(s: BrowseSession) -> int:
    return max(Counter(s.visits).values()) - 1


class Progression(NamedTuple):
    steps: tuple[float, ...]
    partial_sums: tuple[float, ...]
    total: float
    monotone: bool


def ddp(wd: WebDirectory, s: BrowseSession, cfg: SemanticsConfig = SemanticsConfig()) -> Progression:
    """Per-step decrease of semantic distance to the target category along the walk."""
    dists = [distance(wd, c, s.target_category, cfg) for c in s.visits]
    steps = tuple(a - b for a, b in zip(dists, dists[1:]))
    partial = tuple(accumulate(steps))
    return Progression(
        steps=steps,
        partial_sums=partial,
        total=partial[-1] if partial else 0.0,
        monotone=all(d >= 0 for d in steps),
    )


def score_session(
    wd: WebDirectory,
    s: BrowseSession,
    cfg: SemanticsConfig = SemanticsConfig(),
    nav: NavConfig = NavConfig(),
) -> SessionMetrics:
    prog = ddp(wd, s, cfg)
    return SessionMetrics(
        pr=path_ratio(wd, s, nav),
        mr=max_revisit(s),
        ddp_steps=prog.steps,
        ddp_partial_sums=prog.partial_sums,
        ddp_total=prog.total,
        monotone=prog.monotone,
    )


def non_edge_transitions(wd: WebDirectory, s: BrowseSession, nav: NavConfig = NavConfig()) -> list[tuple[int, str, str]]:
    """(step index, from, to) for every transition that does not follow a navigable edge."""
    return [
        (i, a, b)
        for i, (a, b) in enumerate(zip(s.visits, s.visits[1:]), start=1)
        if not wd.is_edge(a, b, nav)
    ]


# -- aggregation ----------------------------------------------------------------

@dataclass(frozen=True)
class Summary:
    count: int
    mean: float | None = None
    median: float | None = None
    stdev: float | None = None
    min: float | None = None
    max: float | None = None

    @classmethod
    def of(cls, values: list[float]) -> Summary:
        if not values:
            return cls(0)
        values = sorted(values)
        return cls(
            count=len(values),
            mean=statistics.fmean(values),
            median=statistics.median(values),
            stdev=statistics.pstdev(values),
            min=values[0],
            max=values[-1],
        )


@dataclass(frozen=True)
class AggregateReport:
    count: int
    pr: Summary = field(default_factory=lambda: Summary(0))
    mr: Summary = field(default_factory=lambda: Summary(0))
    ddp_total: Summary = field(default_factory=lambda: Summary(0))
    fraction_pr_zero: float | None = None
    fraction_mr_zero: float | None = None
    fraction_monotone: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_rows(self) -> list[list]:
        rows: list[list] = [["metric", "count", "mean", "median", "stdev", "min", "max"]]
        for name in ("pr", "mr", "ddp_total"):
            s: Summary = getattr(self, name)
            rows.append([name, s.count, s.mean, s.median, s.stdev, s.min, s.max])
        for name in ("fraction_pr_zero", "fraction_mr_zero", "fraction_monotone"):
            rows.append([name, self.count, getattr(self, name), "", "", "", ""])
        return rows


def aggregate(results: Iterable[SessionMetrics]) -> AggregateReport:
    results = list(results)
    n = len(results)
    if n == 0:
        return AggregateReport(0)
    return AggregateReport(
        count=n,
        pr=Summary.of([r.pr for r in results]),
        mr=Summary.of([float(r.mr) for r in results]),
        ddp_total=Summary.of([r.ddp_total for r in results]),
        fraction_pr_zero=sum(r.pr == 0 for r in results) / n,
        fraction_mr_zero=sum(r.mr == 0 for r in results) / n,
        fraction_monotone=sum(r.monotone for r in results) / n,
    )


# -- session log ------------------------------------------------------------------

_SESSION_KEYS = {"target_resource", "target_category", "visits", "truncated"}


def read_sessions(stream: IO[str], wd: WebDirectory | None = None) -> Iterator[BrowseSession]:
    """Parse a JSON Lines session log; blank lines are skipped.

    With ``wd`` given, every session is checked against it. Errors carry the 1-based line number.
    """
    for _, session in read_numbered_sessions(stream, wd):
        yield session


def read_numbered_sessions(stream: IO[str], wd: WebDirectory | None = None) -> Iterator[tuple[int, BrowseSession]]:
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SessionFormatError(lineno, f"malformed JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise SessionFormatError(lineno, "expected a JSON object")
        unknown = set(obj) - _SESSION_KEYS
        if unknown:
            raise SessionFormatError(lineno, f"unknown fields: {', '.join(sorted(unknown))}")
        try:
            visits = obj["visits"]
            if not isinstance(visits, list) or not all(isinstance(v, str) for v in visits):
                raise ValueError("visits must be a list of category ids")
            if not isinstance(obj["target_resource"], str) or not isinstance(obj["target_category"], str):
                raise ValueError("target ids must be strings")
            session = BrowseSession(
                target_resource=obj["target_resource"],
                target_category=obj["target_category"],
                visits=tuple(visits),
                truncated=bool(obj.get("truncated", False)),
            )
            if wd is not None:
                session.check(wd)
        except KeyError as exc:
            raise SessionFormatError(lineno, f"missing field {exc.args[0]}") from None
        except ValueError as exc:
            raise SessionFormatError(lineno, str(exc)) from None
        yield lineno, session


def dump_jsonl(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False) + "\n"


def write_sessions(sessions: Iterable[BrowseSession], stream: IO[str]) -> None:
    for s in sessions:
        stream.write(dump_jsonl(s.to_dict()))
