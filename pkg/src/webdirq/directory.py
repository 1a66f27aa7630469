"""Directory graph: categories, resources, dump loading, validation and navigation."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Iterator

import jsonschema

from webdirq.semantics import ConceptBag


class DirectoryError(Exception):
    pass


class ParseError(DirectoryError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class ValidationError(DirectoryError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class UnreachableError(DirectoryError):
    pass


@dataclass(frozen=True)
class Violation:
    rule: str
    ids: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class Resource:
    id: str
    url: str = ""
    concepts: ConceptBag = field(default_factory=ConceptBag)


@dataclass(frozen=True)
class Category:
    id: str
    level: int
    url: str = ""
    children: tuple[str, ...] = ()
    cross_links: tuple[str, ...] = ()
    resources: frozenset[str] = frozenset()
    constant_bag: ConceptBag | None = None


@dataclass(frozen=True)
class NavConfig:
    # traverse child -> parent edges (the Back button)
    allow_up: bool = False


@dataclass(frozen=True)
class WebDirectory:
    root: str
    categories: dict[str, Category]
    resources: dict[str, Resource]
    # memo for derived data (parents, BFS trees, bag contents); never affects results
    _memo: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def depth(self) -> int:
        return max((c.level for c in self.categories.values()), default=0)

    @property
    def parents(self) -> dict[str, str]:
        memo = self._memo.get("parents")
        if memo is None:
            memo = {}
            for cat in self.categories.values():
                for child in cat.children:
                    memo.setdefault(child, cat.id)
            self._memo["parents"] = memo
        return memo

    def neighbors(self, cid: str, nav: NavConfig = NavConfig()) -> list[str]:
        """Navigable successors of ``cid`` in tie-break order: children, cross-links, parent."""
        cat = self.categories[cid]
        out = list(cat.children) + list(cat.cross_links)
        if nav.allow_up:
            parent = self.parents.get(cid)
            if parent is not None and parent not in out:
                out.append(parent)
        return out

    def is_edge(self, a: str, b: str, nav: NavConfig = NavConfig()) -> bool:
        cat = self.categories[a]
        if b in cat.children or b in cat.cross_links:
            return True
        return nav.allow_up and self.parents.get(a) == b

    def categories_at(self, level: int) -> list[str]:
        return [c.id for c in self.categories.values() if c.level == level]

    def holders(self, rid: str) -> list[str]:
        """Categories listing resource ``rid``, in document order."""
        index = self._memo.get("holders")
        if index is None:
            index = {}
            for cat in self.categories.values():
                for r in sorted(cat.resources):
                    index.setdefault(r, []).append(cat.id)
            self._memo["holders"] = index
        return index.get(rid, [])


# -- dump format ------------------------------------------------------------

_STRINGS = {"type": "array", "items": {"type": "string", "minLength": 1}}

DUMP_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["root", "categories"],
    "properties": {
        "root": {"type": "string", "minLength": 1},
        "categories": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "level"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "level": {"type": "integer"},
                    "url": {"type": "string"},
                    "children": _STRINGS,
                    "cross_links": _STRINGS,
                    "resources": _STRINGS,
                    "const_bag": _STRINGS,
                },
            },
        },
        "resources": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "url": {"type": "string"},
                    "concepts": _STRINGS,
                },
            },
        },
    },
}


def load_directory(stream: IO[str] | IO[bytes], format: str = "json") -> WebDirectory:
    """Parse and validate a directory dump.

    Raises ParseError on malformed JSON or schema mismatch and ValidationError
    listing every structural violation.
    """
    if format != "json":
        raise ValueError(f"unsupported format: {format}")
    raw = stream.read()
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return directory_from_dict(doc)


def directory_from_dict(doc: dict) -> WebDirectory:
    errors = sorted(jsonschema.Draft7Validator(DUMP_SCHEMA).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        msgs = []
        for err in errors:
            where = "/".join(str(p) for p in err.path) or "<document>"
            msgs.append(f"{where}: {err.message}")
        raise ParseError("; ".join(msgs))

    violations: list[Violation] = []
    categories: dict[str, Category] = {}
    for entry in doc["categories"]:
        cid = entry["id"]
        if cid in categories:
            violations.append(Violation("duplicate-id", (cid,), f"duplicate category id {cid}"))
            continue
        const = entry.get("const_bag")
        categories[cid] = Category(
            id=cid,
            level=entry["level"],
            url=entry.get("url", ""),
            children=tuple(entry.get("children", ())),
            cross_links=tuple(entry.get("cross_links", ())),
            resources=frozenset(entry.get("resources", ())),
            constant_bag=ConceptBag.from_terms(const) if const is not None else None,
        )
        dup_res = _duplicates(entry.get("resources", ()))
        if dup_res:
            violations.append(Violation("duplicate-resource-ref", (cid, *dup_res),
                                        f"resource listed twice in {cid}: {', '.join(dup_res)}"))
    resources: dict[str, Resource] = {}
    for entry in doc.get("resources", ()):
        rid = entry["id"]
        if rid in resources:
            violations.append(Violation("duplicate-id", (rid,), f"duplicate resource id {rid}"))
            continue
        resources[rid] = Resource(rid, entry.get("url", ""), ConceptBag.from_terms(entry.get("concepts", ())))

    wd = WebDirectory(doc["root"], categories, resources)
    violations.extend(validate(wd))
    if violations:
        raise ValidationError(violations)
    return wd


def directory_to_dict(wd: WebDirectory) -> dict:
    cats = []
    for cat in wd.categories.values():
        entry = {
            "id": cat.id,
            "level": cat.level,
            "url": cat.url,
            "children": list(cat.children),
            "cross_links": list(cat.cross_links),
            "resources": sorted(cat.resources),
        }
        if cat.constant_bag is not None:
            entry["const_bag"] = cat.constant_bag.terms()
        cats.append(entry)
    res = [{"id": r.id, "url": r.url, "concepts": r.concepts.terms()} for r in wd.resources.values()]
    return {"root": wd.root, "categories": cats, "resources": res}


def _duplicates(items: Iterable[str]) -> list[str]:
    seen: set[str] = set()
    dups: list[str] = []
    for x in items:
        if x in seen and x not in dups:
            dups.append(x)
        seen.add(x)
    return dups


# -- validation -------------------------------------------------------------

def validate(wd: WebDirectory) -> list[Violation]:
    """Check every structural rule; the empty list means the directory is sound."""
    return list(_violations(wd))


def _violations(wd: WebDirectory) -> Iterator[Violation]:
    cats = wd.categories
    level_one = [c.id for c in cats.values() if c.level == 1]
    if wd.root not in cats:
        yield Violation("missing-root", (wd.root,), f"root {wd.root} is not a category")
    elif cats[wd.root].level != 1:
        yield Violation("root-level", (wd.root,), f"root {wd.root} has level {cats[wd.root].level}, expected 1")
    if len(level_one) > 1:
        yield Violation("multiple-roots", tuple(level_one), f"multiple roots: {', '.join(level_one)}")

    parent_of: dict[str, list[str]] = {}
    for cat in cats.values():
        if cat.level < 1:
            yield Violation("level-range", (cat.id,), f"level {cat.level} of {cat.id} is below 1")
        for kind, targets in (("child", cat.children), ("cross-link", cat.cross_links)):
            if cat.id in targets:
                yield Violation("self-loop", (cat.id,), f"self-loop at {cat.id}")
            for dup in _duplicates(targets):
                yield Violation("parallel-link", (cat.id, dup), f"parallel {kind} links {cat.id} -> {dup}")
            for t in targets:
                if t not in cats:
                    yield Violation("unknown-category", (cat.id, t), f"{cat.id} references unknown category {t}")
        for both in sorted(set(cat.children) & set(cat.cross_links)):
            yield Violation("parallel-link", (cat.id, both),
                            f"parallel links {cat.id} -> {both} (both child and cross-link)")
        for r in sorted(cat.resources):
            if r not in wd.resources:
                yield Violation("unknown-resource", (cat.id, r), f"{cat.id} references unknown resource {r}")
        for child in cat.children:
            if child == cat.id or child not in cats:
                continue
            parent_of.setdefault(child, []).append(cat.id)
            if cats[child].level != cat.level + 1:
                yield Violation("level-mismatch", (cat.id, child),
                                f"child {child} has level {cats[child].level}, parent {cat.id} has level {cat.level}")

    for cid in cats:
        parents = list(dict.fromkeys(parent_of.get(cid, [])))
        if cid == wd.root:
            if parents:
                yield Violation("root-has-parent", (cid, *parents), f"root {cid} is a child of {', '.join(parents)}")
        elif not parents:
            yield Violation("orphan", (cid,), f"category {cid} has no parent")
        elif len(parents) > 1:
            yield Violation("multiple-parents", (cid, *parents),
                            f"category {cid} has multiple parents: {', '.join(parents)}")

    if cats:
        adj: dict[str, set[str]] = {cid: set() for cid in cats}
        for cat in cats.values():
            for t in (*cat.children, *cat.cross_links):
                if t in cats:
                    adj[cat.id].add(t)
                    adj[t].add(cat.id)
        start = wd.root if wd.root in cats else next(iter(cats))
        seen = {start}
        queue = deque([start])
        while queue:
            for nxt in adj[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        if len(seen) != len(cats):
            cut = tuple(cid for cid in cats if cid not in seen)
            yield Violation("disconnected", cut,
                            f"disconnected: {', '.join(cut)} not reachable from {start}")


# -- navigation -------------------------------------------------------------

def bfs_tree(wd: WebDirectory, start: str, nav: NavConfig = NavConfig()) -> dict[str, str | None]:
    """Predecessor map of a breadth-first search from ``start``.

    The first discovery wins, so ties follow child order, then cross-link order.
    """
    key = ("bfs", start, nav.allow_up)
    pred = wd._memo.get(key)
    if pred is None:
        pred = {start: None}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt in wd.neighbors(cur, nav):
                if nxt not in pred:
                    pred[nxt] = cur
                    queue.append(nxt)
        wd._memo[key] = pred
    return pred


def shortest_path(wd: WebDirectory, start: str, end: str, nav: NavConfig = NavConfig()) -> list[str]:
    for cid in (start, end):
        if cid not in wd.categories:
            raise KeyError(cid)
    pred = bfs_tree(wd, start, nav)
    if end not in pred:
        raise UnreachableError(f"{end} is not reachable from {start}")
    path = [end]
    while path[-1] != start:
        path.append(pred[path[-1]])
    return path[::-1]


def shortest_path_length(wd: WebDirectory, start: str, end: str, nav: NavConfig = NavConfig()) -> int:
    """Number of categories on a minimum navigable walk, both endpoints included."""
    return len(shortest_path(wd, start, end, nav))


def hops_to(wd: WebDirectory, target: str, nav: NavConfig = NavConfig()) -> dict[str, int]:
    """Edge count from every category that can reach ``target`` (reverse BFS)."""
    key = ("hops", target, nav.allow_up)
    dist = wd._memo.get(key)
    if dist is None:
        reverse: dict[str, list[str]] = {}
        for cid in wd.categories:
            for nxt in wd.neighbors(cid, nav):
                reverse.setdefault(nxt, []).append(cid)
        dist = {target: 0}
        queue = deque([target])
        while queue:
            cur = queue.popleft()
            for prev in reverse.get(cur, ()):
                if prev not in dist:
                    dist[prev] = dist[cur] + 1
                    queue.append(prev)
        wd._memo[key] = dist
    return dist


# -- level skipping -----------------------------------------------------------

def skip_level(wd: WebDirectory, level: int) -> WebDirectory:
    """Remove every category at ``level`` and link its parent straight to its children.

    Resources of removed categories move to the parent, cross-links into a removed
    category are redirected to its parent, cross-links out of it are dropped.
    """
    if level <= 1:
        raise ValueError("the root level cannot be skipped")
    if level > wd.depth:
        raise ValueError(f"level {level} exceeds directory depth {wd.depth}")

    removed = set(wd.categories_at(level))
    parents = wd.parents

    out: dict[str, Category] = {}
    for cat in wd.categories.values():
        if cat.id in removed:
            continue
        children: list[str] = []
        resources = set(cat.resources)
        for child in cat.children:
            if child in removed:
                sub = wd.categories[child]
                children.extend(sub.children)
                resources |= sub.resources
            else:
                children.append(child)
        cross: list[str] = []
        for t in cat.cross_links:
            t = parents[t] if t in removed else t
            if t != cat.id and t not in children and t not in cross:
                cross.append(t)
        out[cat.id] = replace(
            cat,
            level=cat.level - 1 if cat.level > level else cat.level,
            children=tuple(children),
            cross_links=tuple(cross),
            resources=frozenset(resources),
        )
    return WebDirectory(wd.root, out, dict(wd.resources))
