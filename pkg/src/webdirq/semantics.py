"""Concept bags, category semantic content, ideality audits and category similarity."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, NamedTuple

if TYPE_CHECKING:
    from webdirq.directory import WebDirectory

MODES = ("resources", "children", "auto")
SIMILARITIES = ("jaccard",)


class ConceptBag(Mapping[str, int]):
    """Immutable multiset of concept terms; absent terms have multiplicity zero."""

    __slots__ = ("_counts", "_size", "_hash")

    def __init__(self, counts: Mapping[str, int] | None = None):
        clean = {}
        for term, n in (counts or {}).items():
            if not isinstance(term, str) or not term:
                raise ValueError(f"concept terms must be non-empty strings, got {term!r}")
            if n < 0:
                raise ValueError(f"negative multiplicity for {term!r}")
            if n:
                clean[term] = int(n)
        self._counts = clean
        self._size = sum(clean.values())
        self._hash = None

    @classmethod
    def from_terms(cls, terms: Iterable[str]) -> ConceptBag:
        return cls(Counter(terms))

    def __getitem__(self, term: str) -> int:
        return self._counts[term]

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ConceptBag):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self._counts == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}:{v}" for k, v in sorted(self._counts.items()))
        return f"ConceptBag({{{inner}}})"

    def __add__(self, other: ConceptBag) -> ConceptBag:
        return bag_union(self, other)

    def __sub__(self, other: ConceptBag) -> ConceptBag:
        return bag_difference(self, other)

    @property
    def size(self) -> int:
        """Total multiplicity."""
        return self._size

    def terms(self) -> list[str]:
        """Sorted term list with repeats, the dump encoding of a bag."""
        return [t for t in sorted(self._counts) for _ in range(self._counts[t])]


EMPTY = ConceptBag()


def bag_union(a: Mapping[str, int], b: Mapping[str, int]) -> ConceptBag:
    counts = dict(a)
    for term, n in b.items():
        counts[term] = counts.get(term, 0) + n
    return ConceptBag(counts)


def bag_difference(a: Mapping[str, int], b: Mapping[str, int]) -> ConceptBag:
    return ConceptBag({t: max(n - b.get(t, 0), 0) for t, n in a.items()})


def bag_gap(a: Mapping[str, int], b: Mapping[str, int]) -> ConceptBag:
    """Symmetric multiset difference; empty exactly when the bags are equal."""
    return bag_union(bag_difference(a, b), bag_difference(b, a))


def union_all(bags: Iterable[Mapping[str, int]]) -> ConceptBag:
    total: Counter = Counter()
    for bag in bags:
        total.update(bag)
    return ConceptBag(total)


def jaccard(a: Mapping[str, int], b: Mapping[str, int]) -> float:
    """Multiset Jaccard: sum of per-term minima over sum of per-term maxima; 1 for two empty bags."""
    if len(a) > len(b):
        a, b = b, a
    inter = sum(min(n, b.get(t, 0)) for t, n in a.items())
    total_a = sum(a.values())
    total_b = sum(b.values())
    union = total_a + total_b - inter
    if union == 0:
        return 1.0
    return inter / union


# -- category content ---------------------------------------------------------

@dataclass(frozen=True)
class SemanticsConfig:
    mode: str = "auto"
    similarity: str = "jaccard"
    dist_cap: float = 1000.0
    epsilon: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.similarity not in SIMILARITIES:
            raise ValueError(f"similarity must be one of {SIMILARITIES}, got {self.similarity!r}")
        if not self.dist_cap >= 1:
            raise ValueError("dist_cap must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


def _memo(wd: WebDirectory, key: tuple, compute):
    value = wd._memo.get(key)
    if value is None:
        value = compute()
        wd._memo[key] = value
    return value


def resource_content(wd: WebDirectory, cid: str) -> ConceptBag:
    """Union of the annotations of the category's own resources."""
    cat = wd.categories[cid]
    return _memo(wd, ("res", cid),
                 lambda: union_all(wd.resources[r].concepts for r in sorted(cat.resources)))


def _fallback(wd: WebDirectory, cid: str) -> ConceptBag:
    cat = wd.categories[cid]
    if cat.resources:
        return resource_content(wd, cid)
    return cat.constant_bag if cat.constant_bag is not None else EMPTY


def children_content(wd: WebDirectory, cid: str, cfg: SemanticsConfig = SemanticsConfig()) -> ConceptBag:
    """Aggregate of the children's content under ``cfg.mode``; empty for a terminal category.

    In ``children`` mode a terminal child has no children to aggregate, so it
    contributes its resource content (or its constant) instead.
    """
    cat = wd.categories[cid]
    if not cat.children:
        return EMPTY

    def contribution(child: str) -> ConceptBag:
        if cfg.mode == "children" and not wd.categories[child].children:
            return _fallback(wd, child)
        return semantic_content(wd, child, cfg)

    return _memo(wd, ("kids", cfg.mode, cid), lambda: union_all(contribution(c) for c in cat.children))


def semantic_content(wd: WebDirectory, cid: str, cfg: SemanticsConfig = SemanticsConfig()) -> ConceptBag:
    """Content of a category: from its resources, from its children, or (``auto``) whichever exists first."""
    if cfg.mode == "resources":
        return resource_content(wd, cid)
    if cfg.mode == "children":
        return children_content(wd, cid, cfg)
    cat = wd.categories[cid]
    if cat.resources:
        return resource_content(wd, cid)
    if cat.children:
        return children_content(wd, cid, cfg)
    return cat.constant_bag if cat.constant_bag is not None else EMPTY


# -- ideality -----------------------------------------------------------------

class IdealityGap(NamedTuple):
    gap: ConceptBag
    size: int
    vacuous: bool
    # gap size over the size of the union of both sides; 0 when both are empty
    normalized: float


def ideality_gap(wd: WebDirectory, cid: str, cfg: SemanticsConfig = SemanticsConfig()) -> IdealityGap:
    cat = wd.categories[cid]
    from_resources = resource_content(wd, cid)
    from_children = children_content(wd, cid, cfg)
    gap = bag_gap(from_resources, from_children)
    both = from_resources.size + from_children.size
    return IdealityGap(
        gap=gap,
        size=gap.size,
        vacuous=not cat.resources or not cat.children,
        normalized=gap.size / both if both else 0.0,
    )


def audit(wd: WebDirectory, cfg: SemanticsConfig = SemanticsConfig()) -> dict[str, IdealityGap]:
    return {cid: ideality_gap(wd, cid, cfg) for cid in wd.categories}


def is_ideal(wd: WebDirectory, cfg: SemanticsConfig = SemanticsConfig()) -> bool:
    return all(g.size == 0 for g in audit(wd, cfg).values() if not g.vacuous)


def is_realistically_ideal(wd: WebDirectory, cfg: SemanticsConfig = SemanticsConfig()) -> bool:
    return all(g.size <= cfg.epsilon for g in audit(wd, cfg).values() if not g.vacuous)


# -- similarity and distance ---------------------------------------------------

def similarity(wd: WebDirectory, c1: str, c2: str, cfg: SemanticsConfig = SemanticsConfig()) -> float:
    if c1 == c2:
        return 1.0
    key = ("sim", cfg.mode, cfg.similarity, *sorted((c1, c2)))
    cached = wd._memo.get(key)
    if cached is None:
        cached = jaccard(semantic_content(wd, c1, cfg), semantic_content(wd, c2, cfg))
        wd._memo[key] = cached
    return cached


def distance(wd: WebDirectory, c1: str, c2: str, cfg: SemanticsConfig = SemanticsConfig()) -> float:
    """Reciprocal similarity; ``cfg.dist_cap`` when the categories share nothing."""
    sim = similarity(wd, c1, c2, cfg)
    if sim == 0:
        return float(cfg.dist_cap)
    return 1.0 / sim
