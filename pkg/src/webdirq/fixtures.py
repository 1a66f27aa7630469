"""Small hand-built directories and a seeded synthetic generator.

Every builder returns a dump document (the JSON structure ``load_directory``
reads); ``build`` turns one into a validated WebDirectory.
"""
from __future__ import annotations

import random

from webdirq.directory import WebDirectory, directory_from_dict

BASE = "https://dir.example.org"


def _cat(cid, level, children=(), cross=(), resources=(), const=None):
    entry = {
        "id": cid,
        "level": level,
        "url": f"{BASE}/{cid}",
        "children": list(children),
        "cross_links": list(cross),
        "resources": list(resources),
    }
    if const is not None:
        entry["const_bag"] = list(const)
    return entry


def _res(rid, concepts=()):
    return {"id": rid, "url": f"https://site.example.com/{rid}", "concepts": list(concepts)}


def build(doc: dict) -> WebDirectory:
    return directory_from_dict(doc)


def detour() -> dict:
    """Seven categories: short route 1-2-3 and a detour 1-4-5-6-7 that cross-links back to 3."""
    return {
        "root": "1",
        "categories": [
            _cat("1", 1, ["2", "4"]),
            _cat("2", 2, ["3"]),
            _cat("3", 3, resources=["r3"]),
            _cat("4", 2, ["5"]),
            _cat("5", 3, ["6"]),
            _cat("6", 4, ["7"]),
            _cat("7", 5, cross=["3"]),
        ],
        "resources": [_res("r3", ["target"])],
    }


def loopback() -> dict:
    """Five categories where the cross-link 5 -> 1 lets a browse loop back to the root."""
    return {
        "root": "1",
        "categories": [
            _cat("1", 1, ["2"]),
            _cat("2", 2, ["3", "4"]),
            _cat("3", 3, resources=["r3"]),
            _cat("4", 3, ["5"]),
            _cat("5", 4, cross=["1"]),
        ],
        "resources": [_res("r3", ["target"])],
    }


def fruit() -> dict:
    """Root over two annotated leaves: cA holds {apple}, {fruit}; cB holds {banana}."""
    return {
        "root": "root",
        "categories": [
            _cat("root", 1, ["cA", "cB"]),
            _cat("cA", 2, resources=["r1", "r2"]),
            _cat("cB", 2, resources=["r3"]),
        ],
        "resources": [_res("r1", ["apple"]), _res("r2", ["fruit"]), _res("r3", ["banana"])],
    }


def fruit_ideal() -> dict:
    doc = fruit()
    doc["categories"][0]["resources"] = ["r0"]
    doc["resources"].append(_res("r0", ["apple", "fruit", "banana"]))
    return doc


def fruit_perturbed() -> dict:
    doc = fruit_ideal()
    doc["categories"][0]["resources"].append("r4")
    doc["resources"].append(_res("r4", ["citrus"]))
    return doc


def alphabet() -> dict:
    """Letter buckets A, B, C between the root and the fruit topics they index."""
    topics = {"A": ("apples", "apple"), "B": ("bananas", "banana"), "C": ("citrus", "citrus")}
    cats = [_cat("root", 1, list(topics))]
    res = []
    for letter, (topic, term) in topics.items():
        cats.append(_cat(letter, 2, [topic], resources=[f"r-{letter}"]))
        cats.append(_cat(topic, 3, resources=[f"r-{topic}"]))
        res.append(_res(f"r-{letter}", ["alphabet", "letter", letter.lower()]))
        res.append(_res(f"r-{topic}", ["fruit", term]))
    return {"root": "root", "categories": cats, "resources": res}


def chain() -> dict:
    return {
        "root": "root",
        "categories": [
            _cat("root", 1, ["A"]),
            _cat("A", 2, ["x"], resources=["r"]),
            _cat("x", 3),
        ],
        "resources": [_res("r", ["thing"])],
    }


def ideal_tree(seed: int, n_categories: int = 10, vocabulary: int = 6) -> dict:
    """Random pure tree where each nonterminal holds one resource annotated with its subtree's leaf content."""
    rng = random.Random(seed)
    doc = random_directory(seed, n_categories, 0, cross_link_prob=0.0)
    cats = {c["id"]: c for c in doc["categories"]}
    resources = []
    leaf_bag: dict[str, list[str]] = {}
    for cid in reversed(list(cats)):
        c = cats[cid]
        if not c["children"]:
            terms = [f"t{rng.randrange(vocabulary)}" for _ in range(rng.randint(1, 3))]
            leaf_bag[cid] = terms
        else:
            leaf_bag[cid] = [t for child in c["children"] for t in leaf_bag[child]]
        rid = f"r{cid}"
        c["resources"] = [rid]
        resources.append(_res(rid, leaf_bag[cid]))
    doc["resources"] = resources
    return doc


def random_directory(
    seed: int,
    n_categories: int,
    n_resources: int,
    cross_link_prob: float = 0.1,
    vocabulary: int = 50,
    max_depth: int | None = None,
) -> dict:
    """Seeded random directory.

    The tree grows by uniform attachment; each resource lands in a random category
    and is annotated with that category's topic, its parent's topic and a couple of
    random vocabulary terms, so content similarity loosely follows the tree.
    """
    rng = random.Random(seed)
    ids = [f"c{i}" for i in range(n_categories)]
    level = {ids[0]: 1}
    parent: dict[str, str] = {}
    children: dict[str, list[str]] = {cid: [] for cid in ids}
    for cid in ids[1:]:
        eligible = [p for p in level if max_depth is None or level[p] < max_depth]
        p = eligible[int(rng.random() * len(eligible))]
        parent[cid] = p
        level[cid] = level[p] + 1
        children[p].append(cid)

    cross: dict[str, list[str]] = {cid: [] for cid in ids}
    if n_categories > 2:
        for cid in ids:
            if rng.random() < cross_link_prob:
                other = ids[int(rng.random() * n_categories)]
                if other != cid and other not in children[cid] and other not in cross[cid]:
                    cross[cid].append(other)

    held: dict[str, list[str]] = {cid: [] for cid in ids}
    resources = []
    for k in range(n_resources):
        cid = ids[int(rng.random() * n_categories)]
        rid = f"r{k}"
        held[cid].append(rid)
        terms = [f"topic-{cid}"]
        if cid in parent:
            terms.append(f"topic-{parent[cid]}")
        terms += [f"w{int(rng.random() * vocabulary)}" for _ in range(2)]
        resources.append(_res(rid, terms))

    cats = [_cat(cid, level[cid], children[cid], cross[cid], held[cid], const=[f"topic-{cid}"]) for cid in ids]
    return {"root": ids[0], "categories": cats, "resources": resources}


FIXTURES = {
    "detour": detour,
    "loopback": loopback,
    "fruit": fruit,
    "fruit-ideal": fruit_ideal,
    "fruit-perturbed": fruit_perturbed,
    "alphabet": alphabet,
    "chain": chain,
}
