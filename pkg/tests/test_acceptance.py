"""Exit criteria. Each test records one PASS/FAIL line, printed in the pytest summary."""
import io
import json
import random
import time
from contextlib import contextmanager, redirect_stderr, redirect_stdout

import pytest

from oracles import edge_set, max_revisit as naive_mr, min_walk_length
from webdirq import fixtures as F
from webdirq.cli import main
from webdirq.directory import NavConfig, UnreachableError, load_directory, shortest_path_length, skip_level, validate
from webdirq.metrics import (
    BrowseSession,
    InconsistentSessionError,
    aggregate,
    ddp,
    max_revisit,
    path_ratio,
    score_session,
    write_sessions,
)
from webdirq.semantics import (
    ConceptBag,
    SemanticsConfig,
    audit,
    distance,
    is_ideal,
    is_realistically_ideal,
)
from webdirq.simulator import Policy, SimConfig, batch_simulate, simulate

RESULTS: list[str] = []
TOL = 1e-9


@contextmanager
def criterion(number, title):
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        RESULTS.append(f"AC{number} FAIL  {title}: {type(exc).__name__}: {exc}")
        raise
    RESULTS.append(f"AC{number} PASS  {title}" + (f" ({detail['info']})" if "info" in detail else ""))


def load_doc(doc):
    return load_directory(io.BytesIO(json.dumps(doc).encode()))


def S(*visits, resource="r3"):
    return BrowseSession(resource, visits[-1], tuple(visits))


def test_ac1_detour_path_ratio():
    with criterion(1, "detour fixture path ratios 0 and 1/2, under 1 s") as d:
        t0 = time.perf_counter()
        wd = load_doc(F.detour())
        optimal = path_ratio(wd, S("1", "2", "3"))
        detour = path_ratio(wd, S("1", "4", "5", "6", "7", "3"))
        elapsed = time.perf_counter() - t0
        assert optimal == 0.0
        assert detour == 0.5
        assert elapsed < 1.0
        d["info"] = f"{elapsed * 1000:.1f} ms"


def test_ac2_loopback_max_revisit():
    with criterion(2, "loopback fixture maximum revisit 0 and 1"):
        wd = load_doc(F.loopback())
        for s in (S("1", "2", "3"), S("1", "2", "4", "5", "1", "2", "3")):
            s.check(wd)
        assert max_revisit(S("1", "2", "3")) == 0
        assert max_revisit(S("1", "2", "4", "5", "1", "2", "3")) == 1


def test_ac3_telescoping():
    with criterion(3, "DDP telescoping over 1000 random cases, tol 1e-9") as d:
        rng = random.Random(20100607)
        worst = 0.0
        cases = 1000
        for case in range(cases):
            n = rng.randint(1, 12)
            doc = F.random_directory(rng.getrandbits(32), n, rng.randint(0, 3 * n),
                                     cross_link_prob=0.3, vocabulary=rng.randint(2, 12))
            # drop some constants so empty bags occur too
            for c in doc["categories"]:
                if rng.random() < 0.5:
                    c.pop("const_bag", None)
            wd = load_doc(doc)
            ids = list(wd.categories)
            visits = [rng.choice(ids) for _ in range(rng.randint(1, 30))]
            cfg = SemanticsConfig(mode=rng.choice(["auto", "children", "resources"]),
                                  dist_cap=rng.choice([1.0, 10.0, 1000.0, 1e6]))
            s = BrowseSession("any", visits[-1], tuple(visits))
            prog = ddp(wd, s, cfg)
            expected = distance(wd, visits[0], visits[-1], cfg) - distance(wd, visits[-1], visits[-1], cfg)
            err = abs(prog.total - expected)
            worst = max(worst, err)
            assert err <= TOL, f"case {case}: error {err}"
        d["info"] = f"{cases} cases, max error {worst:.2e}"


def _perturbations(doc):
    """Every single-annotation change: add a fresh term, or drop one term."""
    for i, r in enumerate(doc["resources"]):
        added = json.loads(json.dumps(doc))
        added["resources"][i]["concepts"].append("perturbation")
        yield f"{r['id']}+term", added
        if r["concepts"]:
            dropped = json.loads(json.dumps(doc))
            dropped["resources"][i]["concepts"].pop()
            yield f"{r['id']}-term", dropped


def test_ac4_ideality_audit():
    with criterion(4, "ideal fixture passes; any single perturbation fails; epsilon = gap restores") as d:
        checked = 0
        for seed in range(5):
            doc = F.ideal_tree(seed, n_categories=9)
            for mode in ("auto", "children"):
                cfg = SemanticsConfig(mode=mode)
                assert is_ideal(load_doc(doc), cfg)
                for name, bad in _perturbations(doc):
                    wd = load_doc(bad)
                    assert not is_ideal(wd, cfg), f"seed {seed} {mode} {name} not detected"
                    gap = max(g.size for g in audit(wd, cfg).values() if not g.vacuous)
                    assert gap >= 1
                    assert is_realistically_ideal(wd, SemanticsConfig(mode=mode, epsilon=gap))
                    assert not is_realistically_ideal(wd, SemanticsConfig(mode=mode, epsilon=gap - 1))
                    checked += 1
        d["info"] = f"{checked} perturbations"


def _small_fixture_set():
    docs = {name: F.FIXTURES[name]() for name in ("loopback", "fruit", "fruit-ideal", "fruit-perturbed", "chain")}
    for seed in range(12):
        docs[f"random-{seed}"] = F.random_directory(seed, 2 + seed % 5, 6, cross_link_prob=0.4)
    assert all(len(doc["categories"]) <= 6 for doc in docs.values())
    return docs


def _random_session(rng, doc, ids, allow_up):
    """Half edge-following walks, half arbitrary id sequences; both end at a random category."""
    target = rng.choice(ids)
    if rng.random() < 0.5:
        edges = edge_set(doc, allow_up)
        walk = [rng.choice(ids)]
        for _ in range(30):
            if walk[-1] == target:
                break
            nxt = [b for a, b in edges if a == walk[-1]]
            if not nxt:
                break
            walk.append(rng.choice(sorted(nxt)))
        if walk[-1] == target:
            return walk
    return [rng.choice(ids) for _ in range(rng.randint(0, 8))] + [target]


def test_ac5_oracle_equivalence():
    with criterion(5, "shortest path, PR, MR equal brute force on <= 6-category fixtures") as d:
        docs = _small_fixture_set()
        rng = random.Random(5)
        pairs = 0
        for doc in docs.values():
            wd = load_doc(doc)
            for up in (False, True):
                for a in wd.categories:
                    for b in wd.categories:
                        expected = min_walk_length(doc, a, b, up)
                        if expected is not None:
                            assert shortest_path_length(wd, a, b, NavConfig(up)) == expected
                            pairs += 1
        names = sorted(docs)
        scored = rejected = 0
        for _ in range(1000):
            name = rng.choice(names)
            doc = docs[name]
            wd = load_doc(doc)
            ids = [c["id"] for c in doc["categories"]]
            up = rng.random() < 0.5
            visits = _random_session(rng, doc, ids, up)
            s = BrowseSession("any", visits[-1], tuple(visits))
            assert max_revisit(s) == naive_mr(visits)
            shortest = min_walk_length(doc, visits[0], visits[-1], up)
            if shortest is None or len(visits) < shortest:
                with pytest.raises((InconsistentSessionError, UnreachableError)):
                    path_ratio(wd, s, NavConfig(up))
                rejected += 1
                continue
            assert path_ratio(wd, s, NavConfig(up)) == 1 - shortest / len(visits)
            scored += 1
        d["info"] = f"{len(docs)} directories, {pairs} pairs, 1000 sessions ({scored} scored, {rejected} rejected)"


def _render(batch):
    buf = io.StringIO()
    write_sessions(batch, buf)
    return buf.getvalue().encode()


def test_ac6_simulator_soundness():
    with criterion(6, "optimal sessions score 0/0 on trees; batches byte-deterministic") as d:
        trees = [F.fruit(), F.fruit_ideal(), F.chain(), F.alphabet()]
        trees += [F.random_directory(seed, 25, 40, cross_link_prob=0.0) for seed in range(10)]
        sessions = 0
        for doc in trees:
            wd = load_doc(doc)
            targets = [r for r in wd.resources if wd.holders(r)]
            for s in batch_simulate(wd, targets, Policy("optimal"), SimConfig(seed=1), 2):
                m = score_session(wd, s)
                assert m.pr == 0.0 and m.mr == 0
                sessions += 1
        wd = load_doc(F.random_directory(99, 60, 200, cross_link_prob=0.2))
        targets = sorted(wd.resources)[:40]
        for policy in (Policy("random_walk"), Policy("noisy_greedy", 0.25), Policy("greedy_semantic")):
            first = _render(batch_simulate(wd, targets, policy, SimConfig(seed=2**63 + 5), 5))
            second = _render(batch_simulate(wd, targets, policy, SimConfig(seed=2**63 + 5), 5))
            assert first == second and len(first) > 0
        d["info"] = f"{sessions} optimal sessions"


def test_ac7_level_skip():
    with criterion(7, "skip_level(2) on alphabet fixture") as d:
        wd = load_doc(F.alphabet())
        topics = wd.categories_at(3)
        out = skip_level(wd, 2)
        assert not {"A", "B", "C"} & set(out.categories)
        assert out.categories["root"].resources == frozenset({"r-A", "r-B", "r-C"})
        assert validate(out) == []
        up = NavConfig(allow_up=True)

        def widest(directory):
            return max(shortest_path_length(directory, a, b, up) for a in topics for b in topics if a != b)

        before, after = widest(wd), widest(out)
        assert after < before
        d["info"] = f"max pairwise distance {before} -> {after}"


def test_ac8_scale():
    with criterion(8, "753 categories / 25,185 resources: load, validate, audit, 10,000 sessions < 60 s") as d:
        raw = json.dumps(F.random_directory(2010, 753, 25185)).encode()
        t0 = time.perf_counter()
        wd = load_directory(io.BytesIO(raw))
        assert len(wd.categories) == 753 and len(wd.resources) == 25185
        assert validate(wd) == []
        gaps = audit(wd)
        assert len(gaps) == 753
        rng = random.Random(8)
        targets = rng.sample(sorted(wd.resources), 1000)
        batch = batch_simulate(wd, targets, Policy("noisy_greedy", 0.2), SimConfig(seed=8), 10)
        assert len(batch) == 10_000
        report = aggregate(score_session(wd, s) for s in batch)
        elapsed = time.perf_counter() - t0
        assert report.count == 10_000
        assert elapsed < 60.0
        d["info"] = f"{elapsed:.1f} s"


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue(), err.getvalue()


def test_ac9_round_trip(tmp_path):
    with criterion(9, "simulate -> score round trip, no strict-edge warnings") as d:
        runs = 0
        for name, doc in (("loopback", F.loopback()), ("random", F.random_directory(31, 80, 300, cross_link_prob=0.2))):
            path = tmp_path / f"{name}.json"
            path.write_text(json.dumps(doc))
            for policy in ("optimal", "greedy_semantic", "random_walk", "noisy_greedy"):
                for up in ([], ["--allow-up"]):
                    log = tmp_path / f"{name}-{policy}{len(up)}.jsonl"
                    noise = ["--noise", "0.3"] if policy == "noisy_greedy" else []
                    code, _, err = _cli("simulate", path, "--policy", policy, "--count", 3, "--seed", 77,
                                        "--out", log, *noise, *up)
                    assert code == 0, err
                    code, _, err = _cli("score", path, "--sessions", log, "--strict-edges",
                                        "--out", tmp_path / "m.jsonl", "--report", tmp_path / "r.json", *up)
                    assert code == 0, err
                    assert "WARNING" not in err
                    runs += 1
        d["info"] = f"{runs} simulate/score pairs"
