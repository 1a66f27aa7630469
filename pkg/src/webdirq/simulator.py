"""Seeded browsing-session simulator.

Randomness comes from ``random.Random`` (MT19937) and only its ``random()`` draw,
whose output sequence Python guarantees across platforms and releases. Batch
sub-seeds are the first 8 bytes (big-endian) of BLAKE2b over ``"{seed}/{j}/{i}"``.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from webdirq.directory import NavConfig, UnreachableError, WebDirectory, hops_to, shortest_path
from webdirq.metrics import BrowseSession
from webdirq.semantics import SemanticsConfig, distance

POLICIES = ("optimal", "greedy_semantic", "random_walk", "noisy_greedy")
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class Policy:
    kind: str = "optimal"
    noise: float | None = None
    # safety bound on moves; None means 10 x category count
    max_steps: int | None = None

    def __post_init__(self):
        if self.kind not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {self.kind!r}")
        if (self.noise is not None) != (self.kind == "noisy_greedy"):
            raise ValueError("noise is required for noisy_greedy and only for it")
        if self.noise is not None and not 0.0 <= self.noise <= 1.0:
            raise ValueError("noise must lie in [0, 1]")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    nav: NavConfig = field(default_factory=NavConfig)
    semantics: SemanticsConfig = field(default_factory=SemanticsConfig)
    start: str | None = None

    def __post_init__(self):
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError("seed must be an unsigned 64-bit integer")


def sub_seed(seed: int, target_index: int, repetition: int) -> int:
    digest = hashlib.blake2b(f"{seed}/{target_index}/{repetition}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def target_category(wd: WebDirectory, target: str, start: str, nav: NavConfig) -> str:
    """First category in document order that holds ``target`` and is reachable from ``start``."""
    if target not in wd.resources:
        raise KeyError(target)
    holders = wd.holders(target)
    for cid in holders:
        if start in hops_to(wd, cid, nav):
            return cid
    if not holders:
        raise UnreachableError(f"resource {target} is not listed in any category")
    raise UnreachableError(f"resource {target} is not reachable from {start}")


def simulate(wd: WebDirectory, target: str, policy: Policy, cfg: SimConfig) -> BrowseSession:
    start = cfg.start if cfg.start is not None else wd.root
    if start not in wd.categories:
        raise KeyError(start)
    goal = target_category(wd, target, start, cfg.nav)

    if policy.kind == "optimal":
        return BrowseSession(target, goal, tuple(shortest_path(wd, start, goal, cfg.nav)))

    rng = random.Random(cfg.seed)
    can_reach = hops_to(wd, goal, cfg.nav)
    budget = policy.max_steps if policy.max_steps is not None else 10 * len(wd.categories)
    visits = [start]
    current = start
    moves = 0
    while current != goal and moves < budget:
        # a move into a category that cannot reach the goal would strand the walker
        options = [n for n in wd.neighbors(current, cfg.nav) if n in can_reach]
        if policy.kind == "random_walk" or (policy.kind == "noisy_greedy" and rng.random() < policy.noise):
            current = options[int(rng.random() * len(options))]
        else:
            current = min(options, key=lambda n: distance(wd, n, goal, cfg.semantics))
        visits.append(current)
        moves += 1

    truncated = current != goal
    if truncated:
        visits.extend(shortest_path(wd, current, goal, cfg.nav)[1:])
    return BrowseSession(target, goal, tuple(visits), truncated)


class SessionBatch(list):
    """Sessions in (target, repetition) order; ``failures`` maps unreachable targets to the reason."""

    def __init__(self, sessions=(), failures=None):
        super().__init__(sessions)
        self.failures: dict[str, str] = dict(failures or {})


def batch_simulate(
    wd: WebDirectory,
    targets: list[str],
    policy: Policy,
    cfg: SimConfig,
    count_per_target: int,
) -> SessionBatch:
    batch = SessionBatch()
    if count_per_target <= 0:
        return batch
    for j, target in enumerate(targets):
        try:
            for i in range(count_per_target):
                sub = SimConfig(sub_seed(cfg.seed, j, i), cfg.nav, cfg.semantics, cfg.start)
                batch.append(simulate(wd, target, policy, sub))
        except UnreachableError as exc:
            batch.failures[target] = str(exc)
    return batch
