"""Simulate every browsing policy on a synthetic directory and tabulate the aggregate metrics.

    python scripts/compare_policies.py --categories 200 --resources 4000 --sessions 2000
"""
import argparse
import random
import time

from webdirq import fixtures as F
from webdirq.directory import NavConfig, directory_from_dict
from webdirq.metrics import aggregate, score_session
from webdirq.simulator import Policy, SimConfig, batch_simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--categories", type=int, default=200)
    ap.add_argument("--resources", type=int, default=4000)
    ap.add_argument("--sessions", type=int, default=2000)
    ap.add_argument("--cross-links", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--allow-up", action="store_true")
    args = ap.parse_args()

    wd = directory_from_dict(F.random_directory(args.seed, args.categories, args.resources, args.cross_links))
    targets = random.Random(args.seed).sample(sorted(wd.resources), min(args.sessions, len(wd.resources)))
    per_target = max(1, args.sessions // len(targets))
    cfg = SimConfig(seed=args.seed, nav=NavConfig(args.allow_up))

    print(f"{'policy':<18}{'n':>7}{'PR mean':>10}{'PR=0':>8}{'MR mean':>10}{'MR=0':>8}{'DDP mean':>11}{'monotone':>10}{'secs':>7}")
    for policy in (Policy("optimal"), Policy("greedy_semantic"), Policy("noisy_greedy", 0.2), Policy("random_walk")):
        t0 = time.perf_counter()
        batch = batch_simulate(wd, targets, policy, cfg, per_target)
        rep = aggregate(score_session(wd, s, nav=cfg.nav) for s in batch)
        secs = time.perf_counter() - t0
        print(f"{policy.kind:<18}{rep.count:>7}{rep.pr.mean:>10.3f}{rep.fraction_pr_zero:>8.2f}"
              f"{rep.mr.mean:>10.2f}{rep.fraction_mr_zero:>8.2f}{rep.ddp_total.mean:>11.2f}"
              f"{rep.fraction_monotone:>10.2f}{secs:>7.1f}")


if __name__ == "__main__":
    main()
