"""For each generated pair form, find the k after which its index in A/p^k stops changing.

Prints how often that threshold exceeds N+1 and 2N+1, where N is the largest
local valuation in the pair form.
"""
import argparse
from collections import Counter

from bezoutqe.experiments import StabilityConfig, pair_nfs, stability_probes
from bezoutqe.oracle import CyclicQuotient, pair_index_nontrivial


def threshold(pf, backend, limit):
    phi, both = pair_nfs(pf, backend.ring)
    vals = [pair_index_nontrivial(phi, both, CyclicQuotient(backend, backend.prime ** k))
            for k in range(1, limit + 1)]
    last_change = max((k for k in range(1, limit) if vals[k] != vals[k - 1]), default=0)
    return last_change + 1


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--probes", type=int, default=400)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args(argv)
    backend, probes = stability_probes(StabilityConfig(probes=args.probes, seed=args.seed))
    stats = Counter()
    for pf, n, _ in probes:
        t = threshold(pf, backend, 4 * n + 8)
        stats["total"] += 1
        stats["beyond N+1"] += t > n + 1
        stats["beyond 2N+1"] += t > 2 * n + 1
        stats[f"{type(pf).__name__} beyond N+1"] += t > n + 1
    for key in sorted(stats):
        print(f"{key}: {stats[key]}")


if __name__ == "__main__":
    main()
