"""Run the seeded acceptance experiments and print a summary (or JSON)."""
import argparse
import dataclasses
import json
import sys

from bezoutqe.experiments import EXPERIMENTS


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", choices=[[], *EXPERIMENTS], default=[],
                    help="experiments to run (default: all)")
    ap.add_argument("--seed", type=int, default=None, help="override each experiment's seed")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    results = {}
    for name in args.names or EXPERIMENTS:
        fn, cfg_cls = EXPERIMENTS[name]
        cfg = cfg_cls()
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
        tally = fn(cfg)
        results[name] = tally.to_json()
        if not args.json:
            print(f"{'PASS' if tally.ok else 'FAIL'} {name}: {tally.summary()}")
            for f in tally.failures:
                print(f"    {f}")
    if args.json:
        print(json.dumps(results, indent=2, sort_keys=True, default=str))
    return 0 if all(r["ok"] for r in results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
