"""Run acceptance criteria 1-8 in-process and print one line per criterion."""

import argparse
import json
import sys

from thompson.acceptance import AcceptanceConfig, run_all


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=AcceptanceConfig.seed)
    parser.add_argument("--json", action="store_true", help="emit results as JSON")
    args = parser.parse_args()
    results = run_all(AcceptanceConfig(seed=args.seed))
    if args.json:
        print(json.dumps([r.to_json() for r in results], sort_keys=True, indent=2))
    else:
        for r in results:
            print(r.line())
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
