"""Run the reproduction checks and write a JSON summary."""

import argparse
import json
from dataclasses import asdict

from coalgtower.acceptance import run_all


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", default=None, help="comma-separated criterion numbers")
    ap.add_argument("--out", default=None, help="write results as JSON here")
    args = ap.parse_args()
    numbers = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(numbers)
    for r in results:
        print(r.line())
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([asdict(r) for r in results], fh, indent=2)


if __name__ == "__main__":
    main()
