"""Time the Bi->Se level-2 build and compare it with the closure of x00, x11."""

import argparse
import time

from coalgtower.final_examples import bise_level_closure
from coalgtower.sig_core import Catalog, VarietyDescriptor
from coalgtower.tower import Tower


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-L", type=int, default=7)
    args = ap.parse_args()
    for L in range(4, args.max_L + 1):
        start = time.perf_counter()
        level2 = set(Tower(Catalog.BI, VarietyDescriptor(Catalog.SE), L=L).level(2).carrier)
        elapsed = time.perf_counter() - start
        closure = set(bise_level_closure(2, L))
        print(f"L={L}  |level2|={len(level2):6d}  equals closure={level2 == closure}  ({elapsed:.1f}s)")


if __name__ == "__main__":
    main()
