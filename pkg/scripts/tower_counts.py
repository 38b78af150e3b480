"""Print level counts for the towers used in the reproduction table."""

import argparse
import time

from coalgtower.sig_core import NAMED_IDENTITIES, Catalog, VarietyDescriptor
from coalgtower.tower import Tower

CASES = {
    "set-no11": (Catalog.SET, Catalog.BI, ("no11",), 12),
    "set-no10": (Catalog.SET, Catalog.BI, ("no10",), 12),
    "set-assoc": (Catalog.SET, Catalog.BI, ("assoc",), 12),
    "se-se": (Catalog.SE, Catalog.SE, (), 10),
    "bi-bi": (Catalog.BI, Catalog.BI, (), 4),
    "bi-se": (Catalog.BI, Catalog.SE, (), 6),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("case", choices=sorted(CASES), nargs="*")
    ap.add_argument("--k", type=int, default=None, help="top level (default: all levels within L)")
    args = ap.parse_args()
    for name in args.case or sorted(CASES):
        c, d, ids, L = CASES[name]
        T = Tower(c, VarietyDescriptor(d, tuple(NAMED_IDENTITIES[i] for i in ids)), L=L)
        top = args.k if args.k is not None else (L if c is Catalog.SET else 3)
        start = time.perf_counter()
        counts = [len(T.level(j)) for j in range(top + 1)]
        print(f"{name:10s} L={L:2d} counts={counts} ({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
