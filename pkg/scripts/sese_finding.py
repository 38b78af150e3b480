"""Compare the Se->Se tower level 2 with the three-map equalizer |R|.

Prints both sizes for each length bound and the shortest words that pass
the two-map test but fail the third map.
"""

import argparse

from coalgtower import sese
from coalgtower.sig_core import Catalog, VarietyDescriptor
from coalgtower.tower import Tower
from coalgtower.words import format_word


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, default=12)
    ap.add_argument("--show", type=int, default=5, help="how many extra words to print")
    args = ap.parse_args()
    for L in range(2, args.L + 1, 2):
        level2 = set(Tower(Catalog.SE, VarietyDescriptor(Catalog.SE), L=L).level(2).carrier)
        R = sese.r_language(L)
        print(f"L={L:2d}  level2={len(level2):4d}  |R|={len(R):4d}  subset={R <= level2}")
    extra = sorted(level2 - R, key=lambda w: (len(w), format_word(w)))
    for w in extra[: args.show]:
        r, l, m = (format_word(x) for x in sese.lmr_images(w))
        print(f"{format_word(w)}\n  lmr_l = lmr_r = {l}\n  lmr_m = {m}")
    big = Tower(Catalog.SE, VarietyDescriptor(Catalog.SE), L=max(args.L, len(sese.MESS)))
    print(f"mess: tower violations={big.violations(sese.MESS, 2)} in R={sese.r_member(sese.MESS)}")


if __name__ == "__main__":
    main()
