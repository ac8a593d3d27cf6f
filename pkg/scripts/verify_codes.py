#!/usr/bin/env python3
"""Construct every code family and print its verified parameters.

Each line shows [[n, k; c]], the GF(2) ranks behind them, and the girth
floor.  Construction itself re-checks commutation of the extended pair,
so simply finishing is already a verification pass.
"""

import argparse
import time

from eaqc.eacode import (
    build_theorem5,
    build_theorem6,
    build_theorem7,
    build_theorem8,
    build_theorem9,
    build_theorem10,
    girth_floor_of,
    theorem5_selection,
    theorem7_model,
)
from eaqc.gf2 import gfrank
from eaqc.models import theorem6_models, theorem8_model, theorem9_model


def report(label, code, floor):
    print(
        f"{label:28s} [[{code.n}, {code.k}; {code.c}]]  "
        f"rank(hx)={gfrank(code.hx):4d}  rank(hz)={gfrank(code.hz):4d}  "
        f"girth>={floor}"
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--skip-large", action="store_true",
                        help="leave out the n=390 and n=381 codes")
    args = parser.parse_args()

    t0 = time.perf_counter()
    for p, l1, l2 in ((3, 1, 1), (5, 2, 2), (7, 3, 3)):
        code = build_theorem5(p, l1, l2)
        report(f"theorem5 p={p} l1=l2={l1}", code,
               girth_floor_of(*theorem5_selection(p, l1, l2)))

    code = build_theorem6(7, 3, 3)
    report("theorem6 p=7 l1=l2=3", code, girth_floor_of(*theorem6_models(7, 3, 3)))

    code = build_theorem7(11, 5)
    report("theorem7 p=11 l=5", code, girth_floor_of(theorem7_model(11, 5)))

    if not args.skip_large:
        code = build_theorem8(6, 2)
        report("theorem8 l=6 w=2", code, girth_floor_of(theorem8_model(6, 2)))

        s = (2, 4, 6)
        code = build_theorem9(s, 2, enforce_scale=False)
        report("theorem9 s=2,4,6 w=2", code,
               girth_floor_of(theorem9_model(s, 2, enforce_scale=False)))
        code = build_theorem10(s, 2, enforce_scale=False)
        report("theorem10 s=2,4,6 w=2", code,
               girth_floor_of(theorem9_model(s, 2, enforce_scale=False)))

    print(f"all constructions verified in {time.perf_counter() - t0:.2f}s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
