#!/usr/bin/env python3
"""Dependency censuses and the hitting-set threshold.

How many strings does knowing x bring within reach? The dependent
census counts the y whose complexity drops by at least alpha when x is
given, and the fitted-C curve tracks the census as a fraction of 2^n.
At small n the machine is blunt: nothing depends on anything at n=4,
and at n=5 the only drop is the diagonal, where COPY undercuts
re-EMITting x by exactly 2 bits. The hitting demo then shows the other
side of the same coin: a target set simpler than every achievable
output cannot be hit at all.
"""

import os
import tempfile

from kextract import calibration
from kextract.bits import EMPTY, BitString, all_strings
from kextract.experiments import (
    count_dependent,
    dependent_census_sweep,
    hitting_demo,
    write_census_csv,
)
from kextract.extraction import enumerate_class
from kextract.oracle import build_complexity_table
from kextract.tables import gen_random


def main() -> None:
    oracle4 = build_complexity_table(4, [EMPTY] + all_strings(4), l_max=10)
    oracle5 = build_complexity_table(5, [EMPTY] + all_strings(5), l_max=10)

    print("== nothing depends on anything at n=4")
    for alpha in (0, 1):
        sw = dependent_census_sweep(oracle4, alpha)
        print(
            f"  alpha={alpha}: max fitted C = {sw.max_fitted_c},"
            f" census sizes {sw.size_histogram}"
        )

    print("\n== at n=5 the diagonal appears")
    x = BitString(5, 19)
    for alpha in (1, 2, 3):
        c = count_dependent(oracle5, x, alpha)
        print(
            f"  alpha={alpha}: dependents of x={x.to01()} ->"
            f" members {c.members}, fitted C = {c.fitted_c}"
        )
    sw = dependent_census_sweep(
        oracle5, 2, committed_max_c=calibration.MAX_FITTED_C_N5_ALPHA2
    )
    print(
        f"  sweep alpha=2: max fitted C = {sw.max_fitted_c}"
        f" <= committed {sw.committed_max_c}: {sw.within_committed}"
    )
    print("  (every census is exactly its own diagonal: C(x|x) = 8 < 10 = C(x))")

    print("\n== census rows travel as CSV")
    sw4 = dependent_census_sweep(oracle4, 0)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "census.csv")
        write_census_csv(sw4.censuses, 4, path)
        with open(path) as fh:
            lines = fh.read().splitlines()
    print(f"  {lines[0]}")
    for line in lines[1:3]:
        print(f"  {line}")
    print(f"  ... {len(lines) - 1} rows")

    print("\n== hitting a simple target set")
    cls = enumerate_class(oracle4, 3, 2)
    out2 = build_complexity_table(2, [EMPTY], l_max=4)
    rep = hitting_demo(gen_random(4, 2, 1), cls, [1], out2)
    print(
        f"  m=2, target {{1}}: set C = {rep.max_set_complexity},"
        f" min output C = {rep.min_output_complexity},"
        f" threshold applies = {rep.threshold_applies}"
    )
    print(f"  {len(rep.hits)} of {rep.class_size} pairs hit the set anyway")

    # Seed 740 at m=6 never outputs 0 or 63, the only 6-bit strings an
    # 11-bit program can produce, so the threshold has a strict gap.
    out6 = build_complexity_table(6, [EMPTY], l_max=12)
    rep = hitting_demo(gen_random(4, 6, 740), cls, [0], out6)
    print(
        f"  m=6, target {{0}}: set C = {rep.max_set_complexity}"
        f" < min output C = {rep.min_output_complexity},"
        f" threshold applies = {rep.threshold_applies}"
    )
    print(f"  hits = {rep.hits}, consistent = {rep.consistent}")


if __name__ == "__main__":
    main()
