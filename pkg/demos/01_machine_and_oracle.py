#!/usr/bin/env python3
"""Walk through the RM-1 reference machine and its complexity oracle.

The machine reads a program as a flat bit string: 2-bit opcodes, with
COPY and REPEAT carrying Elias-gamma operands. It is total (every
program halts) and a program either emits an output string or FAILs
with nothing. Complexity of a target x given a condition y is the
length of the shortest program that outputs x when the machine can
COPY from y. The oracle computes it by running every program up to a
length cap, so every number printed here is exact, not estimated.
"""

from kextract import (
    EMPTY,
    FAIL,
    BitString,
    MachineBudget,
    all_strings,
    build_complexity_table,
    gamma_encode,
    run_machine,
)
from kextract.oracle import NOT_FOUND


def show(program: str, condition: str = "") -> None:
    cond = BitString.from01(condition) if condition else EMPTY
    got = run_machine(BitString.from01(program), cond)
    result = "FAIL" if got is FAIL else repr(got.to01())
    print(f"  run({program!r} | {condition!r}) -> {result}")


def main() -> None:
    print("== gamma operands")
    for q in (1, 2, 3, 5):
        print(f"  gamma({q}) = {gamma_encode(q).to01()}")

    print("\n== opcodes")
    show("0100")            # EMIT1 then EMIT0
    show("100111", "101")   # COPY L=1 Q=1: first condition bit
    show("10010010", "1011")  # COPY L=2 from offset 2
    show("01111011")        # REPEAT the last EMITted bit 3 times
    show("01110101")        # REPEAT reaching past the output FAILs
    show("1011", "")        # COPY against lambda FAILs
    show("010")             # dangling opcode: normal halt with "1"

    print("\n== complexity profiles under lambda")
    for n in range(1, 7):
        table = build_complexity_table(n, [EMPTY], l_max=2 * n)
        values = sorted({int(table.entries(EMPTY)[v]) for v in range(1 << n)})
        print(f"  n={n}: C values {values}")
    print("  (EMIT-only programs pin C <= 2n; the first shortcut appears at n=6)")

    print("\n== counting bound")
    table = build_complexity_table(6, [EMPTY], l_max=12)
    for k in (4, 8, 11, 12):
        print(f"  |{{x : C(x) < {k}}}| = {table.count_below(k):4d} <= {2**k - 1}")

    print("\n== conditioning helps")
    x = BitString.from01("10110")
    table = build_complexity_table(5, [EMPTY, x], l_max=10)
    print(f"  C({x.to01()} | lambda) = {table.complexity(x)}")
    print(
        f"  C({x.to01()} | {x.to01()}) = {table.complexity(x, x)}"
        "  (COPY beats spelling the bits out again)"
    )

    print("\n== NOT_FOUND is a certificate, not a number")
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # l_max=1 < 2n, deliberately
        tight = build_complexity_table(
            2, [EMPTY], l_max=1, budget=MachineBudget(4096, 4096)
        )
    value = tight.complexity(BitString.from01("00"))
    assert value is NOT_FOUND
    print(f"  at l_max=1 every 2-bit target is {value}: C > 1 certified")


if __name__ == "__main__":
    main()
