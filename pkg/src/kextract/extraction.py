"""Extraction guarantees checked against exact complexity tables.

Everything here consumes sealed ComplexityTables, so every claim is a
finite, certified statement about the RM-1 machine: dependency scores,
source-pair classes, output deficiencies, and the counting-based
demonstrations (popular colors, popular output prefixes, and the
popularity iteration that recovers a shared range set from bounded
advice). NOT_FOUND entries are never silently mixed into arithmetic;
each consumer states how it excludes or bounds them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .balance import measure_eps_star
from .bits import EMPTY, BitString
from .oracle import NOT_FOUND, Complexity, ComplexityTable
from .tables import SingleSourceTable, TwoSourceTable, gen_constant

DELTA_MARGIN = 2


def dependency(
    table: ComplexityTable, x: BitString, y: BitString
) -> Optional[int]:
    """Largest complexity drop either string suffers given the other.

    dependency = max(C(x) - C(x|y), C(y) - C(y|x)), using the table's
    empty-condition entries for the unconditional values. Returns None
    when any of the four entries is NOT_FOUND: a missing entry only
    bounds the drop on one side, so the score is indeterminate rather
    than a number.
    """
    c_x = table.complexity(x)
    c_xy = table.complexity(x, y)
    c_y = table.complexity(y)
    c_yx = table.complexity(y, x)
    if NOT_FOUND in (c_x, c_xy, c_y, c_yx):
        return None
    return max(c_x - c_xy, c_y - c_yx)


def meets_floor(value: Complexity, k: int, l_max: int) -> bool:
    """Is C >= k certified? NOT_FOUND certifies C > l_max."""
    if value is NOT_FOUND:
        return l_max + 1 >= k
    return value >= k


@dataclass(frozen=True)
class SourcePairClass:
    """All pairs with complexity floor k and dependency at most alpha."""

    n: int
    k: int
    alpha: int
    pairs: tuple[tuple[int, int], ...]
    indeterminate: int

    @property
    def size(self) -> int:
        return len(self.pairs)


def enumerate_class(
    table: ComplexityTable, k: int, alpha: int
) -> SourcePairClass:
    """Certified members of the (k, alpha) class under a full table.

    A pair joins only when both floors C(x), C(y) >= k are certified
    (NOT_FOUND certifies any floor up to l_max + 1) and its dependency
    is a known number <= alpha. Pairs whose dependency is indeterminate
    are excluded and counted, keeping the class sound rather than
    complete.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    n = table.n
    pairs = []
    indeterminate = 0
    for xv in range(1 << n):
        x = BitString(n, xv)
        if not meets_floor(table.complexity(x), k, table.l_max):
            continue
        for yv in range(1 << n):
            y = BitString(n, yv)
            if not meets_floor(table.complexity(y), k, table.l_max):
                continue
            dep = dependency(table, x, y)
            if dep is None:
                indeterminate += 1
            elif dep <= alpha:
                pairs.append((xv, yv))
    return SourcePairClass(
        n=n, k=k, alpha=alpha, pairs=tuple(pairs), indeterminate=indeterminate
    )


@dataclass(frozen=True)
class DeficiencyReport:
    """Output complexity census of a table over one source-pair class.

    Deficiency of a pair is m - C(f(x, y)); NOT_FOUND outputs land in
    the histogram at m - (l_max + 1), a certified upper bound on their
    deficiency that cannot collide with any exact value. The histogram
    always totals the class size.
    """

    m: int
    class_size: int
    histogram: dict[int, int]
    not_found: int
    min_output_complexity: Complexity
    max_deficiency: Optional[int]
    worst_witness: Optional[tuple[int, int, int]]
    l_max: int

    def is_extractor(self, d: int) -> bool:
        """Every class output certified to satisfy C(f(x,y)) >= m - d."""
        if self.class_size == 0:
            return True
        if self.not_found and self.l_max + 1 < self.m - d:
            return False
        if self.min_output_complexity is NOT_FOUND:
            return True
        return self.min_output_complexity >= self.m - d


def extraction_check(
    table: TwoSourceTable,
    cls: SourcePairClass,
    output_oracle: ComplexityTable,
) -> DeficiencyReport:
    """Exact deficiency census of table outputs over a class."""
    if table.n != cls.n:
        raise ValueError("table and class disagree on n")
    if output_oracle.n != table.m:
        raise ValueError("output oracle must target m-bit strings")
    hist: dict[int, int] = {}
    not_found = 0
    min_c: Complexity = NOT_FOUND
    witness = None
    m = table.m
    entries = output_oracle.entries(EMPTY)
    for xv, yv in cls.pairs:
        z = table.color(xv, yv)
        raw = int(entries[z])
        if raw < 0:
            not_found += 1
            key = m - (output_oracle.l_max + 1)
        else:
            key = m - raw
            if raw < min_c:
                min_c = raw
                witness = (xv, yv, z)
        hist[key] = hist.get(key, 0) + 1
    max_def = None
    if min_c is not NOT_FOUND:
        max_def = m - min_c
    return DeficiencyReport(
        m=m,
        class_size=cls.size,
        histogram=dict(sorted(hist.items())),
        not_found=not_found,
        min_output_complexity=min_c,
        max_deficiency=max_def,
        worst_witness=witness,
        l_max=output_oracle.l_max,
    )


@dataclass(frozen=True)
class PopularColorReport:
    """Pigeonhole witness: the most popular color has a complex preimage."""

    n: int
    m: int
    color: int
    preimages: int
    witness_x: int
    witness_complexity: Complexity
    floor: int
    preimage_bound_met: bool
    floor_certified: bool


def popular_color_demo(
    table: SingleSourceTable, oracle: ComplexityTable
) -> PopularColorReport:
    """Most popular color of a line table and its hardest preimage.

    The popular color has at least 2^(n-m) preimages (checked as the
    exact integer comparison count * 2^m >= 2^n), and the hardest
    preimage has complexity at least n - m: fewer than 2^(n-m) strings
    fit below that, so the preimage set cannot sit entirely under it.
    """
    if oracle.n != table.n:
        raise ValueError("oracle must target the table inputs")
    counts = [0] * table.num_colors
    for xv in range(1 << table.n):
        counts[table.color(xv)] += 1
    color = max(range(table.num_colors), key=lambda z: (counts[z], -z))
    preimages = [xv for xv in range(1 << table.n) if table.color(xv) == color]
    best_x = preimages[0]
    best_c: Complexity = oracle.complexity(BitString(table.n, best_x))
    for xv in preimages[1:]:
        c = oracle.complexity(BitString(table.n, xv))
        if c > best_c:
            best_x, best_c = xv, c
    floor = table.n - table.m
    return PopularColorReport(
        n=table.n,
        m=table.m,
        color=color,
        preimages=len(preimages),
        witness_x=best_x,
        witness_complexity=best_c,
        floor=floor,
        preimage_bound_met=len(preimages) << table.m >= 1 << table.n,
        floor_certified=meets_floor(best_c, floor, oracle.l_max),
    )


@dataclass(frozen=True)
class PrefixReport:
    """Popular output prefix forcing a complex-but-dependent pair."""

    n: int
    m: int
    alpha: int
    prefix: int
    pair_count: int
    witness: tuple[int, int]
    witness_complexity: Complexity
    floor: int
    pair_bound_met: bool
    floor_certified: bool
    output_deficiency: Optional[int]


def popular_prefix_demo(
    table: TwoSourceTable,
    alpha: int,
    pair_oracle: ComplexityTable,
    output_oracle: Optional[ComplexityTable] = None,
) -> PrefixReport:
    """Exhibit a high-complexity pair that any table fails to refresh.

    The most popular alpha-bit output prefix covers at least 2^(2n -
    alpha) cells, and among those cells some concatenation x||y has
    complexity at least 2n - alpha by counting. For that pair the table
    output is pinned to alpha bits of slack: with the optional output
    oracle the report also carries m - C(f(x, y)), the deficiency the
    pinned prefix forces.
    """
    if not 0 <= alpha <= table.m:
        raise ValueError("alpha must be in [0, m]")
    if pair_oracle.n != 2 * table.n:
        raise ValueError("pair oracle must target 2n-bit strings")
    n = table.n
    side = 1 << n
    counts = [0] * (1 << alpha)
    shift = table.m - alpha
    for xv in range(side):
        for yv in range(side):
            counts[table.color(xv, yv) >> shift] += 1
    prefix = max(range(1 << alpha), key=lambda p: (counts[p], -p))
    best = None
    best_c: Complexity = -1  # any found value beats this
    for xv in range(side):
        for yv in range(side):
            if table.color(xv, yv) >> shift != prefix:
                continue
            c = pair_oracle.complexity(BitString(2 * n, (xv << n) | yv))
            if best is None or c > best_c:
                best, best_c = (xv, yv), c
    assert best is not None
    floor = 2 * n - alpha
    deficiency = None
    if output_oracle is not None:
        z = table.color(*best)
        c_out = output_oracle.complexity(BitString(table.m, z))
        if c_out is not NOT_FOUND:
            deficiency = table.m - c_out
    return PrefixReport(
        n=n,
        m=table.m,
        alpha=alpha,
        prefix=prefix,
        pair_count=counts[prefix],
        witness=best,
        witness_complexity=best_c,
        floor=floor,
        pair_bound_met=counts[prefix] << alpha >= side * side,
        floor_certified=meets_floor(best_c, floor, pair_oracle.l_max),
        output_deficiency=deficiency,
    )


@dataclass(frozen=True)
class RangeProcedureReport:
    """Outcome of the popularity iteration over bounded-advice ranges.

    The procedure marks all inputs, then repeatedly picks the most
    popular unchosen output among marked inputs' ranges (popularity
    threshold 1/T of the marked set, T = 2^m + 1) and keeps only inputs
    whose range contains it. It stops after K = 2^(k_adv+1) - 1 picks or
    when no output is popular enough; either way, inputs whose range
    equals the chosen set number at least 2^n / T^K, and that bound is
    verified as exact integer arithmetic.
    """

    n: int
    m: int
    k_adv: int
    temperature: int
    max_steps: int
    chosen: tuple[int, ...]
    case: str
    witness_count: int
    witnesses: tuple[int, ...]
    count_bound_met: bool
    ranges_match: bool


def compute_range(
    table: ComplexityTable, x: BitString, k_adv: int
) -> set[int]:
    """All m-bit values with C(z | x) <= k_adv; NOT_FOUND never joins."""
    entries = table.entries(x)
    return {zv for zv in range(entries.size) if 0 <= int(entries[zv]) <= k_adv}


def popular_range_procedure(
    table: ComplexityTable, k_adv: int
) -> RangeProcedureReport:
    """Recover a single shared range set by popularity voting.

    `table` must hold m-bit targets conditioned on every n-bit string.
    Counting caps each range size at K = 2^(k_adv+1) - 1, so if the
    iteration completes K steps every survivor's range is exactly the
    chosen set; if it stops early, strict popularity accounting leaves
    at least a 1/T fraction of survivors whose range is exactly the
    chosen set. Both cases give witness_count * T^K >= 2^n.
    """
    if k_adv < 0:
        raise ValueError("k_adv must be nonnegative")
    lengths = {y.length for y in table.conditions if y.length > 0}
    if len(lengths) != 1:
        raise ValueError("table must be conditioned on strings of one length")
    n = lengths.pop()
    if sum(1 for y in table.conditions if y.length == n) != (1 << n):
        raise ValueError("table must cover every n-bit condition")
    m = table.n
    temperature = (1 << m) + 1
    max_steps = (1 << (k_adv + 1)) - 1

    ranges = {
        xv: frozenset(compute_range(table, BitString(n, xv), k_adv))
        for xv in range(1 << n)
    }
    marked = list(range(1 << n))
    chosen: list[int] = []
    case = "exhausted"
    for _ in range(max_steps):
        counts = [0] * (1 << m)
        for xv in marked:
            for zv in ranges[xv]:
                if zv not in chosen:
                    counts[zv] += 1
        candidates = [
            zv
            for zv in range(1 << m)
            if zv not in chosen and counts[zv] * temperature >= len(marked)
        ]
        if not candidates:
            case = "stalled"
            break
        pick = max(candidates, key=lambda zv: (counts[zv], -zv))
        chosen.append(pick)
        marked = [xv for xv in marked if pick in ranges[xv]]

    chosen_set = frozenset(chosen)
    witnesses = tuple(
        xv for xv in range(1 << n) if ranges[xv] == chosen_set
    )
    count = len(witnesses)
    bound_met = count * temperature**max_steps >= 1 << n
    # Re-derive each witness range straight from the oracle rather than
    # trusting the cache the iteration used.
    ranges_match = all(
        compute_range(table, BitString(n, xv), k_adv) == set(chosen_set)
        for xv in witnesses
    )
    return RangeProcedureReport(
        n=n,
        m=m,
        k_adv=k_adv,
        temperature=temperature,
        max_steps=max_steps,
        chosen=tuple(chosen),
        case=case,
        witness_count=count,
        witnesses=witnesses,
        count_bound_met=bound_met,
        ranges_match=ranges_match,
    )


@dataclass(frozen=True)
class EquivalenceReport:
    """Balance-derived class guarantee, compared against a constant table."""

    n: int
    m: int
    k: int
    d: int
    delta: int
    eps_star: float
    alpha: int
    alpha_capped: bool
    class_size: int
    indeterminate: int
    table_report: DeficiencyReport
    constant_report: DeficiencyReport
    separated: bool


def equivalence_report(
    table: TwoSourceTable,
    k: int,
    d: int,
    cond_oracle: ComplexityTable,
    output_oracle: ComplexityTable,
    delta: int = DELTA_MARGIN,
    override: bool = False,
    threads: int = 1,
) -> EquivalenceReport:
    """Translate a table's measured eps* into a class-deficiency claim.

    alpha = ceil(log2(1/eps*)) + d + 1 (capped at 2n when eps* vanishes
    or the formula overshoots), the class is taken at floor k + delta,
    and the table's deficiency census over that class is laid beside the
    all-zeros constant table's census. `separated` records whether the
    table's worst deficiency is strictly below the constant table's.
    """
    eps_star = measure_eps_star(table, k, d, override=override, threads=threads)
    cap = 2 * table.n
    if eps_star <= 0:
        alpha, capped = cap, True
    else:
        raw = math.ceil(math.log2(1.0 / eps_star)) + d + 1
        alpha, capped = min(raw, cap), raw > cap
    cls = enumerate_class(cond_oracle, k + delta, alpha)
    table_report = extraction_check(table, cls, output_oracle)
    constant = gen_constant(table.n, table.m, 0)
    constant_report = extraction_check(constant, cls, output_oracle)
    separated = (
        table_report.max_deficiency is not None
        and constant_report.max_deficiency is not None
        and table_report.max_deficiency < constant_report.max_deficiency
    )
    return EquivalenceReport(
        n=table.n,
        m=table.m,
        k=k,
        d=d,
        delta=delta,
        eps_star=eps_star,
        alpha=alpha,
        alpha_capped=capped,
        class_size=cls.size,
        indeterminate=cls.indeterminate,
        table_report=table_report,
        constant_report=constant_report,
        separated=separated,
    )
