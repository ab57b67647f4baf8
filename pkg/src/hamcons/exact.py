"""Exact extremal values at small n, blocking verification and bound formulas.

A family blocks all acceptable Hamilton cycles exactly when the sets H(F)
cover the space of cycles, so ``m(x, n)`` is a minimum set cover: the
universe is the canonical cycle (or path) classes and each candidate r-set
covers the classes in which it appears as a union of intervals.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .accept import FOUND, NONE_EXISTS, UNKNOWN, as_pattern_set, find_acceptable_cycle, find_acceptable_path
from .core import (
    IntervalPattern,
    SetFamily,
    canonical_paths,
    canonical_sequences,
    count_hf,
    mask_of,
    members_of,
    partition_count,
    pattern_stats,
    placements,
    runs_of,
    tile_runs,
)
from .graphs import SimpleGraph

CYCLE = "cycle"
PATH = "path"
MAX_UNIVERSE = 25_000


def universe(n: int, variant: str):
    """Canonical cycle classes or paths-up-to-reversal, in lexicographic order."""
    if variant == CYCLE:
        return canonical_sequences(n)
    if variant == PATH:
        return canonical_paths(n)
    raise ValueError(f"variant must be 'cycle' or 'path', got {variant!r}")


def universe_size(n: int, variant: str) -> int:
    if variant == CYCLE:
        return math.factorial(n - 1) // 2
    return math.factorial(n) // 2


@dataclass
class CoverInstance:
    n: int
    variant: str
    patterns: tuple[IntervalPattern, ...]
    classes: list[tuple[int, ...]]
    candidates: list[tuple[int, ...]]
    columns: list[int]  # candidate -> bitmask over class indices
    rows: list[int]  # class -> bitmask over candidate indices

    @property
    def full(self) -> int:
        return (1 << len(self.classes)) - 1

    def family(self, chosen) -> SetFamily:
        return SetFamily(self.n, len(self.candidates[0]), (self.candidates[i] for i in chosen))


def build_cover_instance(n: int, ps, variant: str = CYCLE, max_universe: int = MAX_UNIVERSE) -> CoverInstance:
    ps = as_pattern_set(ps)
    r = ps.r
    if n < r:
        raise ValueError(f"n={n} is smaller than r={r}")
    if universe_size(n, variant) > max_universe:
        raise ValueError(f"universe of {universe_size(n, variant)} classes exceeds the limit {max_universe}")
    candidates = list(itertools.combinations(range(1, n + 1), r))
    index = {mask_of(c): i for i, c in enumerate(candidates)}
    classes = list(universe(n, variant))
    wrap = variant == CYCLE
    columns = [0] * len(candidates)
    rows = []
    for u, seq in enumerate(classes):
        row = 0
        for x in ps:
            for union, _ in placements(seq, x, wrap):
                row |= 1 << index[union]
        rows.append(row)
        bit = 1 << u
        for c in members_of(row):
            columns[c] |= bit
    return CoverInstance(n, variant, ps.patterns, classes, candidates, columns, rows)


@dataclass
class ExactResult:
    kind: str  # Found (optimum proven) or Unknown
    size: int | None
    family: SetFamily | None
    lower: int
    upper: int
    nodes: int = 0
    elapsed: float = 0.0


def _greedy(inst: CoverInstance) -> list[int]:
    uncovered = inst.full
    chosen = []
    while uncovered:
        best = max(range(len(inst.columns)), key=lambda i: ((inst.columns[i] & uncovered).bit_count(), -i))
        chosen.append(best)
        uncovered &= ~inst.columns[best]
    return chosen


class _Budget(Exception):
    pass


def solve_cover(inst: CoverInstance, budget_nodes: int | None = None, deterministic: bool = True) -> ExactResult:
    """Branch-and-bound minimum cover.

    Branches on the uncovered class with the fewest covering candidates;
    candidates are tried by decreasing coverage (ties by index) and a tried
    candidate is excluded from later siblings. The bound is
    ``chosen + ceil(uncovered / max coverage)``. With ``deterministic`` set,
    bound ties are explored too and the lexicographically least optimal
    family is returned.
    """
    t0 = time.monotonic()
    cols = inst.columns
    rows = inst.rows
    full = inst.full
    incumbent = sorted(_greedy(inst))
    best = {"size": len(incumbent), "sol": incumbent}
    nodes = 0
    all_cands = (1 << len(cols)) - 1

    def key(sol):
        return [inst.candidates[i] for i in sorted(sol, key=lambda i: inst.candidates[i])]

    def lower_bound(uncovered: int, allowed: int) -> int:
        need = uncovered.bit_count()
        if not need:
            return 0
        top = 0
        a = allowed
        while a:
            low = a & -a
            a ^= low
            cov = (cols[low.bit_length() - 1] & uncovered).bit_count()
            if cov > top:
                top = cov
        if top == 0:
            return 10 ** 9
        return -(-need // top)

    def rec(uncovered: int, allowed: int, chosen: list[int]) -> None:
        nonlocal nodes
        nodes += 1
        if budget_nodes is not None and nodes > budget_nodes:
            raise _Budget
        if not uncovered:
            size = len(chosen)
            if size < best["size"] or (size == best["size"] and key(chosen) < key(best["sol"])):
                best["size"] = size
                best["sol"] = sorted(chosen)
            return
        lb = len(chosen) + lower_bound(uncovered, allowed)
        if lb > best["size"] or (lb == best["size"] and not deterministic):
            return
        # most constrained uncovered class
        pick, pick_opts = -1, None
        u = uncovered
        while u:
            low = u & -u
            u ^= low
            e = low.bit_length() - 1
            opts = rows[e] & allowed
            cnt = opts.bit_count()
            if pick_opts is None or cnt < pick_opts.bit_count():
                pick, pick_opts = e, opts
                if cnt <= 1:
                    break
        if not pick_opts:
            return
        order = sorted(members_of(pick_opts), key=lambda i: (-(cols[i] & uncovered).bit_count(), i))
        excl = allowed
        for c in order:
            chosen.append(c)
            rec(uncovered & ~cols[c], excl & ~(1 << c), chosen)
            chosen.pop()
            excl &= ~(1 << c)

    root_lb = lower_bound(full, all_cands)
    try:
        rec(full, all_cands, [])
    except _Budget:
        return ExactResult(UNKNOWN, None, inst.family(best["sol"]), root_lb, best["size"], nodes, time.monotonic() - t0)
    sol = best["sol"]
    return ExactResult(FOUND, len(sol), inst.family(sol), len(sol), len(sol), nodes, time.monotonic() - t0)


def exhaustive_min_cover(inst: CoverInstance, max_size: int) -> tuple[int, tuple[int, ...]] | None:
    """Unpruned oracle: try every subfamily of size 1, 2, ... up to ``max_size``."""
    full = inst.full
    cols = inst.columns
    for k in range(1, max_size + 1):
        for combo in itertools.combinations(range(len(cols)), k):
            acc = 0
            for i in combo:
                acc |= cols[i]
            if acc == full:
                return k, combo
    return None


def min_blocking_family(n: int, ps, variant: str = CYCLE, budget_nodes: int | None = None,
                        deterministic: bool = True) -> ExactResult:
    inst = build_cover_instance(n, ps, variant)
    return solve_cover(inst, budget_nodes, deterministic)


@dataclass
class BlockingCertificate:
    blocked: bool | None
    kind: str
    classes: int
    counterexample: tuple[int, ...] | None = None
    witnesses: list = field(default_factory=list)  # (class, covering member) pairs
    multiplicity: Counter = field(default_factory=Counter)  # d(C) value -> number of classes
    nodes: int = 0


def _hits(seq, pos, fam: SetFamily, ps, wrap: bool, first_only: bool):
    n = len(seq)
    out = []
    for member in fam.members:
        runs = runs_of(sorted(pos[v] for v in member), n, wrap)
        for x in ps:
            if tile_runs(runs, x, n) is not None:
                out.append(member)
                break
        if first_only and out:
            break
    return out


def cover_counts(seq, fam: SetFamily, ps, variant: str = CYCLE) -> list[tuple[int, ...]]:
    """Members F of ``fam`` with ``seq`` in H(F); ``len`` of this is d(C)."""
    pos = {v: i for i, v in enumerate(seq)}
    return _hits(seq, pos, fam, as_pattern_set(ps), variant == CYCLE, False)


def placement_multiplicity(seq, fam: SetFamily, ps, variant: str = CYCLE) -> int:
    """Number of distinct interval placements whose union is a member of ``fam``."""
    wrap = variant == CYCLE
    return sum(1 for x in as_pattern_set(ps) for union, _ in placements(seq, x, wrap) if union in fam.masks)


def verify_blocking(fam: SetFamily, ps, variant: str = CYCLE, n: int | None = None, mode: str = "exhaustive",
                    budget_nodes: int | None = None, multiplicity: bool = False,
                    keep_witnesses: bool = False) -> BlockingCertificate:
    """Check that no Hamilton cycle (path) of ``K_n`` is acceptable for ``fam``.

    ``exhaustive`` walks every class and records a covering member per class;
    ``search`` delegates to the pruned backtracking search.
    """
    ps = as_pattern_set(ps)
    n = fam.n if n is None else n
    if n != fam.n:
        raise ValueError(f"family is over [{fam.n}], not [{n}]")
    if fam.r != ps.r:
        raise ValueError(f"family members have size {fam.r} but patterns have r={ps.r}")
    if mode == "search":
        finder = find_acceptable_cycle if variant == CYCLE else find_acceptable_path
        out = finder(n, fam, ps, budget_nodes=budget_nodes)
        blocked = {FOUND: False, NONE_EXISTS: True}.get(out.kind)
        return BlockingCertificate(blocked, out.kind, 0, out.witness, nodes=out.nodes)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    wrap = variant == CYCLE
    cert = BlockingCertificate(True, NONE_EXISTS, 0)
    for seq in universe(n, variant):
        cert.classes += 1
        pos = {v: i for i, v in enumerate(seq)}
        hits = _hits(seq, pos, fam, ps, wrap, first_only=not multiplicity)
        if multiplicity:
            cert.multiplicity[len(hits)] += 1
        if not hits:
            cert.blocked = False
            cert.kind = FOUND
            cert.counterexample = seq
            return cert
        if keep_witnesses:
            cert.witnesses.append((seq, hits[0]))
    return cert


class NotBlocking(ValueError):
    pass


def minimality_check(fam: SetFamily, ps, variant: str = CYCLE, n: int | None = None):
    """Return ``(minimal, removable_member)`` for a blocking family.

    A member is removable iff every class it covers is covered by some other
    member as well.
    """
    ps = as_pattern_set(ps)
    n = fam.n if n is None else n
    essential = set()
    for seq in universe(n, variant):
        hits = cover_counts(seq, fam, ps, variant)
        if not hits:
            raise NotBlocking(f"family does not block; acceptable {variant}: {seq}")
        if len(hits) == 1:
            essential.add(hits[0])
    for member in fam.members:
        if member not in essential:
            return False, member
    return True, None


def degree(fam: SetFamily, t: int) -> tuple[int, tuple[int, ...]]:
    """Maximum t-degree and the lexicographically first t-set attaining it."""
    if not 0 <= t < fam.r:
        raise ValueError(f"t must satisfy 0 <= t < r={fam.r}")
    if t == 0:
        return len(fam), ()
    counts = Counter()
    for m in fam.members:
        counts.update(itertools.combinations(m, t))
    if not counts:
        return 0, tuple(range(1, t + 1))
    top = max(counts.values())
    return top, min(d for d, c in counts.items() if c == top)


@dataclass
class AsymptoticBound:
    """``(constant + o(1)) * n**exponent``; never asserted at finite n."""

    constant: Fraction | float
    exponent: float
    kind: str = "asymptotic"

    def at(self, n: int) -> float:
        return float(self.constant) * n ** self.exponent


@dataclass
class BoundReport:
    pattern: IntervalPattern
    n: int
    variant: str
    total: int  # (n-1)! directed cycles up to rotation
    hf: int
    hf_source: str  # "enumerated" or "formula"
    lb_avg: int
    ub_star: int
    lb_avg_const: Fraction
    lb_improved: AsymptoticBound | None
    ub_covering: AsymptoticBound | None
    specialized: dict = field(default_factory=dict)
    exact: int | None = None
    lower: int = 0
    upper: int = 0
    m1_bracket: tuple[Fraction, int] | None = None

    @property
    def sandwich_ok(self) -> bool | None:
        if self.exact is None:
            return None
        return self.lower <= self.exact <= self.upper


def bound_report(x: IntervalPattern, n: int, variant: str = CYCLE, exact: int | None = None,
                 max_enum: int = 200_000) -> BoundReport:
    """Evaluate every bound that applies to ``x`` at ``n``.

    Finite-n bounds are exact integers; bounds holding only up to o(1) terms
    are reported as :class:`AsymptoticBound` and are not used in ``lower`` /
    ``upper``. A path-blocking family also blocks cycles, so cycle lower
    bounds carry over to paths.
    """
    if n < x.r:
        raise ValueError(f"n={n} is smaller than r={x.r}")
    if variant not in (CYCLE, PATH):
        raise ValueError(f"variant must be 'cycle' or 'path', got {variant!r}")
    stats = pattern_stats(x, n)
    total = math.factorial(n - 1)
    if n >= 3 and total // 2 <= max_enum:
        hf, source = count_hf(n, x, max_classes=max_enum), "enumerated"
    else:
        hf, source = stats.hf_upper, "formula"
    lb_avg = -(-total // hf)
    k, r, t = x.k, x.r, x.t
    ub_star = math.comb(n - k, r - k)
    base_const = Fraction(1, stats.c_x * math.prod(math.factorial(v) for v in x.lengths))
    improved = None
    if any(v != 1 for v in x.lengths):
        improved = AsymptoticBound(Fraction(4 * k * r + 1, 4 * k * r) * base_const, r - k)
    covering = None
    if t < k:
        covering = AsymptoticBound(Fraction(math.factorial(k - t), math.factorial(r - t)), r - k)
    extra: dict = {}
    lower, upper = lb_avg, ub_star
    if x.lengths == (2, 2):
        extra["lb_one_ninth"] = AsymptoticBound(Fraction(1, 9), 2)
        extra["ub_refined"] = AsymptoticBound(0.5, 2)  # n^2/2 - n^(3/2)/2
        extra["ub_refined_value"] = 0.5 * n * n - 0.5 * n ** 1.5
        if variant == PATH:
            extra["path_lb"] = -(-(n - 3) * (n - 2) // 6)
            extra["path_ub"] = math.comb(n - 2, 2)
            lower = max(lower, extra["path_lb"])
            upper = min(upper, extra["path_ub"])
    if t == 1 and x.lengths[0] == 2 and variant == CYCLE:
        extra["kr_lb"] = -(-n * (n - 1) // ((n + 2 * r) * (r - 1)))
        extra["kr_ub"] = -(-(n - 1) // (r - 1))
        lower = max(lower, extra["kr_lb"])
        upper = min(upper, extra["kr_ub"])
    m1 = None
    if exact is not None:
        m1 = (Fraction(exact, n), exact)
    return BoundReport(x, n, variant, total, hf, source, lb_avg, ub_star, base_const, improved, covering,
                       extra, exact, lower, upper, m1)


def kr_deletion_view(fam: SetFamily) -> SimpleGraph:
    """``K_n`` with the edges of every member's clique removed."""
    drop = set()
    for m in fam.members:
        drop.update(itertools.combinations(m, 2))
    return SimpleGraph(range(1, fam.n + 1), (e for e in itertools.combinations(range(1, fam.n + 1), 2) if e not in drop))


def kr_pattern(r: int) -> IntervalPattern:
    """The pattern ``(2, 1, ..., 1)`` with r - 2 ones."""
    if r < 2:
        raise ValueError("need r >= 2")
    return IntervalPattern((2,) + (1,) * (r - 2))


__all__ = [
    "CYCLE", "PATH", "CoverInstance", "ExactResult", "BlockingCertificate", "BoundReport", "AsymptoticBound",
    "NotBlocking", "build_cover_instance", "solve_cover", "exhaustive_min_cover", "min_blocking_family",
    "verify_blocking", "minimality_check", "degree", "bound_report", "kr_deletion_view", "kr_pattern",
    "cover_counts", "placement_multiplicity", "universe", "universe_size", "partition_count",
]
