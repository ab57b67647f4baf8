"""Interval patterns, cyclic orderings, forbidden families and H(F) counting.

Vertices are the integers ``1..n``. Vertex sets are frequently handled as
bitmasks (bit ``v`` set for vertex ``v``) because every hot loop in the
package reduces to membership and subset tests on small sets.

A cyclic ordering is stored in canonical form: rotated so that vertex 1 is
first and reflected so that the second entry is smaller than the last.
There are ``(n-1)!/2`` canonical classes; the usual count of Hamilton cycles
of ``K_n`` (directed, up to rotation) is twice that.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

MAX_ENUM_N = 12


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured size limit."""


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members_of(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@dataclass(frozen=True)
class IntervalPattern:
    """Interval lengths ``x_1 >= ... >= x_k`` with total ``r``."""

    lengths: tuple[int, ...]

    def __init__(self, lengths: Iterable[int]):
        lengths = tuple(sorted((int(v) for v in lengths), reverse=True))
        if not lengths:
            raise ValueError("pattern needs at least one part")
        if lengths[-1] < 1:
            raise ValueError(f"pattern parts must be positive: {lengths}")
        object.__setattr__(self, "lengths", lengths)

    @classmethod
    def parse(cls, text: str) -> "IntervalPattern":
        try:
            return cls(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError as exc:
            raise ValueError(f"bad pattern {text!r}: {exc}") from None

    @property
    def r(self) -> int:
        return sum(self.lengths)

    @property
    def k(self) -> int:
        return len(self.lengths)

    @property
    def t(self) -> int:
        """Number of parts longer than 1."""
        return sum(1 for v in self.lengths if v > 1)

    def __str__(self) -> str:
        return ",".join(map(str, self.lengths))


@dataclass(frozen=True)
class CyclicOrdering:
    """A Hamilton cycle of ``K_n`` in canonical form."""

    seq: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.seq)

    def __iter__(self):
        return iter(self.seq)

    def __len__(self) -> int:
        return len(self.seq)

    def __getitem__(self, i: int) -> int:
        return self.seq[i % len(self.seq)]

    def __str__(self) -> str:
        return " ".join(map(str, self.seq))


def _check_permutation(seq: Sequence[int]) -> None:
    if sorted(seq) != list(range(1, len(seq) + 1)):
        raise ValueError(f"not a permutation of 1..{len(seq)}: {list(seq)}")


def canonicalize(seq: Sequence[int]) -> CyclicOrdering:
    seq = tuple(int(v) for v in seq)
    n = len(seq)
    if n < 3:
        raise ValueError("a cyclic ordering needs n >= 3")
    _check_permutation(seq)
    i = seq.index(1)
    rot = seq[i:] + seq[:i]
    if rot[1] > rot[-1]:
        rot = (rot[0],) + rot[:0:-1]
    return CyclicOrdering(rot)


def canonical_sequences(n: int) -> Iterator[tuple[int, ...]]:
    """Yield the canonical tuple of every class in lexicographic order."""
    if n < 3 or n > MAX_ENUM_N:
        raise ValueError(f"n must lie in 3..{MAX_ENUM_N}, got {n}")
    for rest in itertools.permutations(range(2, n + 1)):
        if rest[0] < rest[-1]:
            yield (1,) + rest


def enumerate_cycles(n: int) -> Iterator[CyclicOrdering]:
    for s in canonical_sequences(n):
        yield CyclicOrdering(s)


def canonical_paths(n: int) -> Iterator[tuple[int, ...]]:
    """Hamilton paths of ``K_n`` up to reversal (first vertex < last)."""
    if n < 2 or n > MAX_ENUM_N:
        raise ValueError(f"n must lie in 2..{MAX_ENUM_N}, got {n}")
    for p in itertools.permutations(range(1, n + 1)):
        if p[0] < p[-1]:
            yield p


@dataclass(frozen=True)
class SetFamily:
    """A family of distinct ``r``-subsets of ``[n]``.

    Members are kept as sorted tuples in lexicographic order; ``masks`` gives
    the matching bitmasks for O(1) membership tests.
    """

    n: int
    r: int
    members: tuple[tuple[int, ...], ...]
    masks: frozenset[int] = field(init=False, repr=False, compare=False)

    def __init__(self, n: int, r: int, members: Iterable[Iterable[int]] = ()):
        if n < 1 or r < 1:
            raise ValueError("n and r must be positive")
        cleaned = set()
        for m in members:
            t = tuple(sorted(int(v) for v in m))
            if len(t) != r or len(set(t)) != r:
                raise ValueError(f"member {t} is not an {r}-set")
            if t[0] < 1 or t[-1] > n:
                raise ValueError(f"member {t} not inside [1, {n}]")
            cleaned.add(t)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "members", tuple(sorted(cleaned)))
        object.__setattr__(self, "masks", frozenset(mask_of(t) for t in self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item) -> bool:
        if isinstance(item, int):
            return item in self.masks
        return mask_of(item) in self.masks

    def without(self, member: Iterable[int]) -> "SetFamily":
        drop = tuple(sorted(member))
        return SetFamily(self.n, self.r, (m for m in self.members if m != drop))

    def union(self, other: Iterable[Iterable[int]]) -> "SetFamily":
        return SetFamily(self.n, self.r, itertools.chain(self.members, other))

    def pair_degrees(self) -> Counter:
        c: Counter = Counter()
        for m in self.members:
            c.update(itertools.combinations(m, 2))
        return c

    def to_text(self) -> str:
        lines = [f"{self.n} {self.r}"]
        lines += [" ".join(map(str, m)) for m in self.members]
        return "\n".join(lines) + "\n"


class FormatError(ValueError):
    """Malformed input text; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_family(text: str) -> SetFamily:
    rows = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines(), 1)]
    rows = [(i, ln) for i, ln in rows if ln]
    if not rows:
        raise FormatError(1, "empty family file (expected header 'n r')")
    lineno, header = rows[0]
    try:
        n, r = (int(v) for v in header.split())
    except ValueError:
        raise FormatError(lineno, f"bad header {header!r}, expected 'n r'") from None
    members = []
    seen = set()
    for lineno, ln in rows[1:]:
        try:
            m = tuple(sorted(int(v) for v in ln.split()))
        except ValueError:
            raise FormatError(lineno, f"non-integer entry in {ln!r}") from None
        if len(m) != r or len(set(m)) != r:
            raise FormatError(lineno, f"expected {r} distinct vertices, got {ln!r}")
        if m[0] < 1 or m[-1] > n:
            raise FormatError(lineno, f"vertex outside 1..{n} in {ln!r}")
        if m in seen:
            raise FormatError(lineno, f"duplicate member {ln!r}")
        seen.add(m)
        members.append(m)
    return SetFamily(n, r, members)


def parse_sequence(text: str) -> tuple[int, ...]:
    toks = text.split()
    try:
        return tuple(int(t) for t in toks)
    except ValueError:
        raise FormatError(1, f"non-integer vertex in {text.strip()!r}") from None


@dataclass(frozen=True)
class PatternStats:
    c_x: int
    hf_upper: int


def partition_count(x: IntervalPattern) -> int:
    """Unordered partitions of an r-set into blocks of sizes ``x``."""
    denom = 1
    for v in x.lengths:
        denom *= math.factorial(v)
    for mult in Counter(x.lengths).values():
        denom *= math.factorial(mult)
    return math.factorial(x.r) // denom


def pattern_stats(x: IntervalPattern, n: int) -> PatternStats:
    if n < x.r:
        raise ValueError(f"n={n} is smaller than r={x.r}")
    c = partition_count(x)
    upper = c * math.factorial(n - x.r + x.k - 1)
    for v in x.lengths:
        upper *= math.factorial(v)
    return PatternStats(c, upper)


# Run decomposition: the positions that F occupies in a cycle split into
# maximal runs of consecutive positions. F is a union of disjoint intervals
# with lengths x exactly when x can be grouped so that each group sums to
# one run length.


def runs_of(positions: Sequence[int], n: int, wrap: bool) -> list[tuple[int, int]]:
    """Maximal runs ``(start, length)`` of sorted distinct ``positions``."""
    runs = []
    start = prev = positions[0]
    for p in positions[1:]:
        if p != prev + 1:
            runs.append((start, prev - start + 1))
            start = p
        prev = p
    runs.append((start, prev - start + 1))
    if wrap and len(runs) > 1 and runs[0][0] == 0 and prev == n - 1:
        s, length = runs.pop()
        runs[0] = (s, length + runs[0][1])
    return runs


@lru_cache(maxsize=None)
def _tiling(run_lengths: tuple[int, ...], parts: tuple[int, ...]):
    """Assign ``parts`` to runs so each run is filled exactly.

    Returns a tuple giving, per part, the index of its run, or None.
    Parts are consumed largest-first.
    """
    if not parts:
        return () if not any(run_lengths) else None
    if sum(run_lengths) != sum(parts):
        return None
    head, rest = parts[0], parts[1:]
    tried = set()
    for i, cap in enumerate(run_lengths):
        if cap >= head and cap not in tried:
            tried.add(cap)
            left = run_lengths[:i] + (cap - head,) + run_lengths[i + 1:]
            sub = _tiling(left, rest)
            if sub is not None:
                return (i,) + sub
    return None


def tile_runs(runs: list[tuple[int, int]], x: IntervalPattern, n: int) -> tuple[int, ...] | None:
    """Start positions (aligned with ``x.lengths``) tiling ``runs``, or None."""
    assign = _tiling(tuple(length for _, length in runs), x.lengths)
    if assign is None:
        return None
    cursor = [start for start, _ in runs]
    starts = []
    for part, ri in zip(x.lengths, assign):
        starts.append(cursor[ri] % n)
        cursor[ri] += part
    return tuple(starts)


def _positions(seq: Sequence[int]) -> dict[int, int]:
    return {v: i for i, v in enumerate(seq)}


def find_intervals(seq: Sequence[int], F: Iterable[int], x: IntervalPattern, wrap: bool = True):
    """Start indices (0-based) of intervals of lengths ``x`` with union ``F``.

    ``wrap`` selects cyclic (True) or path (False) interval semantics.
    Returns None when ``F`` is not such a union.
    """
    F = tuple(F)
    if len(set(F)) != x.r:
        raise ValueError(f"|F|={len(set(F))} does not match r={x.r}")
    pos = _positions(seq)
    try:
        ps = sorted(pos[v] for v in F)
    except KeyError as exc:
        raise ValueError(f"vertex {exc.args[0]} of F is not in the ordering") from None
    return tile_runs(runs_of(ps, len(seq), wrap), x, len(seq))


def in_hf(c: Sequence[int] | CyclicOrdering, F: Iterable[int], x: IntervalPattern):
    """Whether ``F`` is a union of disjoint cycle intervals of lengths ``x``.

    Returns the tuple of 0-based start indices as witness, or None.
    """
    seq = c.seq if isinstance(c, CyclicOrdering) else tuple(c)
    return find_intervals(seq, F, x, wrap=True)


def intervals_at(seq: Sequence[int], starts: Sequence[int], x: IntervalPattern) -> tuple[tuple[int, ...], ...]:
    n = len(seq)
    return tuple(tuple(seq[(s + j) % n] for j in range(length)) for s, length in zip(starts, x.lengths))


def placements(seq: Sequence[int], x: IntervalPattern, wrap: bool = True) -> Iterator[tuple[int, tuple[int, ...]]]:
    """Every placement of disjoint intervals of lengths ``x`` in ``seq``.

    Yields ``(union_bitmask, starts)``; intervals of equal length are listed
    with increasing starts so each unordered placement appears once.
    """
    n = len(seq)
    if x.r > n:
        return
    tables = {}
    for length in set(x.lengths):
        table = []
        last = n if wrap else n - length + 1
        for s in range(last):
            pm = vm = 0
            for j in range(length):
                p = (s + j) % n
                pm |= 1 << p
                vm |= 1 << seq[p]
            table.append((s, pm, vm))
        tables[length] = table
    parts = x.lengths
    starts = [0] * len(parts)

    def place(i: int, occupied: int, union: int, min_start: int):
        if i == len(parts):
            yield union, tuple(starts)
            return
        length = parts[i]
        same_as_prev = i > 0 and parts[i - 1] == length
        for s, pm, vm in tables[length]:
            if (same_as_prev and s <= min_start) or pm & occupied:
                continue
            starts[i] = s
            yield from place(i + 1, occupied | pm, union | vm, s)

    yield from place(0, 0, 0, -1)


def hit_masks(seq: Sequence[int], x: IntervalPattern, wrap: bool = True) -> set[int]:
    """Bitmasks of every r-set that ``seq`` exhibits as a union of intervals."""
    return {union for union, _ in placements(seq, x, wrap)}


def count_hf(n: int, x: IntervalPattern, F: Iterable[int] | None = None, max_classes: int = 2_000_000) -> int:
    """Exact ``|H(F)|`` counted over directed cycles up to rotation."""
    if n < x.r:
        raise ValueError(f"n={n} is smaller than r={x.r}")
    if n < 3:
        raise ValueError("need n >= 3")
    classes = math.factorial(n - 1) // 2
    if classes > max_classes:
        raise BudgetExceeded(f"{classes} classes exceed the enumeration budget {max_classes}")
    F = tuple(range(1, x.r + 1)) if F is None else tuple(F)
    if len(set(F)) != x.r or min(F) < 1 or max(F) > n:
        raise ValueError(f"F={F} is not an {x.r}-subset of [1, {n}]")
    count = 0
    for s in canonical_sequences(n):
        if find_intervals(s, F, x, wrap=True) is not None:
            count += 1
    return 2 * count
