"""Acceptability of Hamilton cycles and paths, and searches for acceptable ones.

Searches run depth-first over canonical sequences (cycles rooted at vertex 1
with second vertex < last vertex; paths with first vertex < last vertex) and
prune a prefix as soon as some forbidden set has all of its vertices placed
and already appears as a union of intervals. Once every vertex of F is
placed, its runs in the final ordering are fixed: the neighbours of the
prefix boundary are vertices outside F, except that the wrap edge of a cycle
only exists when the last vertex is placed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .core import (
    CyclicOrdering,
    IntervalPattern,
    SetFamily,
    _tiling,
    intervals_at,
    mask_of,
    runs_of,
    tile_runs,
)

FOUND = "Found"
NONE_EXISTS = "NoneExists"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class PatternSet:
    patterns: tuple[IntervalPattern, ...]

    def __init__(self, patterns: Iterable[IntervalPattern | Iterable[int]]):
        pats = []
        for p in patterns:
            p = p if isinstance(p, IntervalPattern) else IntervalPattern(p)
            if p not in pats:
                pats.append(p)
        if not pats:
            raise ValueError("pattern set is empty")
        if len({p.r for p in pats}) != 1:
            raise ValueError("all patterns in a set must share the same r: " + " ".join(map(str, pats)))
        object.__setattr__(self, "patterns", tuple(pats))

    @property
    def r(self) -> int:
        return self.patterns[0].r

    def __iter__(self):
        return iter(self.patterns)

    def __str__(self) -> str:
        return " ".join(map(str, self.patterns))


def as_pattern_set(ps) -> PatternSet:
    if isinstance(ps, PatternSet):
        return ps
    if isinstance(ps, IntervalPattern):
        return PatternSet([ps])
    return PatternSet(ps)


@dataclass(frozen=True)
class Violation:
    pattern: IntervalPattern
    member: tuple[int, ...]
    starts: tuple[int, ...]
    intervals: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CheckResult:
    acceptable: bool
    violation: Violation | None = None

    def __bool__(self) -> bool:
        return self.acceptable


@dataclass
class SearchOutcome:
    kind: str
    witness: tuple[int, ...] | None = None
    nodes: int = 0
    elapsed: float = 0.0
    budget: int | None = None
    subtrees: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.kind == FOUND


def _first_violation(seq: Sequence[int], fam: SetFamily, ps: PatternSet, wrap: bool) -> Violation | None:
    n = len(seq)
    pos = {v: i for i, v in enumerate(seq)}
    for x in ps:
        for member in fam.members:
            starts = tile_runs(runs_of(sorted(pos[v] for v in member), n, wrap), x, n)
            if starts is not None:
                ivs = intervals_at(seq, starts, x)
                return Violation(x, member, starts, ivs)
    return None


def _validate(seq: Sequence[int], fam: SetFamily, ps: PatternSet) -> None:
    if sorted(seq) != list(range(1, len(seq) + 1)):
        raise ValueError(f"not a permutation of 1..{len(seq)}")
    if fam.n != len(seq):
        raise ValueError(f"family is over [{fam.n}] but the ordering has {len(seq)} vertices")
    if fam.r != ps.r:
        raise ValueError(f"family members have size {fam.r} but patterns have r={ps.r}")


def cycle_acceptable(c: Sequence[int] | CyclicOrdering, fam: SetFamily, ps) -> CheckResult:
    ps = as_pattern_set(ps)
    seq = c.seq if isinstance(c, CyclicOrdering) else tuple(c)
    _validate(seq, fam, ps)
    v = _first_violation(seq, fam, ps, wrap=True)
    return CheckResult(v is None, v)


def path_acceptable(p: Sequence[int], fam: SetFamily, ps) -> CheckResult:
    ps = as_pattern_set(ps)
    seq = tuple(p)
    _validate(seq, fam, ps)
    v = _first_violation(seq, fam, ps, wrap=False)
    return CheckResult(v is None, v)


class _BudgetHit(Exception):
    pass


class _Search:
    """Depth-first search over canonical cycle or path sequences."""

    def __init__(self, n: int, fam: SetFamily, ps: PatternSet, cycle: bool, prune: bool = True):
        if fam.n != n:
            raise ValueError(f"family is over [{fam.n}], expected [{n}]")
        if fam.r != ps.r:
            raise ValueError(f"family members have size {fam.r} but patterns have r={ps.r}")
        self.n = n
        self.fam = fam
        self.parts = [x.lengths for x in ps]
        self.ps = ps
        self.cycle = cycle
        self.prune = prune
        self.by_vertex: dict[int, list[tuple[int, tuple[int, ...]]]] = {v: [] for v in range(1, n + 1)}
        for member in fam.members:
            m = mask_of(member)
            for v in member:
                self.by_vertex[v].append((m, member))
        self.nodes = 0
        self.limit: int | None = None
        self.deadline: float | None = None
        self.seq = [0] * n
        self.pos = [0] * (n + 1)

    def roots(self) -> list[int]:
        # cycles: choice of the second vertex; paths: choice of the first
        if self.cycle:
            return list(range(2, self.n)) if self.n >= 3 else []
        return list(range(1, self.n))

    def _hit(self, member: tuple[int, ...], full: bool) -> bool:
        n = self.n
        ps = sorted(self.pos[v] for v in member)
        lengths = tuple(length for _, length in runs_of(ps, n, self.cycle and full))
        return any(_tiling(lengths, parts) is not None for parts in self.parts)

    def _leaf_ok(self) -> bool:
        return _first_violation(self.seq, self.fam, self.ps, wrap=self.cycle) is None

    def _tick(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise _BudgetHit
        if self.deadline is not None and (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            raise _BudgetHit

    def solutions(self, root: int) -> Iterator[tuple[int, ...]]:
        """All acceptable canonical sequences in the subtree of ``root``."""
        n = self.n
        full = (1 << (n + 1)) - 2
        if self.cycle:
            prefix = [1, root]
            anchor = root
        else:
            prefix = [root]
            anchor = root
        placed = 0
        for i, v in enumerate(prefix):
            self.seq[i] = v
            self.pos[v] = i
            placed |= 1 << v
        if n == len(prefix):
            if self._symmetric_ok(n - 1) and self._leaf_ok():
                yield tuple(self.seq)
            return
        # faces completed by the prefix itself (only possible for tiny r)
        if self.prune:
            for i, v in enumerate(prefix):
                for m, member in self.by_vertex[v]:
                    if m & ~placed == 0 and max(self.pos[u] for u in member) == i and self._hit(member, False):
                        return
        yield from self._extend(len(prefix), placed, full, anchor)

    def _symmetric_ok(self, last: int) -> bool:
        anchor = self.seq[1] if self.cycle else self.seq[0]
        return self.seq[last] > anchor

    def _extend(self, p: int, placed: int, full: int, anchor: int) -> Iterator[tuple[int, ...]]:
        n = self.n
        last = p == n - 1
        free = full & ~placed
        v = 0
        while free:
            low = free & -free
            free ^= low
            v = low.bit_length() - 1
            rest = full & ~placed & ~low
            if last:
                if v < anchor:
                    continue
            elif not (rest >> (anchor + 1)):
                # no vertex larger than the anchor left for the final slot
                continue
            self._tick()
            self.seq[p] = v
            self.pos[v] = p
            now = placed | low
            if self.prune:
                bad = False
                for m, member in self.by_vertex[v]:
                    if m & ~now == 0 and self._hit(member, last):
                        bad = True
                        break
                if bad:
                    continue
            if last:
                if self.prune or self._leaf_ok():
                    yield tuple(self.seq)
            else:
                yield from self._extend(p + 1, now, full, anchor)


def _run_search(search: _Search, budget_nodes: int | None, time_limit: float | None) -> SearchOutcome:
    t0 = time.monotonic()
    roots = search.roots()
    share = None if budget_nodes is None else max(1, budget_nodes // max(1, len(roots)))
    deadline = None if time_limit is None else t0 + time_limit
    status = {}
    total = 0
    witness = None
    for root in roots:
        search.nodes = 0
        search.limit = share
        search.deadline = deadline
        try:
            for sol in search.solutions(root):
                witness = sol
                break
            status[root] = FOUND if witness is not None else NONE_EXISTS
        except _BudgetHit:
            status[root] = UNKNOWN
        total += search.nodes
        if witness is not None:
            break
    if witness is not None:
        kind = FOUND
    elif all(s == NONE_EXISTS for s in status.values()):
        kind = NONE_EXISTS
    else:
        kind = UNKNOWN
    return SearchOutcome(kind, witness, total, time.monotonic() - t0, budget_nodes, status)


def find_acceptable_cycle(n: int, fam: SetFamily, ps, budget_nodes: int | None = None,
                          time_limit: float | None = None, prune: bool = True) -> SearchOutcome:
    """Search canonical Hamilton cycles of ``K_n`` for an acceptable one.

    ``budget_nodes`` is split evenly over the root subtrees (one per choice of
    the second vertex), so the outcome kind does not depend on the order in
    which subtrees are visited. A time limit can only ever produce Unknown.
    """
    ps = as_pattern_set(ps)
    if n < 3:
        raise ValueError("need n >= 3")
    return _run_search(_Search(n, fam, ps, cycle=True, prune=prune), budget_nodes, time_limit)


def find_acceptable_path(n: int, fam: SetFamily, ps, budget_nodes: int | None = None,
                         time_limit: float | None = None, prune: bool = True) -> SearchOutcome:
    ps = as_pattern_set(ps)
    if n < 2:
        raise ValueError("need n >= 2")
    return _run_search(_Search(n, fam, ps, cycle=False, prune=prune), budget_nodes, time_limit)


def iter_acceptable(n: int, fam: SetFamily, ps, cycle: bool = True, prune: bool = True) -> Iterator[tuple[int, ...]]:
    """Every acceptable canonical cycle (or path), in lexicographic order."""
    search = _Search(n, fam, as_pattern_set(ps), cycle=cycle, prune=prune)
    for root in search.roots():
        yield from search.solutions(root)


def count_search_nodes(n: int, fam: SetFamily, ps, cycle: bool = True, prune: bool = True) -> int:
    search = _Search(n, fam, as_pattern_set(ps), cycle=cycle, prune=prune)
    total = 0
    for root in search.roots():
        search.nodes = 0
        for _ in search.solutions(root):
            pass
        total += search.nodes
    return total
