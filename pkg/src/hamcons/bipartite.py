"""Perfect matchings in bipartite graphs that avoid 4-cycles with a constraint graph.

Both sides are indexed ``0..n-1`` internally (``a_i`` is row ``i``, ``b_j`` is
column ``j``); the text format and the CLI use 1-based labels.

A perfect matching ``sigma`` of G (row i matched to column sigma[i]) is
acceptable for H when there are no rows i != j with ``(i, sigma[j])`` and
``(j, sigma[i])`` both edges of H.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .accept import FOUND, NONE_EXISTS, UNKNOWN, SearchOutcome
from .core import FormatError
from .geometry import incidence


@dataclass(frozen=True)
class BipartiteGraph:
    n: int
    rows: tuple[frozenset[int], ...]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        rows = [set() for _ in range(n)]
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge {(a, b)} outside 0..{n - 1}")
            rows[a].add(b)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(frozenset(r) for r in rows))

    @classmethod
    def complete(cls, n: int) -> "BipartiteGraph":
        return cls(n, itertools.product(range(n), repeat=2))

    def edges(self) -> Iterator[tuple[int, int]]:
        for a, row in enumerate(self.rows):
            for b in sorted(row):
                yield a, b

    def n_edges(self) -> int:
        return sum(len(r) for r in self.rows)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.rows[a]

    def columns(self) -> tuple[frozenset[int], ...]:
        cols = [set() for _ in range(self.n)]
        for a, b in self.edges():
            cols[b].add(a)
        return tuple(frozenset(c) for c in cols)

    def row_masks(self) -> list[int]:
        return [sum(1 << b for b in row) for row in self.rows]

    def col_masks(self) -> list[int]:
        return [sum(1 << a for a in col) for col in self.columns()]

    def degrees(self) -> tuple[list[int], list[int]]:
        return [len(r) for r in self.rows], [len(c) for c in self.columns()]

    def regular_degree(self) -> int | None:
        da, db = self.degrees()
        ds = set(da) | set(db)
        return ds.pop() if len(ds) == 1 else None

    def max_degree(self) -> int:
        da, db = self.degrees()
        return max(da + db) if self.n else 0

    def to_text(self) -> str:
        lines = [f"bipartite {self.n}"]
        lines += [" ".join(str(b + 1) for b in sorted(row)) for row in self.rows]
        return "\n".join(lines) + "\n"


def parse_bipartite(text: str) -> BipartiteGraph:
    lines = text.splitlines()
    body = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(lines, 1)]
    # skip leading blank/comment lines before the header
    while body and not body[0][1]:
        body.pop(0)
    if not body:
        raise FormatError(1, "empty graph file (expected header 'bipartite n')")
    lineno, header = body[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "bipartite" or not parts[1].isdigit():
        raise FormatError(lineno, f"bad header {header!r}, expected 'bipartite n'")
    n = int(parts[1])
    rows = body[1:]
    while len(rows) > n and not rows[-1][1]:
        rows.pop()
    if len(rows) != n:
        raise FormatError(lineno, f"expected {n} adjacency lines, found {len(rows)}")
    edges = []
    for a, (lineno, ln) in enumerate(rows):
        for tok in ln.split():
            if not tok.isdigit() or not 1 <= int(tok) <= n:
                raise FormatError(lineno, f"bad neighbour {tok!r} (expected 1..{n})")
            edges.append((a, int(tok) - 1))
    return BipartiteGraph(n, edges)


@dataclass(frozen=True)
class Matching:
    sigma: tuple[int, ...]

    def __init__(self, sigma: Sequence[int]):
        sigma = tuple(int(v) for v in sigma)
        if sorted(sigma) != list(range(len(sigma))):
            raise ValueError(f"not a bijection: {sigma}")
        object.__setattr__(self, "sigma", sigma)

    @property
    def n(self) -> int:
        return len(self.sigma)

    def edges(self) -> list[tuple[int, int]]:
        return list(enumerate(self.sigma))

    def in_graph(self, g: BipartiteGraph) -> bool:
        return all(g.has_edge(a, b) for a, b in self.edges())


@dataclass(frozen=True)
class MatchingCheck:
    acceptable: bool
    witness: tuple[int, int] | None = None  # rows i < j closing a bad 4-cycle

    def __bool__(self) -> bool:
        return self.acceptable


def matching_acceptable(m: Matching | Sequence[int], h: BipartiteGraph) -> MatchingCheck:
    sigma = m.sigma if isinstance(m, Matching) else Matching(m).sigma
    if len(sigma) != h.n:
        raise ValueError(f"matching has {len(sigma)} rows but H has n={h.n}")
    row_of = {b: a for a, b in enumerate(sigma)}
    for i in range(h.n):
        for b in h.rows[i]:
            j = row_of[b]
            if j != i and h.has_edge(j, sigma[i]):
                return MatchingCheck(False, (min(i, j), max(i, j)))
    return MatchingCheck(True)


def complement(g: BipartiteGraph) -> BipartiteGraph:
    return BipartiteGraph(g.n, ((a, b) for a in range(g.n) for b in range(g.n) if b not in g.rows[a]))


def _augment_all(domains: Sequence[int]) -> bool:
    """Kuhn's algorithm: do the row domains admit a perfect matching?"""
    match_col: dict[int, int] = {}

    def try_row(i: int, seen: int) -> tuple[bool, int]:
        d = domains[i] & ~seen
        while d:
            low = d & -d
            d ^= low
            seen |= low
            j = low.bit_length() - 1
            if j not in match_col:
                match_col[j] = i
                return True, seen
            ok, seen = try_row(match_col[j], seen)
            if ok:
                match_col[j] = i
                return True, seen
        return False, seen

    for i in range(len(domains)):
        ok, _ = try_row(i, 0)
        if not ok:
            return False
    return True


class _MatchBudget(Exception):
    pass


def find_acceptable_matching(g: BipartiteGraph, h: BipartiteGraph, budget_nodes: int | None = None,
                             time_limit: float | None = None, allow_overlap: bool = False,
                             hall_check: bool = True) -> SearchOutcome:
    """Backtracking over rows for a perfect matching of G acceptable for H.

    Rows are chosen by smallest remaining domain. Placing ``(i, c)`` removes
    column c everywhere and, for every open row j with ``(j, c)`` in H, the
    H-neighbours of i from j's domain, so no partial matching ever contains a
    bad 4-cycle. ``hall_check`` additionally requires the open domains to
    admit a perfect matching.
    """
    if g.n != h.n:
        raise ValueError("G and H must have the same side size")
    if not allow_overlap and any(h.has_edge(a, b) for a, b in g.edges()):
        raise ValueError("G and H share an edge (pass allow_overlap=True to override)")
    n = g.n
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    h_rows = h.row_masks()
    h_cols = h.col_masks()
    sigma = [-1] * n
    nodes = 0

    def rec(domains: dict[int, int]) -> bool:
        nonlocal nodes
        if not domains:
            return True
        i = min(domains, key=lambda r: (domains[r].bit_count(), r))
        d = domains[i]
        while d:
            low = d & -d
            d ^= low
            c = low.bit_length() - 1
            nodes += 1
            if budget_nodes is not None and nodes > budget_nodes:
                raise _MatchBudget
            if deadline is not None and (nodes & 255) == 0 and time.monotonic() > deadline:
                raise _MatchBudget
            nxt = {}
            dead = False
            for j, dj in domains.items():
                if j == i:
                    continue
                dj &= ~low
                if h_cols[c] >> j & 1:
                    dj &= ~h_rows[i]
                if not dj:
                    dead = True
                    break
                nxt[j] = dj
            if dead:
                continue
            if hall_check and nxt and not _augment_all(list(nxt.values())):
                continue
            sigma[i] = c
            if rec(nxt):
                return True
            sigma[i] = -1
        return False

    start = {i: sum(1 << b for b in g.rows[i]) for i in range(n)}
    try:
        ok = rec(start)
    except _MatchBudget:
        return SearchOutcome(UNKNOWN, None, nodes, time.monotonic() - t0, budget_nodes)
    if ok:
        return SearchOutcome(FOUND, tuple(sigma), nodes, time.monotonic() - t0, budget_nodes)
    return SearchOutcome(NONE_EXISTS, None, nodes, time.monotonic() - t0, budget_nodes)


def perfect_matchings(g: BipartiteGraph) -> Iterator[tuple[int, ...]]:
    """All perfect matchings of G in lexicographic order of sigma."""
    n = g.n
    sigma = [0] * n
    used = [False] * n

    def rec(i: int):
        if i == n:
            yield tuple(sigma)
            return
        for b in sorted(g.rows[i]):
            if not used[b]:
                used[b] = True
                sigma[i] = b
                yield from rec(i + 1)
                used[b] = False

    yield from rec(0)


def pg_incidence_graph(d: int, q: int) -> BipartiteGraph:
    """Point-hyperplane incidence graph of PG(d, q)."""
    if d < 1:
        raise ValueError("need d >= 1")
    rows = incidence(d, q)
    return BipartiteGraph(len(rows), ((a, b) for a, row in enumerate(rows) for b in row))


def icbrt(m: int) -> int:
    """Largest k with k**3 <= m."""
    if m < 0:
        raise ValueError("m must be non-negative")
    k = int(round(m ** (1 / 3)))
    while k ** 3 > m:
        k -= 1
    while (k + 1) ** 3 <= m:
        k += 1
    return k


def composite_H(q: int) -> BipartiteGraph:
    """k x k block graph: ``K_{m,m}`` on the diagonal, PG(3, q) incidence off it.

    ``m = (q^4 - 1)/(q - 1)`` and ``k = floor(m^(1/3))``; regular of degree
    ``m + (k - 1)(q^3 - 1)/(q - 1)``.
    """
    base = pg_incidence_graph(3, q)
    m = base.n
    k = icbrt(m)
    edges = []
    for bi in range(k):
        for bj in range(k):
            ro, co = bi * m, bj * m
            if bi == bj:
                edges.extend((ro + a, co + b) for a in range(m) for b in range(m))
            else:
                edges.extend((ro + a, co + b) for a, b in base.edges())
    return BipartiteGraph(m * k, edges)


def ceil_two_thirds_power(n: int) -> int:
    """Smallest integer s with s**3 >= n**2, i.e. ceil(n^(2/3))."""
    s = icbrt(n * n)
    return s if s ** 3 == n * n else s + 1


def simple_H(q: int) -> BipartiteGraph:
    """PG(3, q) incidence graph plus a complete block on the first ceil(n^(2/3))+1 rows and columns."""
    base = pg_incidence_graph(3, q)
    n = base.n
    size = ceil_two_thirds_power(n) + 1
    block = itertools.product(range(size), repeat=2)
    return BipartiteGraph(n, itertools.chain(base.edges(), block))


def two_regular_cycle(n: int) -> BipartiteGraph:
    """The 2n-cycle ``a_1 b_1 a_2 b_2 ... a_n b_n``."""
    if n < 2:
        raise ValueError("need n >= 2")
    return BipartiteGraph(n, [(i, i) for i in range(n)] + [((i + 1) % n, i) for i in range(n)])


def two_regular_graphs(n: int) -> Iterator[BipartiteGraph]:
    """One 2-regular bipartite graph per isomorphism class (cycle lengths 2p, p >= 2)."""

    def parts(total: int, smallest: int):
        if total == 0:
            yield ()
            return
        for p in range(smallest, total + 1):
            for rest in parts(total - p, p):
                yield (p,) + rest

    for cyc in parts(n, 2):
        edges = []
        off = 0
        for p in cyc:
            for i in range(p):
                edges.append((off + i, off + i))
                edges.append((off + (i + 1) % p, off + i))
            off += p
        yield BipartiteGraph(n, edges)


def find_blocking_constraint(g: BipartiteGraph) -> BipartiteGraph | None:
    """First (lexicographic) 1-regular H, edge-disjoint from G, making every perfect matching of G unacceptable."""
    n = g.n
    matchings = list(perfect_matchings(g))
    tau = [0] * n
    used = [False] * n

    def blocks(sigma) -> bool:
        row_of = {b: a for a, b in enumerate(sigma)}
        for i in range(n):
            j = row_of[tau[i]]
            if j != i and tau[j] == sigma[i]:
                return True
        return False

    def rec(i: int) -> bool:
        if i == n:
            return all(blocks(s) for s in matchings)
        for b in range(n):
            if not used[b] and b not in g.rows[i]:
                used[b] = True
                tau[i] = b
                if rec(i + 1):
                    return True
                used[b] = False
        return False

    if rec(0):
        return BipartiteGraph(n, enumerate(tau))
    return None


def two_regular_counterexample(n: int) -> tuple[BipartiteGraph, BipartiteGraph] | None:
    """A single 2n-cycle G with a 1-regular H blocking both of its perfect matchings.

    Returns None when exhaustive search over all admissible H finds nothing.
    """
    g = two_regular_cycle(n)
    h = find_blocking_constraint(g)
    return None if h is None else (g, h)


def any_two_regular_counterexample(n: int) -> tuple[BipartiteGraph, BipartiteGraph] | None:
    """Like :func:`two_regular_counterexample` but over every 2-regular G up to isomorphism."""
    for g in two_regular_graphs(n):
        h = find_blocking_constraint(g)
        if h is not None:
            return g, h
    return None


@dataclass(frozen=True)
class BLower:
    value: float
    s_max: int  # largest s with s < value, i.e. (2s+1)^2 < 2n+1


def b_lower(n: int) -> BLower:
    """Threshold below which every s-regular H has an acceptable matching in its complement."""
    if n < 1:
        raise ValueError("need n >= 1")
    s = 0
    while (2 * (s + 1) + 1) ** 2 < 2 * n + 1:
        s += 1
    return BLower(0.5 * (math.sqrt(2 * n + 1) - 1), s)


@dataclass
class ExpansionResult:
    holds: bool
    checked: int
    worst: tuple[int, ...] | None  # subset with the smallest slack
    worst_slack: float
    violation: tuple[int, ...] | None = None


def verify_expansion(g: BipartiteGraph, d: int, max_n: int = 22) -> ExpansionResult:
    """Check ``|Γ(X)| >= n - n^(1+1/d)/|X|`` for every nonempty proper X of rows.

    The comparison is done exactly as ``(|X| (n - |Γ(X)|))^d <= n^(d+1)``.
    """
    n = g.n
    if n > max_n:
        raise ValueError(f"exhaustive expansion check limited to n <= {max_n}")
    nb = g.row_masks()
    gamma = [0] * (1 << n)
    rhs = n ** (d + 1)
    exponent = 1 + 1 / d
    worst, worst_slack, violation = None, math.inf, None
    checked = 0
    full = (1 << n) - 1
    for s in range(1, full):
        low = s & -s
        gamma[s] = gamma[s ^ low] | nb[low.bit_length() - 1]
        x = s.bit_count()
        gsize = gamma[s].bit_count()
        checked += 1
        slack = gsize - (n - n ** exponent / x)
        if slack < worst_slack:
            worst_slack = slack
            worst = tuple(i for i in range(n) if s >> i & 1)
        if (x * (n - gsize)) ** d > rhs and violation is None:
            violation = tuple(i for i in range(n) if s >> i & 1)
    return ExpansionResult(violation is None, checked, worst, worst_slack, violation)


def _random_perfect_matching(domains: list[set[int]], rng: random.Random) -> list[int]:
    n = len(domains)
    order = list(range(n))
    rng.shuffle(order)
    match_col: dict[int, int] = {}

    def try_row(i: int, seen: set[int]) -> bool:
        opts = list(domains[i])
        rng.shuffle(opts)
        for b in opts:
            if b in seen:
                continue
            seen.add(b)
            if b not in match_col or try_row(match_col[b], seen):
                match_col[b] = i
                return True
        return False

    for i in order:
        if not try_row(i, set()):
            raise RuntimeError("no perfect matching (graph not regular?)")
    sigma = [0] * n
    for b, a in match_col.items():
        sigma[a] = b
    return sigma


def random_regular_pair(n: int, r: int, s: int, rng: random.Random) -> tuple[BipartiteGraph, BipartiteGraph]:
    """Random edge-disjoint G (r-regular) and H (s-regular) on n + n vertices.

    H is a union of s random perfect matchings of ``K_{n,n}``; G is what is
    left of the complement of H after peeling off ``n - s - r`` further
    random perfect matchings. Every intermediate graph is regular, so the
    matchings always exist.
    """
    if r + s > n or r < 0 or s < 0:
        raise ValueError("need r + s <= n")
    free = [set(range(n)) for _ in range(n)]
    h_edges = []
    for _ in range(s):
        sigma = _random_perfect_matching(free, rng)
        for a, b in enumerate(sigma):
            free[a].discard(b)
            h_edges.append((a, b))
    for _ in range(n - s - r):
        sigma = _random_perfect_matching(free, rng)
        for a, b in enumerate(sigma):
            free[a].discard(b)
    g_edges = [(a, b) for a in range(n) for b in free[a]]
    return BipartiteGraph(n, g_edges), BipartiteGraph(n, h_edges)
