"""Explicit blocking families and the constructions they are built from."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .core import IntervalPattern, SetFamily
from .geometry import incidence
from .graphs import SimpleGraph


def star_family(n: int, x: IntervalPattern) -> SetFamily:
    """All r-sets containing ``{1, ..., k}``."""
    if n < x.r:
        raise ValueError(f"n={n} is smaller than r={x.r}")
    core = tuple(range(1, x.k + 1))
    rest = range(x.k + 1, n + 1)
    return SetFamily(n, x.r, (core + extra for extra in itertools.combinations(rest, x.r - x.k)))


def find_covering_intervals(perm: Sequence[int], x: IntervalPattern) -> list[tuple[int, int]]:
    """Disjoint intervals of lengths ``x.lengths`` (in order) whose union contains ``[k]``.

    Intervals are half-open index ranges ``(start, stop)`` into ``perm`` and
    never wrap. Leading vertices outside ``[k]`` are skipped; a vertex of
    ``[k]`` at the head opens the next interval. When the remaining suffix is
    exactly as long as the remaining lengths, it is cut up in order.
    """
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError("perm must be a permutation of 1..n")
    if n < x.r:
        raise ValueError(f"n={n} is smaller than r={x.r}")
    k = x.k
    parts = list(x.lengths)
    out = []
    i = 0
    while parts:
        left = sum(parts)
        if n - i == left:
            for length in parts:
                out.append((i, i + length))
                i += length
            break
        if perm[i] <= k:
            out.append((i, i + parts[0]))
            i += parts.pop(0)
        else:
            i += 1
    covered = {perm[j] for a, b in out for j in range(a, b)}
    if not set(range(1, k + 1)) <= covered:
        raise AssertionError(f"interval induction failed on {list(perm)}")
    return out


@dataclass(frozen=True)
class CoveringDesign:
    base: tuple[int, ...]
    block_size: int
    target_size: int
    blocks: tuple[tuple[int, ...], ...]

    def is_valid(self) -> bool:
        covered = set()
        for b in self.blocks:
            covered.update(itertools.combinations(b, self.target_size))
        return covered == set(itertools.combinations(self.base, self.target_size))


def greedy_cover(base_size: int, block_size: int, target_size: int, start: int = 1) -> CoveringDesign:
    """Greedy covering design on ``start .. start+base_size-1``.

    Each step takes the block covering the most still-uncovered target sets;
    ties go to the lexicographically first block.
    """
    if not 0 <= target_size <= block_size <= base_size:
        raise ValueError("need 0 <= target_size <= block_size <= base_size")
    base = tuple(range(start, start + base_size))
    candidates = list(itertools.combinations(base, block_size))
    subsets = [set(itertools.combinations(b, target_size)) for b in candidates]
    uncovered = set(itertools.combinations(base, target_size))
    chosen = []
    while uncovered:
        best, gain = -1, 0
        for i, s in enumerate(subsets):
            g = len(s & uncovered)
            if g > gain:
                best, gain = i, g
        chosen.append(candidates[best])
        uncovered -= subsets[best]
    return CoveringDesign(base, block_size, target_size, tuple(chosen))


def covering_family(n: int, x: IntervalPattern) -> SetFamily:
    """``[t] ∪ M`` for M in a greedy cover of ``[n] \\ [t]`` (t = parts longer than 1)."""
    t = x.t
    if t == x.k:
        raise ValueError(f"pattern {x} has no parts equal to 1; use star_family")
    if n < x.r:
        raise ValueError(f"n={n} is smaller than r={x.r}")
    design = greedy_cover(n - t, x.r - t, x.r - x.k, start=t + 1)
    head = tuple(range(1, t + 1))
    return SetFamily(n, x.r, (head + b for b in design.blocks))


def partition_family(n: int, r: int) -> SetFamily:
    """``{1} ∪ X`` for consecutive (r-1)-blocks X of ``2..n``, last block right-aligned."""
    if not 2 <= r <= n:
        raise ValueError("need 2 <= r <= n")
    size = r - 1
    blocks = []
    start = 2
    for _ in range(math.ceil((n - 1) / size)):
        s = min(start, n - size + 1)
        blocks.append((1,) + tuple(range(s, s + size)))
        start += size
    return SetFamily(n, r, blocks)


def projective_plane_graph(q: int) -> SimpleGraph:
    """Point-line incidence graph of PG(2, q): points 1..N, lines N+1..2N."""
    rows = incidence(2, q)
    N = len(rows)
    edges = [(i + 1, N + j + 1) for i, row in enumerate(rows) for j in row]
    return SimpleGraph(range(1, 2 * N + 1), edges)


def c4free_H(q: int) -> SimpleGraph:
    """PG(2, q) incidence graph with every edge at point 1 removed.

    Bipartite (no triangle), two points share one line (no 4-cycle), and the
    isolated vertex rules out a Hamilton path.
    """
    g = projective_plane_graph(q)
    return g.without_edges([e for e in g.edges if 1 in e])


def c4free_family(n: int, q: int | None = 2, graph: SimpleGraph | None = None) -> SetFamily:
    """4-sets ``{1, 2, a, b}`` with ``ab`` a non-edge of H placed on ``3..n``.

    By default H is ``c4free_H(q)`` shifted by 2 and padded with isolated
    vertices; ``graph`` may supply any H whose vertices lie in ``3..n``.
    """
    if graph is None:
        if q is None:
            raise ValueError("give q or graph")
        h = c4free_H(q)
        need = 2 + len(h.vertices)
        if n < need:
            raise ValueError(f"n={n} too small for q={q}: need n >= {need}")
        graph = h.relabel(2)
    if any(v < 3 or v > n for v in graph.vertices):
        raise ValueError("graph vertices must lie in 3..n")
    members = ((1, 2, a, b) for a, b in itertools.combinations(range(3, n + 1), 2) if (a, b) not in graph.edges)
    return SetFamily(n, 4, members)


def pair_degree_family(n: int) -> SetFamily:
    """``{1,x,x+1,y}`` for 2<=x<=n-1 together with ``{1,2,y,n}``."""
    if n < 7:
        raise ValueError("pair_degree_family needs n >= 7")
    members = set()
    for x in range(2, n):
        for y in range(2, n + 1):
            if y not in (x, x + 1):
                members.add(tuple(sorted((1, x, x + 1, y))))
    for y in range(3, n):
        members.add(tuple(sorted((1, 2, y, n))))
    return SetFamily(n, 4, members)

