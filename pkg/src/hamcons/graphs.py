"""Small undirected graphs: girth checks, Hamiltonicity and the Bondy-Chvatal closure."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class SimpleGraph:
    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        vs = tuple(sorted(set(vertices)))
        vset = set(vs)
        es = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"loop at {a}")
            if a not in vset or b not in vset:
                raise ValueError(f"edge {(a, b)} leaves the vertex set")
            es.add((min(a, b), max(a, b)))
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", frozenset(es))

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(range(1, n + 1), itertools.combinations(range(1, n + 1), 2))

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def relabel(self, offset: int) -> "SimpleGraph":
        return SimpleGraph((v + offset for v in self.vertices), ((a + offset, b + offset) for a, b in self.edges))

    def with_vertices(self, extra: Iterable[int]) -> "SimpleGraph":
        return SimpleGraph(itertools.chain(self.vertices, extra), self.edges)

    def without_edges(self, drop: Iterable[tuple[int, int]]) -> "SimpleGraph":
        drop = {(min(a, b), max(a, b)) for a, b in drop}
        return SimpleGraph(self.vertices, self.edges - drop)

    def __len__(self) -> int:
        return len(self.vertices)


def has_triangle(g: SimpleGraph) -> bool:
    adj = g.adjacency()
    return any(adj[a] & adj[b] for a, b in g.edges)


def has_four_cycle(g: SimpleGraph) -> bool:
    """A 4-cycle exists iff two vertices share two common neighbours."""
    adj = g.adjacency()
    seen: set[tuple[int, int]] = set()
    for v in g.vertices:
        for a, b in itertools.combinations(sorted(adj[v]), 2):
            if (a, b) in seen:
                return True
            seen.add((a, b))
    return False


def _bitmask_adjacency(g: SimpleGraph) -> tuple[list[int], list[int]]:
    index = {v: i for i, v in enumerate(g.vertices)}
    adj = [0] * len(g.vertices)
    for a, b in g.edges:
        adj[index[a]] |= 1 << index[b]
        adj[index[b]] |= 1 << index[a]
    return list(g.vertices), adj


def hamilton_path_dp(g: SimpleGraph) -> bool:
    """Exhaustive Hamilton-path test by dynamic programming over vertex subsets."""
    labels, adj = _bitmask_adjacency(g)
    n = len(labels)
    if n <= 1:
        return True
    full = (1 << n) - 1
    # reach[S] = bitmask of end vertices of paths covering exactly S
    reach = [0] * (1 << n)
    for i in range(n):
        reach[1 << i] = 1 << i
    for s in range(1, full + 1):
        ends = reach[s]
        if not ends:
            continue
        e = ends
        while e:
            low = e & -e
            e ^= low
            i = low.bit_length() - 1
            nxt = adj[i] & ~s
            while nxt:
                lb = nxt & -nxt
                nxt ^= lb
                reach[s | lb] |= lb
    return reach[full] != 0


def hamilton_cycle_dp(g: SimpleGraph) -> bool:
    """Exhaustive Hamilton-cycle test by Held-Karp style subset dynamic programming."""
    labels, adj = _bitmask_adjacency(g)
    n = len(labels)
    if n < 3:
        return False
    full = (1 << n) - 1
    reach = [0] * (1 << n)
    reach[1] = 1
    for s in range(1, full + 1, 2):
        ends = reach[s]
        e = ends
        while e:
            low = e & -e
            e ^= low
            i = low.bit_length() - 1
            nxt = adj[i] & ~s
            while nxt:
                lb = nxt & -nxt
                nxt ^= lb
                reach[s | lb] |= lb
    return bool(reach[full] & adj[0])


def find_hamilton_cycle(g: SimpleGraph) -> tuple[int, ...] | None:
    """Backtracking search for a Hamilton cycle; returns the vertex sequence."""
    labels, adj = _bitmask_adjacency(g)
    n = len(labels)
    if n < 3:
        return None
    if any(bin(a).count("1") < 2 for a in adj):
        return None
    full = (1 << n) - 1
    path = [0]

    def extend(cur: int, used: int) -> bool:
        if used == full:
            return bool(adj[cur] & 1)
        rem = full & ~used
        # a remaining vertex with no free neighbour (or no way back) is fatal
        r = rem
        while r:
            low = r & -r
            r ^= low
            j = low.bit_length() - 1
            avail = adj[j] & (rem | 1 << cur | 1)
            if bin(avail).count("1") < 2:
                return False
        nxt = adj[cur] & rem
        while nxt:
            low = nxt & -nxt
            nxt ^= low
            j = low.bit_length() - 1
            path.append(j)
            if extend(j, used | low):
                return True
            path.pop()
        return False

    if extend(0, 1):
        return tuple(labels[i] for i in path)
    return None


def closure(g: SimpleGraph) -> SimpleGraph:
    """Bondy-Chvatal closure: join non-adjacent x, y with deg x + deg y >= n until stable."""
    n = len(g.vertices)
    adj = g.adjacency()
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(g.vertices, 2):
            if b not in adj[a] and len(adj[a]) + len(adj[b]) >= n:
                adj[a].add(b)
                adj[b].add(a)
                changed = True
    return SimpleGraph(g.vertices, ((a, b) for a in adj for b in adj[a] if a < b))


def is_hamiltonian(g: SimpleGraph) -> bool:
    """Closure shortcut first; exact backtracking on the closure otherwise."""
    n = len(g.vertices)
    if n < 3:
        return False
    cl = closure(g)
    if len(cl.edges) == n * (n - 1) // 2:
        return True
    return find_hamilton_cycle(cl) is not None
