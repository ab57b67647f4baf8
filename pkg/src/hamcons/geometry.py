"""Finite fields of small order and projective spaces PG(d, q) over them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

# q -> (characteristic, degree, monic irreducible modulus, low coefficient first)
_EXTENSIONS = {
    4: (2, 2, (1, 1, 1)),       # x^2 + x + 1
    8: (2, 3, (1, 1, 0, 1)),    # x^3 + x + 1
    9: (3, 2, (1, 0, 1)),       # x^2 + 1
}


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def supported_orders() -> list[int]:
    return sorted({2, 3, 5, 7, 11, 13} | set(_EXTENSIONS))


@dataclass(frozen=True)
class FiniteField:
    """GF(q) on the elements ``0..q-1`` with 0 and 1 the field identities."""

    q: int
    add: tuple[tuple[int, ...], ...] = field(repr=False)
    mul: tuple[tuple[int, ...], ...] = field(repr=False)

    def neg(self, a: int) -> int:
        return self.add[a].index(0)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.mul[a].index(1)

    def dot(self, u, v) -> int:
        s = 0
        for a, b in zip(u, v):
            s = self.add[s][self.mul[a][b]]
        return s


def _poly_tables(p: int, deg: int, modulus: tuple[int, ...]):
    q = p ** deg

    def digits(a: int) -> list[int]:
        return [(a // p ** i) % p for i in range(deg)]

    def value(ds) -> int:
        return sum(c * p ** i for i, c in enumerate(ds))

    def mul(a: int, b: int) -> int:
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(digits(a)):
            for j, y in enumerate(digits(b)):
                prod[i + j] = (prod[i + j] + x * y) % p
        for top in range(len(prod) - 1, deg - 1, -1):
            c = prod[top]
            if c:
                for i, m in enumerate(modulus):
                    prod[top - deg + i] = (prod[top - deg + i] - c * m) % p
        return value(prod[:deg])

    add = tuple(tuple(value([(x + y) % p for x, y in zip(digits(a), digits(b))]) for b in range(q)) for a in range(q))
    mult = tuple(tuple(mul(a, b) for b in range(q)) for a in range(q))
    return add, mult


def _verify_axioms(f: FiniteField) -> None:
    q = f.q
    r = range(q)
    for a in r:
        if f.add[0][a] != a or f.mul[1][a] != a:
            raise AssertionError("identity law fails")
        if 0 not in f.add[a] or (a and 1 not in f.mul[a]):
            raise AssertionError("missing inverse")
        for b in r:
            if f.add[a][b] != f.add[b][a] or f.mul[a][b] != f.mul[b][a]:
                raise AssertionError("commutativity fails")
            for c in r:
                if f.add[f.add[a][b]][c] != f.add[a][f.add[b][c]]:
                    raise AssertionError("additive associativity fails")
                if f.mul[f.mul[a][b]][c] != f.mul[a][f.mul[b][c]]:
                    raise AssertionError("multiplicative associativity fails")
                if f.mul[a][f.add[b][c]] != f.add[f.mul[a][b]][f.mul[a][c]]:
                    raise AssertionError("distributivity fails")


@lru_cache(maxsize=None)
def finite_field(q: int) -> FiniteField:
    if q in _EXTENSIONS:
        add, mul = _poly_tables(*_EXTENSIONS[q])
    elif _is_prime(q) and q <= 13:
        add = tuple(tuple((a + b) % q for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % q for b in range(q)) for a in range(q))
    else:
        raise ValueError(f"unsupported field order {q}; supported: {supported_orders()}")
    f = FiniteField(q, add, mul)
    _verify_axioms(f)
    return f


def projective_points(d: int, q: int) -> list[tuple[int, ...]]:
    """Normalised representatives (first non-zero coordinate 1) of PG(d, q)."""
    finite_field(q)
    pts = []
    for v in itertools.product(range(q), repeat=d + 1):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def incidence(d: int, q: int) -> list[list[int]]:
    """Point-hyperplane incidence lists: row i lists hyperplanes through point i."""
    f = finite_field(q)
    pts = projective_points(d, q)
    return [[j for j, h in enumerate(pts) if f.dot(p, h) == 0] for p in pts]
