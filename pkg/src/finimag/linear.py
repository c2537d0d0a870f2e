"""Small finite fields and GL_n over them with the Frobenius action.

Fields are F_p[x]/(f) for the fixed irreducible polynomials in
``IRREDUCIBLE``. An element c_0 + c_1 x + ... is stored as the integer
c_0 + c_1 p + c_2 p^2 + ...; so 0 and 1 are the field's zero and one.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cohomology import GammaGroup
from .errors import BudgetError, InputError
from .groups import MAX_ORDER, FiniteGroup, make_cyclic

# (p, r) -> coefficients of a monic irreducible of degree r, lowest degree first
# (Conway polynomials).
IRREDUCIBLE = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (5, 1): (0, 1),
    (7, 1): (0, 1),
    (2, 2): (1, 1, 1),  # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (3, 2): (2, 2, 1),  # x^2 + 2x + 2
}


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, e) with q = p^e, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            return (p, e) if r == 1 else None
    return None


@dataclass(frozen=True)
class FiniteField:
    p: int
    r: int

    @property
    def size(self) -> int:
        return self.p**self.r

    @property
    def modulus(self) -> tuple[int, ...]:
        return IRREDUCIBLE[(self.p, self.r)]

    def _vec(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.r)]

    def _num(self, v) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(v))

    def _mul_vec(self, u, v) -> list[int]:
        p, r, f = self.p, self.r, self.modulus
        prod = [0] * (2 * r - 1)
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                prod[i + j] = (prod[i + j] + a * b) % p
        for d in range(2 * r - 2, r - 1, -1):
            c = prod[d]
            if c:
                for i in range(r + 1):
                    prod[d - r + i] = (prod[d - r + i] - c * f[i]) % p
        return prod[:r]

    @cached_property
    def add_table(self) -> np.ndarray:
        n = self.size
        t = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            va = self._vec(a)
            for b in range(n):
                t[a, b] = self._num([(x + y) % self.p for x, y in zip(va, self._vec(b))])
        return t

    @cached_property
    def mul_table(self) -> np.ndarray:
        n = self.size
        t = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                t[a, b] = self._num(self._mul_vec(self._vec(a), self._vec(b)))
        return t

    def power_map(self, k: int) -> np.ndarray:
        """x -> x^k as a table."""
        out = np.empty(self.size, dtype=np.int64)
        for x in range(self.size):
            y = 1
            for _ in range(k):
                y = int(self.mul_table[y, x])
            out[x] = y
        return out

    def is_field(self) -> bool:
        """Every nonzero element has a multiplicative inverse (brute force)."""
        nz = self.mul_table[1:, 1:]
        return bool((nz != 0).all() and all((row == 1).any() for row in nz))


def make_field(q: int) -> FiniteField:
    pe = prime_power(q)
    if pe is None:
        raise InputError(f"{q} is not a prime power")
    if pe not in IRREDUCIBLE:
        raise InputError(f"no field modulus recorded for order {q}")
    return FiniteField(*pe)


def gl_order(n: int, f: int) -> int:
    return math.prod(f**n - f**i for i in range(n))


def make_gl(n: int, q: int, m: int) -> GammaGroup:
    """GL_n over the field with q^m elements, with the cyclic group of order m
    acting entrywise through x -> x^q.

    Matrices are listed in lexicographic order of their row-major entry
    codes. Element 1 of the acting C_m is the q-power Frobenius.
    """
    if n not in (1, 2) or q not in (2, 3, 4, 5) or m not in (1, 2, 3):
        raise BudgetError("make_gl guards: n in {1,2}, q in {2,3,4,5}, m in {1,2,3}")
    pe = prime_power(q)
    if pe is None:
        raise InputError(f"{q} is not a prime power")
    f = q**m
    if f > 16:
        raise BudgetError(f"field size {f} exceeds 16")
    if gl_order(n, f) > MAX_ORDER:
        raise BudgetError(f"|GL_{n}({f})| = {gl_order(n, f)} exceeds the table guard {MAX_ORDER}")
    F = make_field(f)
    add, mul = F.add_table, F.mul_table
    frob = F.power_map(q)
    if n == 1:
        mats = np.arange(1, f).reshape(-1, 1)
    else:
        allm = np.array(list(itertools.product(range(f), repeat=4)), dtype=np.int64)
        a, b, c, d = allm.T
        det = add[mul[a, d], _neg(F)[mul[b, c]]]
        mats = allm[det != 0]
    size = len(mats)
    base = f ** np.arange(n * n)[::-1]
    codes = mats @ base
    lookup = np.full(f ** (n * n), -1, dtype=np.int64)
    lookup[codes] = np.arange(size)
    table = np.empty((size, size), dtype=np.int64)
    if n == 1:
        table[:] = lookup[mul[mats[:, 0][:, None], mats[:, 0][None, :]]]
    else:
        a2, b2, c2, d2 = mats.T
        for i, (a1, b1, c1, d1) in enumerate(mats):
            e00 = add[mul[a1, a2], mul[b1, c2]]
            e01 = add[mul[a1, b2], mul[b1, d2]]
            e10 = add[mul[c1, a2], mul[d1, c2]]
            e11 = add[mul[c1, b2], mul[d1, d2]]
            table[i] = lookup[((e00 * f + e01) * f + e10) * f + e11]
    G = FiniteGroup(table, name=f"GL{n}({f})")
    gamma = make_cyclic(m)
    action = np.empty((m, size), dtype=np.int64)
    cur = np.arange(size)
    for k in range(m):
        action[k] = cur
        cur = lookup[frob[mats[cur]] @ base]
    return GammaGroup(gamma, G, action)


def _neg(F: FiniteField) -> np.ndarray:
    return np.argmax(F.add_table == 0, axis=1)
