"""Monomial arithmetic in Q(zeta_N')((t^(1/n))) over the base Q(zeta_N)((t)).

Coefficients are exact elements of a cyclotomic field; field elements are
finite Puiseux sums. A ``Tower`` fixes (N, N', n) and builds the group of
automorphisms over the base, its unramified and ramified parts, and the
Kummer pairing between ramified automorphisms and exponent classes.
"""
from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

from .errors import CheckFailure, InputError
from .groups import FiniteGroup, Subgroup

MAX_CONDUCTOR = 60


# -- integer polynomials -----------------------------------------------------


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    """Division of coefficient lists (lowest degree first) by a monic b."""
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    for d in range(len(a) - len(b), -1, -1):
        c = a[d + len(b) - 1]
        if c:
            q[d] = c
            for i, bc in enumerate(b):
                a[d + i] -= c * bc
    return q, _trim(a[: len(b) - 1] or [0])


def _trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple[int, ...]:
    """Phi_N with integer coefficients, lowest degree first."""
    if N < 1:
        raise InputError("conductor must be positive")
    num = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            num, r = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            if any(r):
                raise CheckFailure(f"Phi_{d} does not divide x^{N} - 1")
    return tuple(_trim(num))


def totient(N: int) -> int:
    return sum(1 for k in range(1, N + 1) if math.gcd(k, N) == 1)


# -- cyclotomic numbers --------------------------------------------------------


class CycNumber:
    """An element of Q(zeta_N), stored as a polynomial in zeta of degree < phi(N)."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Iterable = (0,)):
        if N > 2 * MAX_CONDUCTOR:
            raise InputError(f"conductor {N} exceeds the guard")
        self.N = N
        c = [Fraction(x) for x in coeffs] or [Fraction(0)]
        phi = cyclotomic_polynomial(N)
        if len(c) >= len(phi):
            _, c = _poly_divmod(c, list(phi))
        d = len(phi) - 1
        self.coeffs = tuple((list(c) + [Fraction(0)] * d)[:d])

    @classmethod
    def rational(cls, N: int, x) -> CycNumber:
        return cls(N, [x])

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> CycNumber:
        """zeta_N^k."""
        k %= N
        return cls(N, [0] * k + [1])

    def _check(self, other) -> CycNumber:
        if isinstance(other, (int, Fraction)):
            return CycNumber.rational(self.N, other)
        if not isinstance(other, CycNumber) or other.N != self.N:
            raise InputError("cyclotomic numbers from different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CycNumber(self.N, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.N, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return CycNumber(self.N, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = CycNumber.rational(self.N, 1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycNumber.rational(self.N, other)
        return isinstance(other, CycNumber) and self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.N, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        return f"CycNumber({self.N}, {self.to_text()})"

    def to_text(self) -> str:
        terms = [f"{c}" + ("" if i == 0 else f"*z^{i}") for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def inverse(self) -> CycNumber:
        """Solve self * y = 1 in the power basis."""
        if not self:
            raise ZeroDivisionError("inverse of zero")
        d = len(self.coeffs)
        cols = []
        for k in range(d):
            cols.append((self * CycNumber.zeta(self.N, k)).coeffs if k else self.coeffs)
        rows = [[cols[k][i] for k in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        return CycNumber(self.N, _solve(rows))

    def galois(self, u: int) -> CycNumber:
        """The automorphism zeta -> zeta^u."""
        if math.gcd(u, self.N) != 1:
            raise InputError(f"{u} is not a unit modulo {self.N}")
        out = [Fraction(0)] * self.N
        for i, c in enumerate(self.coeffs):
            out[(i * u) % self.N] += c
        return CycNumber(self.N, out)

    def embed(self, M: int) -> CycNumber:
        """Image in Q(zeta_M) for N | M, via zeta_N = zeta_M^(M/N)."""
        if M % self.N:
            raise InputError(f"{self.N} does not divide {M}")
        step = M // self.N
        out = [Fraction(0)] * (step * len(self.coeffs) + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return CycNumber(M, out)


def _solve(rows: list[list[Fraction]]) -> list[Fraction]:
    """Gauss-Jordan on an augmented square system over Q."""
    n = len(rows)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise CheckFailure("singular system")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


def _zeta_in(M: int, k: int) -> CycNumber:
    """A primitive k-th root of unity inside Q(zeta_M); needs k | M or k | 2M with M odd."""
    if M % k == 0:
        return CycNumber.zeta(M, M // k)
    if M % 2 and (2 * M) % k == 0:
        # zeta_{2M} = -zeta_M^((M+1)/2)
        z2 = -CycNumber.zeta(M, (M + 1) // 2)
        return z2 ** ((2 * M) // k)
    raise InputError(f"Q(zeta_{M}) has no primitive {k}-th root of unity")


# -- Puiseux sums -------------------------------------------------------------------


class PuiseuxElement:
    """A finite sum of c_q t^q with q in (1/n)Z and c_q in Q(zeta_N)."""

    __slots__ = ("N", "n", "terms")

    def __init__(self, N: int, n: int, terms: Mapping | None = None):
        self.N, self.n = N, n
        clean = {}
        for q, c in (terms or {}).items():
            q = Fraction(q)
            if (q * n).denominator != 1:
                raise InputError(f"exponent {q} is not in (1/{n})Z")
            if not isinstance(c, CycNumber):
                c = CycNumber.rational(N, c)
            if c.N != N:
                raise InputError("coefficient from another cyclotomic field")
            if c:
                clean[q] = clean[q] + c if q in clean else c
        self.terms = {q: c for q, c in sorted(clean.items()) if c}

    @classmethod
    def monomial(cls, N: int, n: int, c, q) -> PuiseuxElement:
        return cls(N, n, {Fraction(q): c})

    def _check(self, other) -> PuiseuxElement:
        if isinstance(other, (int, Fraction, CycNumber)):
            return PuiseuxElement(self.N, self.n, {Fraction(0): other})
        if other.N != self.N or other.n != self.n:
            raise InputError("elements of different towers")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for q, c in other.terms.items():
            out[q] = out[q] + c if q in out else c
        return PuiseuxElement(self.N, self.n, out)

    def __neg__(self):
        return PuiseuxElement(self.N, self.n, {q: -c for q, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        out: dict = {}
        for q1, c1 in self.terms.items():
            for q2, c2 in other.terms.items():
                q = q1 + q2
                out[q] = out[q] + c1 * c2 if q in out else c1 * c2
        return PuiseuxElement(self.N, self.n, out)

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise InputError("only monomials are inverted")
            (q, c), = self.terms.items()
            return PuiseuxElement.monomial(self.N, self.n, c.inverse(), -q) ** (-k)
        out = PuiseuxElement(self.N, self.n, {Fraction(0): 1})
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        return self * self._check(other) ** -1

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CycNumber)):
            other = self._check(other)
        return isinstance(other, PuiseuxElement) and (self.N, self.n, self.terms) == (other.N, other.n, other.terms)

    def __hash__(self):
        return hash((self.N, self.n, tuple(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"PuiseuxElement({format_element(self)})"

    def is_monomial(self) -> bool:
        return len(self.terms) == 1


def val(x: PuiseuxElement) -> Fraction | float:
    if not x:
        return math.inf
    return min(x.terms)


def ac(x: PuiseuxElement) -> CycNumber:
    if not x:
        raise InputError("ac(0) is undefined")
    return x.terms[min(x.terms)]


def res(x: PuiseuxElement) -> CycNumber:
    """Residue of an element of nonnegative valuation."""
    v = val(x)
    if v < 0:
        raise InputError("residue needs nonnegative valuation")
    return x.terms.get(Fraction(0), CycNumber.rational(x.N, 0))


_TERM = re.compile(r"^\s*(\[[^\]]*\]|[-+]?\d+(?:/\d+)?)\s*@\s*([-+]?\d+(?:/\d+)?)\s*$")


def parse_element(text: str, N: int, n: int) -> PuiseuxElement:
    """Parse ``coeff@q; coeff@q; ...`` where coeff is a rational or a list [c0, c1, ...] in zeta."""
    terms: dict = {}
    text = text.strip()
    if not text or text == "0":
        return PuiseuxElement(N, n)
    for i, part in enumerate(text.split(";")):
        m = _TERM.match(part)
        if not m:
            raise InputError(f"term {i + 1}: cannot parse {part.strip()!r}")
        coeff, q = m.groups()
        if coeff.startswith("["):
            body = coeff[1:-1].strip()
            c = CycNumber(N, [Fraction(x) for x in body.split(",")] if body else [0])
        else:
            c = CycNumber.rational(N, Fraction(coeff))
        q = Fraction(q)
        terms[q] = terms[q] + c if q in terms else c
    return PuiseuxElement(N, n, terms)


def format_element(x: PuiseuxElement) -> str:
    if not x:
        return "0"
    parts = []
    for q, c in x.terms.items():
        nz = [i for i, v in enumerate(c.coeffs) if v]
        coeff = str(c.coeffs[0]) if nz == [0] else "[" + ",".join(str(v) for v in _trim(list(c.coeffs))) + "]"
        parts.append(f"{coeff}@{q}")
    return "; ".join(parts)


# -- towers and automorphisms ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class TowerAut:
    """zeta_N' -> zeta_N'^u and t^(1/n) -> zeta_n^j t^(1/n)."""

    u: int
    j: int


class Tower:
    def __init__(self, N: int, N2: int, n: int):
        if min(N, N2, n) < 1:
            raise InputError("tower parameters must be positive")
        if N2 % N:
            raise InputError(f"N = {N} does not divide N' = {N2}")
        if N2 > MAX_CONDUCTOR:
            raise InputError(f"N' = {N2} exceeds the guard {MAX_CONDUCTOR}")
        roots = N2 if N2 % 2 == 0 else 2 * N2
        if roots % n:
            raise InputError(f"n = {n} does not divide {roots}, so mu_n is not in Q(zeta_{N2})")
        self.N, self.N2, self.n = N, N2, n
        self.zeta_n = _zeta_in(N2, n)

    def __repr__(self) -> str:
        return f"Tower({self.N}, {self.N2}, {self.n})"

    # elements
    def element(self, terms: Mapping) -> PuiseuxElement:
        return PuiseuxElement(self.N2, self.n, terms)

    def base_coeff(self, c: CycNumber) -> CycNumber:
        return c.embed(self.N2)

    def in_base(self, x: PuiseuxElement) -> bool:
        """Does x lie in Q(zeta_N)((t))?"""
        if any(q.denominator != 1 for q in x.terms):
            return False
        return all(c.galois(u) == c for c in x.terms.values() for u in self.cyclotomic_units)

    @cached_property
    def cyclotomic_units(self) -> list[int]:
        return [u for u in range(1, self.N2 + 1) if math.gcd(u, self.N2) == 1 and u % self.N == 1 % self.N]

    @cached_property
    def _zeta_n_exponent(self) -> dict[int, int]:
        """u -> e with zeta_n^u-action = zeta_n^e."""
        powers = {self.zeta_n ** e: e for e in range(self.n)}
        return {u: powers[self.zeta_n.galois(u)] for u in self.cyclotomic_units}

    # automorphisms
    @cached_property
    def automorphisms(self) -> list[TowerAut]:
        return sorted(TowerAut(u, j) for u in self.cyclotomic_units for j in range(self.n))

    def apply(self, s: TowerAut, x: PuiseuxElement) -> PuiseuxElement:
        out = {}
        for q, c in x.terms.items():
            k = int(q * self.n)
            out[q] = c.galois(s.u) * self.zeta_n ** (s.j * k % self.n)
        return PuiseuxElement(x.N, x.n, out)

    def compose(self, s1: TowerAut, s2: TowerAut) -> TowerAut:
        """s1 after s2."""
        e = self._zeta_n_exponent[s1.u]
        return TowerAut((s1.u * s2.u) % self.N2 if self.N2 > 1 else 1, (s1.j + e * s2.j) % self.n)

    @cached_property
    def aut_group(self) -> FiniteGroup:
        auts = self.automorphisms
        idx = {s: i for i, s in enumerate(auts)}
        table = [[idx[self.compose(a, b)] for b in auts] for a in auts]
        return FiniteGroup(table, name=f"Aut({self.N},{self.N2},{self.n})")

    def index_of(self, s: TowerAut) -> int:
        return self.automorphisms.index(s)

    @cached_property
    def ramified_part(self) -> Subgroup:
        """Automorphisms fixing the unramified extension Q(zeta_N')((t))."""
        return self.aut_group.subgroup(i for i, s in enumerate(self.automorphisms) if s.u == 1)

    @cached_property
    def unramified_part(self) -> Subgroup:
        """Automorphisms fixing Q(zeta_N)((t^(1/n)))."""
        return self.aut_group.subgroup(i for i, s in enumerate(self.automorphisms) if s.j == 0)

    def base_generators(self) -> list[PuiseuxElement]:
        return [self.element({1: 1}), self.element({0: CycNumber.zeta(self.N).embed(self.N2)})]

    def verify(self) -> dict:
        """Group laws, fixing of the base, action compatibility, and the product decomposition."""
        G = self.aut_group
        auts = self.automorphisms
        gens = self.base_generators()
        for s in auts:
            for x in gens:
                if self.apply(s, x) != x:
                    raise CheckFailure(f"{s} moves the base element {format_element(x)}")
        probe = self.element({Fraction(1, self.n): CycNumber.zeta(self.N2)})
        for a in auts:
            for b in auts:
                if self.apply(a, self.apply(b, probe)) != self.apply(self.compose(a, b), probe):
                    raise CheckFailure(f"composition of {a} and {b} disagrees with the action")
        R, U = self.ramified_part, self.unramified_part
        product = {G.mul(r, u) for r in R.members for u in U.members}
        expected = totient(self.N2) // totient(self.N) * self.n
        ok = len(product) == G.order == expected and len(R.intersection(U)) == 1
        if not ok:
            raise CheckFailure("automorphism group is not the product of its ramified and unramified parts")
        return {"order": G.order, "ramified": R.order, "unramified": U.order, "expected": expected}


def parse_tower(line: str) -> Tower:
    parts = line.split()
    if len(parts) != 4 or parts[0] != "tower":
        raise InputError(f"expected 'tower N N' n', got {line.strip()!r}")
    try:
        return Tower(*(int(p) for p in parts[1:]))
    except ValueError:
        raise InputError(f"non-integer tower parameter in {line.strip()!r}") from None


def residue_iso_check(T: Tower) -> dict:
    """Restriction to coefficients maps the unramified part onto Gal(Q(zeta_N')/Q(zeta_N))."""
    M = T.N2
    zeta = CycNumber.zeta(M)
    phi = cyclotomic_polynomial(M)
    # residue automorphisms: conjugates zeta^k of zeta that fix zeta_N
    fixed_base = zeta ** (M // T.N)
    residue = []
    for k in range(M):
        z = CycNumber.zeta(M, k)
        value = sum((z ** i * c for i, c in enumerate(phi)), CycNumber.rational(M, 0))
        if not value and z ** (M // T.N) == fixed_base:
            residue.append(k)
    images = []
    unit = T.element({0: zeta})
    for i in T.unramified_part.sorted():
        s = T.automorphisms[i]
        image = res(T.apply(s, unit))
        ks = [k for k in residue if CycNumber.zeta(M, k) == image]
        if len(ks) != 1:
            raise CheckFailure(f"{s} does not restrict to a residue automorphism")
        images.append(ks[0])
    bijective = sorted(images) == residue
    if not bijective:
        raise CheckFailure("restriction to the residue field is not bijective")
    for a in T.unramified_part.members:
        for b in T.unramified_part.members:
            ab = T.automorphisms[T.aut_group.mul(a, b)]
            if ab.u % M != (T.automorphisms[a].u * T.automorphisms[b].u) % M:
                raise CheckFailure("restriction is not a homomorphism")
    return {"left_order": T.unramified_part.order, "right_order": len(residue), "images": images,
            "isomorphism": True}


def kummer_pairing(T: Tower, s: TowerAut, e: PuiseuxElement) -> CycNumber:
    """b(s, e) = s(e)/e for a ramified automorphism s and a monomial e with e^n in the base."""
    if s not in T.automorphisms or T.index_of(s) not in T.ramified_part:
        raise InputError(f"{s} does not fix the unramified extension")
    if not e.is_monomial():
        raise InputError("pairing needs a monomial")
    if not T.in_base(e ** T.n):
        raise InputError("e^n is not in the base field")
    b = T.apply(s, e) / e
    if not b.is_monomial() or val(b) != 0:
        raise CheckFailure("pairing value is not a constant")
    out = ac(b)
    if out ** T.n != 1:
        raise CheckFailure("pairing value is not an n-th root of unity")
    return out


def roots_of_unity(T: Tower) -> list[CycNumber]:
    """mu_n inside Q(zeta_N'), found among the powers of the primitive 2N'-th root."""
    w = T.N2 if T.N2 % 2 == 0 else 2 * T.N2
    z = _zeta_in(T.N2, w)
    return sorted({z ** k for k in range(w) if z ** (k * T.n) == 1}, key=lambda c: c.coeffs)


def verify_ramified_duality(T: Tower) -> dict:
    """The ramified part is isomorphic to Hom((1/n)Z / Z, mu_n) via s -> b(s, .)."""
    R = T.ramified_part.sorted()
    n = T.n
    mu = roots_of_unity(T)
    if len(mu) != n:
        raise CheckFailure(f"found {len(mu)} n-th roots of unity, expected {n}")
    monos = [T.element({Fraction(k, n): 1}) for k in range(n)]
    # b'(s, k) for k in Z/n
    table = {}
    for i in R:
        s = T.automorphisms[i]
        table[i] = [kummer_pairing(T, s, e) for e in monos]
    G = T.aut_group
    for i in R:
        row = table[i]
        for k1 in range(n):
            for k2 in range(n):
                if row[(k1 + k2) % n] != row[k1] * row[k2]:
                    raise CheckFailure("pairing is not a homomorphism on the exponent quotient")
        for k in range(n):
            shifted = kummer_pairing(T, T.automorphisms[i], T.element({Fraction(k, n) + 1: 1}))
            if shifted != row[k]:
                raise CheckFailure("pairing does not factor through the exponent quotient")
        for i2 in R:
            prod = table[G.mul(i, i2)]
            if any(prod[k] != row[k] * table[i2][k] for k in range(n)):
                raise CheckFailure("s -> b(s, .) is not a homomorphism")
    ident = G.identity
    kernel = [i for i in R if all(v == 1 for v in table[i])]
    if kernel != [ident]:
        raise CheckFailure(f"automorphisms {kernel} pair trivially with the generator")
    # Hom(Z/n, mu_n) is determined by the image of 1, which can be any element of mu_n
    hom_count = len(mu)
    if len(R) != hom_count:
        raise CheckFailure(f"|ramified part| = {len(R)} but |Hom| = {hom_count}")
    return {"order": len(R), "hom_order": hom_count, "injective": True, "surjective": True,
            "images": {str(T.automorphisms[i]): table[i][1 % n].to_json() for i in R}}


def random_monomial(T: Tower, rng: random.Random, base_coeff: bool = False, integral: bool = False) -> PuiseuxElement:
    """A seeded monomial c t^(k/n); ``base_coeff`` keeps c in Q(zeta_N), ``integral`` keeps k/n in Z."""
    field = T.N if base_coeff else T.N2
    d = len(cyclotomic_polynomial(field)) - 1
    while True:
        c = CycNumber(field, [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(d)])
        if c:
            break
    if base_coeff:
        c = c.embed(T.N2)
    k = rng.randint(-2 * T.n, 2 * T.n)
    q = Fraction(k // T.n if integral else Fraction(k, T.n))
    return T.element({q: c})


def monomial_checks(T: Tower, pairs: int = 100, seed: int = 0) -> dict:
    """Seeded checks of val/ac multiplicativity, action by automorphisms, and the pairing."""
    rng = random.Random(seed)
    auts = T.automorphisms
    ram = [T.automorphisms[i] for i in T.ramified_part.sorted()]
    for _ in range(pairs):
        x, y = random_monomial(T, rng), random_monomial(T, rng)
        xy = x * y
        if val(xy) != val(x) + val(y) or ac(xy) != ac(x) * ac(y):
            raise CheckFailure("val or ac is not multiplicative")
        s = rng.choice(auts)
        if T.apply(s, xy) != T.apply(s, x) * T.apply(s, y):
            raise CheckFailure("automorphism is not multiplicative")
        e1, e2 = random_monomial(T, rng, base_coeff=True), random_monomial(T, rng, base_coeff=True)
        r = rng.choice(ram)
        if kummer_pairing(T, r, e1 * e2) != kummer_pairing(T, r, e1) * kummer_pairing(T, r, e2):
            raise CheckFailure("pairing is not multiplicative in the monomial")
        k = random_monomial(T, rng, base_coeff=True, integral=True)
        if kummer_pairing(T, r, k) != 1:
            raise CheckFailure("pairing is not trivial on the base value group")
        z = x + y
        if x and y and val(x) != val(y) and val(z) != min(val(x), val(y)):
            raise CheckFailure("ultrametric equality fails")
    return {"pairs": pairs, "seed": seed}
