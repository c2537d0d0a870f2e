"""Explicit codes for finite imaginaries, each with a decode direction.

Partial functions are stored as sorted graphs (``TwistCode``), which is the
canonical form of an unordered tuple of pairs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import CheckFailure, InputError
from .groups import FiniteGroup, make_cyclic

SORT_KINDS = ("set", "order", "group", "prime_field")


@dataclass(frozen=True)
class Sort:
    """A finite value set ``0..size-1`` with an optional structure tag.

    ``order`` means the natural order on indices, ``group`` carries a table
    group on the indices, ``prime_field`` is Z/p with p = size prime.
    """

    name: str
    size: int
    kind: str = "set"
    group: FiniteGroup | None = None

    def __post_init__(self):
        if self.kind not in SORT_KINDS:
            raise InputError(f"unknown sort kind {self.kind!r}")
        if self.size < 0:
            raise InputError("sort size must be nonnegative")
        if self.kind == "group" and (self.group is None or self.group.order != self.size):
            raise InputError("group sort needs a group of matching order")
        if self.kind == "prime_field" and not _is_prime(self.size):
            raise InputError(f"prime field sort needs a prime size, got {self.size}")

    @property
    def elements(self) -> range:
        return range(self.size)

    @classmethod
    def cyclic(cls, d: int, name: str | None = None) -> Sort:
        return cls(name or f"Z/{d}", d, "group", make_cyclic(d))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def least_prime_at_least(n: int) -> int:
    p = max(n, 2)
    while not _is_prime(p):
        p += 1
    return p


@dataclass(frozen=True)
class TwistCode:
    """Graph of a partial function, as a sorted tuple of (input, output) pairs."""

    pairs: tuple

    def __post_init__(self):
        keys = [k for k, _ in self.pairs]
        if len(set(keys)) != len(keys):
            raise InputError("graph repeats a domain value")
        if list(self.pairs) != sorted(self.pairs):
            raise InputError("graph is not in canonical (sorted) order")

    @classmethod
    def of(cls, h: Mapping | Iterable[tuple]) -> TwistCode:
        items = h.items() if isinstance(h, Mapping) else h
        pairs = [(k, v) for k, v in items]
        return cls(tuple(sorted(pairs)))

    def as_dict(self) -> dict:
        return dict(self.pairs)

    @property
    def domain(self) -> list:
        return [k for k, _ in self.pairs]

    def __len__(self) -> int:
        return len(self.pairs)

    def to_json(self) -> list:
        return [[_jsonable(k), _jsonable(v)] for k, v in self.pairs]


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def embed_pair_twist(h: Mapping[Hashable, tuple]) -> tuple[TwistCode, TwistCode]:
    """Split F -> S1 x S2 into its two coordinate codes over the same domain."""
    for v in h.values():
        if not isinstance(v, tuple) or len(v) != 2:
            raise InputError("values must be pairs")
    return TwistCode.of((k, v[0]) for k, v in h.items()), TwistCode.of((k, v[1]) for k, v in h.items())


def decode_pair_twist(left: TwistCode, right: TwistCode) -> dict:
    if left.domain != right.domain:
        raise InputError("pair codes have different domains")
    return {k: (a, b) for (k, a), (_, b) in zip(left.pairs, right.pairs)}


# -- cyclic powers ---------------------------------------------------------


def _cyclic_generator(B: Sort) -> int:
    if B.kind != "group" or not B.group.is_cyclic:
        raise InputError(f"sort {B.name} is not a cyclic group")
    if B.size == 1:
        return B.group.identity
    return B.group.generators[0]


def cover_domain(B: Sort, k: int) -> list[tuple[int, tuple[int, ...]]]:
    _cyclic_generator(B)
    return [(b, a) for b in B.elements for a in itertools.product(range(1, B.size + 1), repeat=k)]


def cyclic_power_cover(B: Sort, k: int):
    """The map (b, (a_1..a_k)) -> (b^a_1, .., b^a_k) from B x [1..d]^k onto B^k."""
    _cyclic_generator(B)
    if k < 0:
        raise InputError("k must be nonnegative")
    G = B.group

    def cover(b: int, a: Sequence[int]) -> tuple[int, ...]:
        if len(a) != k:
            raise InputError(f"expected {k} exponents")
        return tuple(G.power(b, e) for e in a)

    return cover


def cover_preimage(B: Sort, k: int, target: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Some input of the cover hitting ``target``; b is the identity when target is."""
    G = B.group
    g = _cyclic_generator(B)
    target = tuple(int(t) for t in target)
    if len(target) != k or any(not 0 <= t < B.size for t in target):
        raise InputError("target is not a point of B^k")
    if all(t == G.identity for t in target):
        return G.identity, (1,) * k
    powers = {G.power(g, e): e for e in range(1, B.size + 1)}
    return g, tuple(powers[t] for t in target)


def cover_is_surjective(B: Sort, k: int) -> bool:
    cover = cyclic_power_cover(B, k)
    hit = {cover(b, a) for b, a in cover_domain(B, k)}
    return len(hit) == B.size**k


@lru_cache(maxsize=64)
def _cover_table(B: Sort, k: int) -> tuple[tuple[tuple, tuple], ...]:
    cover = cyclic_power_cover(B, k)
    return tuple(((b, a), cover(b, a)) for b, a in cover_domain(B, k))


def embed_twist_by_power(x: TwistCode, B: Sort, k: int) -> TwistCode:
    """Pull a partial function on B^k back along the cyclic power cover."""
    f = x.as_dict()
    return TwistCode.of((src, f[t]) for src, t in _cover_table(B, k) if t in f)


def decode_twist_by_power(y: TwistCode, B: Sort, k: int) -> TwistCode:
    cover = cyclic_power_cover(B, k)
    out: dict = {}
    for (b, a), v in y.pairs:
        t = cover(b, a)
        if out.setdefault(t, v) != v:
            raise CheckFailure(f"code is not constant on the fiber over {t}")
    return TwistCode.of(out)


# -- ordered-group functions ------------------------------------------------


@dataclass(frozen=True)
class GammaFunctionCode:
    image: tuple[Fraction, ...]
    ranks: tuple[int, ...]

    def decode(self) -> list[Fraction]:
        return [self.image[r] for r in self.ranks]

    def to_json(self) -> dict:
        return {"image": [str(v) for v in self.image], "ranks": list(self.ranks)}


MAX_GAMMA_DOMAIN = 64


def code_gamma_function(h: Sequence) -> GammaFunctionCode:
    """Code h: {0..n-1} -> Q by its sorted image and the ranks of its values."""
    if len(h) > MAX_GAMMA_DOMAIN:
        raise InputError(f"domain size {len(h)} exceeds {MAX_GAMMA_DOMAIN}")
    vals = [Fraction(v) for v in h]
    image = tuple(sorted(set(vals)))
    where = {v: i for i, v in enumerate(image)}
    return GammaFunctionCode(image, tuple(where[v] for v in vals))


def decode_gamma_function(code: GammaFunctionCode) -> list[Fraction]:
    return code.decode()


def rank_as_prime_field_map(ranks: Sequence[int], p: int | None = None) -> tuple[int, list[frozenset[int]]]:
    """Code each rank r as the subset {0..r} of Z/p; returns (p, sets).

    With ``p`` omitted the least prime >= max(n, 2) is used.
    """
    n = len(ranks)
    if p is None:
        p = least_prime_at_least(n)
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    if p < n:
        raise InputError(f"prime {p} is smaller than the domain size {n}")
    if any(r < 0 or r >= max(n, 1) for r in ranks):
        raise InputError("ranks must lie in 0..n-1")
    return p, [frozenset(range(r + 1)) for r in ranks]


def decode_rank_sets(sets: Sequence[frozenset[int]]) -> list[int]:
    return [max(s) for s in sets]


# -- subgroups as stabilizers ------------------------------------------------


def subgroup_stabilizer_code(n: int, H: Iterable[int]) -> list[int]:
    """Y ⊆ Z/n with H = {g unit : gY = Y}; Y is H itself."""
    if n < 1:
        raise InputError("modulus must be positive")
    H = sorted({int(h) % n for h in H})
    units = [g for g in range(n) if _gcd(g, n) == 1]
    if n == 1:
        units = [0]
    if not H or any(h not in units for h in H):
        raise InputError("H is not a set of units")
    if any((a * b) % n not in H for a in H for b in H):
        raise InputError("H is not closed under multiplication")
    Y = H
    Yset = set(Y)
    stab = [g for g in units if {(g * y) % n for y in Y} == Yset]
    if stab != H:
        raise CheckFailure(f"stabilizer {stab} differs from H {H}")
    return Y


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- rectangular decomposition -------------------------------------------------


@dataclass(frozen=True)
class RectDecomposition:
    rects: tuple[tuple[frozenset, tuple], ...]

    def relation(self) -> set[tuple]:
        return {(x, y) for left, atom in self.rects for x in left for y in atom}

    def to_json(self) -> list:
        return [{"left": sorted(left), "atom": list(atom)} for left, atom in self.rects]


def fv_decompose(R: Iterable[tuple], M1: Iterable, M2: Sequence) -> RectDecomposition:
    """Write R ⊆ M1 x M2 as a disjoint union of rectangles leftPart x atom.

    Atoms are the atoms of the Boolean algebra on M2 generated by the
    sections R(x); atoms met by no section are dropped. ``M2`` is taken in
    its given (linear) order and atoms are listed by their least element.
    """
    M1 = list(M1)
    M2 = list(M2)
    pos = {y: i for i, y in enumerate(M2)}
    R = set(R)
    for x, y in R:
        if y not in pos or x not in set(M1):
            raise InputError(f"pair {(x, y)} is outside M1 x M2")
    profile: dict[frozenset, list] = {}
    for y in M2:
        profile.setdefault(frozenset(x for x in M1 if (x, y) in R), []).append(y)
    rects = [(left, tuple(atom)) for left, atom in profile.items() if left]
    rects.sort(key=lambda r: pos[r[1][0]])
    out = RectDecomposition(tuple(rects))
    if out.relation() != R:
        raise CheckFailure("rectangles do not reconstruct the relation")
    return out
