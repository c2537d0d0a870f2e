"""Finite groups stored as dense multiplication tables.

Elements are the integers ``0..n-1``; ``table[a, b]`` is the index of ``a*b``.
Every structure here is immutable once built, and all algorithms are
exhaustive over the tables.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetError, InputError

MAX_ORDER = 6000
# Above this order the full n^3 associativity sweep is replaced by Light's test.
_FULL_ASSOC_LIMIT = 256


def _as_table(table) -> np.ndarray:
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise InputError(f"multiplication table must be square and nonempty, got shape {t.shape}")
    n = t.shape[0]
    if n > MAX_ORDER:
        raise BudgetError(f"group order {n} exceeds the table guard {MAX_ORDER}")
    if not np.issubdtype(t.dtype, np.integer):
        raise InputError("multiplication table entries must be integers")
    if t.min() < 0 or t.max() >= n:
        raise InputError("multiplication table entries out of range")
    dtype = np.int16 if n < 2**15 else np.int32
    t = np.ascontiguousarray(t, dtype=dtype)
    t.setflags(write=False)
    return t


class FiniteGroup:
    """A finite group given by its Cayley table."""

    def __init__(self, table, name: str | None = None, check: bool = True):
        t = _as_table(table)
        n = t.shape[0]
        ar = np.arange(n)
        rows_id = np.flatnonzero((t == ar).all(axis=1))
        ident = None
        for e in rows_id:
            if (t[:, e] == ar).all():
                ident = int(e)
                break
        if ident is None:
            raise InputError("table has no two-sided identity")
        self.table = t
        self.identity = ident
        hits = t == ident
        if not hits.any(axis=1).all():
            bad = int(np.flatnonzero(~hits.any(axis=1))[0])
            raise InputError(f"element {bad} has no inverse")
        inv = np.argmax(hits, axis=1).astype(t.dtype)
        inv.setflags(write=False)
        self.inv = inv
        self.name = name or f"G{n}"
        if check:
            self.verify()

    def __len__(self) -> int:
        return self.table.shape[0]

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.order))

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = int(self.inv[g]), -k
        result, base = self.identity, g
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return int(self.table[self.table[g, x], self.inv[g]])

    # -- checks ------------------------------------------------------------

    def verify(self) -> None:
        """Check Latin-square, identity, inverse and associativity laws."""
        t, n, e = self.table, self.order, self.identity
        ar = np.arange(n)
        srt = np.sort(t, axis=1)
        if not (srt == ar).all() or not (np.sort(t, axis=0) == ar[:, None]).all():
            raise InputError("table is not a Latin square")
        if not (t[ar, self.inv] == e).all() or not (t[self.inv, ar] == e).all():
            raise InputError("inverse law fails")
        if n <= _FULL_ASSOC_LIMIT:
            left = t[t]  # (ab)c
            right = t[:, t]  # a(bc)
            bad = np.argwhere(left != right)
            if len(bad):
                a, b, c = map(int, bad[0])
                raise InputError(f"associativity fails at ({a}, {b}, {c})")
        else:
            # Light's test: checking generators g in (xg)y = x(gy) suffices.
            for g in self.generators:
                left = t[t[:, g], :]
                right = t[:, t[g, :]]
                bad = np.argwhere(left != right)
                if len(bad):
                    x, y = map(int, bad[0])
                    raise InputError(f"associativity fails at ({x}, {g}, {y})")

    # -- element data ----------------------------------------------------

    @cached_property
    def element_orders(self) -> np.ndarray:
        n, t = self.order, self.table
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        cur = ar.copy()
        k = 1
        while (orders == 0).any():
            done = (cur == self.identity) & (orders == 0)
            orders[done] = k
            cur = t[cur, ar]
            k += 1
        orders.setflags(write=False)
        return orders

    def element_order(self, g: int) -> int:
        return int(self.element_orders[g])

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*map(int, self.element_orders))

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    @cached_property
    def is_cyclic(self) -> bool:
        return bool((self.element_orders == self.order).any())

    def closure(self, elements: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``elements``."""
        gens = sorted(set(int(x) for x in elements))
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity])
        if not gens:
            return frozenset([self.identity])
        gens_arr = np.array(gens)
        while len(frontier):
            nxt = np.unique(self.table[np.ix_(frontier, gens_arr)])
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return frozenset(map(int, np.flatnonzero(seen)))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Greedy generating sequence.

        Repeatedly adds the element of largest order (lowest index on ties)
        outside the subgroup generated so far.
        """
        order_rank = sorted(range(self.order), key=lambda g: (-self.element_order(g), g))
        gens: list[int] = []
        current = frozenset([self.identity])
        while len(current) < self.order:
            g = next(x for x in order_rank if x not in current)
            gens.append(g)
            current = self.closure(gens)
        return tuple(gens)

    # -- subgroups -------------------------------------------------------

    def subgroup(self, members: Iterable[int], check: bool = True) -> Subgroup:
        return Subgroup(self, members, check=check)

    @cached_property
    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, [self.identity], check=False)

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, range(self.order), check=False)

    @cached_property
    def subgroups(self) -> tuple[Subgroup, ...]:
        """All subgroups, sorted by (order, members)."""
        if self.order > 512:
            raise BudgetError(f"subgroup lattice enumeration guarded at order 512 (got {self.order})")
        cyclic = {self.closure([g]) for g in range(self.order)}
        found = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for h in frontier:
                for c in cyclic:
                    if c <= h:
                        continue
                    j = self.closure(h | c)
                    if j not in found:
                        new.add(j)
            found |= new
            frontier = new
        return tuple(
            Subgroup(self, s, check=False) for s in sorted(found, key=lambda s: (len(s), sorted(s)))
        )

    @cached_property
    def normal_subgroups(self) -> tuple[Subgroup, ...]:
        return tuple(h for h in self.subgroups if h.is_normal())

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        classes = []
        for x in range(self.order):
            if x in seen:
                continue
            cls = sorted({self.conj(g, x) for g in range(self.order)})
            seen.update(cls)
            classes.append(tuple(cls))
        return tuple(classes)

    def centralizer(self, elements: Iterable[int]) -> Subgroup:
        els = list(elements)
        t = self.table
        members = [g for g in range(self.order) if all(t[g, x] == t[x, g] for x in els)]
        return Subgroup(self, members, check=False)

    @cached_property
    def center(self) -> Subgroup:
        return self.centralizer(range(self.order))


class Subgroup:
    """An explicit member set inside a parent group."""

    __slots__ = ("parent", "members", "__dict__")

    def __init__(self, parent: FiniteGroup, members: Iterable[int], check: bool = True):
        self.parent = parent
        self.members = frozenset(int(m) for m in members)
        if check:
            if parent.identity not in self.members:
                raise InputError("subset does not contain the identity")
            for a in self.members:
                if int(parent.inv[a]) not in self.members:
                    raise InputError(f"subset not closed under inverse at {a}")
                for b in self.members:
                    if int(parent.table[a, b]) not in self.members:
                        raise InputError(f"subset not closed under product at ({a}, {b})")

    def __len__(self) -> int:
        return len(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g) -> bool:
        return int(g) in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other.members == self.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __le__(self, other: Subgroup) -> bool:
        return self.members <= other.members

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} in {self.parent.name})"

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def conjugate(self, g: int) -> Subgroup:
        return Subgroup(self.parent, (self.parent.conj(g, h) for h in self.members), check=False)

    def normality_witness(self) -> tuple[int, int] | None:
        """A pair (g, h) with g h g^-1 outside the subgroup, or None."""
        G = self.parent
        for g in G.generators:
            for h in sorted(self.members):
                if G.conj(g, h) not in self.members:
                    return g, h
        return None

    def is_normal(self) -> bool:
        return self.normality_witness() is None

    def left_cosets(self) -> list[tuple[int, ...]]:
        """Left cosets gH, each sorted, listed by their least element."""
        G = self.parent
        mem = np.array(self.sorted())
        seen = np.zeros(G.order, dtype=bool)
        cosets = []
        for g in range(G.order):
            if seen[g]:
                continue
            c = np.sort(G.table[g, mem])
            seen[c] = True
            cosets.append(tuple(map(int, c)))
        return cosets

    def intersection(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.parent, self.members & other.members, check=False)

    @cached_property
    def _as_group(self) -> tuple[FiniteGroup, GroupHom]:
        mem = self.sorted()
        pos = {m: i for i, m in enumerate(mem)}
        t = self.parent.table
        table = [[pos[int(t[a, b])] for b in mem] for a in mem]
        H = FiniteGroup(table, name=f"{self.parent.name}<{self.order}>", check=False)
        return H, GroupHom(H, self.parent, mem, check=False)

    def as_group(self) -> tuple[FiniteGroup, GroupHom]:
        """The subgroup as a standalone group with its inclusion map.

        Elements are indexed in increasing order of their parent index.
        """
        return self._as_group


class GroupHom:
    """A homomorphism given by its value table."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, mapping: Sequence[int], check: bool = True):
        m = np.asarray(mapping, dtype=np.int64)
        if m.shape != (source.order,):
            raise InputError("homomorphism table has the wrong length")
        if m.min() < 0 or m.max() >= target.order:
            raise InputError("homomorphism values out of range")
        m.setflags(write=False)
        self.source, self.target, self.map = source, target, m
        if check:
            bad = self.violation()
            if bad is not None:
                x, y = bad
                raise InputError(f"not a homomorphism: f({x}*{y}) != f({x})*f({y})")

    def __call__(self, g: int) -> int:
        return int(self.map[g])

    def violation(self) -> tuple[int, int] | None:
        S, T, m = self.source, self.target, self.map
        for g in S.generators:
            bad = np.flatnonzero(m[S.table[:, g]] != T.table[m, m[g]])
            if len(bad):
                return int(bad[0]), g
        if m[S.identity] != T.identity:
            return S.identity, S.identity
        return None

    @cached_property
    def kernel(self) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(self.map == self.target.identity), check=False)

    @cached_property
    def image(self) -> Subgroup:
        return Subgroup(self.target, np.unique(self.map), check=False)

    @property
    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == self.source.order

    @property
    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.target.order

    def compose(self, other: GroupHom) -> GroupHom:
        """``self ∘ other``."""
        return GroupHom(other.source, self.target, self.map[other.map], check=False)


class GroupAction:
    """Left action ``act[g, p]`` of a group on points ``0..npoints-1``."""

    def __init__(self, group: FiniteGroup, table, check: bool = True):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != group.order:
            raise InputError("action table must have one row per group element")
        npts = t.shape[1]
        if npts and (t.min() < 0 or t.max() >= npts):
            raise InputError("action table values out of range")
        t.setflags(write=False)
        self.group, self.table = group, t
        if check:
            self.verify()

    @property
    def npoints(self) -> int:
        return self.table.shape[1]

    def __call__(self, g: int, p: int) -> int:
        return int(self.table[g, p])

    def verify(self) -> None:
        G, t = self.group, self.table
        if not (t[G.identity] == np.arange(self.npoints)).all():
            raise InputError("identity does not act trivially")
        for row in t:
            if len(np.unique(row)) != self.npoints:
                raise InputError("group element does not act bijectively")
        for g in G.generators:
            # act(xg, p) == act(x, act(g, p)) for all x: enough on generators.
            bad = np.argwhere(t[G.table[:, g]] != t[:, t[g]])
            if len(bad):
                x, p = map(int, bad[0])
                raise InputError(f"action law fails at ({x}, {g}, point {p})")

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        seen = np.zeros(self.npoints, dtype=bool)
        out = []
        for p in range(self.npoints):
            if seen[p]:
                continue
            orb = np.unique(self.table[:, p])
            seen[orb] = True
            out.append(tuple(map(int, orb)))
        return tuple(out)

    def orbit(self, p: int) -> tuple[int, ...]:
        return tuple(map(int, np.unique(self.table[:, p])))

    @property
    def is_transitive(self) -> bool:
        return len(self.orbits) == 1

    def stabilizer(self, p: int) -> Subgroup:
        return Subgroup(self.group, np.flatnonzero(self.table[:, p] == p), check=False)

    @cached_property
    def kernel(self) -> Subgroup:
        ident = np.arange(self.npoints)
        return Subgroup(self.group, np.flatnonzero((self.table == ident).all(axis=1)), check=False)

    @property
    def is_faithful(self) -> bool:
        return self.kernel.order == 1

    def fixed_points(self, elements: Iterable[int] | None = None) -> list[int]:
        rows = self.table if elements is None else self.table[list(elements)]
        if len(rows) == 0:
            return list(range(self.npoints))
        return [int(p) for p in np.flatnonzero((rows == np.arange(self.npoints)).all(axis=0))]

    def restrict(self, points: Sequence[int]) -> GroupAction:
        """Action on an invariant subset, points reindexed by position."""
        pts = list(points)
        pos = np.full(self.npoints, -1)
        pos[pts] = np.arange(len(pts))
        sub = pos[self.table[:, pts]]
        if (sub < 0).any():
            raise InputError("subset is not invariant")
        return GroupAction(self.group, sub, check=False)


# -- subgroup constructions ----------------------------------------------


def core_of_subgroup(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """Intersection of all G-conjugates of H: the largest normal subgroup inside H."""
    if H.parent is not G:
        H = Subgroup(G, H.members)
    members = set(H.members)
    for coset in H.left_cosets():
        g = coset[0]
        members &= {G.conj(g, h) for h in H.members}
    return Subgroup(G, members, check=False)


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Quotient group G/N with its projection.

    Cosets are numbered by their least element, so coset 0 is N itself
    whenever the identity is 0.
    """
    if N.parent is not G:
        N = Subgroup(G, N.members)
    bad = N.normality_witness()
    if bad is not None:
        g, h = bad
        raise InputError(f"subgroup is not normal: {g} * {h} * {g}^-1 = {G.conj(g, h)} lies outside")
    cosets = N.left_cosets()
    which = np.empty(G.order, dtype=np.int64)
    for i, c in enumerate(cosets):
        which[list(c)] = i
    reps = np.array([c[0] for c in cosets])
    table = which[G.table[np.ix_(reps, reps)]]
    Q = FiniteGroup(table, name=f"{G.name}/{N.order}", check=False)
    return Q, GroupHom(G, Q, which, check=False)


# -- homomorphism search -------------------------------------------------


def _word_tree(G: FiniteGroup) -> list[tuple[int, int, int]]:
    """BFS spanning tree: (element, parent, generator position), parent*gen = element."""
    gens = G.generators
    seen = {G.identity}
    order = []
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for i, g in enumerate(gens):
            y = int(G.table[x, g])
            if y not in seen:
                seen.add(y)
                order.append((y, x, i))
                queue.append(y)
    return order


def homomorphisms(G: FiniteGroup, H: FiniteGroup, budget: int = 10**6) -> Iterator[np.ndarray]:
    """All homomorphisms G -> H as value tables, in lexicographic order of generator images."""
    gens = G.generators
    cands = [
        [h for h in range(H.order) if G.element_order(g) % H.element_order(h) == 0] for g in gens
    ]
    total = math.prod(len(c) for c in cands)
    if total > budget:
        raise BudgetError(f"homomorphism search needs {total} candidates (budget {budget})")
    tree = _word_tree(G)
    for images in itertools.product(*cands):
        m = np.empty(G.order, dtype=np.int64)
        m[G.identity] = H.identity
        for y, x, i in tree:
            m[y] = H.table[m[x], images[i]]
        ok = True
        for g, img in zip(gens, images):
            if not (m[G.table[:, g]] == H.table[m, img]).all():
                ok = False
                break
        if ok:
            yield m


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> GroupHom | None:
    if G.order != H.order or sorted(G.element_orders) != sorted(H.element_orders):
        return None
    for m in homomorphisms(G, H):
        if len(np.unique(m)) == G.order:
            return GroupHom(G, H, m, check=False)
    return None


def permutation_group(perms: Sequence[Sequence[int]], name: str | None = None) -> tuple[FiniteGroup, GroupAction]:
    """Group of permutations (given as image tuples) and its natural action.

    Composition is ``(p*q)(i) = p(q(i))``. Elements are sorted lexicographically,
    so the identity permutation is element 0.
    """
    perms = [tuple(int(x) for x in p) for p in perms]
    if not perms:
        raise InputError("no permutations given")
    deg = len(perms[0])
    ident = tuple(range(deg))
    seen = {ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in perms:
            q = tuple(p[g[i]] for i in range(deg))
            if q not in seen:
                if len(seen) >= MAX_ORDER:
                    raise BudgetError("permutation group exceeds the table guard")
                seen.add(q)
                queue.append(q)
    elements = sorted(seen)
    arr = np.array(elements, dtype=np.int64).reshape(len(elements), deg)
    n = len(elements)
    # lexicographic order of tuples equals numeric order of their base-deg codes
    base = np.array([deg**k for k in range(deg)][::-1], dtype=np.int64)
    codes = arr @ base
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        table[i] = np.searchsorted(codes, arr[i][arr] @ base)  # p_i ∘ q
    G = FiniteGroup(table, name=name, check=n <= _FULL_ASSOC_LIMIT)
    return G, GroupAction(G, arr, check=False)


# -- standard constructors -----------------------------------------------


def make_cyclic(n: int) -> FiniteGroup:
    """Z/n written additively: element k is the k-th power of the generator 1."""
    if n < 1:
        raise InputError("cyclic group order must be positive")
    if n > MAX_ORDER:
        raise BudgetError(f"order {n} exceeds the table guard")
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, name=f"C{n}", check=False)


def make_symmetric(n: int) -> tuple[FiniteGroup, GroupAction]:
    if n < 1:
        raise InputError("symmetric group degree must be positive")
    if math.factorial(n) > MAX_ORDER:
        raise BudgetError(f"Sym({n}) exceeds the table guard of {MAX_ORDER} elements")
    perms = list(itertools.permutations(range(n)))
    gens = perms if n <= 2 else [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return permutation_group(gens, name=f"S{n}")


def make_alternating(n: int) -> tuple[FiniteGroup, GroupAction]:
    if n < 1:
        raise InputError("alternating group degree must be positive")
    if n < 3:
        return permutation_group([tuple(range(n))], name=f"A{n}")
    if math.factorial(n) // 2 > MAX_ORDER:
        raise BudgetError(f"A{n} exceeds the table guard")
    # the 3-cycles (0 1 k) generate A_n
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return permutation_group(gens, name=f"A{n}")


def make_dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element i + n*e is r^i s^e."""
    if n < 1:
        raise InputError("dihedral parameter must be positive")
    idx = np.arange(2 * n)
    i, e = idx % n, idx // n
    sign = np.where(e == 1, -1, 1)
    ii = (i[:, None] + sign[:, None] * i[None, :]) % n
    ee = (e[:, None] + e[None, :]) % 2
    return FiniteGroup(ii + n * ee, name=f"D{n}", check=False)


def make_dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order 4n (n=2 gives the quaternion group).

    Element i + 2n*e is a^i x^e with a of order 2n, x^2 = a^n, x a x^-1 = a^-1.
    """
    if n < 1:
        raise InputError("dicyclic parameter must be positive")
    m = 2 * n
    idx = np.arange(2 * m)
    i, e = idx % m, idx // m
    I, J = i[:, None], i[None, :]
    E, F = e[:, None], e[None, :]
    exp = np.where(E == 1, I - J, I + J) + np.where((E == 1) & (F == 1), n, 0)
    out_e = (E + F) % 2
    return FiniteGroup(exp % m + m * out_e, name="Q8" if n == 2 else f"Dic{n}", check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H with (g, h) stored at g*|H| + h."""
    if G.order * H.order > MAX_ORDER:
        raise BudgetError("direct product exceeds the table guard")
    t = G.table.astype(np.int64)[:, None, :, None] * H.order + H.table.astype(np.int64)[None, :, None, :]
    n = G.order * H.order
    return FiniteGroup(t.reshape(n, n), name=f"{G.name}x{H.name}", check=False)


def unit_group(n: int) -> tuple[FiniteGroup, list[int]]:
    """(Z/n)^* with its elements listed as residues."""
    units = [u for u in range(n) if math.gcd(u, n) == 1] if n > 1 else [0]
    pos = {u: i for i, u in enumerate(units)}
    table = [[pos[(a * b) % n] if n > 1 else 0 for b in units] for a in units]
    return FiniteGroup(table, name=f"U{n}", check=False), units


def group_by_name(name: str) -> FiniteGroup:
    """Parse names like ``C6``, ``S3``, ``A4``, ``D5``, ``Q8``, ``Dic3``, ``C2xC4``, ``C2^3``."""
    name = name.strip()
    if "x" in name:
        parts = [group_by_name(p) for p in name.split("x")]
        G = parts[0]
        for P in parts[1:]:
            G = direct_product(G, P)
        G.name = name
        return G
    if "^" in name:
        base, k = name.split("^")
        G = group_by_name(base)
        out = G
        for _ in range(int(k) - 1):
            out = direct_product(out, G)
        out.name = name
        return out
    try:
        if name == "Q8":
            return make_dicyclic(2)
        if name.startswith("Dic"):
            return make_dicyclic(int(name[3:]))
        kind, num = name[0], int(name[1:])
    except ValueError:
        raise InputError(f"unknown group name {name!r}") from None
    if kind == "C":
        return make_cyclic(num)
    if kind == "S":
        return make_symmetric(num)[0]
    if kind == "A":
        return make_alternating(num)[0]
    if kind == "D":
        return make_dihedral(num)
    raise InputError(f"unknown group name {name!r}")


_CATALOG_NAMES = [
    "C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C7", "C8", "C2xC4", "C2^3", "D4", "Q8",
    "C9", "C3xC3", "C10", "D5", "C11", "C12", "C2xC6", "A4", "D6", "Dic3", "C13", "C14", "D7",
    "C15", "C16", "C4xC4", "C2xC8", "C2xC2xC4", "C2^4", "D8", "Dic4", "C2xD4", "C2xQ8", "C17",
    "C18", "C3xC6", "D9", "C3xS3", "C19", "C20", "C2xC10", "D10", "Dic5", "C21", "C22", "D11",
    "C23", "C24", "C2xC12", "C2xC2xC6", "S4", "C2xA4", "D12", "Dic6", "C4xS3", "C3xD4", "C3xQ8",
    "C2xDic3", "C2xS3xC2",
]


def small_groups(max_order: int) -> list[FiniteGroup]:
    """A fixed catalog of groups of order <= max_order (at most 24).

    Contains every cyclic, dihedral and dicyclic group in range, the
    symmetric and alternating groups, and a selection of direct products.
    The list may contain isomorphic duplicates.
    """
    out = []
    for nm in _CATALOG_NAMES:
        if nm == "C2xS3xC2":
            G = direct_product(direct_product(make_cyclic(2), make_symmetric(3)[0]), make_cyclic(2))
            G.name = nm
        else:
            G = group_by_name(nm)
        if G.order <= max_order:
            out.append(G)
    return out


# -- text serialization --------------------------------------------------


def dumps(G: FiniteGroup) -> str:
    lines = [f"group {G.order}"]
    lines += [" ".join(str(int(x)) for x in row) for row in G.table]
    return "\n".join(lines) + "\n"


def parse_group_lines(lines: Sequence[str], start: int = 0, lineno_offset: int = 0) -> tuple[FiniteGroup, int]:
    """Parse one ``group <n>`` block; returns the group and the next line position."""

    def err(i, msg):
        raise InputError(f"line {i + 1 + lineno_offset}: {msg}")

    i = start
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines):
        err(i, "expected 'group <n>' header")
    head = lines[i].split()
    if len(head) != 2 or head[0] != "group":
        err(i, f"expected 'group <n>' header, got {lines[i].strip()!r}")
    try:
        n = int(head[1])
    except ValueError:
        err(i, f"bad group order {head[1]!r}")
    if n < 1:
        err(i, "group order must be positive")
    rows = []
    for r in range(n):
        j = i + 1 + r
        if j >= len(lines):
            err(j, f"table ended after {r} of {n} rows")
        try:
            row = [int(x) for x in lines[j].split()]
        except ValueError:
            err(j, "non-integer table entry")
        if len(row) != n:
            err(j, f"expected {n} entries, got {len(row)}")
        if any(x < 0 or x >= n for x in row):
            err(j, f"entry out of range 0..{n - 1}")
        rows.append(row)
    try:
        G = FiniteGroup(rows)
    except InputError as exc:
        err(i, f"invalid group table: {exc}")
    return G, i + 1 + n


def loads(text: str) -> FiniteGroup:
    G, _ = parse_group_lines(text.splitlines())
    return G
