"""Non-abelian first cohomology of a finite group acting on a finite group.

Conventions: a cocycle satisfies ``a(st) = a(s) * s(a(t))`` and two cocycles
are cohomologous when ``a'(s) = b^-1 * a(s) * s(b)`` for some ``b`` in A.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import BudgetError, CheckFailure, InputError
from .groups import FiniteGroup, GroupHom, Subgroup, core_of_subgroup, homomorphisms, quotient

DEFAULT_BUDGET = 2_000_000


class GammaGroup:
    """A coefficient group ``coeff`` with an action of ``gamma`` by automorphisms.

    ``action[s, x]`` is the index of ``s·x``.
    """

    def __init__(self, gamma: FiniteGroup, coeff: FiniteGroup, action, check: bool = True):
        act = np.asarray(action, dtype=np.int64)
        if act.shape != (gamma.order, coeff.order):
            raise InputError(f"action table must have shape {(gamma.order, coeff.order)}, got {act.shape}")
        if act.min() < 0 or act.max() >= coeff.order:
            raise InputError("action table values out of range")
        act.setflags(write=False)
        self.gamma, self.coeff, self.action = gamma, coeff, act
        if check:
            self.verify()

    def __repr__(self) -> str:
        return f"GammaGroup({self.gamma.name} on {self.coeff.name})"

    @classmethod
    def trivial(cls, gamma: FiniteGroup, coeff: FiniteGroup) -> GammaGroup:
        act = np.tile(np.arange(coeff.order), (gamma.order, 1))
        return cls(gamma, coeff, act, check=False)

    @classmethod
    def from_automorphisms(cls, gamma: FiniteGroup, coeff: FiniteGroup, hom: np.ndarray, auts: np.ndarray) -> GammaGroup:
        """Build from a homomorphism ``gamma -> Aut(coeff)``; ``auts[k]`` is automorphism k as a table."""
        return cls(gamma, coeff, auts[np.asarray(hom)], check=False)

    def verify(self) -> None:
        G, A, act = self.gamma, self.coeff, self.action
        for s in range(G.order):
            row = act[s]
            if len(np.unique(row)) != A.order:
                raise InputError(f"gamma element {s} does not act bijectively")
            for g in A.generators:
                if not (row[A.table[:, g]] == A.table[row, row[g]]).all():
                    raise InputError(f"gamma element {s} does not act by a homomorphism")
        if not (act[G.identity] == np.arange(A.order)).all():
            raise InputError("identity of gamma does not act trivially")
        for s in range(G.order):
            for t in G.generators:
                if not (act[G.table[s, t]] == act[s][act[t]]).all():
                    raise InputError(f"action law fails for ({s}, {t})")

    def act(self, s: int, x: int) -> int:
        return int(self.action[s, x])

    @cached_property
    def fixed_subgroup(self) -> Subgroup:
        ar = np.arange(self.coeff.order)
        return Subgroup(self.coeff, np.flatnonzero((self.action == ar).all(axis=0)), check=False)

    @cached_property
    def acting_kernel(self) -> Subgroup:
        """Elements of gamma acting as the identity on coeff."""
        ar = np.arange(self.coeff.order)
        return Subgroup(self.gamma, np.flatnonzero((self.action == ar).all(axis=1)), check=False)

    def is_equivariant(self, other: GammaGroup, f: GroupHom) -> bool:
        if other.gamma is not self.gamma and other.gamma.order != self.gamma.order:
            return False
        return bool((f.map[self.action] == other.action[:, f.map]).all())


def automorphism_group(A: FiniteGroup) -> tuple[FiniteGroup, np.ndarray]:
    """Aut(A) as a group together with the table of automorphisms.

    ``auts[k]`` is the k-th automorphism; composition is ``(φψ)(x) = φ(ψ(x))``
    so that Aut(A) acts on the left. Automorphism 0 is the identity.
    """
    maps = [m for m in homomorphisms(A, A) if len(np.unique(m)) == A.order]
    maps.sort(key=lambda m: tuple(m))
    auts = np.array(maps, dtype=np.int64).reshape(len(maps), A.order)
    n = len(maps)
    if n > 2000:
        raise BudgetError(f"Aut({A.name}) has {n} elements; table guard is 2000")
    lookup = {tuple(m): i for i, m in enumerate(maps)}
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            table[i, j] = lookup[tuple(auts[i][auts[j]])]
    Aut = FiniteGroup(table, name=f"Aut({A.name})", check=False)
    return Aut, auts


def all_actions(gamma: FiniteGroup, A: FiniteGroup, aut: tuple[FiniteGroup, np.ndarray] | None = None) -> list[GammaGroup]:
    """Every action of gamma on A by automorphisms, one per homomorphism gamma -> Aut(A)."""
    Aut, auts = aut or automorphism_group(A)
    return [GammaGroup.from_automorphisms(gamma, A, h, auts) for h in homomorphisms(gamma, Aut)]


@dataclass(frozen=True)
class Cocycle:
    parent: GammaGroup = field(compare=False, repr=False)
    values: tuple[int, ...]

    def __call__(self, s: int) -> int:
        return self.values[s]

    def violation(self) -> tuple[int, int] | None:
        return _cocycle_violation(self.parent, np.asarray(self.values))

    def is_trivial(self) -> bool:
        return all(v == self.parent.coeff.identity for v in self.values)


def _cocycle_violation(M: GammaGroup, a: np.ndarray) -> tuple[int, int] | None:
    G, A = M.gamma, M.coeff
    lhs = a[G.table]  # a(st)
    rhs = A.table[a[:, None], M.action[:, a]]  # a(s) * s(a(t))
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        return tuple(map(int, bad[0]))
    return None


def make_cocycle(M: GammaGroup, values: Sequence[int]) -> Cocycle:
    vals = tuple(int(v) for v in values)
    if len(vals) != M.gamma.order or any(v < 0 or v >= M.coeff.order for v in vals):
        raise InputError("cocycle table has the wrong length or out-of-range values")
    bad = _cocycle_violation(M, np.asarray(vals))
    if bad is not None:
        raise InputError(f"cocycle identity fails at (s, t) = {bad}")
    return Cocycle(M, vals)


def trivial_cocycle(M: GammaGroup) -> Cocycle:
    return Cocycle(M, (M.coeff.identity,) * M.gamma.order)


def enumerate_z1(M: GammaGroup, budget: int = DEFAULT_BUDGET) -> list[Cocycle]:
    """All cocycles, in lexicographic order of their value tables.

    Values are chosen freely on ``gamma.generators``, extended along a
    breadth-first word tree, then checked on all pairs.
    """
    G, A = M.gamma, M.coeff
    gens = G.generators
    k = len(gens)
    total = A.order**k
    if total > budget:
        raise BudgetError(f"Z1 enumeration needs {total} candidates (budget {budget})")
    # breadth-first word tree over the generators
    parent = {G.identity: None}
    tree = []
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = int(G.table[x, g])
                if y not in parent:
                    parent[y] = (x, i)
                    tree.append((y, x, i))
                    nxt.append(y)
        frontier = nxt
    grid = np.indices((A.order,) * k).reshape(k, -1).T if k else np.zeros((1, 0), dtype=np.int64)
    vals = np.empty((len(grid), G.order), dtype=np.int64)
    vals[:, G.identity] = A.identity
    gen_cols = grid
    for y, x, i in tree:
        # a(x g) = a(x) * x(a(g))
        vals[:, y] = A.table[vals[:, x], M.action[x][gen_cols[:, i]]]
    ok = np.ones(len(vals), dtype=bool)
    for s in range(G.order):
        for t in range(G.order):
            ok &= vals[:, G.table[s, t]] == A.table[vals[:, s], M.action[s][vals[:, t]]]
    good = vals[ok]
    if len(good):
        good = good[np.lexsort(good.T[::-1])]
    return [Cocycle(M, tuple(map(int, row))) for row in good]


def _twisted_orbit(M: GammaGroup, a: Sequence[int]) -> np.ndarray:
    """Row b holds the cocycle s -> b^-1 a(s) s(b)."""
    A = M.coeff
    a = np.asarray(a)
    b = np.arange(A.order)
    return A.table[A.table[A.inv[b][:, None], a[None, :]], M.action.T[b]]


def cohomologous(a: Cocycle, a2: Cocycle) -> int | None:
    """Some b with a2(s) = b^-1 a(s) s(b) for all s, or None (exhaustive over A)."""
    if a.parent is not a2.parent:
        raise InputError("cocycles belong to different gamma-groups")
    rows = _twisted_orbit(a.parent, a.values)
    hit = np.flatnonzero((rows == np.asarray(a2.values)).all(axis=1))
    return int(hit[0]) if len(hit) else None


class H1Classes:
    """Partition of Z^1 into cohomology classes.

    ``classes[i]`` lists the cocycles of class i; ``representatives[i]`` is
    the lexicographically least one. ``witness[values]`` is a b with
    ``a(s) = b^-1 rep(s) s(b)`` for the class representative rep.
    """

    def __init__(self, parent: GammaGroup, cocycles: list[Cocycle]):
        self.parent = parent
        self.cocycles = cocycles
        index = {c.values: i for i, c in enumerate(cocycles)}
        cls_of = [-1] * len(cocycles)
        witness: dict[tuple[int, ...], int] = {}
        classes: list[list[Cocycle]] = []
        for i, c in enumerate(cocycles):
            if cls_of[i] >= 0:
                continue
            k = len(classes)
            members = []
            for b, row in enumerate(_twisted_orbit(parent, c.values)):
                key = tuple(map(int, row))
                j = index.get(key)
                if j is None:
                    raise CheckFailure("twisted conjugate of a cocycle is not a cocycle")
                if cls_of[j] < 0:
                    cls_of[j] = k
                    witness[key] = b
                    members.append(cocycles[j])
                elif cls_of[j] != k:
                    raise CheckFailure("cohomology classes overlap")
            members.sort(key=lambda x: x.values)
            classes.append(members)
        self.classes = classes
        self.representatives = [m[0] for m in classes]
        self.witness = witness
        self._index = {c.values: cls_of[i] for i, c in enumerate(cocycles)}

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def count(self) -> int:
        return len(self.classes)

    def class_of(self, a: Cocycle | Sequence[int]) -> int:
        vals = a.values if isinstance(a, Cocycle) else tuple(int(v) for v in a)
        try:
            return self._index[vals]
        except KeyError:
            raise InputError("values do not form a cocycle of this gamma-group") from None

    @property
    def trivial_class(self) -> int:
        return self.class_of(trivial_cocycle(self.parent))

    def to_json(self) -> dict:
        return {
            "z1": len(self.cocycles),
            "h1": len(self.classes),
            "representatives": [list(r.values) for r in self.representatives],
            "class_sizes": [len(c) for c in self.classes],
            "witnesses": [[self.witness[c.values] for c in cls] for cls in self.classes],
        }


def h1(M: GammaGroup, budget: int = DEFAULT_BUDGET) -> H1Classes:
    return H1Classes(M, enumerate_z1(M, budget))


@dataclass
class H1Map:
    source: H1Classes
    target: H1Classes
    mapping: list[int]

    @property
    def kernel(self) -> list[int]:
        t = self.target.trivial_class
        return [i for i, j in enumerate(self.mapping) if j == t]

    @property
    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)


def induced_h1_map(
    f: GroupHom, source: GammaGroup, target: GammaGroup, budget: int = DEFAULT_BUDGET,
    source_h1: H1Classes | None = None, target_h1: H1Classes | None = None,
) -> H1Map:
    """Map on H^1 induced by an equivariant homomorphism, with its kernel."""
    if f.source is not source.coeff or f.target is not target.coeff:
        raise InputError("homomorphism does not match the coefficient groups")
    if source.gamma.order != target.gamma.order:
        raise InputError("gamma-groups have different acting groups")
    if not source.is_equivariant(target, f):
        raise InputError("homomorphism is not gamma-equivariant")
    hs = source_h1 or h1(source, budget)
    ht = target_h1 or h1(target, budget)
    mapping = []
    for cls in hs.classes:
        images = {ht.class_of(tuple(int(v) for v in f.map[list(c.values)])) for c in cls}
        if len(images) != 1:
            raise CheckFailure("induced map is not constant on a cohomology class")
        mapping.append(images.pop())
    return H1Map(hs, ht, mapping)


def quotient_gamma_group(M: GammaGroup, N: Subgroup) -> tuple[GammaGroup, GroupHom]:
    """The action of gamma/N on the coefficients, for N acting trivially."""
    if not N.members <= M.acting_kernel.members:
        bad = min(N.members - M.acting_kernel.members)
        raise InputError(f"subgroup element {bad} acts nontrivially on the coefficients")
    Q, proj = quotient(M.gamma, N)
    reps = [min(np.flatnonzero(proj.map == q)) for q in range(Q.order)]
    return GammaGroup(Q, M.coeff, M.action[reps], check=False), proj


def inflate(a: Cocycle, proj: GroupHom, M: GammaGroup) -> Cocycle:
    """Pull a cocycle over gamma/N back to gamma along the projection."""
    Mq = a.parent
    if proj.target is not Mq.gamma or proj.source is not M.gamma or M.coeff is not Mq.coeff:
        raise InputError("projection does not match the gamma-groups")
    if not (M.action == Mq.action[proj.map]).all():
        raise InputError("the kernel of the projection does not act trivially")
    return Cocycle(M, tuple(a.values[int(q)] for q in proj.map))


def inflation_map(M: GammaGroup, N: Subgroup, budget: int = DEFAULT_BUDGET) -> tuple[H1Map, GammaGroup, GroupHom]:
    """Inflation H^1(gamma/N, A) -> H^1(gamma, A) on classes."""
    Mq, proj = quotient_gamma_group(M, N)
    hq, hm = h1(Mq, budget), h1(M, budget)
    mapping = [hm.class_of(inflate(r, proj, M)) for r in hq.representatives]
    return H1Map(hq, hm, mapping), Mq, proj


@lru_cache(maxsize=None)
def factorial_power_bound(n: int) -> int:
    f = math.factorial(n)
    return f**f


def within_factorial_power(index: int, n: int) -> bool:
    """``index <= (n!)^(n!)`` without building huge integers when unnecessary."""
    f = math.factorial(n)
    if f == 1:
        return index <= 1
    if math.log(index) < f * math.log(f) - 1:
        return True
    return index <= factorial_power_bound(n)


@dataclass
class FactoredCocycle:
    g0: Subgroup
    g1: Subgroup
    g2: Subgroup
    quotient: GammaGroup
    projection: GroupHom
    cocycle: Cocycle
    index: int
    bound_ok: bool


def factor_cocycle(a: Cocycle) -> FactoredCocycle:
    """Factor a cocycle through gamma/G2 where G2 is a normal subgroup of bounded index.

    G0 is the kernel of the action, G1 the kernel of a restricted to G0
    (a homomorphism there) and G2 the core of G1 in gamma.
    """
    M = a.parent
    G, A = M.gamma, M.coeff
    vals = np.asarray(a.values)
    g0 = M.acting_kernel
    g0m = np.array(g0.sorted())
    prods = A.table[vals[g0m][:, None], vals[g0m][None, :]]
    if not (vals[G.table[np.ix_(g0m, g0m)]] == prods).all():
        raise CheckFailure("cocycle restricted to the acting kernel is not a homomorphism")
    g1 = Subgroup(G, [g for g in g0m if vals[g] == A.identity], check=False)
    g2 = core_of_subgroup(G, g1)
    g2m = np.array(g2.sorted())
    if not (vals[G.table[:, g2m]] == vals[:, None]).all():
        raise CheckFailure("cocycle is not constant on cosets of the core")
    Mq, proj = quotient_gamma_group(M, g2)
    reps = [int(np.flatnonzero(proj.map == q)[0]) for q in range(Mq.gamma.order)]
    a2 = Cocycle(Mq, tuple(int(vals[r]) for r in reps))
    if a2.violation() is not None:
        raise CheckFailure("factored map is not a cocycle")
    if inflate(a2, proj, M).values != a.values:
        raise CheckFailure("factored cocycle does not inflate back to the original")
    index = G.order // g2.order
    return FactoredCocycle(g0, g1, g2, Mq, proj, a2, index, within_factorial_power(index, A.order))


def coprime_splitting(a: Cocycle) -> int:
    """For abelian A with gcd(|gamma|, |A|) = 1, a b with a(s) = b^-1 s(b).

    b is the product of all values of a raised to -(|gamma|^-1 mod exp A).
    """
    M = a.parent
    G, A = M.gamma, M.coeff
    if not A.is_abelian:
        raise InputError("coprime splitting needs abelian coefficients")
    if math.gcd(G.order, A.order) != 1:
        raise InputError(f"orders {G.order} and {A.order} are not coprime")
    total = A.identity
    for v in a.values:
        total = A.mul(total, v)
    inv_m = pow(G.order, -1, A.exponent) if A.exponent > 1 else 0
    b = A.power(total, -inv_m)
    for s in range(G.order):
        if a.values[s] != A.mul(int(A.inv[b]), M.act(s, b)):
            raise CheckFailure(f"averaged element does not split the cocycle at s={s}")
    return b
