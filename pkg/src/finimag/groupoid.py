"""Finite connected groupoids with a symmetry group acting by functors.

Morphisms are integers ``0..M-1`` with ``src``/``dst`` arrays and a
composition table ``comp[f, g] = f∘g`` (``-1`` when ``src(f) != dst(g)``).
A subgroup of the symmetry group plays the role of a rationality level:
objects and morphisms fixed by it are the "rational" ones.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cohomology import Cocycle, GammaGroup, automorphism_group, coprime_splitting
from .errors import BudgetError, CheckFailure, InputError
from .groups import (
    FiniteGroup,
    GroupAction,
    Subgroup,
    group_by_name,
    homomorphisms,
)


class SymGroupoid:
    def __init__(self, nobj: int, src, dst, comp, sym: FiniteGroup, obj_act, mor_act, check: bool = True):
        self.nobj = int(nobj)
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.comp = np.asarray(comp, dtype=np.int64)
        self.sym = sym
        self.obj_act = np.asarray(obj_act, dtype=np.int64).reshape(sym.order, self.nobj)
        self.mor_act = np.asarray(mor_act, dtype=np.int64).reshape(sym.order, len(self.src))
        for arr in (self.src, self.dst, self.comp, self.obj_act, self.mor_act):
            arr.setflags(write=False)
        M = len(self.src)
        if self.comp.shape != (M, M) or self.dst.shape != (M,):
            raise InputError("composition table shape does not match the morphism count")
        if M and (self.src.max() >= self.nobj or self.dst.max() >= self.nobj or self.src.min() < 0):
            raise InputError("morphism endpoints out of range")
        self._homsets: dict[tuple[int, int], list[int]] = {}
        for f in range(M):
            self._homsets.setdefault((int(self.src[f]), int(self.dst[f])), []).append(f)
        if check:
            self.verify()

    @property
    def nmor(self) -> int:
        return len(self.src)

    def __repr__(self) -> str:
        return f"SymGroupoid(objects={self.nobj}, morphisms={self.nmor}, sym={self.sym.name})"

    def mor(self, a: int, b: int) -> list[int]:
        return self._homsets.get((a, b), [])

    def aut(self, a: int) -> list[int]:
        return self.mor(a, a)

    def compose(self, f: int, g: int) -> int:
        h = int(self.comp[f, g])
        if h < 0:
            raise InputError(f"morphisms {f} and {g} are not composable")
        return h

    @cached_property
    def ident(self) -> np.ndarray:
        out = np.full(self.nobj, -1, dtype=np.int64)
        for a in range(self.nobj):
            into = np.flatnonzero(self.dst == a)
            for e in self.aut(a):
                if (self.comp[e, into] == into).all():
                    out[a] = e
                    break
            if out[a] < 0:
                raise InputError(f"object {a} has no identity morphism")
        return out

    @cached_property
    def inv(self) -> np.ndarray:
        out = np.full(self.nmor, -1, dtype=np.int64)
        for f in range(self.nmor):
            a, b = int(self.src[f]), int(self.dst[f])
            for g in self.mor(b, a):
                if self.comp[g, f] == self.ident[a] and self.comp[f, g] == self.ident[b]:
                    out[f] = g
                    break
            if out[f] < 0:
                raise InputError(f"morphism {f} is not invertible")
        return out

    def verify(self) -> None:
        src, dst, comp, M = self.src, self.dst, self.comp, self.nmor
        composable = src[:, None] == dst[None, :]
        if ((comp >= 0) != composable).any():
            f, g = map(int, np.argwhere((comp >= 0) != composable)[0])
            raise InputError(f"composition defined exactly when src(f) == dst(g) fails at ({f}, {g})")
        fi, gi = np.nonzero(composable)
        h = comp[fi, gi]
        if (src[h] != src[gi]).any() or (dst[h] != dst[fi]).any():
            raise InputError("composite has wrong endpoints")
        for f in range(M):
            # (f g) k == f (g k) for composable g, k
            gs = np.flatnonzero(composable[f])
            if not len(gs):
                continue
            fg = comp[f, gs]
            left = comp[fg][:, :]  # rows: (f g) ∘ k
            right = np.where(comp[gs] >= 0, comp[f][np.maximum(comp[gs], 0)], -1)
            if (left != right).any():
                g, k = np.argwhere(left != right)[0]
                raise InputError(f"associativity fails at ({f}, {int(gs[g])}, {int(k)})")
        self.ident, self.inv  # noqa: B018 - raise if missing
        for a in range(self.nobj):
            for b in range(self.nobj):
                if not self.mor(a, b):
                    raise InputError(f"groupoid is not connected: Mor({a}, {b}) is empty")
        S = self.sym
        GroupAction(S, self.obj_act)
        GroupAction(S, self.mor_act)
        for s in range(S.order):
            ma, oa = self.mor_act[s], self.obj_act[s]
            if (src[ma] != oa[src]).any() or (dst[ma] != oa[dst]).any():
                raise InputError(f"symmetry {s} does not respect endpoints")
            if (comp[ma[fi], ma[gi]] != ma[h]).any():
                raise InputError(f"symmetry {s} does not respect composition")
            if (ma[self.ident] != self.ident[oa]).any():
                raise InputError(f"symmetry {s} does not respect identities")

    # -- rationality ------------------------------------------------------

    def _sub_elements(self, sub) -> list[int]:
        if sub is None:
            return list(range(self.sym.order))
        if isinstance(sub, Subgroup):
            return sub.sorted()
        return sorted(int(s) for s in sub)

    def fixed_objects(self, sub=None) -> list[int]:
        rows = self.obj_act[self._sub_elements(sub)]
        return [int(a) for a in np.flatnonzero((rows == np.arange(self.nobj)).all(axis=0))]

    def fixed_morphisms(self, sub=None) -> np.ndarray:
        rows = self.mor_act[self._sub_elements(sub)]
        return (rows == np.arange(self.nmor)).all(axis=0)

    def aut_group(self, a: int) -> tuple[FiniteGroup, list[int]]:
        """Aut(a) as a table group; group element i is morphism ``ids[i]``."""
        ids = self.aut(a)
        pos = {f: i for i, f in enumerate(ids)}
        table = [[pos[int(self.comp[f, g])] for g in ids] for f in ids]
        return FiniteGroup(table, name=f"Aut({a})", check=False), ids

    def is_abelian(self) -> bool:
        return all(self.aut_group(a)[0].is_abelian for a in range(self.nobj))


def action_groupoid(M: GammaGroup, act: GroupAction, sym_on_points: GroupAction) -> SymGroupoid:
    """Objects are points v; morphisms v -> g·v are pairs (v, g) stored at v*|G| + g.

    The symmetry group of ``M`` acts on G through M and on points through
    ``sym_on_points``.
    """
    G, S = M.coeff, M.gamma
    V = act.npoints
    n = G.order
    ids = np.arange(V * n)
    v, g = ids // n, ids % n
    src = v
    dst = act.table[g, v]
    comp = np.where(
        src[:, None] == dst[None, :],
        v[None, :] * n + G.table[g[:, None], g[None, :]],
        -1,
    )
    obj_act = sym_on_points.table
    mor_act = obj_act[:, v] * n + M.action[:, g]
    return SymGroupoid(V, src, dst, comp, S, obj_act, mor_act, check=False)


def subgroupoid(gpd: SymGroupoid, keep: Iterable[int]) -> tuple[SymGroupoid, np.ndarray]:
    """Wide subgroupoid on the morphisms ``keep`` (closed, symmetric); returns it and the inclusion."""
    ids = np.array(sorted(set(int(f) for f in keep)), dtype=np.int64)
    pos = np.full(gpd.nmor, -1, dtype=np.int64)
    pos[ids] = np.arange(len(ids))
    sub = gpd.comp[np.ix_(ids, ids)]
    comp = np.where(sub >= 0, pos[np.maximum(sub, 0)], -1)
    if ((sub >= 0) & (comp < 0)).any():
        raise InputError("morphism subset is not closed under composition")
    mor_act = pos[gpd.mor_act[:, ids]]
    if (mor_act < 0).any():
        raise InputError("morphism subset is not stable under the symmetry group")
    out = SymGroupoid(gpd.nobj, gpd.src[ids], gpd.dst[ids], comp, gpd.sym, gpd.obj_act, mor_act, check=False)
    return out, ids


def iso_classes(gpd: SymGroupoid, sub=None) -> list[list[int]]:
    """Partition of the fixed objects; joined when a fixed morphism connects them."""
    objs = gpd.fixed_objects(sub)
    fixed = gpd.fixed_morphisms(sub)
    parent = {a: a for a in objs}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in np.flatnonzero(fixed):
        a, b = int(gpd.src[f]), int(gpd.dst[f])
        if a in parent and b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for a in objs:
        groups.setdefault(find(a), []).append(a)
    return sorted(groups.values())


# -- normal families and quotients ----------------------------------------


class NormalFamily:
    """For each object a, a normal subgroup N_a of Aut(a) (as morphism ids)."""

    def __init__(self, gpd: SymGroupoid, members: Mapping[int, Iterable[int]] | Sequence[Iterable[int]], check: bool = True):
        items = members.items() if isinstance(members, Mapping) else enumerate(members)
        self.gpd = gpd
        self.members = {int(a): frozenset(int(f) for f in fs) for a, fs in items}
        if sorted(self.members) != list(range(gpd.nobj)):
            raise InputError("normal family must name a subgroup for every object")
        if check:
            self.verify()

    def __getitem__(self, a: int) -> frozenset[int]:
        return self.members[a]

    def verify(self) -> None:
        gpd = self.gpd
        for a, N in self.members.items():
            autg, ids = gpd.aut_group(a)
            pos = {f: i for i, f in enumerate(ids)}
            if not N <= set(ids):
                raise InputError(f"N_{a} is not contained in Aut({a})")
            sub = Subgroup(autg, [pos[f] for f in N])
            if not sub.is_normal():
                raise InputError(f"N_{a} is not normal in Aut({a})")
        for f in range(gpd.nmor):
            a, b = int(gpd.src[f]), int(gpd.dst[f])
            fi = int(gpd.inv[f])
            moved = {int(gpd.comp[gpd.comp[f, n], fi]) for n in self.members[a]}
            if moved != self.members[b]:
                raise InputError(f"family is not coherent: morphism {f} does not carry N_{a} onto N_{b}")
        for s in range(gpd.sym.order):
            for a, N in self.members.items():
                if {int(gpd.mor_act[s, n]) for n in N} != self.members[int(gpd.obj_act[s, a])]:
                    raise InputError(f"family is not stable under symmetry {s}")

    def restrict(self, sub: SymGroupoid, ids: np.ndarray) -> NormalFamily:
        """Reindex into the subgroupoid ``sub`` whose morphism ``i`` is parent morphism ``ids[i]``."""
        pos = {int(f): i for i, f in enumerate(ids)}
        return NormalFamily(sub, {a: [pos[f] for f in N] for a, N in self.members.items()}, check=False)

    def on(self, gpd: SymGroupoid, check: bool = True) -> NormalFamily:
        return NormalFamily(gpd, self.members, check=check)

    def order(self, a: int) -> int:
        return len(self.members[a])

    @classmethod
    def trivial(cls, gpd: SymGroupoid) -> NormalFamily:
        return cls(gpd, {a: [int(gpd.ident[a])] for a in range(gpd.nobj)}, check=False)

    @classmethod
    def full(cls, gpd: SymGroupoid) -> NormalFamily:
        return cls(gpd, {a: gpd.aut(a) for a in range(gpd.nobj)}, check=False)


def quotient_groupoid(gpd: SymGroupoid, N: NormalFamily) -> tuple[SymGroupoid, np.ndarray]:
    """Same objects, Mor(a, b) replaced by the classes N_b∘f (= f∘N_a).

    Classes are numbered by their least member. Returns the quotient and
    the projection (morphism -> class).
    """
    comp = gpd.comp
    proj = np.full(gpd.nmor, -1, dtype=np.int64)
    classes = []
    for f in range(gpd.nmor):
        if proj[f] >= 0:
            continue
        a, b = int(gpd.src[f]), int(gpd.dst[f])
        left = {int(comp[n, f]) for n in N[b]}
        right = {int(comp[f, n]) for n in N[a]}
        if left != right:
            raise InputError(f"normal family is not coherent at morphism {f}")
        proj[sorted(left)] = len(classes)
        classes.append(sorted(left))
    reps = np.array([c[0] for c in classes], dtype=np.int64)
    k = len(classes)
    raw = comp[np.ix_(reps, reps)]
    qcomp = np.where(raw >= 0, proj[np.maximum(raw, 0)], -1)
    # well-definedness on all composable pairs
    fi, gi = np.nonzero(comp >= 0)
    if (proj[comp[fi, gi]] != qcomp[proj[fi], proj[gi]]).any():
        raise CheckFailure("composition does not descend to the quotient")
    mor_act = proj[gpd.mor_act[:, reps]]
    if (proj[gpd.mor_act] != mor_act[:, proj]).any():
        raise CheckFailure("symmetry action does not descend to the quotient")
    Q = SymGroupoid(gpd.nobj, gpd.src[reps], gpd.dst[reps], qcomp, gpd.sym, gpd.obj_act, mor_act, check=False)
    return Q, proj


def canonical_transport(gpd: SymGroupoid) -> dict[tuple[int, int], dict[int, int]]:
    """For abelian automorphism groups, the common map Aut(a) -> Aut(b), g -> f g f^-1."""
    for a in range(gpd.nobj):
        if not gpd.aut_group(a)[0].is_abelian:
            raise InputError(f"Aut({a}) is not abelian")
    out = {}
    comp, inv = gpd.comp, gpd.inv
    for a in range(gpd.nobj):
        for b in range(gpd.nobj):
            maps = set()
            for f in gpd.mor(a, b):
                maps.add(tuple(int(comp[comp[f, g], inv[f]]) for g in gpd.aut(a)))
            if len(maps) != 1:
                raise CheckFailure(f"transport Aut({a}) -> Aut({b}) depends on the morphism")
            out[(a, b)] = dict(zip(gpd.aut(a), maps.pop()))
    return out


# -- torsors and averaging -------------------------------------------------


class Torsor:
    """A set with a free transitive action of an abelian group."""

    def __init__(self, group: FiniteGroup, act: GroupAction, check: bool = True):
        if act.group is not group:
            raise InputError("action belongs to another group")
        self.group, self.act = group, act
        if check:
            if not group.is_abelian:
                raise InputError("torsor group must be abelian")
            if act.npoints != group.order or not act.is_transitive:
                raise InputError("action is not free and transitive")

    @property
    def npoints(self) -> int:
        return self.act.npoints

    def difference(self, y: int, y0: int) -> int:
        """The unique group element a with a·y0 = y."""
        return int(np.flatnonzero(self.act.table[:, y0] == y)[0])


def torsor_average(Y: Torsor, S: Iterable[int], base: int | None = None) -> int:
    """Average of a finite subset: y0 + |S|^-1 Σ (s - y0), basepoint independent."""
    pts = sorted(set(int(s) for s in S))
    if not pts:
        raise InputError("cannot average an empty set")
    A = Y.group
    if math.gcd(len(pts), A.order) != 1:
        raise InputError(f"set size {len(pts)} is not coprime to the group order {A.order}")
    y0 = pts[0] if base is None else int(base)
    total = A.identity
    for s in pts:
        total = A.mul(total, Y.difference(s, y0))
    k = pow(len(pts), -1, A.exponent) if A.exponent > 1 else 0
    return Y.act(A.power(total, k), y0)


def lift_fixed_point(
    Y: Torsor, sub: Subgroup, sym: FiniteGroup, on_group: GammaGroup, on_points: GroupAction, q: Iterable[int]
) -> int:
    """A sym-fixed point inside the sub-orbit ``q`` of Y.

    ``on_group`` is the action of ``sym`` on Y's group, ``on_points`` the
    compatible action on Y; ``q`` must be a sym-stable orbit of the subgroup
    ``sub``, whose order must be coprime to |sym|.
    """
    A = Y.group
    q = frozenset(int(x) for x in q)
    if on_group.gamma is not sym or on_group.coeff is not A or on_points.group is not sym:
        raise InputError("symmetry actions do not match")
    if math.gcd(sym.order, sub.order) != 1:
        raise InputError(f"|sym| = {sym.order} and |N-| = {sub.order} are not coprime")
    y0 = min(q)
    if frozenset(Y.act(n, y0) for n in sub.members) != q:
        raise InputError("q is not an orbit of the subgroup")
    for s in range(sym.order):
        if frozenset(on_points(s, y) for y in q) != q:
            raise InputError(f"q is not fixed by symmetry {s}")
        for n in sub.members:
            if on_group.act(s, n) not in sub:
                raise InputError("subgroup is not stable under the symmetry group")
        for a in A.generators:
            for y in range(Y.npoints):
                if on_points(s, Y.act(a, y)) != Y.act(on_group.act(s, a), on_points(s, y)):
                    raise InputError("symmetry action on points is not compatible with the group action")
    K, inc = sub.as_group()
    pos = {int(x): i for i, x in enumerate(inc.map)}
    kact = np.array([[pos[on_group.act(s, int(x))] for x in inc.map] for s in range(sym.order)])
    MK = GammaGroup(sym, K, kact, check=False)
    a = Cocycle(MK, tuple(pos[Y.difference(on_points(s, y0), y0)] for s in range(sym.order)))
    if a.violation() is not None:
        raise CheckFailure("translation map is not a cocycle")
    b = coprime_splitting(a)
    y = Y.act(int(inc.map[K.inv[b]]), y0)
    if any(on_points(s, y) != y for s in range(sym.order)):
        raise CheckFailure("lifted point is not fixed")
    return y


# -- the reduction pipeline -----------------------------------------------


@dataclass
class ReductionCertificate:
    step: str
    verdicts: list[dict] = field(default_factory=list)

    @property
    def injective(self) -> bool:
        return all(v["injective"] for v in self.verdicts)

    @property
    def surjective(self) -> bool:
        return all(v["surjective"] for v in self.verdicts)

    def to_json(self) -> dict:
        return {"step": self.step, "injective": self.injective, "surjective": self.surjective,
                "verdicts": self.verdicts}


def _iso_map_verdict(src: SymGroupoid, tgt: SymGroupoid, obj_map: Sequence[int], sub: Subgroup) -> dict:
    cs, ct = iso_classes(src, sub), iso_classes(tgt, sub)
    where = {a: i for i, c in enumerate(ct) for a in c}
    images = []
    for cls in cs:
        img = {where.get(int(obj_map[a]), -1) for a in cls}
        if len(img) != 1 or -1 in img:
            raise CheckFailure("functor does not induce a map on isomorphism classes")
        images.append(img.pop())
    return {
        "subgroup": sub.sorted(),
        "source_classes": len(cs),
        "target_classes": len(ct),
        "map": images,
        "injective": len(set(images)) == len(images),
        "surjective": set(images) == set(range(len(ct))),
        "preimages": {str(j): cs[images.index(j)][0] for j in sorted(set(images))},
    }


@dataclass
class PipelineResult:
    base: int
    sections: dict[tuple[int, int], int]
    g1: SymGroupoid
    g1_ids: np.ndarray
    g2: SymGroupoid
    g2_proj: np.ndarray
    g3: SymGroupoid
    relabel: list[int]
    certificates: list[ReductionCertificate]
    composite: list[dict]

    @property
    def passed(self) -> bool:
        s1, s2, s3 = self.certificates
        return s1.surjective and s2.injective and s3.injective and s3.surjective and all(
            c["bijective"] for c in self.composite)

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "objects": self.g1.nobj,
            "morphisms": [self.g1.nmor, self.g2.nmor, self.g3.nmor],
            "certificates": [c.to_json() for c in self.certificates],
            "composite": self.composite,
            "passed": self.passed,
        }


def _sym_subgroup_actions(gpd: SymGroupoid, sub: Subgroup, a: int, b: int):
    """sub as a group acting on Aut(b) (group indices) and on Mor(a, b) (list positions)."""
    S, inc = sub.as_group()
    autg, ids = gpd.aut_group(b)
    apos = {f: i for i, f in enumerate(ids)}
    homs = gpd.mor(a, b)
    hpos = {f: i for i, f in enumerate(homs)}
    on_group = GammaGroup(S, autg, [[apos[int(gpd.mor_act[s, f])] for f in ids] for s in inc.map], check=False)
    on_points = GroupAction(S, [[hpos[int(gpd.mor_act[s, f])] for f in homs] for s in inc.map], check=False)
    torsor = Torsor(autg, GroupAction(autg, [[hpos[int(gpd.comp[n, f])] for f in homs] for n in ids], check=False),
                    check=False)
    return S, on_group, on_points, torsor, homs


def reduce_pipeline(gpd: SymGroupoid, N: NormalFamily, Nminus: NormalFamily) -> PipelineResult:
    """Reduce Γ to Γ1 (rigidified by averaged sections), Γ2 = Γ1/N-, Γ3 (objects relabeled).

    Guards: abelian automorphism groups, N- inside N, and |Σ| coprime to
    both |Aut(a)/N_a| and |N-_a| for every object a.
    """
    S = gpd.sym
    if not gpd.is_abelian():
        raise InputError("reduce_pipeline needs abelian automorphism groups")
    for a in range(gpd.nobj):
        if not Nminus[a] <= N[a]:
            raise InputError(f"N-_{a} is not contained in N_{a}")
        q = len(gpd.aut(a)) // N.order(a)
        if math.gcd(S.order, q) != 1:
            raise InputError(f"averaging guard fails at ({a}, {a}): |Aut/N| = {q}, |Σ| = {S.order}")
        if math.gcd(S.order, Nminus.order(a)) != 1:
            raise InputError(f"divisibility guard fails at ({a}, {a}): |N-| = {Nminus.order(a)}, |Σ| = {S.order}")
    fixed = gpd.fixed_objects()
    if not fixed:
        raise InputError("no object is fixed by the whole symmetry group")
    base = fixed[0]

    Q, proj = quotient_groupoid(gpd, N)
    # c(a) in Mor_Q(base, a): average over the stabilizer orbit, transported along Σ-orbits
    section: dict[int, int] = {}
    for a in range(Q.nobj):
        if a in section:
            continue
        stab = [s for s in range(S.order) if gpd.obj_act[s, a] == a]
        autg, ids = Q.aut_group(a)
        homs = Q.mor(base, a)
        hpos = {f: i for i, f in enumerate(homs)}
        Y = Torsor(autg, GroupAction(autg, [[hpos[int(Q.comp[n, f])] for f in homs] for n in ids], check=False),
                   check=False)
        f0 = homs[0]
        orbit = {hpos[int(Q.mor_act[s, f0])] for s in stab}
        if math.gcd(len(orbit), autg.order) != 1:
            raise InputError(f"averaging guard fails at ({base}, {a})")
        c = homs[torsor_average(Y, orbit)]
        if any(Q.mor_act[s, c] != c for s in stab):
            raise CheckFailure(f"averaged section at {a} is not fixed by its stabilizer")
        for s in range(S.order):
            section[int(gpd.obj_act[s, a])] = int(Q.mor_act[s, c])
    sections = {}
    for a in range(Q.nobj):
        for b in range(Q.nobj):
            sections[(a, b)] = int(Q.comp[section[b], Q.inv[section[a]]])
    for (a, b), cab in sections.items():
        for s in range(S.order):
            if Q.mor_act[s, cab] != sections[(int(gpd.obj_act[s, a]), int(gpd.obj_act[s, b]))]:
                raise CheckFailure("sections are not equivariant")

    keep = [f for f in range(gpd.nmor) if proj[f] == sections[(int(gpd.src[f]), int(gpd.dst[f]))]]
    g1, ids1 = subgroupoid(gpd, keep)
    nm1 = Nminus.restrict(g1, ids1)
    g2, proj2 = quotient_groupoid(g1, nm1)

    codes = [tuple(g2.mor(base, a)) for a in range(g2.nobj)]
    order = sorted(range(g2.nobj), key=lambda a: codes[a])
    relabel = [0] * g2.nobj
    for new, old in enumerate(order):
        relabel[old] = new
    rl = np.array(relabel)
    g3 = SymGroupoid(g2.nobj, rl[g2.src], rl[g2.dst], g2.comp, S,
                     rl[g2.obj_act][:, np.argsort(rl)], g2.mor_act, check=False)

    cert1 = ReductionCertificate("inclusion G1 -> G")
    cert2 = ReductionCertificate("quotient G1 -> G2 = G1/N-")
    cert3 = ReductionCertificate("relabel G2 -> G3")
    composite = []
    identity_objs = list(range(gpd.nobj))
    for sub in S.subgroups:
        cert1.verdicts.append(_iso_map_verdict(g1, gpd, identity_objs, sub))
        v2 = _iso_map_verdict(g1, g2, identity_objs, sub)
        v2["lifts"] = _lift_witnesses(g1, g2, proj2, nm1, sub)
        cert2.verdicts.append(v2)
        cert3.verdicts.append(_iso_map_verdict(g2, g3, relabel, sub))
        n0, n3 = len(iso_classes(gpd, sub)), len(iso_classes(g3, sub))
        composite.append({"subgroup": sub.sorted(), "source_classes": n0, "target_classes": n3,
                          "bijective": n0 == n3})
    return PipelineResult(base, sections, g1, ids1, g2, proj2, g3, relabel, [cert1, cert2, cert3], composite)


def _lift_witnesses(g1: SymGroupoid, g2: SymGroupoid, proj2: np.ndarray, nm1: NormalFamily, sub: Subgroup) -> list[list[int]]:
    """For fixed objects joined by a fixed G2-morphism, a fixed G1-morphism built by lifting."""
    fixed2 = g2.fixed_morphisms(sub)
    objs = g2.fixed_objects(sub)
    out = []
    for a in objs:
        for b in objs:
            qs = [q for q in g2.mor(a, b) if fixed2[q]]
            if not qs:
                continue
            S, on_group, on_points, Y, homs = _sym_subgroup_actions(g1, sub, a, b)
            autg, ids = g1.aut_group(b)
            apos = {f: i for i, f in enumerate(ids)}
            nminus = Subgroup(autg, [apos[f] for f in nm1[b]], check=False)
            fiber = [i for i, f in enumerate(homs) if proj2[f] == qs[0]]
            y = lift_fixed_point(Y, nminus, S, on_group, on_points, fiber)
            f = homs[y]
            if not g1.fixed_morphisms(sub)[f] or proj2[f] != qs[0]:
                raise CheckFailure("lifted morphism is not a fixed preimage")
            out.append([a, b, qs[0], f])
    return out


# -- random instances ---------------------------------------------------------

# (group name, order of the abelian point stabilizer T to pick)
_GROUPOID_BASES = [
    ("C6", 6), ("C15", 15), ("S3", 3), ("S3", 2), ("D4", 4), ("D4", 2), ("A4", 4), ("A4", 3),
    ("D5", 5), ("D5", 2), ("D6", 6), ("Dic3", 6), ("C2xC6", 6), ("C3xS3", 9), ("D15", 15),
    ("C2xC4", 4), ("Q8", 4), ("D9", 9), ("C12", 12), ("C3xS3", 3),
]


@dataclass
class GroupoidInstance:
    label: str
    gpd: SymGroupoid
    N: NormalFamily
    Nminus: NormalFamily


_AUT_CACHE: dict[str, tuple] = {}


def random_instance(rng: random.Random, max_tries: int = 200) -> GroupoidInstance:
    """A seeded random action groupoid Γ(G, G/T) with Σ acting through Aut(G).

    T is abelian and Σ-stable, N_a and N-_a are transports of Σ-stable
    subgroups N- <= N <= T chosen to satisfy the coprimality guards.
    """
    sym_names = ["C1", "C2", "C3", "C4", "C2xC2", "S3"]
    for _ in range(max_tries):
        gname, torder = rng.choice(_GROUPOID_BASES)
        if gname not in _AUT_CACHE:
            G = group_by_name(gname)
            _AUT_CACHE[gname] = (G, automorphism_group(G))
        G, (Aut, auts) = _AUT_CACHE[gname]
        Ts = [T for T in G.subgroups if T.order == torder and T.as_group()[0].is_abelian]
        T = rng.choice(Ts)
        S = group_by_name(rng.choice(sym_names))
        homs = [h for h in homomorphisms(S, Aut)
                if all(int(auts[h[s], t]) in T for s in S.generators for t in T.members)]
        if not homs:
            continue
        hom = rng.choice(homs)
        M = GammaGroup.from_automorphisms(S, G, hom, auts)
        stable = [H for H in G.subgroups if H <= T and all(M.act(s, h) in H for s in S.generators for h in H.members)]
        Ns = [H for H in stable if math.gcd(S.order, T.order // H.order) == 1]
        N = rng.choice(Ns)
        Nms = [H for H in stable if H <= N and math.gcd(S.order, H.order) == 1]
        nontrivial = [H for H in Nms if H.order > 1]
        # favour a nontrivial N- so the quotient step is exercised
        Nm = rng.choice(nontrivial if nontrivial and rng.random() < 0.75 else Nms)
        cosets = T.left_cosets()
        which = np.empty(G.order, dtype=np.int64)
        for i, cs in enumerate(cosets):
            which[list(cs)] = i
        reps = np.array([cs[0] for cs in cosets])
        act = GroupAction(G, which[G.table[:, reps]], check=False)
        sym_pts = GroupAction(S, which[M.action[:, reps]], check=False)
        gpd = action_groupoid(M, act, sym_pts)
        n = G.order

        def family(H):
            fam = {}
            for v, r in enumerate(reps):
                fam[v] = [v * n + G.conj(int(r), h) for h in H.members]
            return NormalFamily(gpd, fam, check=False)

        label = f"{gname}/T{torder}|{S.name}|N{N.order}|N-{Nm.order}"
        return GroupoidInstance(label, gpd, family(N), family(Nm))
    raise BudgetError("could not draw a groupoid instance satisfying the guards")


def random_instances(count: int, seed: int = 0) -> list[GroupoidInstance]:
    rng = random.Random(seed)
    return [random_instance(rng) for _ in range(count)]
