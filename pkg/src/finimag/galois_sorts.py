"""Galois sorts over a finite ambient action.

A finite group G acting on points stands in for the automorphisms of an
algebraic closure. Orbits are the irreducible objects, G-invariant function
graphs are the morphisms, and an orbit is Galois when its invariant
self-maps act regularly on it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import BudgetError, CheckFailure, InputError
from .groups import (
    FiniteGroup,
    GroupAction,
    GroupHom,
    Subgroup,
    find_isomorphism,
    permutation_group,
    quotient,
    small_groups,
)


class AmbientAction:
    def __init__(self, action: GroupAction, faithful: bool = True):
        self.action = action
        if faithful and not action.is_faithful:
            raise InputError("ambient action is not faithful")

    @property
    def group(self) -> FiniteGroup:
        return self.action.group

    @property
    def npoints(self) -> int:
        return self.action.npoints


@dataclass(frozen=True)
class IrrObject:
    points: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.points)


def irr_objects(A: AmbientAction, m: int) -> list[IrrObject]:
    if m < 1:
        raise InputError("orbit size must be at least 1")
    return [IrrObject(tuple(o)) for o in A.action.orbits if len(o) == m]


def invariant_morphisms(A: AmbientAction, x: IrrObject, y: IrrObject) -> list[tuple[int, ...]]:
    """G-invariant functions y -> x, as tuples f with f[i] the image of y.points[i].

    Such a map is fixed by where it sends the first point of y, which must
    go to a point whose stabilizer contains the stabilizer of that point.
    """
    act, G = A.action, A.group
    y0 = y.points[0]
    stab = A.action.stabilizer(y0).members
    ypos = {p: i for i, p in enumerate(y.points)}
    out = []
    for x0 in x.points:
        if any(act(g, x0) != x0 for g in stab):
            continue
        f = [-1] * y.size
        for g in range(G.order):
            f[ypos[act(g, y0)]] = act(g, x0)
        if -1 in f:
            raise InputError("y is not a single orbit")
        if set(f) != set(x.points):
            raise CheckFailure("invariant morphism is not surjective")
        out.append(tuple(f))
    return sorted(out)


def invariant_morphisms_bruteforce(A: AmbientAction, x: IrrObject, y: IrrObject) -> list[tuple[int, ...]]:
    act, G = A.action, A.group
    ypos = {p: i for i, p in enumerate(y.points)}
    out = []
    for f in itertools.product(x.points, repeat=y.size):
        if all(act(g, f[i]) == f[ypos[act(g, p)]] for g in G.generators for i, p in enumerate(y.points)):
            out.append(f)
    return sorted(out)


def _self_maps(A: AmbientAction, s: IrrObject) -> list[tuple[int, ...]]:
    """Invariant self-maps of s as permutations of positions 0..m-1."""
    pos = {p: i for i, p in enumerate(s.points)}
    return [tuple(pos[v] for v in f) for f in invariant_morphisms(A, s, s)]


def centralizer_in_symmetric(perms: list[tuple[int, ...]], m: int) -> list[tuple[int, ...]]:
    """Permutations of 0..m-1 commuting with every element of ``perms`` (a transitive group)."""
    # a commuting c is fixed by c(0): c(h(0)) = h(c(0))
    out = []
    for c0 in range(m):
        c = [-1] * m
        ok = True
        for h in perms:
            img = h[c0]
            if c[h[0]] not in (-1, img):
                ok = False
                break
            c[h[0]] = img
        if not ok or -1 in c or len(set(c)) != m:
            continue
        if all(c[h[i]] == h[c[i]] for h in perms for i in range(m)):
            out.append(tuple(c))
    return sorted(out)


@dataclass
class GalObject:
    obj: IrrObject
    h_s: list[tuple[int, ...]]
    gal_perms: list[tuple[int, ...]]

    @cached_property
    def gal(self) -> FiniteGroup:
        return permutation_group(self.gal_perms, name=f"Gal{list(self.obj.points)}")[0]

    @property
    def size(self) -> int:
        return self.obj.size


def regularity(A: AmbientAction, s: IrrObject) -> dict:
    """The three Galois tests on s; raises if they disagree."""
    hs = _self_maps(A, s)
    m = s.size
    transitive = {h[0] for h in hs} == set(range(m))
    free = all(all(h[i] != i for i in range(m)) for h in hs if h != tuple(range(m)))
    flags = {"order_is_m": len(hs) == m, "transitive": transitive, "regular": transitive and free}
    if len(set(flags.values())) != 1:
        raise CheckFailure(f"Galois criteria disagree on {s.points}: {flags}")
    return {"h_s": hs, "galois": flags["regular"], **flags}


def gal_objects(A: AmbientAction, m: int) -> list[GalObject]:
    out = []
    for s in irr_objects(A, m):
        r = regularity(A, s)
        if r["galois"]:
            out.append(GalObject(s, r["h_s"], centralizer_in_symmetric(r["h_s"], m)))
    return out


MAX_POWER_SORT = 10**6


def conjugacy_power_sort(g: GalObject, k: int) -> list[tuple[tuple[int, ...], ...]]:
    """Orbits of Gal(s) on Gal(s)^k under simultaneous conjugation."""
    G = g.gal
    if k < 0:
        raise InputError("k must be nonnegative")
    if G.order**k > MAX_POWER_SORT:
        raise BudgetError(f"|Gal|^k = {G.order ** k} exceeds {MAX_POWER_SORT}")
    seen = set()
    out = []
    for t in itertools.product(range(G.order), repeat=k):
        if t in seen:
            continue
        orb = sorted({tuple(G.conj(c, x) for x in t) for c in range(G.order)})
        seen.update(orb)
        out.append(tuple(orb))
    return out


@dataclass
class GalQuotientCertificate:
    kernel: Subgroup
    iso: GroupHom  # G/N -> Gal(s)
    canonical: bool

    def to_json(self) -> dict:
        return {"kernel": self.kernel.sorted(), "quotient_order": self.iso.source.order,
                "map": list(map(int, self.iso.map)), "canonical": self.canonical}


def verify_gal_quotient(A: AmbientAction, g: GalObject) -> GalQuotientCertificate:
    """Gal(s) ≅ G/N with N the kernel on s, via gN -> (g restricted to s)."""
    G, act = A.group, A.action
    pts = g.obj.points
    pos = {p: i for i, p in enumerate(pts)}
    N = G.subgroup(x for x in range(G.order) if all(act(x, p) == p for p in pts))
    Q, proj = quotient(G, N)
    Gal = g.gal
    elems = {tuple(p): i for i, p in enumerate(sorted(g.gal_perms))}
    mapping = [-1] * Q.order
    for x in range(G.order):
        rho = tuple(pos[act(x, p)] for p in pts)
        mapping[proj(x)] = elems.get(rho, -1)
    canonical = -1 not in mapping
    if canonical:
        iso = GroupHom(Q, Gal, mapping, check=False)
        if iso.violation() is not None or not (iso.is_injective and iso.is_surjective):
            canonical = False
    if not canonical:
        iso = find_isomorphism(Q, Gal)
        if iso is None:
            raise CheckFailure(f"Gal{list(pts)} is not isomorphic to G/N")
    return GalQuotientCertificate(N, iso, canonical)


def coset_action(G: FiniteGroup, H: Subgroup) -> GroupAction:
    cosets = H.left_cosets()
    which = [0] * G.order
    for i, cs in enumerate(cosets):
        for x in cs:
            which[x] = i
    reps = [cs[0] for cs in cosets]
    return GroupAction(G, [[which[G.mul(g, r)] for r in reps] for g in range(G.order)], check=False)


def coset_actions(max_order: int = 24, max_points: int = 8) -> Iterator[tuple[str, GroupAction]]:
    """All transitive actions G/H with |G| <= max_order and [G:H] <= max_points."""
    for G in small_groups(max_order):
        for H in G.subgroups:
            if H.index <= max_points:
                yield f"{G.name}/{H.order}:{H.sorted()[:4]}", coset_action(G, H)


def sorts_report(A: AmbientAction) -> dict:
    sizes = sorted({len(o) for o in A.action.orbits})
    objects = []
    for m in sizes:
        for s in irr_objects(A, m):
            r = regularity(A, s)
            entry = {"points": list(s.points), "m": m, "self_maps": len(r["h_s"]), "galois": r["galois"]}
            if r["galois"]:
                g = GalObject(s, r["h_s"], centralizer_in_symmetric(r["h_s"], m))
                entry["gal_order"] = g.gal.order
                entry["gal_name"] = gal_name(g.gal)
                entry["gal_table"] = g.gal.table.tolist()
                entry["quotient"] = verify_gal_quotient(A, g).to_json()
            objects.append(entry)
    return {"group_order": A.group.order, "points": A.npoints, "objects": objects}


def gal_name(G: FiniteGroup) -> str:
    """A catalog name when G matches one (by isomorphism), otherwise its order."""
    for H in small_groups(min(G.order, 24)):
        if H.order == G.order and find_isomorphism(H, G) is not None:
            return H.name
    return f"order{G.order}"
