"""Homogeneous spaces with a symmetry group, and their orbit spaces.

A ``HomogeneousSpace`` packages a gamma-group G, a transitive G-set X and a
compatible gamma-action on X. Fixed points of gamma play the role of
rational points; ``descent_report`` matches G^gamma-orbits on rational points
with the kernel of H^1(gamma, Stab(c)) -> H^1(gamma, G).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from .cohomology import (
    Cocycle,
    GammaGroup,
    H1Classes,
    automorphism_group,
    h1,
    induced_h1_map,
)
from .errors import InputError
from .groups import FiniteGroup, GroupAction, GroupHom, Subgroup, homomorphisms, small_groups


class HomogeneousSpace:
    def __init__(self, grp: GammaGroup, pts: GroupAction, gact: GroupAction, check: bool = True):
        if pts.group is not grp.gamma or gact.group is not grp.coeff:
            raise InputError("actions do not match the gamma-group")
        if pts.npoints != gact.npoints:
            raise InputError("the two actions act on different point sets")
        self.grp, self.pts, self.gact = grp, pts, gact
        if check:
            self.verify()

    @property
    def sym(self) -> FiniteGroup:
        return self.grp.gamma

    @property
    def npoints(self) -> int:
        return self.pts.npoints

    def verify(self) -> None:
        if not self.gact.is_transitive:
            raise InputError("G does not act transitively on X")
        S, G = self.sym, self.grp.coeff
        for s in range(S.order):
            # s(g·x) == (s·g)·(s·x)
            lhs = self.pts.table[s][self.gact.table]
            rhs = self.gact.table[self.grp.action[s]][:, self.pts.table[s]]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                g, x = map(int, bad[0])
                raise InputError(f"equivariance fails for s={s}, g={g}, x={x}")

    def to_json(self) -> dict:
        return {
            "gamma": self.sym.table.tolist(),
            "group": self.grp.coeff.table.tolist(),
            "action": self.grp.action.tolist(),
            "points": self.npoints,
            "gamma_on_points": self.pts.table.tolist(),
            "group_on_points": self.gact.table.tolist(),
        }


def rational_points(H: HomogeneousSpace) -> list[int]:
    return H.pts.fixed_points()


def orbit_space(H: HomogeneousSpace) -> list[list[int]]:
    """Orbits of the gamma-fixed subgroup of G on the rational points."""
    rat = rational_points(H)
    fixed = H.grp.fixed_subgroup.sorted()
    seen: set[int] = set()
    out = []
    for x in rat:
        if x in seen:
            continue
        orb = sorted({int(H.gact.table[g, x]) for g in fixed})
        seen.update(orb)
        out.append(orb)
    return out


def stabilizer_gamma_group(H: HomogeneousSpace, c: int) -> tuple[GammaGroup, GroupHom]:
    """Stab(c) with the restricted gamma-action, and its inclusion into G."""
    if c not in rational_points(H):
        raise InputError(f"point {c} is not rational")
    stab = H.gact.stabilizer(c)
    K, inc = stab.as_group()
    pos = np.full(H.grp.coeff.order, -1)
    pos[inc.map] = np.arange(K.order)
    act = pos[H.grp.action[:, inc.map]]
    if (act < 0).any():
        raise InputError("stabilizer is not gamma-stable")
    return GammaGroup(H.sym, K, act, check=False), inc


def transporters(H: HomogeneousSpace, c: int, v: int) -> list[int]:
    return [int(g) for g in np.flatnonzero(H.gact.table[:, c] == v)]


def cocycle_of_point(H: HomogeneousSpace, c: int, v: int, g: int | None = None,
                     stab: tuple[GammaGroup, GroupHom] | None = None) -> Cocycle:
    """The cocycle s -> g^-1 s(g) in Stab(c), for a transporter g with g·c = v."""
    rat = rational_points(H)
    if c not in rat or v not in rat:
        raise InputError("both points must be rational")
    K, inc = stab or stabilizer_gamma_group(H, c)
    if g is None:
        gs = transporters(H, c, v)
        if not gs:
            raise InputError(f"no group element carries {c} to {v}")
        g = gs[0]
    elif H.gact(g, c) != v:
        raise InputError(f"element {g} does not carry {c} to {v}")
    G = H.grp.coeff
    pos = {int(x): i for i, x in enumerate(inc.map)}
    vals = []
    for s in range(H.sym.order):
        x = G.mul(int(G.inv[g]), H.grp.act(s, g))
        if x not in pos:
            raise InputError("transported value leaves the stabilizer")
        vals.append(pos[x])
    cocycle = Cocycle(K, tuple(vals))
    if cocycle.violation() is not None:
        raise InputError("point cocycle fails the cocycle identity")
    return cocycle


@dataclass
class DescentReport:
    base_point: int
    orbits: list[list[int]]
    stab_h1: H1Classes
    kernel: list[int]
    matching: list[tuple[int, int]]
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "base_point": self.base_point,
            "orbits": self.orbits,
            "stab_h1_classes": len(self.stab_h1),
            "kernel": self.kernel,
            "matching": [list(m) for m in self.matching],
            "passed": self.passed,
            "violations": self.violations,
        }


def descent_report(H: HomogeneousSpace, c: int) -> DescentReport:
    """Check that orbit -> class of its point cocycle is a well-defined bijection onto the kernel."""
    K, inc = stab = stabilizer_gamma_group(H, c)
    hk = h1(K)
    kmap = induced_h1_map(inc, K, H.grp, source_h1=hk)
    kernel = kmap.kernel
    orbits = orbit_space(H)
    violations = []
    matching = []
    for i, orb in enumerate(orbits):
        seen = set()
        for v in orb:
            for g in transporters(H, c, v):
                seen.add(hk.class_of(cocycle_of_point(H, c, v, g, stab)))
        if len(seen) != 1:
            violations.append(f"orbit {i} maps to several classes {sorted(seen)}")
        matching.append((i, min(seen)))
    images = [m[1] for m in matching]
    if len(set(images)) != len(images):
        violations.append(f"map on orbits is not injective: {matching}")
    if sorted(set(images)) != sorted(kernel):
        violations.append(f"image {sorted(set(images))} differs from kernel {kernel}")
    return DescentReport(c, orbits, hk, kernel, matching, violations)


# -- instance construction ------------------------------------------------


def coset_space(M: GammaGroup, H: Subgroup, twist: Cocycle | None = None) -> HomogeneousSpace:
    """G/H with G acting by left multiplication, gamma acting on cosets.

    H must be gamma-stable. With ``twist`` = a cocycle a valued in G, gamma
    acts on G by s -> a(s) s(g) a(s)^-1 and on cosets by x -> a(s) s(x).
    """
    G, S = M.coeff, M.gamma
    if any(M.act(s, h) not in H for s in range(S.order) for h in H.members):
        raise InputError("subgroup is not gamma-stable")
    cosets = H.left_cosets()
    which = np.empty(G.order, dtype=np.int64)
    for i, cs in enumerate(cosets):
        which[list(cs)] = i
    reps = np.array([cs[0] for cs in cosets])
    gact = which[G.table[:, reps]]
    pts = which[M.action[:, reps]]
    grp = M
    if twist is not None:
        if twist.parent is not M:
            raise InputError("twisting cocycle belongs to another gamma-group")
        a = np.asarray(twist.values)
        conj = G.table[G.table[a[:, None], M.action], G.inv[a][:, None]]
        grp = GammaGroup(S, G, conj, check=False)
        pts = gact[a[:, None], pts]
    return HomogeneousSpace(grp, GroupAction(S, pts, check=False), GroupAction(G, gact, check=False), check=False)


def _conjugacy_reps(homs: list[np.ndarray], Aut: FiniteGroup) -> list[np.ndarray]:
    """One homomorphism gamma -> Aut per Aut-conjugacy class (least table first)."""
    seen = set()
    reps = []
    for h in homs:
        key = tuple(h)
        if key in seen:
            continue
        orbit = {tuple(int(Aut.conj(c, x)) for x in h) for c in range(Aut.order)}
        seen |= orbit
        reps.append(np.array(min(orbit)))
    return reps


@dataclass
class DescentInstance:
    label: str
    space: HomogeneousSpace


def generate_instances(max_group: int = 12, max_gamma: int = 6, seed: int | None = None,
                       limit: int | None = None) -> Iterator[DescentInstance]:
    """Enumerate the descent test family.

    For gamma (|gamma| <= max_gamma) and G (|G| <= max_group) from the group
    catalog: one action per Aut(G)-conjugacy class of gamma -> Aut(G), every
    gamma-stable subgroup H, and X = G/H twisted by each H^1 representative.
    With ``seed`` the family is shuffled and, with ``limit``, truncated.
    """
    items = []
    gammas = small_groups(max_gamma)
    for G in small_groups(max_group):
        Aut, auts = automorphism_group(G)
        for S in gammas:
            homs = list(homomorphisms(S, Aut))
            for hi, hom in enumerate(_conjugacy_reps(homs, Aut)):
                items.append((S, G, Aut, auts, hom, hi))
    if seed is not None:
        random.Random(seed).shuffle(items)
    count = 0
    for S, G, Aut, auts, hom, hi in items:
        M = GammaGroup.from_automorphisms(S, G, hom, auts)
        stable = [H for H in G.subgroups if all(M.act(s, h) in H for s in S.generators for h in H.members)]
        reps = h1(M).representatives
        for H in stable:
            for ti, a in enumerate(reps):
                twist = None if a.is_trivial() else a
                yield DescentInstance(f"{S.name}|{G.name}|act{hi}|H{H.order}:{min(H.members - {G.identity}, default=0)}|tw{ti}",
                                      coset_space(M, H, twist))
                count += 1
                if limit is not None and count >= limit:
                    return
