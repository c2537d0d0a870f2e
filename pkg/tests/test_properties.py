import itertools
import json
from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from finimag.codings import (
    Sort,
    cover_is_surjective,
    fv_decompose,
    subgroup_stabilizer_code,
)
from finimag.cohomology import all_actions, cohomologous, factor_cocycle, h1, inflation_map, within_factorial_power
from finimag.descent import (
    cocycle_of_point,
    descent_report,
    generate_instances,
    orbit_space,
    rational_points,
    stabilizer_gamma_group,
    transporters,
)
from finimag.galois_sorts import (
    AmbientAction,
    IrrObject,
    _self_maps,
    centralizer_in_symmetric,
    coset_actions,
    invariant_morphisms,
)
from finimag.groupoid import Torsor, iso_classes, quotient_groupoid, random_instances, torsor_average
from finimag.groups import GroupAction, core_of_subgroup, group_by_name, make_cyclic, quotient, small_groups
from finimag.kummer import CycNumber, PuiseuxElement, Tower, ac, kummer_pairing, val

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

GROUPS = small_groups(24)
GAMMAS = [group_by_name(n) for n in ["C2", "C3", "C4", "C2xC2", "S3"]]
COEFFS = [group_by_name(n) for n in ["C2", "C3", "C4", "C5", "C2xC2", "S3", "C6", "D4", "Q8"]]
ACTIONS = [M for S in GAMMAS for A in COEFFS for M in all_actions(S, A)]
DESCENT = list(generate_instances(max_group=8, max_gamma=4))
GROUPOIDS = random_instances(25, seed=17)
COSET_ACTIONS = list(coset_actions(max_order=12, max_points=6))


# -- groups -------------------------------------------------------------------


def test_core_is_largest_normal_subgroup_inside():
    for G in GROUPS:
        normals = G.normal_subgroups
        for H in G.subgroups:
            inside = [N for N in normals if N <= H]
            assert core_of_subgroup(G, H).order == max(N.order for N in inside)


@SETTINGS
@given(st.sampled_from(GROUPS), st.data())
def test_quotient_kernel_is_n(G, data):
    N = data.draw(st.sampled_from(G.normal_subgroups))
    Q, proj = quotient(G, N)
    assert proj.violation() is None
    assert proj.kernel == N
    assert Q.order * N.order == G.order


# -- cohomology -----------------------------------------------------------------


@SETTINGS
@given(st.sampled_from(ACTIONS), st.data())
def test_cohomologous_is_an_equivalence(M, data):
    H = h1(M)
    z = H.cocycles
    a, b, c = (data.draw(st.sampled_from(z)) for _ in range(3))
    A = M.coeff
    assert cohomologous(a, a) is not None
    x = cohomologous(a, b)
    if x is not None:
        # b = x^-1 a s(x) gives a = x b s(x^-1)
        y = cohomologous(b, a)
        assert y is not None
        assert all(a.values[s] == A.mul(A.mul(int(A.inv[y]), b.values[s]), M.act(s, y)) for s in M.gamma)
        w = cohomologous(b, c)
        if w is not None:
            xw = A.mul(x, w)
            assert all(c.values[s] == A.mul(A.mul(int(A.inv[xw]), a.values[s]), M.act(s, xw)) for s in M.gamma)
    assert (x is not None) == (H.class_of(a) == H.class_of(b))


@SETTINGS
@given(st.sampled_from(ACTIONS))
def test_cocycle_identity_on_every_pair(M):
    G, A = M.gamma, M.coeff
    for a in h1(M).cocycles:
        assert a.values[G.identity] == A.identity
        assert all(a.values[G.mul(s, t)] == A.mul(a.values[s], M.act(s, a.values[t])) for s in G for t in G)


@SETTINGS
@given(st.sampled_from(ACTIONS), st.data())
def test_inflation_injective(M, data):
    ker = M.acting_kernel
    Ns = [N for N in M.gamma.normal_subgroups if N <= ker]
    N = data.draw(st.sampled_from(Ns))
    m, _, _ = inflation_map(M, N)
    assert m.is_injective


@SETTINGS
@given(st.sampled_from(ACTIONS))
def test_factor_inflates_back_within_bound(M):
    for r in h1(M).cocycles:
        f = factor_cocycle(r)
        assert within_factorial_power(f.index, M.coeff.order)
        assert tuple(f.cocycle.values[int(q)] for q in f.projection.map) == r.values


# -- descent ------------------------------------------------------------------------


@SETTINGS
@given(st.sampled_from(DESCENT))
def test_point_cocycle_class_independent_of_choices(inst):
    X = inst.space
    rat = rational_points(X)
    if not rat:
        return
    c = rat[0]
    stab = stabilizer_gamma_group(X, c)
    hk = h1(stab[0])
    for orb in orbit_space(X):
        classes = {hk.class_of(cocycle_of_point(X, c, v, g, stab)) for v in orb for g in transporters(X, c, v)}
        assert len(classes) == 1


@SETTINGS
@given(st.sampled_from(DESCENT), st.data())
def test_base_point_change(inst, data):
    X = inst.space
    rat = rational_points(X)
    if not rat:
        return
    c2 = data.draw(st.sampled_from(rat))
    r1, r2 = descent_report(X, rat[0]), descent_report(X, c2)
    assert r1.passed and r2.passed
    assert len(r1.orbits) == len(r2.orbits) == len(r1.kernel) == len(r2.kernel)


# -- groupoids -------------------------------------------------------------------------


@SETTINGS
@given(st.sampled_from(GROUPOIDS))
def test_iso_classes_monotone(inst):
    gpd = inst.gpd
    subs = gpd.sym.subgroups
    for big in subs:
        for small in subs:
            if not small <= big:
                continue
            fine = iso_classes(gpd, big)
            coarse = {a: i for i, cls in enumerate(iso_classes(gpd, small)) for a in cls}
            for cls in fine:
                assert len({coarse[a] for a in cls}) == 1


@SETTINGS
@given(st.sampled_from(GROUPOIDS))
def test_quotient_surjective_on_iso_classes(inst):
    gpd = inst.gpd
    Q, proj = quotient_groupoid(gpd, inst.N)
    for sub in gpd.sym.subgroups:
        src = iso_classes(gpd, sub)
        tgt = {a: i for i, cls in enumerate(iso_classes(Q, sub)) for a in cls}
        assert {tgt[cls[0]] for cls in src} == set(tgt.values())


@SETTINGS
@given(st.sampled_from([3, 4, 5, 7, 8, 9]), st.data())
def test_torsor_average_basepoint_free_and_equivariant(n, data):
    A = make_cyclic(n)
    Y = Torsor(A, GroupAction(A, A.table))
    size = data.draw(st.sampled_from([k for k in range(1, n) if np.gcd(k, n) == 1]))
    S = data.draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
    results = {torsor_average(Y, S, base) for base in range(n)}
    assert len(results) == 1
    shift = data.draw(st.integers(0, n - 1))
    moved = [Y.act(shift, s) for s in S]
    assert torsor_average(Y, moved) == Y.act(shift, results.pop())


# -- codings ----------------------------------------------------------------------------


@SETTINGS
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_fv_canonical_under_left_relabeling(r, c, data):
    M1, M2 = list(range(r)), list(range(c))
    cells = [(x, y) for x in M1 for y in M2]
    R = {cell for cell in cells if data.draw(st.booleans())}
    perm = data.draw(st.permutations(M1))
    dec = fv_decompose(R, M1, M2)
    moved = fv_decompose({(perm[x], y) for x, y in R}, M1, M2)
    assert [atom for _, atom in dec.rects] == [atom for _, atom in moved.rects]
    assert [frozenset(perm[x] for x in left) for left, _ in dec.rects] == [left for left, _ in moved.rects]
    atoms = [set(a) for _, a in dec.rects]
    assert all(not (p & q) for p, q in itertools.combinations(atoms, 2))


def test_cover_surjective_small():
    for d in range(1, 7):
        for k in range(0, 4):
            assert cover_is_surjective(Sort.cyclic(d), k)


def test_stabilizer_code_all_subgroups():
    for n in range(1, 25):
        units = [u for u in range(n) if np.gcd(u, n) == 1] if n > 1 else [0]
        subs = set()
        for gens in itertools.chain.from_iterable(itertools.combinations(units, k) for k in range(3)):
            H = {1 % n}
            frontier = list(gens)
            while frontier:
                g = frontier.pop()
                if g in H:
                    continue
                H |= {(g * h) % n for h in H}
                frontier += [(g * h) % n for h in H]
            subs.add(frozenset(H))
        for H in subs:
            Y = subgroup_stabilizer_code(n, H)
            assert {g for g in units if {(g * y) % n for y in Y} == set(Y)} == set(H)


# -- Galois sorts -----------------------------------------------------------------------


@SETTINGS
@given(st.sampled_from(COSET_ACTIONS))
def test_self_maps_form_the_centralizer(item):
    _, act = item
    A = AmbientAction(act, faithful=False)
    for orb in act.orbits:
        s = IrrObject(tuple(orb))
        hs = _self_maps(A, s)
        image = sorted({tuple(int(x) for x in act.table[g][list(orb)]) for g in act.group})
        pos = {p: i for i, p in enumerate(orb)}
        image = sorted({tuple(pos[p] for p in row) for row in image})
        assert sorted(hs) == centralizer_in_symmetric(image, len(orb))
        hset = set(hs)
        assert all(tuple(f[g[i]] for i in range(len(orb))) in hset for f in hs for g in hs)


@SETTINGS
@given(st.sampled_from(COSET_ACTIONS))
def test_invariant_morphisms_compose(item):
    _, act = item
    A = AmbientAction(act, faithful=False)
    o = IrrObject(tuple(act.orbits[0]))
    fs = invariant_morphisms(A, o, o)
    pos = {p: i for i, p in enumerate(o.points)}
    fset = set(fs)
    for f in fs:
        for g in fs:
            assert tuple(f[pos[g[i]]] for i in range(o.size)) in fset


# -- Kummer ---------------------------------------------------------------------------------

TOWER = Tower(1, 4, 4)
small_q = st.fractions(min_value=-3, max_value=3, max_denominator=4).map(lambda q: Fraction(round(q * 4), 4))
coeff = st.lists(st.integers(-4, 4), min_size=2, max_size=2).map(lambda c: CycNumber(4, c))
element = st.dictionaries(small_q, coeff, max_size=4).map(lambda d: PuiseuxElement(4, 4, d))


@SETTINGS
@given(element, element)
def test_val_ac_laws(x, y):
    if x and y:
        assert val(x * y) == val(x) + val(y)
        assert ac(x * y) == ac(x) * ac(y)
    s = x + y
    if s:
        assert val(s) >= min(val(x), val(y))
        if val(x) != val(y):
            assert val(s) == min(val(x), val(y))


@SETTINGS
@given(st.integers(-8, 8), st.integers(-3, 3))
def test_pairing_factors_through_exponent_class(k, shift):
    e1 = TOWER.element({Fraction(k, 4): CycNumber.rational(4, 1)})
    e2 = TOWER.element({Fraction(k, 4) + shift: CycNumber.rational(4, 3)})
    for i in TOWER.ramified_part.sorted():
        s = TOWER.automorphisms[i]
        assert kummer_pairing(TOWER, s, e1) == kummer_pairing(TOWER, s, e2)


# -- determinism -------------------------------------------------------------------------------


def test_cli_json_is_deterministic(capsys, instances):
    from finimag.cli import main

    outs = []
    for _ in range(2):
        main(["groupoid", str(instances / "d15_pipeline.json"), "--pipeline", "--json"])
        main(["h1", str(instances / "c2_inverts_c4.json"), "--json", "--factor"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    json.loads(outs[0].split("\n}\n")[0] + "\n}")
