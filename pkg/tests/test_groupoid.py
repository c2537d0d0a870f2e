import json
import random

import numpy as np
import pytest

from finimag.cohomology import GammaGroup
from finimag.errors import CheckFailure, InputError
from finimag.groupoid import (
    NormalFamily,
    SymGroupoid,
    Torsor,
    canonical_transport,
    iso_classes,
    lift_fixed_point,
    quotient_groupoid,
    random_instance,
    random_instances,
    reduce_pipeline,
    torsor_average,
)
from finimag.groups import GroupAction, make_cyclic
from finimag.io import build


def action_gpd(group, stabilizer, sym="C1", action="trivial", **extra):
    d = {"kind": "groupoid", "sym": sym, "group": group, "action": action, "stabilizer": stabilizer}
    d.update(extra)
    return build(d)[1]


def swapped_pair() -> SymGroupoid:
    # objects 0, 1 with trivial automorphisms; C2 swaps them
    src, dst = [0, 1, 0, 1], [0, 1, 1, 0]
    comp = [[-1] * 4 for _ in range(4)]
    for f, g, h in [(0, 0, 0), (0, 3, 3), (1, 1, 1), (1, 2, 2), (2, 0, 2), (2, 3, 1), (3, 1, 3), (3, 2, 0)]:
        comp[f][g] = h
    return SymGroupoid(2, src, dst, comp, make_cyclic(2), [[0, 1], [1, 0]], [[0, 1, 2, 3], [1, 0, 3, 2]])


def test_swapped_pair_has_no_fixed_objects():
    gpd = swapped_pair()
    assert iso_classes(gpd, gpd.sym.whole) == []
    assert iso_classes(gpd, gpd.sym.trivial_subgroup) == [[0, 1]]


def test_single_object_c2():
    gpd, _, _ = action_gpd("C2", [0, 1], sym="C2")
    assert gpd.nobj == 1
    for sub in gpd.sym.subgroups:
        assert iso_classes(gpd, sub) == [[0]]


def test_trivial_sym_connected():
    gpd, _, _ = action_gpd("S3", [0], sym="C1")
    assert iso_classes(gpd) == [list(range(gpd.nobj))]


def test_verify_rejects_broken_composition():
    gpd = swapped_pair()
    comp = gpd.comp.copy()
    comp[2, 3] = 0
    with pytest.raises(InputError):
        SymGroupoid(2, gpd.src, gpd.dst, comp, gpd.sym, gpd.obj_act, gpd.mor_act)


def test_verify_rejects_non_functorial_sym():
    gpd = swapped_pair()
    with pytest.raises(InputError):
        SymGroupoid(2, gpd.src, gpd.dst, gpd.comp, gpd.sym, [[0, 1], [1, 0]], [[0, 1, 2, 3], [1, 0, 2, 3]])


def test_quotient_trivial_and_full():
    gpd, _, _ = action_gpd("C4", [0, 1, 2, 3])
    Q, proj = quotient_groupoid(gpd, NormalFamily.trivial(gpd))
    assert Q.nmor == gpd.nmor and sorted(proj.tolist()) == list(range(gpd.nmor))
    Q, proj = quotient_groupoid(gpd, NormalFamily.full(gpd))
    assert Q.nmor == 1


def test_quotient_c4_by_c2():
    gpd, N, _ = action_gpd("C4", [0, 1, 2, 3], N=[0, 2])
    Q, proj = quotient_groupoid(gpd, N)
    autg, _ = Q.aut_group(0)
    assert autg.order == 2 and autg.is_cyclic
    # coset table: 0,2 -> class 0 and 1,3 -> class 1
    assert proj.tolist() == [0, 1, 0, 1]


def test_normal_family_rejects_non_normal():
    # S3 with T = S3 at one object: an order-2 subgroup is not normal
    gpd, _, _ = action_gpd("S3", list(range(6)))
    t = [f for f in gpd.aut(0) if f != gpd.ident[0] and gpd.compose(f, f) == gpd.ident[0]][0]
    with pytest.raises(InputError):
        NormalFamily(gpd, [[int(gpd.ident[0]), t]])


def test_canonical_transport():
    gpd, _, _ = action_gpd("C6", [0, 2, 4])
    tr = canonical_transport(gpd)
    for a in range(gpd.nobj):
        assert all(k == v for k, v in tr[(a, a)].items())
    # every f gives the same conjugation map
    for (a, b), m in tr.items():
        for f in gpd.mor(a, b):
            fi = gpd.inv[f]
            assert all(gpd.compose(gpd.compose(f, g), fi) == m[g] for g in gpd.aut(a))


def test_canonical_transport_rejects_nonabelian():
    gpd, _, _ = action_gpd("S3", list(range(6)))
    with pytest.raises(InputError):
        canonical_transport(gpd)


def regular_torsor(n):
    A = make_cyclic(n)
    return Torsor(A, GroupAction(A, A.table))


def test_torsor_average_examples():
    Y = regular_torsor(3)
    assert torsor_average(Y, [2]) == 2
    assert torsor_average(Y, [0]) == 0
    Y5 = regular_torsor(5)
    assert torsor_average(Y5, [0, 1, 2]) == 1
    with pytest.raises(InputError):
        torsor_average(regular_torsor(2), [0, 1])
    with pytest.raises(InputError):
        torsor_average(Y, [])


def test_torsor_average_whole_group_needs_coprime_size():
    # averaging all of C3 divides by 3 in C3, which is not unique
    with pytest.raises(InputError):
        torsor_average(regular_torsor(3), [0, 1, 2])
    # the nonzero points of C7 are symmetric about 0
    assert torsor_average(regular_torsor(7), [1, 2, 3, 4, 5, 6]) == 0


def test_lift_trivial_sym():
    Y = regular_torsor(3)
    S = make_cyclic(1)
    on_group = GammaGroup.trivial(S, Y.group)
    on_points = GroupAction(S, [[0, 1, 2]])
    y = lift_fixed_point(Y, Y.group.whole, S, on_group, on_points, [0, 1, 2])
    assert y in (0, 1, 2)


@pytest.mark.parametrize("shift", [0, 1, 2])
def test_lift_c2_inverting_c3(shift):
    Y = regular_torsor(3)
    S = make_cyclic(2)
    on_group = GammaGroup(S, Y.group, [[0, 1, 2], [0, 2, 1]])
    on_points = GroupAction(S, [[0, 1, 2], [(shift - y) % 3 for y in range(3)]])
    y = lift_fixed_point(Y, Y.group.whole, S, on_group, on_points, [0, 1, 2])
    brute = [p for p in range(3) if on_points(1, p) == p]
    assert brute == [y]


def test_lift_rejects_unfixed_orbit():
    # C2 swapping the two C3-orbits of a 6-point torsor for C6 ⊇ C3
    A = make_cyclic(6)
    Y = Torsor(A, GroupAction(A, A.table))
    S = make_cyclic(2)
    on_group = GammaGroup.trivial(S, A)
    on_points = GroupAction(S, [list(range(6)), [(y + 3) % 6 for y in range(6)]])
    sub = A.subgroup([0, 2, 4])
    with pytest.raises(InputError):
        lift_fixed_point(Y, sub, S, on_group, on_points, [0, 2, 4])


def test_pipeline_trivial_families():
    gpd, _, _ = action_gpd("C6", [0, 3], sym="C1")
    r = reduce_pipeline(gpd, NormalFamily.trivial(gpd), NormalFamily.trivial(gpd))
    assert r.passed
    for cert in r.certificates:
        assert cert.injective and cert.surjective


def test_pipeline_d15(instances):
    from finimag.io import load_instance

    _, (gpd, N, Nm) = load_instance(instances / "d15_pipeline.json")
    r = reduce_pipeline(gpd, N, Nm)
    assert r.passed
    for sub, entry in zip(gpd.sym.subgroups, r.composite):
        assert len(iso_classes(gpd, sub)) == len(iso_classes(r.g3, sub)) == entry["target_classes"]
    assert r.g2.nmor < r.g1.nmor
    json.dumps(r.to_json())


def test_pipeline_guards():
    gpd, _, _ = action_gpd("S3", list(range(6)))
    with pytest.raises(InputError):
        reduce_pipeline(gpd, NormalFamily.trivial(gpd), NormalFamily.trivial(gpd))
    # C2 acting on C4 by inversion, N trivial: |Aut/N| = 4 shares a factor with |Σ| = 2
    gpd, N, Nm = action_gpd("C4", [0, 1, 2, 3], sym="C2", action=[[0, 1, 2, 3], [0, 3, 2, 1]], N=[0], Nminus=[0])
    with pytest.raises(InputError, match=r"\(0, 0\)"):
        reduce_pipeline(gpd, N, Nm)
    gpd, N, Nm = action_gpd("C4", [0, 1, 2, 3], sym="C2", action=[[0, 1, 2, 3], [0, 3, 2, 1]],
                            N=[0, 1, 2, 3], Nminus=[0, 2])
    with pytest.raises(InputError):
        reduce_pipeline(gpd, N, Nm)


def test_random_instances_deterministic_and_pass():
    a = [i.label for i in random_instances(15, seed=3)]
    b = [i.label for i in random_instances(15, seed=3)]
    assert a == b
    for inst in random_instances(15, seed=3):
        inst.gpd.verify()
        inst.N.verify()
        inst.Nminus.verify()
        assert reduce_pipeline(inst.gpd, inst.N, inst.Nminus).passed, inst.label


def test_random_instance_structure():
    inst = random_instance(random.Random(11))
    gpd = inst.gpd
    assert gpd.is_abelian()
    assert all(inst.Nminus[a] <= inst.N[a] for a in range(gpd.nobj))
    assert np.all(gpd.comp[gpd.ident[0], gpd.aut(0)] == np.array(gpd.aut(0)))
