import itertools

import numpy as np
import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from finimag.errors import BudgetError, InputError
from finimag.groups import (
    FiniteGroup,
    GroupAction,
    GroupHom,
    core_of_subgroup,
    direct_product,
    dumps,
    find_isomorphism,
    group_by_name,
    homomorphisms,
    loads,
    make_alternating,
    make_cyclic,
    make_dicyclic,
    make_dihedral,
    make_symmetric,
    permutation_group,
    quotient,
    small_groups,
)


def _power_order(G, g):
    # independent of element_orders: iterate multiplication
    x, k = g, 1
    while x != G.identity:
        x, k = G.mul(x, g), k + 1
    return k


def test_cyclic_trivial():
    G = make_cyclic(1)
    assert G.order == 1
    assert G.identity == 0


def test_cyclic_six_has_generator():
    G = make_cyclic(6)
    assert G.order == 6
    assert 6 in [_power_order(G, g) for g in G]


def test_cyclic_four_orders():
    G = make_cyclic(4)
    assert _power_order(G, 1) == 4
    assert _power_order(G, 2) == 2
    assert G.element_order(1) == 4 and G.element_order(2) == 2


def test_cyclic_zero_rejected():
    with pytest.raises(InputError):
        make_cyclic(0)


def test_symmetric_three():
    G, act = make_symmetric(3)
    assert G.order == 6
    assert not G.is_abelian
    assert act.is_faithful and act.npoints == 3


def test_symmetric_one():
    G, _ = make_symmetric(1)
    assert G.order == 1


def test_symmetric_four_stabilizer():
    G, act = make_symmetric(4)
    assert G.order == 24
    assert act.stabilizer(0).order == 24 // len(act.orbit(0)) == 6


def test_symmetric_guard():
    with pytest.raises(BudgetError):
        make_symmetric(8)
    with pytest.raises(InputError):
        make_symmetric(0)


def test_verify_rejects_non_group():
    with pytest.raises(InputError):
        FiniteGroup([[0, 1], [1, 1]])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_symmetric_matches_sympy(n):
    G, act = make_symmetric(n)
    gens = [Permutation(list(p)) for p in (tuple(act.table[g]) for g in G.generators)]
    P = PermutationGroup(gens)
    assert P.order() == G.order
    assert len(P.conjugacy_classes()) == len(G.conjugacy_classes)


def test_alternating_and_dihedral():
    A4, _ = make_alternating(4)
    assert A4.order == 12
    assert len(A4.subgroups) == 10
    D4 = make_dihedral(4)
    assert D4.order == 8 and not D4.is_abelian
    assert len(D4.center) == 2
    Q8 = make_dicyclic(2)
    assert sorted(np.bincount(Q8.element_orders)[1:].tolist()) == [0, 1, 1, 6]


def test_subgroup_counts_s4():
    G, _ = make_symmetric(4)
    assert len(G.subgroups) == 30
    assert len(G.normal_subgroups) == 4


def test_quotient_and_core():
    G, _ = make_symmetric(3)
    A3 = [H for H in G.subgroups if H.order == 3][0]
    Q, proj = quotient(G, A3)
    assert Q.order == 2
    assert proj.kernel == A3
    C2 = [H for H in G.subgroups if H.order == 2][0]
    assert core_of_subgroup(G, C2).order == 1
    with pytest.raises(InputError):
        quotient(G, C2)


def test_homomorphism_counts():
    # |Hom(C_m, C_n)| = gcd(m, n); |Hom(S3, C2)| = 2
    assert len(list(homomorphisms(make_cyclic(4), make_cyclic(6)))) == 2
    S3, _ = make_symmetric(3)
    assert len(list(homomorphisms(S3, make_cyclic(2)))) == 2
    assert len(list(homomorphisms(make_cyclic(3), S3))) == 3


def test_find_isomorphism():
    assert find_isomorphism(make_cyclic(6), direct_product(make_cyclic(2), make_cyclic(3))) is not None
    assert find_isomorphism(make_cyclic(4), group_by_name("C2xC2")) is None
    S3, _ = make_symmetric(3)
    f = find_isomorphism(make_dihedral(3), S3)
    assert f is not None and f.is_injective and f.is_surjective


def test_hom_violation_reported():
    with pytest.raises(InputError):
        GroupHom(make_cyclic(2), make_cyclic(3), [0, 1])


def test_action_laws():
    G = make_cyclic(2)
    with pytest.raises(InputError):
        GroupAction(G, [[1, 0], [1, 0]])
    act = GroupAction(G, [[0, 1, 2], [1, 0, 2]])
    assert act.orbits == ((0, 1), (2,))
    assert act.fixed_points() == [2]


def test_permutation_group_sorted():
    G, act = permutation_group([(1, 2, 0)])
    rows = [tuple(r) for r in act.table]
    assert rows == sorted(rows)
    assert G.order == 3


def test_names_roundtrip():
    for name in ["C6", "S3", "A4", "D5", "Q8", "C2xC4", "C2^3", "Dic3"]:
        G = group_by_name(name)
        H = loads(dumps(G))
        assert np.array_equal(G.table, H.table)
    assert group_by_name("C2^3").order == 8
    with pytest.raises(InputError):
        group_by_name("X9")


def test_small_groups_distinct():
    gs = small_groups(12)
    for G, H in itertools.combinations(gs, 2):
        if G.order == H.order:
            assert find_isomorphism(G, H) is None
    # number of groups of order n up to 12
    counts = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5}
    got = {}
    for G in gs:
        got[G.order] = got.get(G.order, 0) + 1
    assert got == counts
