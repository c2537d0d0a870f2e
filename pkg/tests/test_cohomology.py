import itertools

import numpy as np
import pytest

from finimag.cohomology import (
    GammaGroup,
    all_actions,
    cohomologous,
    coprime_splitting,
    enumerate_z1,
    factor_cocycle,
    h1,
    induced_h1_map,
    inflate,
    inflation_map,
    make_cocycle,
    quotient_gamma_group,
    trivial_cocycle,
    within_factorial_power,
)
from finimag.errors import BudgetError, CheckFailure, InputError
from finimag.groups import FiniteGroup, GroupHom, group_by_name, make_cyclic, make_symmetric


def inversion(gamma_order: int, n: int, kernel: int = 1) -> GammaGroup:
    """C_k acting on C_n through C_k -> C_2, the generator inverting."""
    S, A = make_cyclic(gamma_order), make_cyclic(n)
    rows = [[x if (s // kernel) % 2 == 0 else (-x) % n for x in range(n)] for s in range(gamma_order)]
    return GammaGroup(S, A, rows)


def brute_z1(M):
    G, A = M.gamma, M.coeff
    out = []
    for vals in itertools.product(range(A.order), repeat=G.order):
        if all(vals[G.mul(s, t)] == A.mul(vals[s], M.act(s, vals[t])) for s in G for t in G):
            out.append(vals)
    return out


def brute_classes(M):
    A = M.coeff
    z = brute_z1(M)
    seen, classes = set(), []
    for a in z:
        if a in seen:
            continue
        orbit = {tuple(A.mul(A.mul(int(A.inv[b]), a[s]), M.act(s, b)) for s in range(len(a))) for b in A}
        seen |= orbit
        classes.append(orbit)
    return z, classes


def test_trivial_gamma_single_cocycle():
    M = GammaGroup.trivial(make_cyclic(1), make_cyclic(5))
    assert [c.values for c in enumerate_z1(M)] == [(0,)]


def test_trivial_action_gives_homs():
    M = GammaGroup.trivial(make_cyclic(4), make_cyclic(6))
    assert len(enumerate_z1(M)) == 2


def test_inversion_c3():
    M = inversion(2, 3)
    z = enumerate_z1(M)
    assert len(z) == 3 == len(brute_z1(M))
    assert [c.values for c in z] == sorted(brute_z1(M))
    for a, b in itertools.combinations(z, 2):
        assert cohomologous(a, b) is not None
    assert h1(M).count == 1


def test_cohomologous_self_identity():
    M = inversion(2, 5)
    for a in enumerate_z1(M):
        assert cohomologous(a, a) == 0


def test_trivial_action_homs_not_cohomologous():
    M = GammaGroup.trivial(make_cyclic(2), make_cyclic(2))
    a, b = enumerate_z1(M)
    assert cohomologous(a, b) is None
    assert h1(M).count == 2


def test_inversion_c4_two_classes():
    M = inversion(2, 4)
    H = h1(M)
    assert len(H.cocycles) == 4
    assert H.count == 2
    assert [r.values for r in H.representatives] == [(0, 0), (0, 1)]


def test_witness_convention():
    M = inversion(2, 5)
    H = h1(M)
    A = M.coeff
    for cls in H.classes:
        rep = cls[0]
        for c in cls:
            b = H.witness[c.values]
            assert all(c.values[s] == A.mul(A.mul(int(A.inv[b]), rep.values[s]), M.act(s, b)) for s in range(2))


def test_make_cocycle_rejects():
    M = inversion(2, 3)
    with pytest.raises(InputError):
        make_cocycle(M, [1, 0])
    with pytest.raises(InputError):
        make_cocycle(M, [0, 0, 0])


def test_budget():
    M = GammaGroup.trivial(group_by_name("C2^3"), make_cyclic(6))
    with pytest.raises(BudgetError):
        enumerate_z1(M, budget=10)


def test_h1_against_bruteforce_catalog():
    for gname in ["C2", "C3", "C4", "C2xC2"]:
        S = group_by_name(gname)
        for aname in ["C2", "C3", "C4", "C2xC2", "S3"]:
            A = group_by_name(aname)
            if A.order ** S.order > 4096:
                continue
            for M in all_actions(S, A):
                z, classes = brute_classes(M)
                H = h1(M)
                assert sorted(c.values for c in H.cocycles) == sorted(z)
                assert sorted(sorted(c.values for c in cls) for cls in H.classes) == sorted(sorted(o) for o in classes)


def test_induced_identity_and_zero():
    M = inversion(2, 4)
    A = M.coeff
    idm = GroupHom(A, A, list(range(4)))
    f = induced_h1_map(idm, M, M)
    assert f.mapping == list(range(h1(M).count))
    assert f.kernel == [h1(M).trivial_class]
    T = GammaGroup.trivial(M.gamma, make_cyclic(1))
    g = induced_h1_map(GroupHom(A, T.coeff, [0] * 4), M, T)
    assert g.kernel == list(range(h1(M).count))


def test_induced_c2_into_s3():
    S = make_cyclic(2)
    S3, _ = make_symmetric(3)
    t = [g for g in S3 if S3.element_order(g) == 2][0]
    A = make_cyclic(2)
    f = GroupHom(A, S3, [S3.identity, t])
    src, tgt = GammaGroup.trivial(S, A), GammaGroup.trivial(S, S3)
    m = induced_h1_map(f, src, tgt)
    assert len(m.kernel) == 1
    assert m.is_injective


def test_induced_rejects_non_equivariant():
    M = inversion(2, 3)
    T = GammaGroup.trivial(M.gamma, make_cyclic(3))
    with pytest.raises(InputError):
        induced_h1_map(GroupHom(M.coeff, T.coeff, [0, 1, 2]), M, T)


def test_inflation_examples():
    S, A = make_cyclic(4), make_cyclic(2)
    M = GammaGroup.trivial(S, A)
    N = S.subgroup([0, 2])
    m, Mq, proj = inflation_map(M, N)
    assert Mq.gamma.order == 2
    assert m.is_injective and len(m.mapping) == 2 == m.target.count
    # N = whole group: trivial inflates to trivial
    Mw, pw = quotient_gamma_group(M, S.whole)
    assert inflate(trivial_cocycle(Mw), pw, M).is_trivial
    # N = 1: inflation is the identity on values
    M1, p1 = quotient_gamma_group(M, S.trivial_subgroup)
    for c in enumerate_z1(M1):
        assert sorted(inflate(c, p1, M).values) == sorted(c.values)


def test_inflation_needs_trivial_kernel():
    M = inversion(2, 3)
    with pytest.raises(InputError):
        quotient_gamma_group(M, M.gamma.whole)


def test_factor_trivial():
    M = GammaGroup.trivial(make_cyclic(3), make_cyclic(2))
    f = factor_cocycle(trivial_cocycle(M))
    assert f.g2.order == 3 and f.index == 1


def test_factor_inversion():
    M = inversion(2, 3)
    for a in enumerate_z1(M):
        f = factor_cocycle(a)
        assert f.g0.order == 1 and f.g2.order == 1 and f.index == 2 and f.bound_ok


def test_factor_recovers_inflation_level():
    M = inversion(6, 3)
    Mq, proj = quotient_gamma_group(M, M.gamma.subgroup([0, 2, 4]))
    for c in enumerate_z1(Mq):
        f = factor_cocycle(inflate(c, proj, M))
        assert 2 % f.index == 0
        assert inflate(f.cocycle, f.projection, M).values == inflate(c, proj, M).values


def test_factorial_bound():
    assert within_factorial_power(4, 2)
    assert not within_factorial_power(5, 2)
    assert within_factorial_power(10**100, 5)


def test_coprime_trivial():
    M = inversion(2, 3)
    assert coprime_splitting(trivial_cocycle(M)) == 0


def test_coprime_c2_on_c3_matches_search():
    M = inversion(2, 3)
    A = M.coeff
    for a in enumerate_z1(M):
        b = coprime_splitting(a)
        found = [x for x in A if all(a.values[s] == A.mul(int(A.inv[x]), M.act(s, x)) for s in range(2))]
        assert b in found


def test_coprime_c3_on_c4():
    for M in all_actions(make_cyclic(3), make_cyclic(4)):
        assert h1(M).count == 1
        for a in enumerate_z1(M):
            coprime_splitting(a)


def test_coprime_rejects():
    M = inversion(2, 4)
    with pytest.raises(InputError):
        coprime_splitting(trivial_cocycle(M))
    S3, _ = make_symmetric(3)
    with pytest.raises(InputError):
        coprime_splitting(trivial_cocycle(GammaGroup.trivial(make_cyclic(5), S3)))


def test_gamma_group_validation():
    S, A = make_cyclic(2), make_cyclic(3)
    with pytest.raises(InputError):
        GammaGroup(S, A, [[0, 1, 2], [0, 1, 1]])
    with pytest.raises(InputError):
        GammaGroup(S, A, [[0, 2, 1], [0, 2, 1]])
    with pytest.raises(InputError):
        GammaGroup(S, A, [[0, 1, 2]])


def test_to_json_shape():
    d = h1(inversion(2, 4)).to_json()
    assert d["z1"] == 4 and d["h1"] == 2 and d["class_sizes"] == [2, 2]
