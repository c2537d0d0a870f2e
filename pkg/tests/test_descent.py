import itertools

import numpy as np
import pytest

from finimag.cohomology import GammaGroup, enumerate_z1, h1
from finimag.descent import (
    HomogeneousSpace,
    coset_space,
    descent_report,
    generate_instances,
    orbit_space,
    rational_points,
)
from finimag.errors import BudgetError, InputError
from finimag.groups import GroupAction, make_cyclic, make_symmetric
from finimag.linear import gl_order, make_field, make_gl


def count_invertible(n, p):
    # direct enumeration over the prime field, determinant by cofactors
    def det(m):
        if n == 1:
            return m[0]
        return m[0] * m[3] - m[1] * m[2]
    return sum(1 for m in itertools.product(range(p), repeat=n * n) if det(m) % p)


def test_gl_orders_against_enumeration():
    assert make_gl(2, 2, 1).coeff.order == 6 == count_invertible(2, 2)
    assert make_gl(2, 3, 1).coeff.order == 48 == count_invertible(2, 3)
    for q in (2, 3, 4, 5):
        G = make_gl(1, q, 1).coeff
        assert G.order == q - 1 and G.is_cyclic


def test_gl_guards():
    with pytest.raises(BudgetError):
        make_gl(3, 2, 1)
    with pytest.raises(BudgetError):
        make_gl(2, 3, 3)
    assert gl_order(2, 4) == 180


def test_field_tables():
    F = make_field(4)
    assert F.is_field
    add, mul = F.add_table, F.mul_table
    # characteristic 2, multiplicative group cyclic of order 3
    assert all(add[x, x] == 0 for x in range(4))
    assert sorted(mul[1:, 1:].flatten().tolist()) == sorted([1, 2, 3] * 3)


def test_gl_frobenius_is_order_m():
    M = make_gl(1, 2, 3)
    assert M.gamma.order == 3
    assert not (M.action[1] == np.arange(M.coeff.order)).all()


@pytest.mark.parametrize("n,q,m", [(1, 2, 2), (1, 3, 2), (2, 2, 2), (1, 4, 2)])
def test_hilbert90_finite(n, q, m):
    assert h1(make_gl(n, q, m)).count == 1


def inversion_space():
    # C2 inverting the torsor C3 (H trivial)
    S, A = make_cyclic(2), make_cyclic(3)
    M = GammaGroup(S, A, [[0, 1, 2], [0, 2, 1]])
    return M, coset_space(M, A.trivial_subgroup)


def test_rational_points_trivial_gamma():
    S3, _ = make_symmetric(3)
    M = GammaGroup.trivial(make_cyclic(1), S3)
    X = coset_space(M, S3.subgroup([0, 1]))
    assert rational_points(X) == [0, 1, 2]
    assert len(orbit_space(X)) == 1


def test_rational_points_inversion():
    _, X = inversion_space()
    assert rational_points(X) == [0]


def test_free_action_has_no_rational_points():
    M, _ = inversion_space()
    S, A = M.gamma, M.coeff
    C2 = make_cyclic(2)
    free = GammaGroup.trivial(S, C2)
    X = coset_space(free, C2.trivial_subgroup, enumerate_z1(free)[1])
    assert X.pts.fixed_points() == []
    assert orbit_space(X) == []


def test_orbit_space_s3_cosets():
    S3, _ = make_symmetric(3)
    M = GammaGroup.trivial(make_cyclic(2), S3)
    H = [K for K in S3.subgroups if K.order == 2][0]
    X = coset_space(M, H)
    assert len(rational_points(X)) == 3
    assert len(orbit_space(X)) == 1


def test_descent_report_passes():
    _, X = inversion_space()
    rep = descent_report(X, 0)
    assert rep.passed and len(rep.orbits) == 1 and rep.kernel == [0]


def test_equivariance_rejected():
    S, A = make_cyclic(2), make_cyclic(3)
    M = GammaGroup(S, A, [[0, 1, 2], [0, 2, 1]])
    gact = GroupAction(A, A.table)
    with pytest.raises(InputError):
        HomogeneousSpace(M, GroupAction(S, [[0, 1, 2], [0, 1, 2]]), gact)


def test_non_transitive_rejected():
    S, A = make_cyclic(2), make_cyclic(2)
    M = GammaGroup.trivial(S, A)
    with pytest.raises(InputError):
        HomogeneousSpace(M, GroupAction(S, [[0, 1, 2], [0, 1, 2]]), GroupAction(A, [[0, 1, 2], [1, 0, 2]]))


def test_unstable_subgroup_rejected():
    S3, _ = make_symmetric(3)
    # gamma = C2 acting by conjugation with a transposition
    t = [g for g in S3 if S3.element_order(g) == 2][0]
    M = GammaGroup(make_cyclic(2), S3, [list(range(6)), [S3.conj(t, x) for x in range(6)]])
    unstable = [K for K in S3.subgroups if K.order == 2 and t not in K][0]
    with pytest.raises(InputError):
        coset_space(M, unstable)


def test_generated_family_all_pass():
    count = 0
    for inst in generate_instances(max_group=6, max_gamma=4):
        X = inst.space
        rat = rational_points(X)
        if rat:
            assert descent_report(X, rat[0]).passed, inst.label
        count += 1
    assert count > 100
