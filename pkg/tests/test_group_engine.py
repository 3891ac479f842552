import pytest

from spinacc.clifford import pi_action, rotation_matrix, rotor, z_B
from spinacc.constructions import example1
from spinacc.cyclotomic import CycMatrix
from spinacc.group_engine import GroupTooLarge, MorphismInstance, NotOrthogonal, close


def _rot(n, M, i, j, k, m):
    return rotation_matrix(n, M, i, j, k, m)


def test_cyclic_rotation_group():
    G = close([_rot(7, 4, 1, 2, 1, 4)])
    assert G.order == 4
    assert G.abelian_invariants() == [4]
    assert G.count_homs_mu(2) == 2


def test_dihedral_eight_has_five_classes():
    n, M = 3, 4
    r = _rot(n, M, 1, 2, 1, 4)
    s = pi_action(z_B(n, M, [2, 3]))
    G = close([r, s])
    assert G.order == 8
    assert len(G.conjugacy_classes()) == 5
    assert sorted(G.abelian_invariants()) == [2, 2]
    assert len(G.mu2_characters()) == 4


def test_tables_are_consistent():
    G = example1(level="so")
    N = G.order
    for x in range(N):
        assert G.mul(x, G.inv(x)) == 0
    for j, g in enumerate(G.gen_elems):
        for x in range(0, N, 3):
            assert G.matrix(G.mul(x, g)) == G.matrix(x) @ G.matrix(g)


def test_example1_levels():
    assert example1(level="so").order == 8
    G = example1(level="spin")
    assert G.order == 16
    assert sorted(G.abelian_invariants()) == [4, 4]


def test_max_order_guard():
    with pytest.raises(GroupTooLarge):
        close([_rot(7, 24, 1, 2, 1, 12), _rot(7, 24, 3, 4, 1, 12)], max_order=100)


def test_rejects_non_orthogonal():
    A = CycMatrix.identity(4, 3).scale(2)
    with pytest.raises(NotOrthogonal):
        MorphismInstance(3, 4, [A])


def test_kernel_has_index_two():
    G = example1()
    chi = G.labeled("a2b2")
    K = G.kernel(chi)
    assert 2 * K.order == G.order
    assert all(chi(int(x)) == 1 for x in K.parent_index)
