import cmath
from fractions import Fraction

import pytest

from spinacc.clifford import (CliffordElement, CliffordError, SpinElement, kappa, lift_orthogonal,
                              pi_action, rotation_matrix, rotor, spin_rep, spin_trace, unit_basis, z_B)
from spinacc.cyclotomic import CycMatrix, CycNum


def test_basis_relations():
    e1 = CliffordElement.basis(7, 4, 1)
    e2 = CliffordElement.basis(7, 4, 2)
    one = CliffordElement.scalar(7, 4)
    assert e1 * e1 == one
    assert (e1 * e2) * (e1 * e2) == one * -1
    assert e1 * e2 == (e2 * e1) * -1


def test_z_B_square_and_action():
    n, M = 7, 4
    for B in ([1, 2], [1, 2, 3, 4], [2, 3, 5, 6, 7, 4]):
        z = z_B(n, M, B)
        sq = z * z
        assert sq.value == CliffordElement.scalar(n, M, (-1) ** (len(B) // 2))
        P = pi_action(z)
        diag = [P.entry(i, i) for i in range(n)]
        assert diag == [CycNum.from_rational(M, -1 if i + 1 in B else 1) for i in range(n)]


def test_pi_of_unit_vector_is_reflection():
    e = SpinElement([unit_basis(5, 4, 1)], 5, 4)
    P = pi_action(e)
    assert P.entry(0, 0) == -1 and P.entry(1, 1) == 1


def test_kappa():
    n, M = 7, 4
    g = SpinElement([unit_basis(n, M, 1), unit_basis(n, M, 5)], n, M)
    assert kappa(g, [1, 2, 3, 4]) == -1
    assert kappa(g, [5, 6, 7]) == -1
    assert kappa(SpinElement.identity(n, M), [1, 2]) == 1


@pytest.mark.parametrize("m", [3, 4, 6])
def test_rotor(m):
    M = 4 * m if m % 2 else 2 * m if (2 * m) % 4 == 0 else 4 * m
    n = 7
    r = rotor(n, M, (1, 2), 1, m)
    assert pi_action(r) == rotation_matrix(n, M, 1, 2, 1, m)
    minus = SpinElement.identity(n, M).value * -1
    assert (r ** m).value == minus
    assert (r ** (2 * m)).value == SpinElement.identity(n, M).value


def test_rotor_needs_half_angle():
    with pytest.raises(CliffordError):
        rotor(7, 4, (1, 2), 1, 4)


def test_spin_rep_is_clifford_module():
    for n in (3, 5, 7, 9):
        rep = spin_rep(n, 4)
        rep.check()


def test_spin_trace():
    n, M = 7, 12
    one = SpinElement.identity(n, M)
    assert spin_trace(one) == 8
    assert spin_trace(-one) == -8
    r = rotor(n, M, (3, 4), 1, 3)
    c = 8 * cmath.cos(cmath.pi / 3)
    assert abs(spin_trace(r).to_complex() - c) < 1e-9


def test_lift_orthogonal():
    n, M = 7, 8
    g = rotor(n, M, (1, 2), 1, 4) * z_B(n, M, [3, 6])
    A = pi_action(g)
    s = lift_orthogonal(A)
    assert pi_action(s) == A
    assert s.value == g.value or s.value == (-g).value


def test_spin_element_json():
    g = rotor(5, 8, (2, 3), 1, 4)
    assert SpinElement.from_json(g.to_json(), 5, 8) == g
