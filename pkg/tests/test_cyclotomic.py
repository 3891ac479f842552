import random
from fractions import Fraction

import pytest

from spinacc.cyclotomic import (CycNum, CycMatrix, CyclotomicError, PrimeContext, cos_sin_half,
                                reduce_mod, root_of_unity, sqrt_rational, DenominatorDividesP)


def test_i_squared():
    i = root_of_unity(4, 1)
    assert i * i == CycNum.from_rational(4, -1)


def test_cube_roots_sum():
    assert root_of_unity(12, 4) + root_of_unity(12, 8) == CycNum.from_rational(12, -1)


def test_conj_inverts_roots():
    assert root_of_unity(8, 1).conj() == root_of_unity(8, 7)


def test_rejects_modulus_not_divisible_by_4():
    with pytest.raises(CyclotomicError):
        root_of_unity(6, 1)


@pytest.mark.parametrize("M", [4, 8, 12, 24, 40])
def test_root_orders(M):
    one = CycNum.one(M)
    for k in range(M):
        z = root_of_unity(M, k)
        assert z ** M == one
        order = next(d for d in range(1, M + 1) if z ** d == one)
        from math import gcd
        assert order == M // gcd(M, k)


def test_cos_sin_half():
    c, s = cos_sin_half(2, 1)
    assert c.is_zero() and s == CycNum.one(c.M)
    c, s = cos_sin_half(4, 1)
    assert c == s and c * c + s * s == CycNum.one(c.M)
    c, s = cos_sin_half(3, 1)
    assert c == CycNum.from_rational(c.M, Fraction(1, 2))
    assert c * c + s * s == CycNum.one(c.M)


def _rand(M, rng):
    return sum((root_of_unity(M, k) * Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for k in range(M)),
               CycNum.zero(M))


@pytest.mark.parametrize("M", [8, 12, 20])
def test_ring_axioms_and_inverse(M):
    rng = random.Random(M)
    for _ in range(15):
        a, b, c = _rand(M, rng), _rand(M, rng), _rand(M, rng)
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert (a * b).conj() == a.conj() * b.conj()
        assert a.conj().conj() == a
        if not a.is_zero():
            assert a * a.inv() == CycNum.one(M)


def test_reduce_mod_example():
    ctx = PrimeContext(13, 4, 5)
    assert reduce_mod(root_of_unity(4, 1), ctx) == 5
    assert reduce_mod(CycNum.one(4), ctx) == 1


def test_reduce_mod_is_a_ring_map():
    M = 8
    ctx = PrimeContext.make(17, M)
    rng = random.Random(1)
    z = reduce_mod(root_of_unity(M, 1), ctx)
    assert pow(z, M, 17) == 1 and pow(z, M // 2, 17) == 16
    for _ in range(20):
        a, b = _rand(M, rng), _rand(M, rng)
        ra, rb = reduce_mod(a, ctx), reduce_mod(b, ctx)
        assert reduce_mod(a + b, ctx) == (ra + rb) % 17
        assert reduce_mod(a * b, ctx) == ra * rb % 17
        # conj corresponds to the inverse-power map
        zi = pow(z, -1, 17)
        val = sum(int(c.numerator) * pow(int(c.denominator), -1, 17) * pow(zi, k, 17)
                  for k, c in enumerate(a.coeffs)) % 17
        assert reduce_mod(a.conj(), ctx) == val


def test_denominator_divides_p():
    ctx = PrimeContext.make(17, 8)
    with pytest.raises(DenominatorDividesP):
        reduce_mod(CycNum.from_rational(8, Fraction(1, 17)), ctx)


def test_sqrt_rational():
    assert sqrt_rational(8, 2) ** 2 == CycNum.from_rational(8, 2)
    assert sqrt_rational(20, 5) ** 2 == CycNum.from_rational(20, 5)
    assert sqrt_rational(12, 3) ** 2 == CycNum.from_rational(12, 3)
    assert sqrt_rational(4, 2) is None


def test_json_roundtrip():
    x = root_of_unity(12, 5) * Fraction(3, 7) + 2
    assert CycNum.from_json(x.to_json()) == x


def test_matrix_identity():
    I = CycMatrix.identity(8, 3)
    assert (I @ I).is_identity()
