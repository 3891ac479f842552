from spinacc.clifford import rotation_matrix
from spinacc.group_engine import close
from spinacc.modrep import choose_primes, decompose, decompose_guarded, x_subgroup


def test_choose_primes_example():
    G = close([rotation_matrix(7, 4, 1, 2, 1, 4), rotation_matrix(7, 4, 3, 4, 1, 4)])
    assert G.order == 16 and G.exponent() == 4
    ctxs = choose_primes(G, count=2)
    assert ctxs[0].p == 101
    assert all(c.p % 4 == 1 and c.p > 16 for c in ctxs)


def test_rotation_of_order_five():
    G = close([rotation_matrix(7, 20, 1, 2, 1, 5)])
    dec = decompose(G, choose_primes(G, 1)[0])
    keys = sorted((c.dim, c.mult, c.fs) for c in dec.constituents)
    assert keys == [(1, 1, 0), (1, 1, 0), (1, 5, 1)]


def test_primes_agree(corpus):
    G = corpus.instance("ical:A4")
    decs = decompose_guarded(G, primes=3)
    assert len({tuple(d.invariant_multiset()) for d in decs}) == 1
    assert sum(c.dim * c.mult for c in decs[0].constituents) == 7


def test_x_subgroup_contains_trivial(corpus):
    dec = decompose_guarded(corpus.instance("example1"))[0]
    X = x_subgroup(dec)
    assert any(c.is_trivial() for c in X)
