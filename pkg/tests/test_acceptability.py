import pytest

from spinacc import acceptability as acc
from spinacc.cyclotomic import CycMatrix
from spinacc.group_engine import close
from spinacc.modrep import decompose_guarded


def test_trivial_is_not_discrete(corpus):
    cl = corpus.classification("trivial")
    assert not cl.discrete
    assert not cl.analysis.unacceptable
    assert all(c.is_trivial() for c in cl.analysis.Y)


def test_octahedral_rotations_discrete_and_stable():
    M = 4
    r = CycMatrix.from_rows([[0, -1, 0], [1, 0, 0], [0, 0, 1]], M)
    t = CycMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]], M)
    G = close([r, t])
    assert G.order == 24
    a = acc.analyze(G)
    assert acc.is_discrete(a) and acc.is_stable(a)
    assert not a.unacceptable


def test_example1_types(corpus):
    G = corpus.instance("example1")
    cl = corpus.classification("example1")
    a = cl.analysis
    names = {G.char_name(c) for c in a.E}
    assert names == {"a2", "b2"}
    assert {G.char_name(c) for c in a.X} == {"1", "a2b2"}
    assert acc.has_type(cl, "I")


def test_example1_kernel_of_a2b2(corpus):
    G = corpus.instance("example1")
    K = G.kernel(G.labeled("a2b2"))
    dec = decompose_guarded(K)[0]
    triv = [c for c in dec.constituents if c.dim == 1 and int(c.chi.min()) == 1 == int(c.chi.max())]
    assert len(triv) == 1 and triv[0].mult == 3


def test_u1_three_routes_agree(corpus):
    for name in ("example1", "gcal:d=4", "h123:2", "ical:A4"):
        G = corpus.instance(name)
        for eta in G.mu2_characters():
            ok, _ = acc.u1_holds(G, eta)
            assert ok == acc.u1_holds_lambda(G, eta) == acc.u1_holds_spin(G, eta)


def test_gcal_is_type_one_at_upsilon(corpus):
    for name in ("gcal:d=4", "gcal:d=3"):
        G = corpus.instance(name)
        cl = corpus.classification(name)
        assert acc.has_type(cl, "I")
        assert G.labeled("upsilon") in set(cl.analysis.E)


def test_classify_needs_seven():
    G = close([CycMatrix.from_rows([[0, -1, 0], [1, 0, 0], [0, 0, 1]], 4)])
    with pytest.raises(acc.NotSeven):
        acc.classify(G)
