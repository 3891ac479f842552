import random

import pytest

from spinacc import acceptability as acc
from spinacc import constructions as C
from spinacc.modrep import decompose_guarded


def test_ical_s4_module_is_irreducible_of_dim_six(corpus):
    G = corpus.instance("ical:S4")
    dec = decompose_guarded(G)[0]
    big = [c for c in dec.constituents if c.dim == 6]
    assert len(big) == 1 and big[0].mult == 1 and big[0].fs == 1


def test_unknown_point_group():
    with pytest.raises(C.UnknownPointGroup):
        C.ical_instance("A7")


def test_standard_embed(corpus):
    G = corpus.instance("example1")
    H = C.standard_embed(G, 9)
    assert H.n == 9 and H.order == G.order
    with pytest.raises(C.DimensionTooLarge):
        C.standard_embed(G, 11)


def test_h_family_verdicts(corpus):
    v = [corpus.classification(f"h123:{i}").analysis.unacceptable for i in (1, 2, 3)]
    assert v == [False, False, True]
    assert corpus.classification("h123:3").tags


def test_both_types_instance(corpus):
    G = corpus.instance("both_types")
    assert G.order == 16
    cl = corpus.classification("both_types")
    assert acc.has_type(cl, "IIIa") and acc.has_type(cl, "IIIb")


def test_transfer_matches_generic(corpus):
    G = corpus.instance("hcal:d=3")
    rng = random.Random(3)
    for chi in G.mu2_characters():
        if chi.is_trivial():
            continue
        K = G.kernel(chi)
        for c in K.mu2_characters()[:4]:
            assert list(C.transfer(c, G, K)) == list(C.transfer_generic(c, G, K))


def test_transfer_rejects_wrong_index(corpus):
    G = corpus.instance("example1")
    with pytest.raises(C.IndexNotTwo):
        C.transfer(G.trivial_character(), G, G.subgroup([G.gen_elems[0]]))


def test_small_n_instances_close():
    rng = random.Random(0)
    for n in (3, 5):
        for _ in range(3):
            G = C.small_n_instance(n, rng)
            assert G.n == n and G.order >= 1
