import random

from spinacc import gspin


def test_trivial_scalars_keep_verdict(corpus):
    for name in ("example1", "h123:1", "gcal:d=4"):
        G = corpus.instance(name)
        gi = gspin.GSpinInstance(G, [0] * len(G.gens))
        v = gspin.gspin_acceptable(gi)
        assert v.agree
        assert v.direct == corpus.classification(name).analysis.unacceptable


def test_mu4_twist_of_example1():
    # scalars commute with everything, so E stays the same module
    from spinacc.constructions import example1
    G = example1()
    gi = gspin.GSpinInstance(G, [G.M // 4, 0])
    v = gspin.gspin_acceptable(gi)
    assert v.agree and v.direct
    assert v.order_gamma_r >= G.order


def test_factorization_and_random_twists(corpus):
    rng = random.Random(5)
    G = corpus.instance("h123:2")
    for _ in range(3):
        sc, _m = gspin.random_twist(G, rng)
        gi = gspin.GSpinInstance(G, sc)
        assert gspin.check_factorization(gi, sample=16)
        assert gspin.gspin_acceptable(gi).agree
