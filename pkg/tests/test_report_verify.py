import copy

import pytest

from spinacc import report, verify
from spinacc.cli import _spin_blocks


def _rep(corpus, name):
    G = corpus.instance(name)
    return G, report.build_report(G, corpus.classification(name))


def _check(G, rep):
    blocks = _spin_blocks(G) if G.level == "spin" else None
    return verify.verify_report(G.gens, report.loads(report.dumps(rep)), spin_gens=blocks)


@pytest.mark.parametrize("name", ["example1", "h123:3", "trivial"])
def test_roundtrip_and_verify(corpus, name):
    G, rep = _rep(corpus, name)
    assert report.loads(report.dumps(rep)) == rep
    assert _check(G, rep)


def test_deterministic_dump(corpus):
    G = corpus.instance("gcal:d=4")
    a = report.dumps(report.build_report(G, seed=0))
    b = report.dumps(report.build_report(G, seed=0))
    assert a == b


def test_tampered_u1_vector_rejected(corpus):
    G, rep = _rep(corpus, "example1")
    bad = copy.deepcopy(rep)
    name = next(iter(bad["certificates"]["U1"]))
    vec = bad["certificates"]["U1"][name][0]["vector"]
    vec[0] = {"M": 8, "coeffs": [[0, 1]]}
    vec[1] = {"M": 8, "coeffs": [[0, 1]]}
    with pytest.raises(verify.CertificateError):
        _check(G, bad)


def test_tampered_verdict_rejected(corpus):
    G, rep = _rep(corpus, "example1")
    bad = copy.deepcopy(rep)
    bad["E"] = []
    bad["verdict"] = "acceptable"
    with pytest.raises(verify.CertificateError):
        _check(G, bad)


def test_render_text(corpus):
    _, rep = _rep(corpus, "example1")
    txt = report.render_text(rep)
    assert "unacceptable" in txt
