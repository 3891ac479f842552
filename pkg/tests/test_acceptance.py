"""Acceptance criteria 1-11, one pass/fail line each.

Every criterion is backed by one or more registered checks; the checks
share a single corpus so each instance is built and classified once.
"""

import pytest

from spinacc.corpus_checks import CHECKS, run_checks

CRITERIA = {
    1: "order-16 mu4 x mu4 example: type I, X, Y, E exact",
    2: "H1, H2 acceptable, H3 unacceptable",
    3: "z_B g z_B^-1 = kappa(g) g on random split elements",
    4: "three U1 routes agree on the corpus",
    5: "Y nonempty, Klein quotient, type I invariants",
    6: "type III examples and the G' instance",
    7: "stability under standard embedding",
    8: "small n (3, 5) always acceptable",
    9: "GSpin verdict equals the r_S verdict under random twists",
    10: "Gallagher determinant identity and orthogonal induction",
    11: "two-prime consistency and certificate re-verification",
}


@pytest.fixture(scope="module")
def results(corpus):
    return run_checks(corpus=corpus)


def _line(k, rs):
    ok = bool(rs) and all(r.ok for r in rs)
    secs = sum(r.seconds for r in rs)
    ids = ", ".join(r.id for r in rs)
    return ok, f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({secs:5.1f}s)  {CRITERIA[k]}  [{ids}]"


def test_every_criterion_has_checks():
    covered = {c.criterion for c in CHECKS}
    assert set(CRITERIA) <= covered


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, results, capsys):
    rs = [r for r in results if r.criterion == k]
    ok, line = _line(k, rs)
    with capsys.disabled():
        print("\n" + line)
        for r in rs:
            if not r.ok:
                print(f"    {r.id}: {r.detail}")
    assert ok, "; ".join(f"{r.id}: {r.detail}" for r in rs if not r.ok)


def test_supplementary_checks(results, capsys):
    rs = [r for r in results if r.criterion is None]
    with capsys.disabled():
        for r in rs:
            print(f"\nsupplementary {r.id}: {'PASS' if r.ok else 'FAIL'}  {r.title}")
    assert all(r.ok for r in rs), [(r.id, r.detail) for r in rs if not r.ok]
