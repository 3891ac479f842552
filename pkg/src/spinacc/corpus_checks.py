"""Registry of verification checks run by `verify-paper` and the acceptance tests.

Each check returns (ok, detail).  The corpus of builders is built once and
its classifications are cached.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import acceptability as acc
from . import constructions as C
from . import gspin, modrep, report, verify
from .clifford import SpinElement, kappa, spin_rep, z_B
from .cyclotomic import CycNum
from .group_engine import MorphismInstance

CORPUS = [
    "example1", "trivial", "gcal:d=4", "gcal:d=3", "gprime:d=4:var=0", "gprime:d=4:var=1",
    "h123:1", "h123:2", "h123:3", "hcal:d=3", "ical:A4", "ical:S4", "both_types",
]


class Corpus:
    def __init__(self, seed=0, primes=2, names=None):
        self.seed = seed
        self.primes = primes
        self.names = list(names or CORPUS)
        self._inst = {}
        self._cl = {}

    def instance(self, name) -> MorphismInstance:
        if name not in self._inst:
            from .instances import build_construct
            self._inst[name] = build_construct(name)
        return self._inst[name]

    def classification(self, name):
        if name not in self._cl:
            self._cl[name] = acc.classify(self.instance(name), self.primes, self.seed)
        return self._cl[name]

    def items(self):
        for nm in self.names:
            yield nm, self.instance(nm), self.classification(nm)


@dataclass
class Check:
    id: str
    title: str
    criterion: int | None
    fn: object


@dataclass
class CheckResult:
    id: str
    title: str
    ok: bool
    detail: str
    seconds: float
    criterion: int | None = None

    def to_json(self):
        return {"id": self.id, "title": self.title, "ok": self.ok, "detail": self.detail,
                "seconds": round(self.seconds, 3), "criterion": self.criterion}


CHECKS: list[Check] = []


def check(id, title, criterion=None):
    def deco(fn):
        CHECKS.append(Check(id, title, criterion, fn))
        return fn
    return deco


def _names(G, chars):
    return sorted(G.char_name(c) for c in chars)


# ---------------------------------------------------------------------------

@check("example1", "mu4 x mu4 example: type I with X = {1, a2b2}", 1)
def check_example1(corpus: Corpus):
    G = corpus.instance("example1")
    cl = corpus.classification("example1")
    a = cl.analysis
    X = _names(G, a.X)
    Y = {G.char_name(c): m for c, m in a.Y.items()}
    E = _names(G, a.E)
    b2 = G.labeled("b2")
    bX = _names(G, [b2 * x for x in a.X])
    ok = (G.order == 16 and a.unacceptable and acc.has_type(cl, "I")
          and X == ["1", "a2b2"] and Y == {"1": 1, "a2b2": 2} and len(E) == 2 and E == bX)
    return ok, f"order {G.order}, X {X}, Y {Y}, E {E}"


@check("h-trichotomy", "H1, H2 acceptable and H3 unacceptable", 2)
def check_h(corpus: Corpus):
    v = [corpus.classification(f"h123:{i}").analysis.unacceptable for i in (1, 2, 3)]
    return v == [False, False, True], f"unacceptable: {v}"


def _random_split_element(A, B, M, rng):
    """Random element of Spin(A) x Spin(B) together with odd x odd products."""
    n = len(A) + len(B)
    At = C.Atoms(n, M)
    g = At.one()
    for _ in range(rng.randint(1, 5)):
        kind = rng.choice(["rotA", "rotB", "odd", "diff"])
        if kind == "rotA" and len(A) >= 2:
            i, j = sorted(rng.sample(A, 2))
            g = g * At.rot((i, j), rng.randrange(1, 8), 8)
        elif kind == "rotB":
            i, j = sorted(rng.sample(B, 2))
            g = g * At.rot((i, j), rng.randrange(1, 8), 8)
        elif kind == "odd":
            g = g * At.e(rng.choice(A)) * At.e(rng.choice(B))
        elif len(A) >= 2 and len(B) >= 2:
            a1, a2 = rng.sample(A, 2)
            b1, b2 = rng.sample(B, 2)
            g = g * At.refl_diff(a1, a2, rng.choice([1, -1])) * At.refl_diff(b1, b2, rng.choice([1, -1]))
        else:
            g = g * At.e(rng.choice(A)) * At.e(rng.choice(B))
    return g


@check("lemma-critacc", "z_B g z_B^-1 = kappa(g) g on Spin(a, b)", 3)
def check_critacc(corpus: Corpus, per_split=40):
    rng = random.Random(f"critacc:{corpus.seed}")
    n, M = 7, 16
    fails = 0
    total = 0
    seen = set()
    for a in (1, 3, 5):
        for _ in range(per_split):
            coords = list(range(1, n + 1))
            rng.shuffle(coords)
            A, B = sorted(coords[:a]), sorted(coords[a:])
            g = _random_split_element(A, B, M, rng)
            zb = z_B(n, M, B)
            k = kappa(g, A)
            seen.add((a, k))
            lhs = zb * g * zb.inverse()
            rhs = g if k == 1 else -g
            total += 1
            if lhs != rhs:
                fails += 1
    both = all((a, 1) in seen and (a, -1) in seen for a in (1, 3, 5))
    return fails == 0 and total >= 100 and both, f"{total} elements, {fails} failures, both signs: {both}"


@check("u1-equivalence", "three U1 tests agree (eigenvalue, exterior power, spin trace)", 4)
def check_u1(corpus: Corpus):
    bad = []
    pairs = 0
    for nm, G, cl in corpus.items():
        for eta in G.mu2_characters():
            a = acc.u1_holds(G, eta)[0]
            b = acc.u1_holds_lambda(G, eta)
            vals = {a, b}
            if G.lifts is not None:
                vals.add(acc.u1_holds_spin(G, eta))
            pairs += 1
            if len(vals) != 1:
                bad.append((nm, G.char_name(eta)))
    return not bad, f"{pairs} pairs, disagreements: {bad}"


@check("y-nonempty", "unacceptable implies Y(r) nonempty", 5)
def check_y(corpus: Corpus):
    bad = [nm for nm, G, cl in corpus.items() if cl.analysis.unacceptable and not cl.analysis.Y]
    return not bad, f"violations: {bad}"


@check("klein-quotient", "unacceptable implies a (Z/2)^2 quotient", 5)
def check_klein(corpus: Corpus):
    bad = [nm for nm, G, cl in corpus.items() if cl.analysis.unacceptable and not G.has_quotient("Z2^2")]
    return not bad, f"violations: {bad}"


@check("type-one-y", "type I: Y(r) = {1, delta} with multiplicities 1 and 2", 5)
def check_type_one_y(corpus: Corpus):
    bad = []
    n = 0
    for nm, G, cl in corpus.items():
        if not acc.has_type(cl, "I"):
            continue
        n += 1
        mults = sorted((not c.is_trivial(), m) for c, m in cl.analysis.Y.items())
        if mults != [(False, 1), (True, 2)]:
            bad.append(nm)
    return not bad and n > 0, f"{n} type-I instances, violations: {bad}"


@check("type-one-orbit", "type I: E(r) is one X(r)-orbit", 5)
def check_type_one_orbit(corpus: Corpus):
    bad = []
    for nm, G, cl in corpus.items():
        if not acc.has_type(cl, "I"):
            continue
        a = cl.analysis
        eta = a.E[0]
        if set(a.E) != {eta * x for x in a.X}:
            bad.append(nm)
    return not bad, f"violations: {bad}"


@check("type-two-quotient", "type II: (Z/2)^3 or Z/2 x Z/4 quotient; (Z/2)^3 when discrete", None)
def check_type_two(corpus: Corpus):
    bad = []
    n = 0
    for nm, G, cl in corpus.items():
        if not acc.has_type(cl, "II"):
            continue
        n += 1
        ok = G.has_quotient("Z2^3") or G.has_quotient("Z2xZ4")
        if cl.discrete:
            ok = ok and G.has_quotient("Z2^3")
        if not ok:
            bad.append(nm)
    return not bad and n > 0, f"{n} type-II instances, violations: {bad}"


@check("type-three", "hcal IIIa, ical(A4/S4) IIIb w.r.t. alpha; gprime type II w.r.t. kappa, discrete", 6)
def check_type_three(corpus: Corpus):
    out = {}
    h = corpus.classification("hcal:d=3")
    out["hcal IIIa"] = h.analysis.unacceptable and acc.has_type(h, "IIIa", "alpha")
    for H in ("A4", "S4"):
        c = corpus.classification(f"ical:{H}")
        out[f"ical {H} IIIb"] = c.analysis.unacceptable and acc.has_type(c, "IIIb", "alpha")
    g = corpus.classification("gprime:d=4:var=0")
    out["gprime II kappa"] = acc.has_type(g, "II", "kappa") and g.discrete
    return all(out.values()), str(out)


@check("gprime-variants", "both sign choices on F3 for vartheta classify identically", None)
def check_gprime_variants(corpus: Corpus):
    a = corpus.classification("gprime:d=4:var=0")
    b = corpus.classification("gprime:d=4:var=1")
    ta = sorted((t.kind, t.chi, t.eta) for t in a.tags)
    tb = sorted((t.kind, t.chi, t.eta) for t in b.tags)
    return ta == tb and a.discrete == b.discrete, f"{len(ta)} tags each"


@check("both-types", "D8 x mu2 image tagged with both IIIa and IIIb for one pair", None)
def check_both_types(corpus: Corpus):
    G = corpus.instance("both_types")
    cl = corpus.classification("both_types")
    a = {(t.chi, t.eta) for t in cl.tags if t.kind == "IIIa"}
    b = {(t.chi, t.eta) for t in cl.tags if t.kind == "IIIb"}
    inv = G.abelian_invariants()
    return bool(a & b) and G.order == 16, f"pairs with both subtypes: {sorted(a & b)[:2]}, invariants {inv}"


@check("embedding", "standard embedding into Spin(9) keeps the verdict and X(r)", 7)
def check_embedding(corpus: Corpus):
    out = {}
    for nm in ("example1", "trivial"):
        G = corpus.instance(nm)
        a = corpus.classification(nm).analysis
        H = C.standard_embed(G, 9)
        b = acc.analyze(H, corpus.primes, corpus.seed)
        same_x = [x.on_generators() for x in a.X] == [x.on_generators() for x in b.X]
        out[nm] = (a.unacceptable == b.unacceptable) and same_x
    ok = out["example1"] and out["trivial"] and corpus.classification("example1").analysis.unacceptable
    return ok, str(out)


@check("small-n", "n in {3, 5}: random subgroups are acceptable", 8)
def check_small_n(corpus: Corpus, count=30):
    rng = random.Random(f"small:{corpus.seed}")
    bad = []
    total = 0
    for n in (3, 5):
        for _ in range(count):
            G = C.small_n_instance(n, rng)
            a = acc.analyze(G, corpus.primes, corpus.seed)
            total += 1
            if a.E:
                bad.append((n, G.order))
    return not bad and total >= 50, f"{total} instances, with E nonempty: {bad}"


@check("gspin-transfer", "GSpin verdict equals the verdict of r_S on Gamma(r)", 9)
def check_gspin(corpus: Corpus, twists=20, sample=64):
    rng = random.Random(f"gspin:{corpus.seed}")
    bad = []
    total = 0
    for nm, G, cl in corpus.items():
        for t in range(twists):
            scalars, m = gspin.random_twist(G, rng)
            gi = gspin.GSpinInstance(G, scalars, name=f"{nm}*{t}", max_order=200000)
            v = gspin.gspin_acceptable(gi, corpus.primes, corpus.seed)
            fac = gspin.check_factorization(gi, sample=sample, seed=t)
            total += 1
            if not v.agree or not fac or v.order_gamma_r != 2 * v.order_gamma:
                bad.append((nm, scalars))
    return not bad, f"{total} twists, disagreements: {bad[:3]}"


@check("gallagher", "det Ind U = chi^dim U * transfer(det U) on all index-2 pairs", 10)
def check_gallagher(corpus: Corpus):
    pairs = 0
    bad = []
    for nm, G, cl in corpus.items():
        ctx = cl.analysis.dec.ctx
        for chi in G.mu2_characters():
            if chi.is_trivial():
                continue
            sub = G.kernel(chi)
            sd = modrep.decompose(sub, ctx, corpus.seed)
            res = C.det_induction_check(G, sub, sd, ctx)
            for c in sd.constituents:
                if c.det is None:
                    continue
                import numpy as np
                if not np.array_equal(C.transfer(c.det, G, sub), C.transfer_generic(c.det, G, sub)):
                    bad.append((nm, G.char_name(chi), "transfer"))
            for k, ok in res:
                pairs += 1
                if not ok:
                    bad.append((nm, G.char_name(chi), k))
    return not bad and pairs > 0, f"{pairs} (pair, constituent) checks, failures: {bad[:3]}"


def _e(M, i, n=7):
    return [CycNum.one(M) if j == i - 1 else CycNum.zero(M) for j in range(n)]


def _comb(M, *terms, n=7):
    out = [CycNum.zero(M)] * n
    for c, v in terms:
        out = [a + b * c for a, b in zip(out, v)]
    return out


def induction_cases(corpus: Corpus):
    """(label, G, chi, V0 pieces) for every case where exact V0 bases are at hand."""
    out = []
    H = corpus.instance("hcal:d=3")
    M = H.M
    out.append(("hcal, V0 = P", H, H.labeled("alpha"), [[_e(M, 2), _e(M, 3)]]))
    out.append(("hcal, V0 = P + Q line", H, H.labeled("alpha"),
                [[_e(M, 2), _e(M, 3)]]))
    for nm in ("ical:A4", "ical:S4"):
        I = corpus.instance(nm)
        M = I.M
        out.append((f"{nm}, V0 = T", I, I.labeled("alpha"), [[_e(M, 2), _e(M, 3), _e(M, 4)]]))
    G = corpus.instance("h123:2")
    M = G.M
    d = G.labeled("delta")
    out.append(("H2, V0 = F1", G, d, [[_e(M, 2), _e(M, 3)]]))
    out.append(("H2, V0 = graph of 2 id", G, d,
                [[_comb(M, (1, _e(M, 2)), (2, _e(M, 4))), _comb(M, (1, _e(M, 3)), (2, _e(M, 5)))]]))
    A = C.Atoms(7, 8)
    Q = C._instance(7, 8, [A.rot((2, 3), 1, 4)], "quarter", None, ["R"])
    out.append(("mu4 quarter turn", Q, Q.character_from_signs((-1,)),
                [[_comb(8, (1, _e(8, 2)), (3, _e(8, 3)))]]))
    return out


@check("orthogonal-induction", "exact orthogonal induction splits V = U0 + zU0", 10)
def check_induction(corpus: Corpus):
    bad = []
    branches = set()
    for label, G, chi, pieces in induction_cases(corpus):
        sub = G.kernel(chi)
        trace = []
        try:
            U0, zU0 = C.orthogonal_induction_split(G, sub, pieces, trace)
        except (C.HypothesisFailed, C.BasisUnavailable) as e:
            bad.append((label, str(e)))
            continue
        from . import linalg
        orth = all(linalg.dot(u, w).is_zero() for u in U0 for w in zU0)
        dims = len(U0) == sum(len(p) for p in pieces) and linalg.rank(U0 + zU0) == 2 * len(U0)
        stable = C._is_invariant(sub, U0)
        for t in trace:
            branches.add(t["case"] if t["case"] == "distinct" else f"isotypic{t['delta_sq']:+d}")
        if not (orth and dims and stable):
            bad.append((label, orth, dims, stable))
    all_branches = {"distinct", "isotypic+1", "isotypic-1"} <= branches
    return not bad and all_branches, f"branches {sorted(branches)}, failures {bad}"


@check("engine-guard", "two-prime consistency and certificate re-verification", 11)
def check_guard(corpus: Corpus):
    bad = []
    for nm, G, cl in corpus.items():
        decs = cl.analysis.decs
        if len(decs) < 2 or any(d.invariant_multiset() != decs[0].invariant_multiset() for d in decs):
            bad.append((nm, "primes"))
            continue
        rep = report.build_report(G, cl, primes=corpus.primes, seed=corpus.seed)
        rep = report.loads(report.dumps(rep))
        spin = None
        if G.level == "spin":
            r = spin_rep(G.n, G.M)
            spin = [r.matrix(s) for s in G.lifts]
        try:
            verify.verify_report(G.gens, rep, spin_gens=spin)
        except verify.CertificateError as e:
            bad.append((nm, str(e)))
    return not bad, f"failures: {bad}"


@check("spin-criterion", "unacceptable iff some eta has S = S x eta and no submodule of det eta", None)
def check_spin_criterion(corpus: Corpus):
    bad = []
    for nm, G, cl in corpus.items():
        a = cl.analysis
        Xs = set(a.X)
        crit = any(acc.u1_holds_spin(G, eta) and eta not in Xs for eta in G.mu2_characters())
        if crit != a.unacceptable:
            bad.append(nm)
    return not bad, f"violations: {bad}"


@check("restriction-coherence", "for chi in Y(r): U1 for eta iff U1 for eta on ker chi", None)
def check_restriction(corpus: Corpus):
    bad = []
    n = 0
    for nm, G, cl in corpus.items():
        for chi in cl.analysis.Y:
            if chi.is_trivial():
                continue
            sub = G.kernel(chi)
            for eta in G.mu2_characters():
                n += 1
                if acc.u1_holds(G, eta)[0] != acc.u1_holds(sub, eta.restrict(sub))[0]:
                    bad.append((nm, G.char_name(chi), G.char_name(eta)))
    return not bad, f"{n} pairs, violations: {bad[:3]}"


@check("example1-spin-character", "example1: spin trace vanishes off ker b2", None)
def check_ex1_spin(corpus: Corpus):
    G = corpus.instance("example1")
    b2 = G.labeled("b2")
    vals = [acc.spin_trace_of(G, x).is_zero() for x in range(G.order) if b2(x) == -1]
    return all(vals) and acc.u1_holds_spin(G, b2), f"{len(vals)} elements off the kernel"


# ---------------------------------------------------------------------------

def run_checks(only=None, seed=0, primes=2, corpus=None):
    corpus = corpus or Corpus(seed, primes)
    ids = {c.id for c in CHECKS}
    if only is not None:
        wanted = [only] if isinstance(only, str) else list(only)
        for w in wanted:
            if w not in ids:
                raise KeyError(f"unknown check {w!r}")
    else:
        wanted = None
    out = []
    for c in CHECKS:
        if wanted is not None and c.id not in wanted:
            continue
        t = time.perf_counter()
        try:
            ok, detail = c.fn(corpus)
        except Exception as e:  # a crash is a failure, reported with its type
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append(CheckResult(c.id, c.title, bool(ok), detail, time.perf_counter() - t, c.criterion))
    return out
