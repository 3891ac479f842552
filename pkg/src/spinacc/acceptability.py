"""(U1), (U2), X(r), Y(r), E(r), verdicts and the type I/II/IIIa/IIIb tags."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .cyclotomic import CycMatrix, CycNum
from .group_engine import MorphismInstance, Mu2Character
from . import linalg
from . import modrep

log = logging.getLogger(__name__)


class MissingLifts(ValueError):
    pass


class NotSeven(ValueError):
    pass


class InconsistentRoutes(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# per-element tests (exact)

_KER_CACHE = {}


def _eigen_kernel(G: MorphismInstance, x: int, lam: int):
    # shared across instances: twisted covers repeat the same matrices many times
    A = G.matrix(x)
    key = (G.M, A.key(), lam)
    if key not in _KER_CACHE:
        if len(_KER_CACHE) > 200000:
            _KER_CACHE.clear()
        B = A.add_scalar_identity(CycNum.from_int(G.M, -lam))
        _KER_CACHE[key] = linalg.nullspace(B.rows(), G.M)
    return _KER_CACHE[key]


def u1_holds(G: MorphismInstance, eta: Mu2Character):
    """True iff every class representative has eigenvalue eta(gamma) on E.

    The certificate maps class index -> an exact eigenvector.
    """
    cert = {}
    for ci, x in enumerate(G.class_reps()):
        ker = _eigen_kernel(G, x, eta(x))
        if not ker:
            return False, None
        cert[ci] = ker[0]
    return True, cert


def exterior_sharp_trace(A: CycMatrix) -> CycNum:
    """sum_{i=0}^{k} tr Lambda^i(A), n = 2k+1, from Newton's identities on tr A^j."""
    n = A.shape[0]
    k = (n - 1) // 2
    pw = []
    P = A
    for j in range(k):
        pw.append(P.trace())
        if j + 1 < k:
            P = P @ A
    e = modrep.newton_elementary(pw)
    out = CycNum.zero(A.M)
    for v in e:
        out = out + v
    return out


def u1_holds_lambda(G: MorphismInstance, eta: Mu2Character):
    for x in G.class_reps():
        if eta(x) == -1:
            key = ("lam", x)
            if key not in G._cache:
                G._cache[key] = exterior_sharp_trace(G.matrix(x))
            if not G._cache[key].is_zero():
                return False
    return True


def _spin_gen_mats(G):
    if "spin_gens" not in G._cache:
        from .clifford import spin_rep
        rep = spin_rep(G.n, G.M)
        G._cache["spin_gens"] = [rep.matrix(s) for s in G.lifts]
    return G._cache["spin_gens"]


def spin_trace_of(G: MorphismInstance, x: int) -> CycNum:
    """Trace on S of a lift of x (the sign of the lift does not matter for zero tests)."""
    key = ("strace", x)
    if key in G._cache:
        return G._cache[key]
    S = G.spin_matrix(x)
    if S is None:
        if G.lifts is None:
            raise MissingLifts(f"instance {G.name!r} carries no spin lifts")
        mats = _spin_gen_mats(G)
        S = CycMatrix.identity(G.M, mats[0].shape[0])
        for j in G.words[x]:
            S = S @ mats[j]
    t = S.trace()
    G._cache[key] = t
    return t


def u1_holds_spin(G: MorphismInstance, eta: Mu2Character):
    if G.lifts is None:
        raise MissingLifts(f"instance {G.name!r} carries no spin lifts")
    for x in G.class_reps():
        if eta(x) == -1 and not spin_trace_of(G, x).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# analysis of one instance

@dataclass
class Analysis:
    group: MorphismInstance
    decs: list
    chars: list
    X: list
    x_cert: dict
    Y: dict  # Mu2Character -> multiplicity
    y_basis: dict
    U1: dict  # Mu2Character -> (bool, cert)
    E: list

    @property
    def dec(self):
        return self.decs[0]

    @property
    def unacceptable(self):
        return bool(self.E)

    def in_X(self, eta):
        return eta in set(self.X)


def analyze(G: MorphismInstance, primes=2, seed=0, ctxs=None) -> Analysis:
    if ctxs is None:
        decs = modrep.decompose_guarded(G, primes, seed)
    else:
        decs = [modrep.decompose(G, c, seed) for c in ctxs]
        ref = decs[0].invariant_multiset()
        for d in decs[1:]:
            if d.invariant_multiset() != ref:
                raise modrep.BadPrime("two-prime guard failed on a sub-instance")
    dec = decs[0]
    chars = G.mu2_characters()
    # X(r) with constituent-subset certificates
    real = [i for i, c in enumerate(dec.constituents) if c.fs == 1]
    x_cert = {G.trivial_character(): []}
    for i in real:
        det = dec.constituents[i].det
        for eta, sub in list(x_cert.items()):
            new = eta * det
            if new not in x_cert:
                x_cert[new] = sub + [i]
    X = sorted(x_cert, key=lambda c: (not c.is_trivial(), c.on_generators()[::-1]))
    # Y(r): exact common eigenspaces on generators
    Y = {}
    y_basis = {}
    for chi in chars:
        rows = []
        for j, g in enumerate(G.gen_elems):
            A = G.matrix(g).add_scalar_identity(CycNum.from_int(G.M, -chi(g)))
            rows.extend(A.rows())
        basis = linalg.nullspace(rows, G.M)
        if basis:
            Y[chi] = len(basis)
            y_basis[chi] = basis
    # second route: dim-1 real constituents
    alt = {}
    for c in dec.constituents:
        if c.dim == 1 and c.fs == 1:
            alt[c.det] = alt.get(c.det, 0) + c.mult
    if alt != Y:
        raise InconsistentRoutes(f"Y(r) routes disagree on {G.name!r}")
    U1 = {chi: u1_holds(G, chi) for chi in chars}
    Xs = set(X)
    E = [chi for chi in chars if U1[chi][0] and chi not in Xs]
    return Analysis(G, decs, chars, X, x_cert, Y, y_basis, U1, E)


def x_r(G, **kw):
    return analyze(G, **kw).X


def y_r(G, **kw):
    return analyze(G, **kw).Y


def e_r(G, **kw):
    return analyze(G, **kw).E


def is_discrete(a: Analysis) -> bool:
    return all(c.fs == 1 and c.mult == 1 for c in a.dec.constituents)


def is_stable(a: Analysis) -> bool:
    if not is_discrete(a):
        return False
    cons = a.dec.constituents
    G = a.group
    for r in range(1, len(cons) + 1):
        for T in itertools.combinations(range(len(cons)), r):
            if sum(cons[i].dim for i in T) % 2:
                continue
            prod = G.trivial_character()
            for i in T:
                prod = prod * cons[i].det
            if prod.is_trivial():
                return False
    return True


# ---------------------------------------------------------------------------
# classification for n = 7

@dataclass
class TypeTag:
    kind: str  # "I", "II", "IIIa", "IIIb"
    chi: str | None = None
    eta: str | None = None

    def to_json(self):
        return {"type": self.kind, "chi": self.chi, "eta": self.eta}


def _det_mod(G, con, ctx):
    """Full determinant values mod p of a constituent on the generators."""
    p = ctx.p
    vals = []
    for j in range(len(G.gen_elems)):
        pw = []
        x = 0
        for _ in range(con.dim):
            x = int(G.R[x, j])
            pw.append(int(con.chi[x]))
        vals.append(modrep.newton_elementary(pw, p)[con.dim] % p)
    return vals


def _real_pieces(sub, dec):
    """Real irreducible Gamma_0-modules: (dim, det character, complex constituents, multiplicity)."""
    G = sub
    inv = G.inverses()
    cons = dec.constituents
    used = set()
    out = []
    for i, c in enumerate(cons):
        if i in used:
            continue
        if c.fs == 1:
            out.append((c.dim, c.det, [i], c.mult))
        elif c.fs == -1:
            out.append((2 * c.dim, G.trivial_character(), [i, i], c.mult // 2))
        else:
            conj = [k for k, d in enumerate(cons) if k != i and np.array_equal(d.chi, c.chi[inv])]
            if len(conj) != 1:
                raise InconsistentRoutes("conjugate constituent not found")
            used.add(conj[0])
            out.append((2 * c.dim, G.trivial_character(), [i, conj[0]], c.mult))
        used.add(i)
    return out


def subtype_search(a: Analysis, sub_a: Analysis, chi: Mu2Character, eta: Mu2Character):
    """Character-level test for IIIa / IIIb with respect to (chi, eta)."""
    G = a.group
    sub = sub_a.group
    dec = a.dec
    sdec = sub_a.dec
    ctx = dec.ctx
    p = ctx.p
    if sdec.ctx.p != p:
        raise ValueError("sub-instance must be decomposed at the parent's prime")
    pidx = sub.parent_index
    cons = dec.constituents
    scons = sdec.constituents
    # Res[j][k] = <Res rho_j, psi_k>
    Res = [[modrep.inner_product(sub, rj.chi[pidx], pk.chi, ctx) for pk in scons] for rj in cons]
    # multiplicities of E-constituents in F = E - chi
    multF = []
    for c in cons:
        m = c.mult
        if c.dim == 1 and c.det is not None and c.det == chi and c.fs == 1:
            m -= 1
        multF.append(m)
    # real pieces of F restricted to Gamma_0: multiplicities from E minus one trivial line
    pieces = _real_pieces(sub, sdec)
    avail = []
    for dim, det, idx, m in pieces:
        if dim == 1 and det.is_trivial():
            m -= 1
        avail.append(m)
    eta0 = eta.restrict(sub)
    dets = [_det_mod(G, c, ctx) for c in cons]
    chi_gen = [chi(g) % p for g in G.gen_elems]
    results = {"IIIa": None, "IIIb": None}
    for total in (2, 3):
        for combo in _multisets(pieces, avail, total):
            det = sub.trivial_character()
            for k in combo:
                det = det * pieces[k][1]
            if det != eta0:
                continue
            ind = [0] * len(cons)
            for k in combo:
                for psi in pieces[k][2]:
                    for j in range(len(cons)):
                        ind[j] += Res[j][psi]
            if sum(ind[j] * cons[j].dim for j in range(len(cons))) != 2 * total:
                continue  # Ind has constituents outside E
            if any(ind[j] > multF[j] for j in range(len(cons))):
                continue
            rest = [multF[j] - ind[j] for j in range(len(cons))]
            if total == 3 and not any(rest):
                results["IIIb"] = combo
            if total == 2 and sum(rest[j] * cons[j].dim for j in range(len(cons))) == 2:
                # det of the complement on generators must be chi
                ok = True
                for gi in range(len(G.gen_elems)):
                    v = 1
                    for j in range(len(cons)):
                        v = v * pow(int(dets[j][gi]), rest[j], p) % p
                    if v != chi_gen[gi]:
                        ok = False
                        break
                if ok:
                    results["IIIa"] = combo
    return results


def _multisets(pieces, avail, total):
    """Multisets of piece indices (respecting availability) with the given total dimension."""
    idx = [k for k in range(len(pieces)) if avail[k] > 0 and pieces[k][0] <= total]

    def rec(start, remaining, chosen):
        if remaining == 0:
            yield tuple(chosen)
            return
        for t in range(start, len(idx)):
            k = idx[t]
            if pieces[k][0] <= remaining and chosen.count(k) < avail[k]:
                chosen.append(k)
                yield from rec(t, remaining - pieces[k][0], chosen)
                chosen.pop()

    yield from rec(0, total, [])


@dataclass
class Classification:
    analysis: Analysis
    tags: list
    sub: dict  # chi -> Analysis of the kernel
    discrete: bool
    stable: bool


def classify(G: MorphismInstance, primes=2, seed=0, analysis=None) -> Classification:
    if G.n != 7:
        raise NotSeven("type classification is only defined for n = 7")
    a = analysis or analyze(G, primes, seed)
    tags = []
    subs = {}
    if a.unacceptable:
        one_in_Y = any(c.is_trivial() for c in a.Y)
        if one_in_Y:
            tags.append(TypeTag("I"))
        chars = a.chars
        for chi in a.Y:
            if chi.is_trivial():
                continue
            sub = G.kernel(chi)
            sa = analyze(sub, seed=seed, ctxs=[d.ctx for d in a.decs])
            subs[chi] = sa
            sub_type_I = sa.unacceptable and any(c.is_trivial() for c in sa.Y)
            if sub_type_I:
                for eta in a.E:
                    if eta.restrict(sub) in set(sa.E):
                        tags.append(TypeTag("II", chi.name(), eta.name()))
            if not one_in_Y:
                sX = set(sa.X)
                for eta in a.E:
                    if eta.restrict(sub) in sX:
                        tags.append(TypeTag("III", chi.name(), eta.name()))
                        res = subtype_search(a, sa, chi, eta)
                        for kind in ("IIIa", "IIIb"):
                            if res[kind] is not None:
                                tags.append(TypeTag(kind, chi.name(), eta.name()))
    return Classification(a, tags, subs, is_discrete(a), is_stable(a))


def has_type(cl: Classification, kind, chi=None):
    return any(t.kind == kind and (chi is None or t.chi == chi) for t in cl.tags)
