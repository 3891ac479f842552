"""Decomposition of E as a Gamma-module, computed modulo a split prime.

The commutant of the generators is split by a random central element;
its eigenvalue projectors are the isotypic idempotents.  Dimensions,
multiplicities, Frobenius-Schur indicators and determinant signs are then
read off from the reduced characters.
"""

from __future__ import annotations

import random
from fractions import Fraction
from dataclasses import dataclass, field as dfield
from math import gcd, isqrt

import numpy as np

from .cyclotomic import PrimeContext, is_prime, reduce_array_mod
from .group_engine import MorphismInstance, Mu2Character
from . import linalg


class BadPrime(RuntimeError):
    pass


class PrimeSearchExhausted(RuntimeError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


def choose_primes(G: MorphismInstance, count=2, start=101, cap=200000):
    step = _lcm(G.M, G.exponent())
    lo = max(start, G.order + 1)
    p = lo + (1 - lo) % step  # first p >= lo with p = 1 mod step
    out = []
    tries = 0
    while len(out) < count:
        if is_prime(p) and G.order % p:
            out.append(PrimeContext.make(p, G.M))
        p += step
        tries += 1
        if tries > cap:
            raise PrimeSearchExhausted(f"no prime found after {cap} steps")
    return out


def reduced_matrices(G: MorphismInstance, ctx: PrimeContext):
    key = ("red", ctx.p)
    src = getattr(G.closure, "source", None)
    if key not in G._cache and src is not None:
        G._cache[key] = reduced_matrices(src, ctx)[G.closure.members]
    if key not in G._cache:
        num, den = G.all_matrices()
        dens = np.unique(den)
        out = np.zeros(num.shape[:3], dtype=np.int64)
        for d in dens:
            sel = den == d
            out[sel] = reduce_array_mod(num[sel], int(d), ctx)
        G._cache[key] = out
    return G._cache[key]


def _charpoly_mod(A, p):
    """Faddeev-LeVerrier mod p (n < p). Returns monic coefficients low to high."""
    n = A.shape[0]
    c = [0] * (n + 1)
    c[n] = 1
    Mk = np.zeros_like(A)
    I = np.eye(n, dtype=np.int64)
    for k in range(1, n + 1):
        Mk = (A @ Mk + c[n - k + 1] * I) % p
        c[n - k] = (-int(np.trace(A @ Mk % p)) * pow(k, -1, p)) % p
    return c


def _roots_mod(coeffs, p):
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def newton_elementary(power_sums, p=None):
    """e_1..e_k from p_1..p_k; modular if p is given, else exact (Fractions/CycNum)."""
    k = len(power_sums)
    e = [1] + [0] * k
    for m in range(1, k + 1):
        acc = 0
        for j in range(1, m + 1):
            term = e[m - j] * power_sums[j - 1]
            acc = acc + term if j % 2 == 1 else acc - term
        if p is None:
            e[m] = acc / m if hasattr(acc, "M") else Fraction(acc) / m
        else:
            e[m] = acc * pow(m, -1, p) % p
    return e


@dataclass
class Constituent:
    dim: int
    mult: int
    fs: int
    det_signs: tuple | None  # det on generators if +-1 valued
    det: Mu2Character | None
    chi: np.ndarray  # character mod p on all elements
    proj: np.ndarray  # isotypic projector mod p

    def key(self):
        return (self.dim, self.mult, self.fs, self.det_signs)

    @property
    def real_type(self):
        return self.fs == 1


@dataclass
class Decomposition:
    group: MorphismInstance
    ctx: PrimeContext
    seed: int
    constituents: list = dfield(default_factory=list)

    def invariant_multiset(self):
        return sorted(c.key() for c in self.constituents)

    def to_json(self):
        G = self.group
        out = []
        for c in sorted(self.constituents, key=lambda c: (c.dim, c.fs, c.det_signs or (), c.mult)):
            out.append({
                "dim": c.dim, "mult": c.mult, "fs": c.fs,
                "det": None if c.det is None else G.char_name(c.det),
                "det_signs": list(c.det_signs) if c.det_signs is not None else None,
            })
        return {"p": self.ctx.p, "seed": self.seed, "constituents": out}


def commutant_basis(mats, p):
    n = mats[0].shape[0]
    I = np.eye(n, dtype=np.int64)
    rows = [(np.kron(I, A.T) - np.kron(A, I)) % p for A in mats]
    sysm = np.concatenate(rows, axis=0)
    basis = linalg.nullspace_mod(sysm, p)
    return [b.reshape(n, n) for b in basis]


def centre_basis(C, p):
    k = len(C)
    if k == 1:
        return C
    cols = []
    for Ci in C:
        blk = [((Ci @ Cj - Cj @ Ci) % p).ravel() for Cj in C]
        cols.append(np.concatenate(blk))
    A = np.stack(cols, axis=1)
    coef = linalg.nullspace_mod(A, p)
    return [sum(int(a) * Ci for a, Ci in zip(c, C)) % p for c in coef]


def decompose(G: MorphismInstance, ctx: PrimeContext, seed=0, tries=8) -> Decomposition:
    p = ctx.p
    if G.order % p == 0:
        raise BadPrime("prime divides the group order")
    red = reduced_matrices(G, ctx)
    n = G.n
    gens = [red[g] for g in G.gen_elems]
    C = commutant_basis(gens, p)
    Z = centre_basis(C, p)
    s = len(Z)
    rng = random.Random((seed, p, G.order, G.name).__repr__())
    for _ in range(tries):
        z = sum(rng.randrange(p) * Zi for Zi in Z) % p
        roots = _roots_mod(_charpoly_mod(z, p), p)
        if len(roots) == s:
            break
    else:
        raise BadPrime(f"could not split the centre at p = {p}")
    I = np.eye(n, dtype=np.int64)
    projs = []
    for lam in roots:
        P = I.copy()
        for mu in roots:
            if mu != lam:
                P = P @ ((z - mu * I) % p) % p * pow(lam - mu, -1, p) % p
        projs.append(P)
    if not np.array_equal(sum(projs) % p, I):
        raise BadPrime("projectors do not sum to the identity")
    sq = G.squares()
    dec = Decomposition(G, ctx, seed)
    N = G.order
    invN = pow(N, -1, p)
    for P in projs:
        w = linalg.rank_mod(P, p)
        cdim = linalg.rank_mod(np.stack([(P @ Ci % p).ravel() for Ci in C]), p)
        m = isqrt(cdim)
        if m * m != cdim or w % m:
            raise BadPrime("isotypic data inconsistent")
        d = w // m
        trAP = np.einsum("xab,ba->x", red, P) % p
        chi = trAP * pow(m, -1, p) % p
        fsv = int(chi[sq].sum() % p * invN % p)
        fs = {0: 0, 1: 1, p - 1: -1}.get(fsv)
        if fs is None:
            raise BadPrime("Frobenius-Schur indicator did not lift")
        # det on generators by Newton identities on chi(g^k)
        signs = []
        for j, g in enumerate(G.gen_elems):
            pw = []
            x = 0
            for _ in range(d):
                x = int(G.R[x, j])
                pw.append(int(chi[x]))
            e = newton_elementary(pw, p)
            signs.append(e[d] % p)
        det_signs = None
        det = None
        if all(v in (1, p - 1) for v in signs):
            det_signs = tuple(1 if v == 1 else -1 for v in signs)
            det = G.character_from_signs(det_signs)
            if det is None:
                raise BadPrime("determinant signs do not define a character")
        dec.constituents.append(Constituent(d, m, fs, det_signs, det, chi, P))
    if sum(c.dim * c.mult for c in dec.constituents) != n:
        raise BadPrime("dimension count failed")
    return dec


def decompose_guarded(G: MorphismInstance, primes=2, seed=0):
    """Decompose at `primes` primes and insist on identical invariants."""
    ctxs = choose_primes(G, primes)
    decs = []
    for ctx in ctxs:
        decs.append(decompose(G, ctx, seed))
    ref = decs[0].invariant_multiset()
    for d in decs[1:]:
        if d.invariant_multiset() != ref:
            raise BadPrime(f"decompositions at p = {ctxs[0].p} and p = {d.ctx.p} disagree")
    return decs


def subgroup_generated(chars):
    """All products of the given sign characters (including the trivial one)."""
    chars = [c for c in chars if c is not None]
    if not chars:
        return []
    G = chars[0].group
    out = {G.trivial_character()}
    for c in chars:
        out |= {c * x for x in out}
    return sorted(out, key=lambda c: (not c.is_trivial(), c.on_generators()[::-1]))


def xr_generators(dec: Decomposition):
    """det characters of the real-type constituents."""
    return [c.det for c in dec.constituents if c.fs == 1]


def x_subgroup(dec: Decomposition):
    G = dec.group
    gens = xr_generators(dec)
    if not gens:
        return [G.trivial_character()]
    return subgroup_generated(gens)


def inner_product(G, a, b, ctx, subset=None):
    """<a, b> = (1/|S|) sum a(x) b(x^-1) over S (mod p, lifted to a small integer)."""
    p = ctx.p
    inv = G.inverses()
    if subset is None:
        idx = np.arange(G.order)
    else:
        idx = np.asarray(subset)
    v = int((a[idx] * b[inv[idx]] % p).sum() % p) * pow(len(idx), -1, p) % p
    return v if v <= p // 2 else v - p
