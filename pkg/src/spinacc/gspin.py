"""GSpin(n)-valued morphisms with finite image and the double cover Gamma(r).

A GSpin element is z.s with z a root of unity in Q(zeta_M) and s in Spin(n),
modulo (z, s) ~ (-z, -s).  Scalars are stored as exponents k (z = zeta_M^k).
Everything is built combinatorially on top of the spin-level closure of the
lifts with -1 adjoined.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .cyclotomic import CycMatrix, root_of_unity
from .clifford import SpinElement, spin_rep
from .group_engine import MorphismInstance, GroupTooLarge, _SubClosure, DEFAULT_MAX_ORDER
from . import acceptability


@dataclass(frozen=True)
class GSpinElement:
    k: int  # scalar zeta_M^k
    spin: SpinElement

    def normal(self):
        """Representative with 0 <= k < M/2."""
        M = self.spin.M
        k = self.k % M
        if k >= M // 2:
            return GSpinElement(k - M // 2, -self.spin)
        return GSpinElement(k, self.spin)

    def __mul__(self, other):
        return GSpinElement((self.k + other.k) % self.spin.M, self.spin * other.spin).normal()

    def __eq__(self, other):
        a, b = self.normal(), other.normal()
        return a.k == b.k and a.spin == b.spin

    def __hash__(self):
        a = self.normal()
        return hash((a.k, a.spin))

    def spin_matrix(self):
        """z times the spin-representation matrix of s."""
        rep = spin_rep(self.spin.n, self.spin.M)
        return rep.matrix(self.spin).scale(root_of_unity(self.spin.M, self.k))


def _cover(G: MorphismInstance, max_order):
    """Spin-level closure of the lifts of G with -1 adjoined (the full preimage)."""
    if "gspin_cover" in G._cache:
        return G._cache["gspin_cover"]
    if G.lifts is None:
        raise ValueError("GSpin twists need Spin lifts")
    minus = SpinElement([], G.n, G.M, sign=-1)
    gens = list(G.gens) + [CycMatrix.identity(G.M, G.n)]
    lifts = list(G.lifts) + [minus]
    H = MorphismInstance(G.n, G.M, gens, lifts=lifts, name=f"cover({G.name})", level="spin",
                         max_order=max_order, check=False)
    G._cache["gspin_cover"] = (H, len(gens) - 1)
    return G._cache["gspin_cover"]


class GSpinInstance:
    """r~ : Gamma -> GSpin(n), Gamma the group generated by z_j s_j."""

    def __init__(self, base: MorphismInstance, scalars, name=None, max_order=DEFAULT_MAX_ORDER):
        if len(scalars) != len(base.gens):
            raise ValueError("one scalar exponent per generator expected")
        self.base = base
        self.M = base.M
        self.scalars = [int(k) % base.M for k in scalars]
        self.name = name or f"{base.name}*mu"
        self.max_order = max_order
        self.cover, self.minus_gen = _cover(base, max_order)
        self._gamma_r = None
        self._image = None

    def generators(self):
        return [GSpinElement(k, s).normal() for k, s in zip(self.scalars, self.base.lifts)]

    # pair bookkeeping: (x in cover, k mod M); generator pairs use cover generators
    def _close(self, gens, identify):
        """BFS over pairs with the cover's generator tables; gens are (generator column, k)."""
        H = self.cover
        M = self.M
        half = M // 2
        mcol = self.minus_gen
        Rm = H.R[:, mcol]

        def canon(x, k):
            k = k % M
            if identify:
                flip = k >= half
                x = np.where(flip, Rm[x], x)
                k = np.where(flip, k - half, k)
            return x, k

        slot = np.full(H.order * M, -1, dtype=np.int64)
        xs = [np.array([0])]
        ks = [np.array([0])]
        slot[0] = 0
        parent = [np.array([-1])]
        pgen = [np.array([-1])]
        N = 1
        frontier = np.array([0])
        fx, fk = xs[0], ks[0]
        while len(frontier):
            nx, nk, npar, ngen = [], [], [], []
            for j, (col, gk) in enumerate(gens):
                y, k = canon(H.R[fx, col], fk + gk)
                code = y * M + k
                new = slot[code] < 0
                code_u, first = np.unique(code[new], return_index=True)
                if len(code_u):
                    if N + len(code_u) > self.max_order:
                        raise GroupTooLarge(self.max_order)
                    slot[code_u] = np.arange(N, N + len(code_u))
                    N += len(code_u)
                    sel = np.nonzero(new)[0][first]
                    nx.append(y[sel])
                    nk.append(k[sel])
                    npar.append(frontier[sel])
                    ngen.append(np.full(len(sel), j))
            if not nx:
                break
            fx = np.concatenate(nx)
            fk = np.concatenate(nk)
            frontier = slot[fx * M + fk]
            order = np.argsort(frontier)
            fx, fk, frontier = fx[order], fk[order], frontier[order]
            xs.append(fx)
            ks.append(fk)
            parent.append(np.concatenate(npar)[order])
            pgen.append(np.concatenate(ngen)[order])
        X = np.concatenate(xs)
        K = np.concatenate(ks)
        R = np.zeros((N, len(gens)), dtype=np.int64)
        L = np.zeros((N, len(gens)), dtype=np.int64)
        for j, (col, gk) in enumerate(gens):
            y, k = canon(H.R[X, col], K + gk)
            R[:, j] = slot[y * M + k]
            y, k = canon(H.L[X, col], K + gk)
            L[:, j] = slot[y * M + k]
        members = list(zip(X.tolist(), K.tolist()))
        return members, np.concatenate(parent).tolist(), np.concatenate(pgen).tolist(), R, L

    def _instance(self, gens, identify, name, with_lifts):
        H = self.cover
        members, parent, pgen, R, L = self._close(gens, identify)
        cl = _SubClosure(H, [x for x, _ in members], parent, pgen, R, L)
        gx_el = [int(H.gen_elems[col]) for col, _ in gens]
        lifts = [H.lifts[col] for col, _ in gens] if with_lifts else None
        inst = MorphismInstance(H.n, H.M, [H.matrix(g) for g in gx_el], lifts=lifts, name=name,
                                level="so", _closure=cl,
                                gen_names=[f"t{j + 1}" for j in range(len(gens))])
        inst.pairs = members
        return inst

    def _gen_pairs(self):
        return [(j, k) for j, k in enumerate(self.scalars)]

    def image(self) -> MorphismInstance:
        """Gamma itself: the subgroup of GSpin generated by the z_j s_j, acting on E via pi."""
        if self._image is None:
            self._image = self._instance(self._gen_pairs(), True, f"image({self.name})", False)
        return self._image

    def gamma_r(self) -> MorphismInstance:
        """Gamma(r) = {(gamma, sigma) : pi(r(gamma)) = pi(sigma)} as pairs (sigma, z) with z sigma = r(gamma).

        Generated by (s_j, z_j) and (-1, -1); r_S is the first coordinate.
        """
        if self._gamma_r is None:
            gens = self._gen_pairs() + [(self.minus_gen, self.M // 2)]
            self._gamma_r = self._instance(gens, False, f"Gamma({self.name})", True)
        return self._gamma_r

    def r_S(self, x):
        """Spin element of Gamma(r) element x (as a spin-representation matrix)."""
        Gr = self.gamma_r()
        return self.cover.spin_matrix(Gr.pairs[x][0])

    def r_Z(self, x):
        """Scalar part of Gamma(r) element x."""
        return root_of_unity(self.M, self.gamma_r().pairs[x][1])

    def projection(self):
        """Gamma(r) -> Gamma on indices; must be 2-to-1."""
        Gr = self.gamma_r()
        Gm = self.image()
        index = {p: i for i, p in enumerate(Gm.pairs)}
        H = self.cover
        minus = int(H.gen_elems[self.minus_gen])
        half = self.M // 2
        out = np.zeros(Gr.order, dtype=np.int64)
        for i, (x, k) in enumerate(Gr.pairs):
            key = (x, k) if k < half else (H.mul(x, minus), k - half)
            out[i] = index[key]
        return out


def check_factorization(gi: GSpinInstance, sample=None, seed=0):
    """r~(gamma) = r_Z(gamma, sigma) r_S(gamma, sigma) on Gamma(r) (exact spin matrices)."""
    Gr = gi.gamma_r()
    Gm = gi.image()
    proj = gi.projection()
    counts = np.bincount(proj, minlength=Gm.order)
    if not np.all(counts == 2):
        return False
    idx = range(Gr.order)
    if sample is not None and sample < Gr.order:
        idx = random.Random(seed).sample(range(Gr.order), sample)
    H = gi.cover
    for i in idx:
        x, k = Gr.pairs[i]
        lhs = H.spin_matrix(x).scale(root_of_unity(gi.M, k))
        y, kk = Gm.pairs[int(proj[i])]
        rhs = H.spin_matrix(y).scale(root_of_unity(gi.M, kk))
        if lhs != rhs:
            return False
    # r_S and r_Z are homomorphisms: checked on the Cayley table
    for j in range(len(Gr.gen_elems)):
        gx, gk = Gr.pairs[Gr.gen_elems[j]]
        for i in idx:
            x, k = Gr.pairs[i]
            y, kk = Gr.pairs[int(Gr.R[i, j])]
            if H.mul(x, gx) != y or (k + gk - kk) % gi.M:
                return False
    return True


@dataclass
class GSpinVerdict:
    direct: bool  # unacceptable, from the engine on Gamma with the pi-action
    via_rS: bool  # unacceptable, from the Spin engine on r_S : Gamma(r) -> Spin(n)
    order_gamma: int
    order_gamma_r: int

    @property
    def agree(self):
        return self.direct == self.via_rS


def gspin_acceptable(gi: GSpinInstance, primes=2, seed=0) -> GSpinVerdict:
    a_direct = acceptability.analyze(gi.image(), primes, seed)
    a_rs = acceptability.analyze(gi.gamma_r(), primes, seed)
    return GSpinVerdict(a_direct.unacceptable, a_rs.unacceptable, gi.image().order, gi.gamma_r().order)


def random_twist(G: MorphismInstance, rng: random.Random, orders=(4, 8)):
    """Random scalar exponents in mu_4 or mu_8 (mu_8 only when 8 | M)."""
    choices = [m for m in orders if G.M % m == 0]
    m = rng.choice(choices)
    return [rng.randrange(m) * (G.M // m) for _ in G.gens], m


def character_twist(G: MorphismInstance, rng: random.Random, m=4):
    """Twist by a random homomorphism Gamma -> mu_m (on the spin-level closure)."""
    e = G.random_hom_mu(m, rng)
    return [x * (G.M // m) for x in e]
