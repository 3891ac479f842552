"""Builders for the explicit morphisms (finite truncations) and some index-2
combinatorics: transfer, determinant of induction, orthogonal induction.

Every generator is assembled from Pin atoms (unit vectors, rotors, z_B), so
each instance carries Spin lifts and its matrices are pi of those lifts.
"""

from __future__ import annotations

import random
from math import gcd

import numpy as np

from .cyclotomic import CycNum, CycMatrix, sqrt_exact, sqrt_rational
from .clifford import SpinElement, pi_action, rotor, unit_basis, z_B
from .group_engine import MorphismInstance, Mu2Character
from . import linalg


class UnknownPointGroup(ValueError):
    pass


class DimensionTooLarge(ValueError):
    pass


class IndexNotTwo(ValueError):
    pass


class HypothesisFailed(ValueError):
    pass


class BasisUnavailable(ValueError):
    pass


def _lcm(*xs):
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


# ---------------------------------------------------------------------------
# Pin atoms

class Atoms:
    """Factory for lifts in Spin(n) over Q(zeta_M)."""

    def __init__(self, n, M):
        self.n = n
        self.M = M

    def one(self):
        return SpinElement.identity(self.n, self.M)

    def vec(self, coeffs):
        """Unit vector from a {coordinate: value} map (values rational or CycNum)."""
        z = CycNum.zero(self.M)
        v = [z] * self.n
        for i, c in coeffs.items():
            v[i - 1] = c if isinstance(c, CycNum) else CycNum.from_rational(self.M, c)
        return v

    def e(self, i):
        return SpinElement([unit_basis(self.n, self.M, i)], self.n, self.M)

    def refl_diff(self, a, b, sign=-1):
        """Reflection about (e_a + sign e_b)/sqrt2: swaps e_a and -sign e_b."""
        h = sqrt_rational(self.M, 2)
        if h is None:
            raise ValueError("swaps need sqrt(2), i.e. 8 | M")
        h = h / 2  # 1/sqrt2
        return SpinElement([self.vec({a: h, b: h * sign})], self.n, self.M)

    def rot(self, plane, k, m):
        if k % m == 0:
            return self.one()
        return rotor(self.n, self.M, plane, k, m)

    def zB(self, B):
        return z_B(self.n, self.M, B)

    def swap_planes(self, p, q):
        """e_p[i] <-> e_q[i] for the listed coordinates."""
        out = self.one()
        for a, b in zip(p, q):
            out = out * self.refl_diff(a, b)
        return out

    def prod(self, *xs):
        out = self.one()
        for x in xs:
            out = out * x
        return out


def _instance(n, M, lifts, name, labels=None, gen_names=None, level="so", max_order=None):
    mats = [pi_action(s) for s in lifts]
    kw = {}
    if max_order is not None:
        kw["max_order"] = max_order
    G = MorphismInstance(n, M, mats, lifts=lifts, name=name, labels=labels,
                         gen_names=gen_names, level=level, **kw)
    G.recipe = None
    return G


# ---------------------------------------------------------------------------
# mu_4 x mu_4 with E = 1 + a^2b^2 + a^2b^2 + (ab + conj) + (a^-1 b + conj)

def example1(level="spin"):
    n, M = 7, 8
    A = Atoms(n, M)
    # g_a: -1 on (2,3), rotation by +90 on (4,5) (character ab), by -90 on (6,7) (a^-1 b)
    ga = A.prod(A.zB([2, 3]), A.rot((4, 5), 1, 4), A.rot((6, 7), -1, 4))
    gb = A.prod(A.zB([2, 3]), A.rot((4, 5), 1, 4), A.rot((6, 7), 1, 4))
    labels = {"a2": (-1, 1), "b2": (1, -1), "a2b2": (-1, -1)}
    G = _instance(n, M, [ga, gb], "example1", labels, ["a", "b"], level=level)
    G.recipe = {"construct": "example1"}
    return G


# ---------------------------------------------------------------------------
# the group G of type I (block model L | F1 | F2 | F3)

def _gcal_atoms(A, d):
    R1 = A.rot((2, 3), 1, d)
    R2 = A.rot((4, 5), 1, d)
    S = A.prod(A.e(3), A.e(5))  # (sigma, sigma), sigma = diag(1, -1)
    th = A.prod(A.swap_planes((2, 3), (4, 5)), A.zB([6, 7]))
    return [R1, R2, S, th]


def _modulus_for(d, swaps=True):
    return _lcm(4, 2 * d, 8 if swaps else 4)


def gcal_instance(d=4):
    if d < 1:
        raise ValueError("d >= 1 required")
    n, M = 7, _modulus_for(d)
    A = Atoms(n, M)
    lifts = _gcal_atoms(A, d)
    labels = {"upsilon": (1, 1, -1, 1), "d": (1, 1, 1, -1), "upsilon_d": (1, 1, -1, -1)}
    G = _instance(n, M, lifts, f"gcal(d={d})", labels, ["R1", "R2", "S", "theta"])
    G.recipe = {"construct": f"gcal:d={d}"}
    return G


def gprime_instance(d=4, variant=0):
    """G' = G x| <vartheta>, vartheta = (-1 on L, sigma, sigma, sigma') with two choices of sigma'."""
    n, M = 7, _modulus_for(d)
    A = Atoms(n, M)
    lifts = _gcal_atoms(A, d)
    vt = A.prod(A.e(1), A.e(3), A.e(5), A.e(7) if variant == 0 else A.e(6))
    lifts.append(vt)
    labels = {"kappa": (1, 1, 1, 1, -1), "upsilon": (1, 1, -1, 1, 1), "d": (1, 1, 1, -1, 1),
              "kappa_d": (1, 1, 1, -1, -1)}
    G = _instance(n, M, lifts, f"gprime(d={d},var={variant})", labels, ["R1", "R2", "S", "theta", "vartheta"])
    G.recipe = {"construct": f"gprime:d={d}:var={variant}"}
    return G


def h123_instance(i, d=4):
    """H_1, H_2, H_3 inside the SO(4) of F' = F1 + F2; F3 = -1 on swapping elements."""
    n, M = 7, _modulus_for(d)
    A = Atoms(n, M)
    swap = A.prod(A.swap_planes((2, 3), (4, 5)), A.zB([6, 7]))  # theta
    if i == 1:
        g1 = A.prod(A.e(3), A.e(5))  # (diag(1,-1), diag(1,-1))
        g2 = A.zB([2, 3, 4, 5])  # (-1, -1)
        # diag(s, -s) theta; s = [[0,1],[1,0]] is the reflection about (e2-e3)/sqrt2
        g3 = A.prod(A.refl_diff(2, 3, -1), A.refl_diff(4, 5, +1), swap)
        lifts = [g1, g2, g3]
        names = ["sigma", "minus", "st"]
    elif i in (2, 3):
        D = A.rot((2, 3), 1, d) * A.rot((4, 5), 1, d)
        S = A.prod(A.e(3), A.e(5))
        if i == 2:
            t = swap
        else:
            t = A.prod(A.zB([4, 5]), swap)  # diag(1, -1) theta
        lifts = [D, S, t]
        names = ["R", "sigma", "t" if i == 3 else "theta"]
    else:
        raise ValueError("i must be 1, 2 or 3")
    G = _instance(n, M, lifts, f"H{i}(d={d})", None, names)
    # delta = d (signature on {F1, F2}) and eta = upsilon (det on F1 for non-swapping elements)
    G.labels = _h_labels(G, i)
    G.recipe = {"construct": f"h123:{i}:d={d}"}
    return G


def _block_det_sign(A: CycMatrix, coords):
    rows = A.rows()
    sub = [[rows[a - 1][b - 1] for b in coords] for a in coords]
    d = linalg.det(sub)
    return 1 if d == 1 else (-1 if d == -1 else 0)


def _h_labels(G, i):
    """delta = signature on {F1,F2}; eta = the character equal to det_F1 on ker delta."""
    sig = []
    for g in G.gen_elems:
        A = G.matrix(g)
        sig.append(1 if _block_det_sign(A, [2, 3]) != 0 else -1)
    labels = {"delta": tuple(sig)}
    ker_vals = {}
    for c in G.mu2_characters():
        ok = True
        for x in range(G.order):
            A = G.matrix(x)
            if _block_det_sign(A, [2, 3]) != 0:
                if c(x) != _block_det_sign(A, [2, 3]):
                    ok = False
                    break
        if ok:
            ker_vals.setdefault("eta", c.on_generators())
    labels.update(ker_vals)
    return labels


# ---------------------------------------------------------------------------
# H: L | P=(2,3) | P'=(4,5) | Q=(6,7)

def hcal_instance(d=3):
    if d < 1:
        raise ValueError("d >= 1 required")
    n, M = 7, _modulus_for(d)
    A = Atoms(n, M)
    RP = A.rot((2, 3), 1, d)
    RP2 = A.rot((4, 5), 1, d)
    S = A.prod(A.e(3), A.e(5))
    RQ = A.rot((6, 7), 1, d)
    # swap P <-> P', reflection on Q, -1 on L
    sw = A.prod(A.swap_planes((2, 3), (4, 5)), A.e(1), A.e(7))
    labels = {"alpha": (1, 1, 1, 1, -1), "epsilon": (1, 1, -1, 1, 1), "alpha_epsilon": (1, 1, -1, 1, -1)}
    G = _instance(n, M, [RP, RP2, S, RQ, sw], f"hcal(d={d})", labels, ["RP", "RP'", "S", "RQ", "swap"])
    G.recipe = {"construct": f"hcal:d={d}"}
    return G


# ---------------------------------------------------------------------------
# I: L | T=(2,3,4) | T'=(5,6,7)

def _point_group(H, A: Atoms, coords):
    """Lifts of generators of a finite subgroup of SO(3) acting on `coords`."""
    a, b, c = coords
    if H == "A4":
        cyc = A.prod(A.refl_diff(a, b), A.refl_diff(b, c))  # 3-cycle of the axes
        half = A.prod(A.e(b), A.e(c))  # diag(1,-1,-1)
        return [cyc, half]
    if H == "S4":
        cyc = A.prod(A.refl_diff(a, b), A.refl_diff(b, c))
        quarter = A.rot((b, c), 1, 4)
        return [cyc, quarter]
    if H == "A5":
        cyc = A.prod(A.refl_diff(a, b), A.refl_diff(b, c))
        half = A.prod(A.e(b), A.e(c))
        s5 = sqrt_rational(A.M, 5)
        if s5 is None:
            raise UnknownPointGroup("A5 needs sqrt(5), use a modulus divisible by 20")
        phi = (s5 + 1) / 2
        iphi = phi - 1
        # half-turn about (1, phi, 1/phi)/2 as two golden unit vectors
        u = A.vec({a: phi / 2, b: -iphi / 2, c: CycNum.from_rational(A.M, -1) / 2})
        v = A.vec({a: iphi / 2, b: CycNum.from_rational(A.M, -1) / 2, c: phi / 2})
        gold = SpinElement([u, v], A.n, A.M)
        return [cyc, half, gold]
    if isinstance(H, str) and H.startswith("D"):
        m = int(H[1:])
        rot = A.rot((a, b), 1, m)
        flip = A.prod(A.e(b), A.e(c))
        return [rot, flip]
    raise UnknownPointGroup(f"unknown point group {H!r}")


def ical_instance(H="A4", max_order=None):
    n = 7
    if H == "A5":
        M = 40
    elif isinstance(H, str) and H.startswith("D"):
        M = _lcm(8, 2 * int(H[1:]))
    elif H in ("A4", "S4"):
        M = 8
    else:
        raise UnknownPointGroup(f"unknown point group {H!r}")
    A = Atoms(n, M)
    left = _point_group(H, A, (2, 3, 4))
    right = _point_group(H, A, (5, 6, 7))
    mI = A.zB([2, 3, 4, 5, 6, 7])  # (-I, -I)
    sw = A.prod(A.e(1), A.swap_planes((2, 3, 4), (5, 6, 7)))
    lifts = left + right + [mI, sw]
    k = len(left)
    labels = {
        "alpha": tuple([1] * (2 * k) + [1, -1]),
        "epsilon": tuple([1] * (2 * k) + [-1, 1]),
        "alpha_epsilon": tuple([1] * (2 * k) + [-1, -1]),
    }
    names = [f"h{j + 1}" for j in range(k)] + [f"h{j + 1}'" for j in range(k)] + ["-I", "swap"]
    G = _instance(n, M, lifts, f"ical({H})", labels, names, max_order=max_order)
    G.recipe = {"construct": f"ical:{H}"}
    return G


# ---------------------------------------------------------------------------
# D8 x mu_2 block model with both a type II and a type III pair

def both_types_instance():
    """E = chi + P + eta P + det P + chi det P for the dihedral plane P of D8 x <c>.

    Generators r (quarter turn), s (reflection), c (central, acting as -1 on
    eta P).  chi = (-1, 1, 1) and eta = (1, 1, -1) on (r, s, c).
    """
    from .clifford import lift_orthogonal
    M = 8
    P = {"r": [[0, -1], [1, 0]], "s": [[1, 0], [0, -1]], "c": [[1, 0], [0, 1]]}
    chi = {"r": -1, "s": 1, "c": 1}
    eta = {"r": 1, "s": 1, "c": -1}
    mats = []
    for g in ("r", "s", "c"):
        p = P[g]
        dp = p[0][0] * p[1][1] - p[0][1] * p[1][0]
        rows = [[0] * 7 for _ in range(7)]
        rows[0][0] = chi[g]
        for i in range(2):
            for j in range(2):
                rows[1 + i][1 + j] = p[i][j]
                rows[3 + i][3 + j] = eta[g] * p[i][j]
        rows[5][5] = dp
        rows[6][6] = chi[g] * dp
        mats.append(CycMatrix.from_rows(rows, M))
    lifts = [lift_orthogonal(A) for A in mats]
    labels = {"chi": (-1, 1, 1), "eta": (1, 1, -1)}
    G = _instance(7, M, lifts, "both_types", labels, ["r", "s", "c"])
    G.recipe = {"construct": "both_types"}
    return G


# ---------------------------------------------------------------------------

def trivial_instance(n=7, M=4):
    G = MorphismInstance(n, M, [CycMatrix.identity(M, n)], lifts=[SpinElement.identity(n, M)], name="trivial")
    G.recipe = {"construct": f"trivial:n={n}"}
    return G


def standard_embed(G: MorphismInstance, m: int) -> MorphismInstance:
    """Pad with an identity block: E -> E + 1^(m-n)."""
    if m > 9:
        raise DimensionTooLarge("m must be at most 9")
    if m % 2 == 0 or m < G.n:
        raise ValueError("m must be odd and at least n")
    k = m - G.n
    mats = [A.block_diag(CycMatrix.identity(G.M, k)) if k else A for A in G.gens]
    lifts = [s.embed(m) for s in G.lifts] if G.lifts is not None else None
    H = MorphismInstance(m, G.M, mats, lifts=lifts, name=f"{G.name}+1^{k}", labels=G.labels,
                         gen_names=G.gen_names, level=G.level)
    H.recipe = {"embed": m, "base": getattr(G, "recipe", None)}
    return H


def small_n_instance(n, rng: random.Random, M=8, max_gens=3):
    """Random closed subgroup of SO(n), n in {3, 5}, from rotation/sign/swap blocks."""
    A = Atoms(n, M)
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        kind = rng.choice(["rot", "sign", "swap", "mix"])
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        if kind == "rot":
            g = A.rot((i, j), rng.choice([1, -1]), rng.choice([2, 4]))
        elif kind == "sign":
            g = A.zB([i, j])
        elif kind == "swap":
            k = rng.choice([c for c in range(1, n + 1) if c not in (i, j)])
            g = A.prod(A.refl_diff(i, j), A.e(k))
        else:
            rest = [c for c in range(1, n + 1) if c not in (i, j)]
            if len(rest) >= 2 and n >= 4:
                a, b = sorted(rng.sample(rest, 2))
                g = A.prod(A.swap_planes((i, j), (a, b)), A.e(i), A.e(a))
            else:
                g = A.prod(A.rot((i, j), 1, 4), A.zB([i, j]))
        gens.append(g)
    G = _instance(n, M, gens, f"small(n={n})", None, None, max_order=2000)
    return G


# ---------------------------------------------------------------------------
# transfer and Gallagher

def _coset_rep(G: MorphismInstance, sub: MorphismInstance):
    inside = np.zeros(G.order, dtype=bool)
    inside[sub.parent_index] = True
    if 2 * sub.order != G.order:
        raise IndexNotTwo("subgroup does not have index 2")
    for g in G.gen_elems:
        if not inside[g]:
            return g, inside
    raise IndexNotTwo("no generator outside the subgroup")


def transfer(c, G: MorphismInstance, sub: MorphismInstance):
    """Transfer of a character c of Gamma_0 (array of +-1 or Mu2Character) to Gamma.

    t(gamma) = c(gamma z^-1 gamma z) = c(gamma) c(z^-1 gamma z) on Gamma_0, and
    t(x) = c(x^2) off Gamma_0 (any x outside Gamma_0 can play the role of z).
    """
    vals = c.values() if isinstance(c, Mu2Character) else np.asarray(c)
    z, inside = _coset_rep(G, sub)
    pos = {int(x): k for k, x in enumerate(sub.parent_index)}
    zi = G.inv(z)
    t = np.zeros(G.order, dtype=np.int64)
    for x in range(G.order):
        if inside[x]:
            y = G.mul(G.mul(zi, x), z)
            t[x] = vals[pos[x]] * vals[pos[y]]
        else:
            t[x] = vals[pos[G.mul(x, x)]]
    return t


def transfer_generic(c, G, sub):
    """Same map from the definition: product over a transversal {1, z} of c(h_i(gamma))."""
    vals = c.values() if isinstance(c, Mu2Character) else np.asarray(c)
    z, inside = _coset_rep(G, sub)
    pos = {int(x): k for k, x in enumerate(sub.parent_index)}
    reps = [0, z]
    t = np.ones(G.order, dtype=np.int64)
    for x in range(G.order):
        v = 1
        for rep in reps:
            y = G.mul(rep, x)
            # y = h * rep' with rep' in reps
            for rep2 in reps:
                h = G.mul(y, G.inv(rep2))
                if inside[h]:
                    v *= vals[pos[h]]
                    break
        t[x] = v
    return t


def induced_character_mod(G, sub, psi, ctx):
    """Ind psi on Gamma (mod p) for a character psi of Gamma_0 (mod p)."""
    p = ctx.p
    z, inside = _coset_rep(G, sub)
    pos = {int(x): k for k, x in enumerate(sub.parent_index)}
    zi = G.inv(z)
    out = np.zeros(G.order, dtype=np.int64)
    for x in range(G.order):
        if inside[x]:
            y = G.mul(G.mul(zi, x), z)
            out[x] = (psi[pos[x]] + psi[pos[y]]) % p
    return out


def det_from_character_mod(G, chi, dim, p):
    """det of a representation with character chi on every generator, via Newton."""
    from .modrep import newton_elementary
    vals = []
    for j in range(len(G.gen_elems)):
        pw = []
        x = 0
        for _ in range(dim):
            x = int(G.R[x, j])
            pw.append(int(chi[x]))
        vals.append(newton_elementary(pw, p)[dim] % p)
    return vals


def det_induction_check(G, sub, sub_dec, ctx):
    """Gallagher: det Ind U = chi^(dim U) * transfer(det U) for every real-type
    constituent U of E restricted to Gamma_0 with +-1 determinant.

    Returns the list of (constituent index, ok) pairs.
    """
    p = ctx.p
    z, inside = _coset_rep(G, sub)
    chi = np.where(inside, 1, -1)
    out = []
    for k, c in enumerate(sub_dec.constituents):
        if c.det is None:
            continue
        ind = induced_character_mod(G, sub, c.chi, ctx)
        lhs = det_from_character_mod(G, ind, 2 * c.dim, p)
        t = transfer(c.det, G, sub)
        rhs = [(int(chi[g]) ** c.dim * int(t[g])) % p for g in G.gen_elems]
        out.append((k, [int(v) for v in lhs] == rhs))
    return out


# ---------------------------------------------------------------------------
# orthogonal induction (exact)

def _span_basis(vectors, M):
    if not vectors:
        return []
    R, piv = linalg.rref(vectors)
    return [R[i] for i in range(len(piv))]


def _gram(U, V):
    return [[linalg.dot(u, v) for v in V] for u in U]


def _is_invariant(sub, basis):
    """Gamma_0-stability of span(basis), checked on generators."""
    n = len(basis[0])
    for g in sub.gen_elems:
        A = sub.matrix(g)
        imgs = [linalg.mat_vec(A, v) for v in basis]
        if linalg.rank(basis + imgs) != len(basis):
            return False
    return True


def orthogonal_induction_split(G, sub, pieces, trace=None):
    """Given V0 as a list of bases (each an absolutely irreducible Gamma_0-module)
    with V = V0 + zV0 direct, return (U0, zU0) with V = U0 (+) zU0 orthogonal and
    U0 ~ V0.

    Pieces are handled one at a time: A with zA not isomorphic to A is already
    orthogonal to zA; otherwise A + zA is isotypic and _split_piece finds the
    right graph.  The rest is projected onto (A + zA)^perp.  If `trace` is a
    list, one dict per piece is appended describing the branch taken.
    """
    z, inside = _coset_rep(G, sub)
    Z = G.matrix(z)
    V0 = [v for b in pieces for v in b]
    if not V0:
        raise HypothesisFailed("V0 is empty")
    for b in pieces:
        if not _is_invariant(sub, b):
            raise HypothesisFailed("a piece is not Gamma_0-stable")
    zV0 = [linalg.mat_vec(Z, v) for v in V0]
    if linalg.rank(V0 + zV0) != 2 * len(V0):
        raise HypothesisFailed("V0 and zV0 are not independent")
    if not _is_invariant(G, V0 + zV0):
        raise HypothesisFailed("V0 + zV0 is not Gamma-stable")
    out = []
    remaining = list(pieces)
    while remaining:
        b = remaining.pop(0)
        U, info = _split_piece(G, sub, Z, b)
        if trace is not None:
            trace.append(info)
        out.append(U)
        W = U + [linalg.mat_vec(Z, v) for v in U]
        remaining = [_project_away(W, r) for r in remaining]
        for r in remaining:
            if linalg.rank(r) != len(r) or not _is_invariant(sub, r):
                raise HypothesisFailed("a remaining piece degenerated under projection")
    U0 = [v for b in out for v in b]
    zU0 = [linalg.mat_vec(Z, v) for v in U0]
    if not all(x.is_zero() for row in _gram(U0, zU0) for x in row):
        raise BasisUnavailable("could not reach an orthogonal split")
    return U0, zU0


def _project_away(W, vecs):
    """Orthogonal projection of each vector onto W^perp (exact)."""
    Gm = _gram(W, W)
    out = []
    for v in vecs:
        rhs = [linalg.dot(w, v) for w in W]
        # solve Gm c = rhs
        aug = [row + [r] for row, r in zip(Gm, rhs)]
        R, piv = linalg.rref(aug)
        c = [CycNum.zero(v[0].M)] * len(W)
        for i, col in enumerate(piv):
            if col < len(W):
                c[col] = R[i][-1]
        w = list(v)
        for ci, wv in zip(c, W):
            w = [a - ci * b for a, b in zip(w, wv)]
        out.append(w)
    return out


def _action_matrix(A, basis):
    """Matrix of A on span(basis) in that basis (columns are coordinates)."""
    k = len(basis)
    cols = []
    for v in basis:
        w = linalg.mat_vec(A, v)
        aug = [[basis[j][i] for j in range(k)] + [w[i]] for i in range(len(w))]
        R, piv = linalg.rref(aug)
        if k in piv:
            raise HypothesisFailed("subspace is not stable")
        c = [R[i][k] for i in range(len(piv))]
        cols.append(c)
    return [[cols[j][i] for j in range(k)] for i in range(k)]


class _NoIntertwiner(Exception):
    pass


def _intertwiner(sub, src, dst):
    """A nonzero Gamma_0-map span(src) -> span(dst), as images of src vectors."""
    k = len(src)
    M = src[0][0].M
    eqs = []
    for g in sub.gen_elems:
        A = sub.matrix(g)
        B = _action_matrix(A, src)
        C = _action_matrix(A, dst)
        # unknown X (k x k, row-major): X B - C X = 0
        for i in range(k):
            for j in range(k):
                row = [CycNum.zero(M)] * (k * k)
                for t in range(k):
                    row[i * k + t] = row[i * k + t] + B[t][j]
                    row[t * k + j] = row[t * k + j] - C[i][t]
                eqs.append(row)
    sol = linalg.nullspace(eqs, M)
    if not sol:
        raise _NoIntertwiner()
    if len(sol) != 1:
        raise HypothesisFailed("piece is not absolutely irreducible")
    X = sol[0]
    # column j of X = coordinates of the image of src[j]
    out = []
    for j in range(k):
        w = [CycNum.zero(M)] * len(src[0])
        for i in range(k):
            w = [a + X[i * k + j] * b for a, b in zip(w, dst[i])]
        out.append(w)
    return out


def _coords_in(basis, v):
    k = len(basis)
    aug = [[basis[j][i] for j in range(k)] + [v[i]] for i in range(len(v))]
    R, piv = linalg.rref(aug)
    if k in piv:
        return None
    return [R[i][k] for i in range(len(piv))]


def _split_piece(G, sub, Z, b):
    """One absolutely irreducible piece A.  Returns (U, info).

    If zA is not isomorphic to A then zA = A^perp inside A + zA.  Otherwise
    A + zA = A (x) P, P the plane with basis (A, phi(A)) for an intertwiner
    phi : A -> A^perp and Gram matrix diag(1, c).  z acts as gamma (x) delta;
    delta^2 is a positive or negative multiple of 1 (symmetry or quarter
    turn).  We pick w = (1, t) in P with w orthogonal to delta(w) and return
    A (x) w = {v + t phi(v)}, or phi(A) for t = infinity.
    """
    M = G.M
    zb = [linalg.mat_vec(Z, v) for v in b]
    Aperp = _span_basis(_project_away(b, zb), M)
    if len(Aperp) != len(b):
        raise HypothesisFailed("A + zA does not have twice the dimension of A")
    try:
        phi = _intertwiner(sub, b, Aperp)
    except _NoIntertwiner:
        if not all(x.is_zero() for row in _gram(b, zb) for x in row):
            raise HypothesisFailed("zA is not isomorphic to A but not orthogonal to it")
        return b, {"case": "distinct"}
    # z(v (x) e) = gamma(v) (x) delta(e): on v = b[i0] both columns of delta
    # show up as multiples of the coordinates g of gamma(v); read them at one j
    # with g_j != 0
    i0 = next(i for i in range(len(b)) if not linalg.dot(b[i], b[i]).is_zero())
    c = linalg.dot(phi[i0], phi[i0]) / linalg.dot(b[i0], b[i0])
    k = len(b)
    co0 = _coords_in(b + phi, linalg.mat_vec(Z, b[i0]))
    co1 = _coords_in(b + phi, linalg.mat_vec(Z, phi[i0]))
    j = next(j for j in range(k) if not (co0[j].is_zero() and co0[k + j].is_zero()))
    D = [[co0[j], co1[j]], [co0[k + j], co1[k + j]]]
    D2 = [[sum((D[r][t] * D[t][q] for t in range(2)), CycNum.zero(M)) for q in range(2)] for r in range(2)]
    if not (D2[0][1].is_zero() and D2[1][0].is_zero() and D2[0][0] == D2[1][1]):
        raise HypothesisFailed("delta^2 is not a homothety")
    if D[0][1].is_zero() and D[1][0].is_zero() and D[0][0] == D[1][1]:
        raise HypothesisFailed("delta is a homothety, so V is not V0 + zV0")
    info = {"case": "isotypic", "delta": [[str(x) for x in r] for r in D], "c": str(c),
            "delta_sq": 1 if D2[0][0].to_complex().real > 0 else -1}
    # <w, delta w>_G for w = (1, t), G = diag(1, c)
    d00, d01, d10, d11 = D[0][0], D[0][1], D[1][0], D[1][1]
    c0 = d00
    c1 = d01 + c * d10
    c2 = c * d11
    roots = []
    if c0.is_zero():
        roots.append(CycNum.zero(M))
    elif c2.is_zero():
        if c1.is_zero():
            raise HypothesisFailed("delta has no orthogonal vector")
        roots.append(-c0 / c1)
    else:
        s = sqrt_exact(c1 * c1 - c2 * c0 * 4)
        if s is None:
            raise BasisUnavailable("the orthogonal vector needs a square root outside the field")
        roots += [(-c1 + s) / (c2 * 2), (-c1 - s) / (c2 * 2)]
    if c2.is_zero() and not c0.is_zero():
        roots.append(None)  # w = e2 itself
    for t in roots:
        U = phi if t is None else [[x + t * y for x, y in zip(v, w)] for v, w in zip(b, phi)]
        zU = [linalg.mat_vec(Z, u) for u in U]
        if all(x.is_zero() for row in _gram(U, zU) for x in row):
            info["v0"] = ["0", "1"] if t is None else ["1", str(t)]
            return U, info
    raise BasisUnavailable("no orthogonal graph found")


def _project_onto(W, v):
    Gm = _gram(W, W)
    rhs = [linalg.dot(w, v) for w in W]
    aug = [row + [r] for row, r in zip(Gm, rhs)]
    R, piv = linalg.rref(aug)
    c = [CycNum.zero(v[0].M)] * len(W)
    for i, col in enumerate(piv):
        if col < len(W):
            c[col] = R[i][-1]
    out = [CycNum.zero(v[0].M)] * len(v)
    for ci, w in zip(c, W):
        out = [a + ci * x for a, x in zip(out, w)]
    return out
