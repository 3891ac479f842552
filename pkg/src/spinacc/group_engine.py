"""Finite matrix groups: BFS closure, Cayley tables on generators, classes,
sign characters and index-2 kernels."""

from __future__ import annotations

import logging
from collections import deque
from math import gcd

import numpy as np

from .cyclotomic import CycMatrix, CycNum, field, _SAFE, _maxabs, _matmul_num
from . import linalg

log = logging.getLogger(__name__)


class GroupTooLarge(RuntimeError):
    def __init__(self, bound):
        super().__init__(f"closure exceeded max_order = {bound}")
        self.bound = bound


class NotOrthogonal(ValueError):
    pass


DEFAULT_MAX_ORDER = 20000


def check_special_orthogonal(A: CycMatrix):
    n = A.shape[0]
    if A.shape[1] != n:
        raise NotOrthogonal("generator is not square")
    if A.conj() != A:
        raise NotOrthogonal("generator has non-real entries")
    if not (A.transpose() @ A).is_identity():
        raise NotOrthogonal("generator is not orthogonal")
    if linalg.det(A.rows()) != 1:
        raise NotOrthogonal("generator does not have determinant +1")


def _stack(mats):
    den = np.array([m.den for m in mats], dtype=np.int64)
    if any(m.num.dtype == object for m in mats):
        return np.stack([m.num.astype(object) for m in mats]), den
    return np.stack([m.num for m in mats]), den


def _batch_normalize(num, den):
    F = num.shape[0]
    flat = num.reshape(F, -1)
    if num.dtype == object:
        gs = np.array([gcd(gcd(*map(int, r)) if r.size > 1 else int(r[0]), int(d)) for r, d in zip(flat, den)], dtype=object)
    else:
        gs = np.gcd(np.gcd.reduce(flat, axis=1), den)
    gs = np.where(gs == 0, 1, gs)
    num = num // gs.reshape((F,) + (1,) * (num.ndim - 1))
    den = den // gs
    return num, den


def _batch_mul(M, A, Ad, B, Bd, left_fixed=False):
    """A (F,r,k,D) times fixed B (k,c,D); or fixed A times batch B if left_fixed."""
    Fld = field(M)
    if left_fixed:
        k = A.shape[1]
        bound = _maxabs(A) * _maxabs(B) * k * Fld.D * Fld.maxpow
        if A.dtype != object and B.dtype != object and bound < _SAFE:
            num = np.einsum("ija,fjkb,abc->fikc", A, B, Fld.T, optimize=True)
        else:
            num = np.stack([_matmul_num(M, A.astype(object), b.astype(object)) for b in B])
        den = Ad * Bd
    else:
        k = A.shape[2]
        bound = _maxabs(A) * _maxabs(B) * k * Fld.D * Fld.maxpow
        if A.dtype != object and B.dtype != object and bound < _SAFE:
            num = np.einsum("fija,jkb,abc->fikc", A, B, Fld.T, optimize=True)
        else:
            num = np.stack([_matmul_num(M, a.astype(object), B.astype(object)) for a in A])
        den = Ad * Bd
    num, den = _batch_normalize(num, np.asarray(den))
    if num.dtype == object and _maxabs(num) < (1 << 40):
        num = num.astype(np.int64)
    return num, den


def _keys(num, den):
    if num.dtype == object:
        return [(int(d), tuple(int(v) for v in x.flat)) for x, d in zip(num, den)]
    return [(int(d), x.tobytes()) for x, d in zip(num, den)]


class Closure:
    """Raw BFS closure data over tuples of matrices; component `key` identifies elements."""

    def __init__(self, M, gen_tuples, key=0, max_order=DEFAULT_MAX_ORDER):
        self.M = M
        self.ng = len(gen_tuples)
        ncomp = len(gen_tuples[0]) if gen_tuples else 1
        self.ncomp = ncomp
        self.key = key
        gens = [[g[c] for g in gen_tuples] for c in range(ncomp)]
        self.gens = gens
        # identity tuple
        if not gen_tuples:
            raise ValueError("closure needs at least one generator (use the identity)")
        ident = [CycMatrix.identity(M, gen_tuples[0][c].shape[0]) for c in range(ncomp)]
        nums = [[ident[c].num] for c in range(ncomp)]
        dens = [[1] for c in range(ncomp)]
        index = {_keys(ident[key].num[None], np.array([1]))[0]: 0}
        parent = [-1]
        pgen = [-1]
        R = [[-1] * self.ng]
        frontier = [0]
        gstack = [( [gens[c][j].num for j in range(self.ng)], [gens[c][j].den for j in range(self.ng)]) for c in range(ncomp)]
        while frontier:
            fn = []
            fd = []
            for c in range(ncomp):
                arrs = [nums[c][i] for i in frontier]
                if any(a.dtype == object for a in arrs):
                    arrs = [a.astype(object) for a in arrs]
                fn.append(np.stack(arrs))
                fd.append(np.array([dens[c][i] for i in frontier], dtype=np.int64))
            new = []
            for j in range(self.ng):
                prods = [_batch_mul(M, fn[c], fd[c], gstack[c][0][j], gstack[c][1][j]) for c in range(ncomp)]
                ks = _keys(*prods[key])
                for f, kk in enumerate(ks):
                    idx = index.get(kk)
                    if idx is None:
                        idx = len(parent)
                        if idx >= max_order:
                            raise GroupTooLarge(max_order)
                        index[kk] = idx
                        parent.append(frontier[f])
                        pgen.append(j)
                        for c in range(ncomp):
                            nums[c].append(prods[c][0][f])
                            dens[c].append(int(prods[c][1][f]))
                        new.append(idx)
                        R.append([-1] * self.ng)
                    R[frontier[f]][j] = idx
            frontier = new
        N = len(parent)
        self.N = N
        self.index = index
        self.parent = parent
        self.pgen = pgen
        self.R = np.array(R, dtype=np.int64).reshape(N, self.ng)
        self.nums = nums
        self.dens = dens
        # left multiplication table
        L = np.zeros((N, self.ng), dtype=np.int64)
        allnum = [np.stack([a.astype(object) for a in nums[c]]) if any(a.dtype == object for a in nums[c]) else np.stack(nums[c]) for c in range(ncomp)]
        allden = [np.array(dens[c], dtype=np.int64) for c in range(ncomp)]
        for j in range(self.ng):
            prod = _batch_mul(M, gstack[key][0][j], gstack[key][1][j], allnum[key], allden[key], left_fixed=True)
            ks = _keys(*prod)
            for x, kk in enumerate(ks):
                idx = index.get(kk)
                if idx is None:
                    raise RuntimeError("left product escaped the closure")
                L[x, j] = idx
        self.L = L
        self.allnum = allnum
        self.allden = allden

    def matrix(self, c, i) -> CycMatrix:
        return CycMatrix(self.M, self.nums[c][i], self.dens[c][i], normalize=False)


class Mu2Character:
    """A homomorphism to {+1, -1}, stored as a bit vector over the elements."""

    def __init__(self, group, bits, label=None):
        self.group = group
        self.bits = np.asarray(bits, dtype=np.int8)  # 1 means value -1
        self.label = label

    def __call__(self, x):
        return -1 if self.bits[x] else 1

    def values(self):
        return 1 - 2 * self.bits.astype(np.int64)

    def on_generators(self):
        return tuple(self(g) for g in self.group.gen_elems)

    def is_trivial(self):
        return not self.bits.any()

    def __mul__(self, other):
        return Mu2Character(self.group, self.bits ^ other.bits)

    def __eq__(self, other):
        return isinstance(other, Mu2Character) and self.group is other.group and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def restrict(self, sub):
        return Mu2Character(sub, self.bits[np.asarray(sub.parent_index)])

    def name(self):
        return self.label or self.group.char_name(self)

    def __repr__(self):
        return f"Mu2Character({self.name()})"


class MorphismInstance:
    """Finite subgroup of SO(n) over Q(zeta_M), with BFS bookkeeping.

    level "so": elements are identified with their matrices on E.
    level "spin": elements are identified with their spin-representation
    matrices (needs lifts); the E-matrix is carried along.
    """

    def __init__(self, n, M, gens, lifts=None, name="", labels=None, gen_names=None,
                 level="so", max_order=DEFAULT_MAX_ORDER, _closure=None, check=True):
        self.n = n
        self.M = M
        self.name = name
        self.gens = list(gens)
        self.lifts = list(lifts) if lifts is not None else None
        self.gen_names = gen_names or [f"g{j + 1}" for j in range(len(self.gens))]
        self.labels = dict(labels or {})  # label -> sign tuple on generators
        self.level = level
        self.max_order = max_order
        self.parent = None
        self.parent_index = None
        self._cache = {}
        if _closure is not None:
            self._adopt(_closure)
            return
        if n % 2 == 0 or not 3 <= n <= 9:
            raise ValueError("n must be odd with 3 <= n <= 9")
        if not self.gens:
            self.gens = [CycMatrix.identity(M, n)]
            self.gen_names = ["id"]
        for A in self.gens:
            if A.M != M or A.shape != (n, n):
                raise NotOrthogonal("generator has wrong size or modulus")
            if check:
                check_special_orthogonal(A)
        if self.lifts is not None:
            from .clifford import pi_action
            if len(self.lifts) != len(self.gens):
                raise ValueError("one lift per generator expected")
            for A, s in zip(self.gens, self.lifts):
                if s.parity or pi_action(s) != A:
                    raise ValueError("lift does not cover its generator")
        if level == "spin":
            if self.lifts is None:
                raise ValueError("spin-level closure needs lifts")
            from .clifford import spin_rep
            rep = spin_rep(n, M)
            tuples = [(A, rep.matrix(s)) for A, s in zip(self.gens, self.lifts)]
            cl = Closure(M, tuples, key=1, max_order=max_order)
        else:
            cl = Closure(M, [(A,) for A in self.gens], key=0, max_order=max_order)
        self._adopt(cl)

    def _adopt(self, cl):
        self.closure = cl
        self.order = cl.N
        self.R = cl.R
        self.L = cl.L
        self.tree_parent = cl.parent
        self.tree_gen = cl.pgen
        ng = len(self.gens)
        self.Rinv = np.zeros_like(self.R)
        self.Linv = np.zeros_like(self.L)
        ar = np.arange(self.order)
        for j in range(ng):
            self.Rinv[self.R[:, j], j] = ar
            self.Linv[self.L[:, j], j] = ar
        self.gen_elems = [int(self.R[0, j]) for j in range(ng)]
        # words along the BFS tree
        words = [()] * self.order
        for x in range(1, self.order):
            words[x] = words[self.tree_parent[x]] + (self.tree_gen[x],)
        self.words = words

    # -- element access ---------------------------------------------------
    @property
    def N(self):
        return self.order

    def matrix(self, x) -> CycMatrix:
        return self.closure.matrix(0, x)

    def spin_matrix(self, x) -> CycMatrix | None:
        if self.level == "spin" and self.closure.ncomp > 1:
            return self.closure.matrix(1, x)
        return None

    def all_matrices(self):
        return self.closure.allnum[0], self.closure.allden[0]

    def index_of(self, A: CycMatrix):
        if self.level != "so":
            for x in range(self.order):
                if self.matrix(x) == A:
                    return x
            return None
        return self.closure.index.get(_keys(A.num[None].astype(self.closure.allnum[0].dtype) if A.num.dtype != object else A.num[None], np.array([A.den]))[0])

    def mul(self, x, y):
        for j in self.words[y]:
            x = self.R[x, j]
        return int(x)

    def inv(self, x):
        key = "inv"
        if key not in self._cache:
            inv = np.zeros(self.order, dtype=np.int64)
            for z in range(self.order):
                y = 0
                for j in reversed(self.words[z]):
                    y = self.Rinv[y, j]
                inv[z] = y
            self._cache[key] = inv
        return int(self._cache[key][x])

    def inverses(self):
        self.inv(0)
        return self._cache["inv"]

    def power(self, x, k):
        k %= self.element_order(x)
        y = 0
        for _ in range(k):
            y = self.mul(y, x)
        return y

    def squares(self):
        if "sq" not in self._cache:
            self._cache["sq"] = np.array([self.mul(x, x) for x in range(self.order)], dtype=np.int64)
        return self._cache["sq"]

    def element_order(self, x):
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def exponent(self):
        e = 1
        for cls in self.conjugacy_classes():
            k = self.element_order(cls[0])
            e = e * k // gcd(e, k)
        return e

    def lift_of(self, x):
        """Spin lift of element x as a product of generator lifts along its word."""
        if self.lifts is None:
            return None
        from .clifford import SpinElement
        out = SpinElement.identity(self.n, self.M)
        for j in self.words[x]:
            out = out * self.lifts[j]
        return out

    # -- classes ----------------------------------------------------------
    def conjugacy_classes(self):
        if "classes" in self._cache:
            return self._cache["classes"]
        N = self.order
        # g^-1 x g for each generator g
        conj = [self.R[self.Linv[:, j], j] for j in range(len(self.gens))]
        cls_of = -np.ones(N, dtype=np.int64)
        classes = []
        for x in range(N):
            if cls_of[x] >= 0:
                continue
            c = len(classes)
            cls_of[x] = c
            orbit = [x]
            q = deque([x])
            while q:
                y = q.popleft()
                for cj in conj:
                    z = int(cj[y])
                    if cls_of[z] < 0:
                        cls_of[z] = c
                        orbit.append(z)
                        q.append(z)
            classes.append(sorted(orbit))
        self._cache["classes"] = classes
        self._cache["class_of"] = cls_of
        return classes

    def class_of(self):
        self.conjugacy_classes()
        return self._cache["class_of"]

    def class_reps(self):
        return [c[0] for c in self.conjugacy_classes()]

    # -- abelianization data ---------------------------------------------
    def _relations(self):
        """Integer relation vectors on generators from all Cayley edges."""
        if "rel" in self._cache:
            return self._cache["rel"]
        ng = len(self.gens)
        forms = np.zeros((self.order, ng), dtype=np.int64)
        for x in range(1, self.order):
            forms[x] = forms[self.tree_parent[x]]
            forms[x, self.tree_gen[x]] += 1
        rels = set()
        for j in range(ng):
            e = np.zeros(ng, dtype=np.int64)
            e[j] = 1
            diff = np.ascontiguousarray(forms + e - forms[self.R[:, j]])
            for key in {r.tobytes() for r in diff}:
                row = np.frombuffer(key, dtype=np.int64)
                if row.any():
                    rels.add(tuple(int(v) for v in row))
        self._cache["forms"] = forms
        self._cache["rel"] = sorted(rels)
        return self._cache["rel"]

    def abelian_invariants(self):
        """Invariant factors of the abelianization (0 for a free Z factor, 1s dropped)."""
        rel = self._relations()
        ng = len(self.gens)
        d = smith_diagonal([list(r) for r in rel], ng)
        return sorted(x for x in d if x != 1)

    def count_homs_mu(self, m):
        out = 1
        for d in self.abelian_invariants():
            out *= gcd(d, m) if d else m
        return out

    def hom_generators_mu(self, m):
        """Exponent vectors on generators generating Hom(Gamma, Z/m)."""
        rel = [list(r) for r in self._relations()]
        ng = len(self.gens)
        d, V = diagonalize_columns(rel, ng)
        out = []
        for i in range(ng):
            di = d[i] if i < len(d) else 0
            step = m // gcd(di, m) if di else 1
            if step % m == 0:
                continue
            out.append([(V[r][i] * step) % m for r in range(ng)])
        return out

    def hom_values(self, e, m):
        """Values in Z/m on all elements of the hom with exponents e on generators."""
        self._relations()
        forms = self._cache["forms"]
        vals = (forms @ np.asarray(e, dtype=np.int64)) % m
        for j in range(len(self.gens)):
            if np.any((vals + e[j]) % m != vals[self.R[:, j]]):
                raise ValueError("exponents do not define a homomorphism")
        return vals

    def random_hom_mu(self, m, rng):
        e = [0] * len(self.gens)
        for b in self.hom_generators_mu(m):
            c = rng.randrange(m)
            e = [(x + c * y) % m for x, y in zip(e, b)]
        return e

    def mu2_characters(self):
        if "mu2" in self._cache:
            return self._cache["mu2"]
        self._relations()
        forms = self._cache["forms"] & 1
        ng = len(self.gens)
        C = np.array([[v & 1 for v in r] for r in self._cache["rel"]], dtype=np.int64).reshape(-1, ng)
        basis = linalg.nullspace_mod(C, 2) if C.shape[0] else np.eye(ng, dtype=np.int64)
        chars = []
        r = basis.shape[0]
        for mask in range(1 << r):
            s = np.zeros(ng, dtype=np.int64)
            for t in range(r):
                if mask >> t & 1:
                    s ^= basis[t]
            bits = (forms @ s) & 1
            chars.append(Mu2Character(self, bits))
        chars.sort(key=lambda c: (int(c.bits.sum()) > 0, c.on_generators()[::-1]))
        # labels
        for c in chars:
            c.label = self.char_name(c)
        self._cache["mu2"] = chars
        return chars

    def trivial_character(self):
        return Mu2Character(self, np.zeros(self.order, dtype=np.int8), "1")

    def character_from_signs(self, signs):
        for c in self.mu2_characters():
            if c.on_generators() == tuple(signs):
                return c
        return None

    def char_name(self, c):
        if c.is_trivial():
            return "1"
        g = c.on_generators()
        for lab, s in self.labels.items():
            if tuple(s) == g:
                return lab
        return "[" + ",".join("+" if v > 0 else "-" for v in g) + "]"

    def labeled(self, label):
        return self.character_from_signs(self.labels[label])

    def has_quotient(self, kind):
        inv = self.abelian_invariants()
        r2 = sum(1 for d in inv if d % 2 == 0)
        r4 = sum(1 for d in inv if d % 4 == 0)
        if kind in ("Z2^2", "(Z/2)^2"):
            return r2 >= 2
        if kind in ("Z2^3", "(Z/2)^3"):
            return r2 >= 3
        if kind in ("Z2xZ4", "Z/2xZ/4"):
            return r2 >= 2 and r4 >= 1
        raise ValueError(f"unknown quotient type {kind}")

    # -- subgroups ---------------------------------------------------------
    def subgroup(self, gen_elems, name=None):
        """Sub-instance generated by the given element indices."""
        gen_elems = [int(g) for g in gen_elems] or [0]
        index = {0: 0}
        members = [0]
        parent = [-1]
        pgen = [-1]
        R = []
        q = 0
        while q < len(members):
            x = members[q]
            row = []
            for j, g in enumerate(gen_elems):
                y = self.mul(x, g)
                if y not in index:
                    index[y] = len(members)
                    members.append(y)
                    parent.append(q)
                    pgen.append(j)
                row.append(index[y])
            R.append(row)
            q += 1
        N = len(members)
        R = np.array(R, dtype=np.int64).reshape(N, len(gen_elems))
        L = np.zeros_like(R)
        for j, g in enumerate(gen_elems):
            for i, x in enumerate(members):
                L[i, j] = index[self.mul(g, x)]
        cl = _SubClosure(self, members, parent, pgen, R, L)
        sub = MorphismInstance(self.n, self.M, [self.matrix(g) for g in gen_elems],
                               lifts=[self.lift_of(g) for g in gen_elems] if self.lifts is not None else None,
                               name=name or f"sub({self.name})", level="so", _closure=cl,
                               gen_names=[f"h{j + 1}" for j in range(len(gen_elems))])
        sub.parent = self
        sub.parent_index = np.array(members, dtype=np.int64)
        sub.level = self.level
        return sub

    def kernel(self, chi: Mu2Character):
        """Index-2 (or whole) subgroup ker chi, with pruned Schreier generators."""
        gens = self.gen_elems
        odd = [g for g in gens if chi(g) == -1]
        if not odd:
            return self.subgroup(gens, name=f"ker({chi.name()})")
        z = odd[0]
        zi = self.inv(z)
        cand = []
        for g in gens:
            if chi(g) == 1:
                cand += [g, self.mul(self.mul(z, g), zi)]
            else:
                cand += [self.mul(g, zi), self.mul(z, g)]
        target = int((chi.bits == 0).sum())
        chosen = []
        # greedy pruning: keep a generator only if it enlarges the subgroup
        size = 1
        for g in cand:
            if g == 0 or g in chosen:
                continue
            trial = self.subgroup(chosen + [g])
            if trial.order > size:
                chosen.append(g)
                size = trial.order
            if size == target:
                break
        sub = self.subgroup(chosen, name=f"ker({chi.name()})")
        if sub.order != target:
            raise RuntimeError("kernel closure has the wrong order")
        return sub

    # -- vectorised traces -------------------------------------------------
    def traces(self):
        """Exact traces on E of all elements, as (num (N, D), den (N,))."""
        if "tr" not in self._cache:
            num, den = self.all_matrices()
            n = self.n
            t = sum(num[:, i, i, :] for i in range(n))
            self._cache["tr"] = (t, den)
        return self._cache["tr"]

    def trace(self, x) -> CycNum:
        t, d = self.traces()
        return CycNum._make(self.M, [int(v) for v in t[x]], int(d[x]))

    def summary(self):
        return {"name": self.name, "n": self.n, "M": self.M, "order": self.order, "generators": len(self.gens)}

    def __repr__(self):
        return f"MorphismInstance({self.name!r}, n={self.n}, M={self.M}, order={self.order})"


class _SubClosure:
    """Closure-shaped view of a subgroup, sharing the parent's matrices."""

    def __init__(self, parent, members, tparent, pgen, R, L):
        pc = parent.closure
        self.M = parent.M
        self.N = len(members)
        self.parent = tparent
        self.pgen = pgen
        self.R = R
        self.L = L
        self.ncomp = pc.ncomp
        mem = np.array(members, dtype=np.int64)
        self.source = parent
        self.members = mem
        self.nums = [[pc.nums[c][i] for i in members] for c in range(pc.ncomp)]
        self.dens = [[pc.dens[c][i] for i in members] for c in range(pc.ncomp)]
        self.allnum = [a[mem] for a in pc.allnum]
        self.allden = [a[mem] for a in pc.allden]
        self.index = None

    def matrix(self, c, i):
        return CycMatrix(self.M, self.nums[c][i], self.dens[c][i], normalize=False)


def close(generators, max_order=DEFAULT_MAX_ORDER, **kw) -> MorphismInstance:
    gens = list(generators)
    n = gens[0].shape[0]
    M = gens[0].M
    return MorphismInstance(n, M, gens, max_order=max_order, **kw)


def smith_diagonal(rows, ncols):
    """Diagonal of the Smith normal form of an integer matrix (length ncols, zeros kept)."""
    A = [list(map(int, r)) for r in rows if any(r)]
    diag = []
    col = 0
    m = len(A)
    # work on a copy as a dense list of lists
    A = [r[:] for r in A]
    t = 0
    while t < min(m, ncols):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, ncols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        done = False
        while not done:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // p
                    for r in A:
                        r[j] -= q * r[t]
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest nonzero of row/column t to the pivot
                best = (t, t)
                for i in range(t, m):
                    if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t, ncols):
                    if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                        best = (t, j)
                i, j = best
                A[t], A[i] = A[i], A[t]
                for r in A:
                    r[t], r[j] = r[j], r[t]
                continue
            # divisibility condition
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, ncols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                A[t] = [a + b for a, b in zip(A[t], A[bad])]
                done = False
        diag.append(abs(A[t][t]))
        t += 1
    diag += [0] * (ncols - len(diag))
    return diag


def diagonalize_columns(rows, ncols):
    """U A V = D with D diagonal (not necessarily Smith); returns (diag, V)."""
    A = [list(map(int, r)) for r in rows if any(r)]
    m = len(A)
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(j, k, q):  # col_j -= q col_k
        for r in A:
            r[j] -= q * r[k]
        for r in V:
            r[j] -= q * r[k]

    def colswap(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    diag = []
    t = 0
    while t < min(m, ncols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, ncols) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        colswap(t, j)
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
            for j in range(t + 1, ncols):
                q = A[t][j] // p
                if q:
                    colop(j, t, q)
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, ncols) if A[t][j]]
            if not rest:
                break
            _, i, j = min(rest)
            if j == t:
                A[t], A[i] = A[i], A[t]
            else:
                colswap(t, j)
        diag.append(abs(A[t][t]))
        t += 1
    return diag, V
