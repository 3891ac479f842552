"""Independent re-check of report certificates.

Only the cyclotomic arithmetic layer is shared with the engine: the closure,
conjugacy classes, eliminations and determinants below are separate code.
"""

from __future__ import annotations

import numpy as np

from .cyclotomic import CycNum, CycMatrix, PrimeContext, is_prime


class CertificateError(AssertionError):
    pass


# -- tiny mod-p toolkit (row reduction, rank, det, span membership) ----------

def _reduce(rows, p):
    rows = [[x % p for x in r] for r in rows]
    out = []
    ncols = len(rows[0]) if rows else 0
    col = 0
    for c in range(ncols):
        piv = next((r for r in rows if r[c] and all(not r[k] for k in range(c))), None)
        if piv is None:
            continue
        rows.remove(piv)
        inv = pow(piv[c], -1, p)
        piv = [x * inv % p for x in piv]
        rows = [[(a - r[c] * b) % p for a, b in zip(r, piv)] for r in rows]
        out = [[(a - r[c] * b) % p for a, b in zip(r, piv)] for r in out]
        out.append(piv)
        col += 1
    return out


def _rank(rows, p):
    return len(_reduce(rows, p)) if rows else 0


def _det(A, p):
    A = [[x % p for x in r] for r in A]
    n = len(A)
    d = 1
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c]), None)
        if k is None:
            return 0
        if k != c:
            A[c], A[k] = A[k], A[c]
            d = -d
        d = d * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for i in range(c + 1, n):
            f = A[i][c] * inv % p
            if f:
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[c])]
    return d % p


def _coords(basis, v, p):
    """c with c . basis = v (mod p), or None."""
    k = len(basis)
    n = len(v)
    aug = [[basis[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    R = _reduce(aug, p)
    c = [0] * k
    for r in R:
        lead = next(i for i, x in enumerate(r) if x)
        if lead == k:
            return None
        c[lead] = r[k]
    return c


def _mat_mod(A: CycMatrix, ctx):
    from .cyclotomic import reduce_mod
    return [[reduce_mod(x, ctx) for x in row] for row in A.rows()]


def _mm(A, B, p):
    n, m, k = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(m)) % p for j in range(k)] for i in range(n)]


def _verifier_prime(M, start=2 ** 27):
    p = start - (start - 1) % M
    while not is_prime(p):
        p += M
    return PrimeContext.make(p, M)


def _closure_mod(gens, p, limit):
    """Elements as byte keys of int64 matrices mod p, with words."""
    n = len(gens[0])
    G = [np.array(g, dtype=np.int64) for g in gens]
    I = np.eye(n, dtype=np.int64)
    mats = {I.tobytes(): I}
    words = {I.tobytes(): ()}
    todo = [I]
    while todo:
        stack = np.stack(todo)
        nxt = []
        for j, g in enumerate(G):
            prods = stack @ g % p
            for Y, X in zip(prods, todo):
                k = Y.tobytes()
                if k not in mats:
                    mats[k] = Y
                    words[k] = words[X.tobytes()] + (j,)
                    nxt.append(Y)
                    if len(mats) > limit:
                        raise CertificateError("verifier closure exceeded its limit")
        todo = nxt
    return mats, words


def _classes(mats, gens, ginvs, p):
    """Union-find of conjugation by generators."""
    keys = list(mats)
    pos = {k: i for i, k in enumerate(keys)}
    parent = list(range(len(keys)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    stack = np.stack([mats[k] for k in keys])
    for g, gi in zip(gens, ginvs):
        conj = np.asarray(g) @ stack % p @ np.asarray(gi) % p
        for i, Y in enumerate(conj):
            a, b = find(i), find(pos[Y.tobytes()])
            if a != b:
                parent[a] = b
    return {k: find(pos[k]) for k in keys}


def _exact_word(gens_exact, word, n, M):
    A = CycMatrix.identity(M, n)
    for j in word:
        A = A @ gens_exact[j]
    return A


def verify_report(gens, report, spin_gens=None, limit=200000):
    """Check every certificate in `report` against the generator matrices.

    For spin-level instances pass the spin-representation matrices of the
    lifts; the group is then closed on E + S.  Returns the list of checks
    performed; raises CertificateError on failure.
    """
    ins = report["instance"]
    n, M = ins["n"], ins["M"]
    done = []
    chars = {c["name"]: c["signs"] for c in report["characters"]}

    def sign(name, word):
        s = 1
        for j in word:
            s *= chars[name][j]
        return s

    # own closure and classes
    ctx = _verifier_prime(M)
    p = ctx.p
    gm = [np.array(_mat_mod(A, ctx), dtype=np.int64) for A in gens]
    if spin_gens is not None:
        gm = [_blocks(a, np.array(_mat_mod(S, ctx), dtype=np.int64)) for a, S in zip(gm, spin_gens)]
    mats, ewords = _closure_mod(gm, p, limit)
    if len(mats) != ins["order"]:
        raise CertificateError(f"order mismatch: {len(mats)} vs {ins['order']}")
    done.append("order")
    # characters really are homomorphisms: constant along every Cayley edge
    keys = list(mats)
    stack = np.stack([mats[k] for k in keys])
    for nm, signs in chars.items():
        val = {k: sign(nm, ewords[k]) for k in keys}
        for j, g in enumerate(gm):
            prods = stack @ g % p
            for k, Y in zip(keys, prods):
                if val[Y.tobytes()] != val[k] * signs[j]:
                    raise CertificateError(f"{nm} is not a character")
    done.append("characters")
    ginv = [np.array(_inverse_mod(g.tolist(), p), dtype=np.int64) for g in gm]
    cls = _classes(mats, gm, ginv, p)
    words = report["certificates"]["class_words"]
    rep_keys = []
    for w in words:
        A = np.eye(len(gm[0]), dtype=np.int64)
        for j in w:
            A = A @ gm[j] % p
        rep_keys.append(A.tobytes())
    roots = [cls[k] for k in rep_keys]
    if len(set(roots)) != len(roots) or set(roots) != set(cls.values()):
        raise CertificateError("class representatives do not match the conjugacy classes")
    done.append("classes")
    # U1: exact eigenvectors on every class representative
    for nm, table in report["certificates"]["U1"].items():
        if len(table) != len(words):
            raise CertificateError(f"U1 table for {nm} incomplete")
        for row in table:
            w = words[row["class"]]
            lam = sign(nm, w)
            if lam != row["eigenvalue"]:
                raise CertificateError("eigenvalue does not match the character")
            v = [CycNum.from_json(x) for x in row["vector"]]
            if all(x.is_zero() for x in v):
                raise CertificateError("zero eigenvector")
            A = _exact_word(gens, w, n, M)
            Av = [sum((a * b for a, b in zip(r, v)), CycNum.zero(M)) for r in A.rows()]
            if any(not (x - y * lam).is_zero() for x, y in zip(Av, v)):
                raise CertificateError(f"U1 eigenvector check failed for {nm}")
    done.append("U1")
    # Y: common eigenvectors on generators
    for nm, basis in report["certificates"]["Y"].items():
        vecs = [[CycNum.from_json(x) for x in v] for v in basis]
        if len(vecs) != report["Y"][nm]:
            raise CertificateError("Y multiplicity does not match its basis")
        for v in vecs:
            for j, A in enumerate(gens):
                Av = [sum((a * b for a, b in zip(r, v)), CycNum.zero(M)) for r in A.rows()]
                if any(not (x - y * chars[nm][j]).is_zero() for x, y in zip(Av, v)):
                    raise CertificateError(f"Y eigenvector check failed for {nm}")
        yctx = _verifier_prime(M, 2 ** 29)
        red = [[_mod(x, yctx) for x in v] for v in vecs]
        if _rank(red, yctx.p) != len(vecs):
            raise CertificateError("Y basis not independent")
    done.append("Y")
    # X: Gamma-stable subspaces mod q with the right determinant
    xc = report["certificates"]["X_copies"]
    q = xc["p"]
    if ins["order"] % q == 0 or (q - 1) % M:
        raise CertificateError("certificate prime unsuitable")
    qctx = PrimeContext.make(q, M)
    gq = [_mat_mod(A, qctx) for A in gens]
    dims = xc["constituent_dims"]
    for nm, idx in report["certificates"]["X"].items():
        basis = []
        for i in idx:
            B = xc["bases"][str(i)]
            if len(B) != dims[i]:
                raise CertificateError("copy basis has the wrong dimension")
            basis += B
        if idx and _rank(basis, q) != len(basis):
            raise CertificateError("X certificate pieces are not independent")
        for j, g in enumerate(gq):
            if not basis:
                d = 1
            else:
                # action of g on span(basis): rows b -> g b
                imgs = [[sum(g[r][t] * b[t] for t in range(n)) % q for r in range(n)] for b in basis]
                coords = []
                for v in imgs:
                    c = _coords(basis, v, q)
                    if c is None:
                        raise CertificateError(f"X certificate for {nm} is not Gamma-stable")
                    coords.append(c)
                d = _det(coords, q)
            if d != chars[nm][j] % q:
                raise CertificateError(f"determinant of the X certificate for {nm} is wrong")
    done.append("X")
    # E, X consistency and verdict
    X = set(report["X"])
    for nm in report["E"]:
        if nm in X or nm not in report["certificates"]["U1"] or nm == "1":
            raise CertificateError(f"E contains {nm} without support")
    missing = set(report["certificates"]["U1"]) - X - set(report["E"])
    if missing:
        raise CertificateError(f"U1 holds for {sorted(missing)} outside X but E omits them")
    if (report["verdict"] == "unacceptable") != bool(report["E"]):
        raise CertificateError("verdict inconsistent with E")
    # X is a group
    signs = {tuple(chars[x]) for x in X}
    for a in signs:
        for b in signs:
            if tuple(s * t for s, t in zip(a, b)) not in signs:
                raise CertificateError("X is not closed under products")
    done.append("E")
    return done


def _mod(x, ctx):
    from .cyclotomic import reduce_mod
    return reduce_mod(x, ctx)


def _inverse_mod(g, p):
    n = len(g)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(g)]
    R = _reduce(aug, p)
    return [r[n:] for r in R]


def _blocks(a, b):
    out = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=np.int64)
    out[:a.shape[0], :a.shape[0]] = a
    out[a.shape[0]:, a.shape[0]:] = b
    return out
