"""Small linear algebra kernels: exact over Q(zeta_M) and vectorised over F_p."""

from __future__ import annotations

import numpy as np

from .cyclotomic import CycNum, CycMatrix


# ---------------------------------------------------------------------------
# exact, over Q(zeta_M); matrices are lists of lists of CycNum

def rref(rows):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    A = [list(r) for r in rows]
    if not A:
        return A, []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if not A[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inv()
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace(rows, M=None):
    """Basis of {x : A x = 0} as a list of column vectors."""
    if not rows:
        return []
    n = len(rows[0])
    if M is None:
        M = rows[0][0].M
    R, piv = rref(rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    zero = CycNum.zero(M)
    one = CycNum.one(M)
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        basis.append(v)
    return basis


def rank(rows):
    return len(rref(rows)[1])


def det(rows):
    A = [list(r) for r in rows]
    n = len(A)
    M = A[0][0].M
    out = CycNum.one(M)
    for c in range(n):
        piv = next((i for i in range(c, n) if not A[i][c].is_zero()), None)
        if piv is None:
            return CycNum.zero(M)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            out = -out
        out = out * A[c][c]
        inv = A[c][c].inv()
        for i in range(c + 1, n):
            if not A[i][c].is_zero():
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return out


def intersect_kernels(mats, M):
    """Common kernel of several square matrices (CycMatrix or row lists)."""
    stacked = []
    for A in mats:
        stacked.extend(A.rows() if isinstance(A, CycMatrix) else A)
    if not stacked:
        return []
    return nullspace(stacked, M)


def mat_vec(A, v):
    rows = A.rows() if isinstance(A, CycMatrix) else A
    return [sum((a * x for a, x in zip(r, v)), CycNum.zero(v[0].M)) for r in rows]


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), CycNum.zero(u[0].M))


def charpoly(A):
    """Characteristic polynomial coefficients [c_0, ..., c_n] (monic) via Faddeev-LeVerrier."""
    rows = A.rows() if isinstance(A, CycMatrix) else A
    n = len(rows)
    M = rows[0][0].M
    Am = CycMatrix.from_rows(rows, M)
    I = CycMatrix.identity(M, n)
    c = [CycNum.zero(M)] * (n + 1)
    c[n] = CycNum.one(M)
    Mk = CycMatrix.zeros(M, n, n)
    for k in range(1, n + 1):
        Mk = Am @ Mk if k > 1 else Mk
        Mk = Mk + I.scale(c[n - k + 1]) if k > 1 else I
        AM = Am @ Mk
        c[n - k] = AM.trace() * (-1) / k
    return c


# ---------------------------------------------------------------------------
# mod p, numpy int64 arrays; p stays well below 2^31

def rref_mod(A, p):
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace_mod(A, p):
    """Rows of the returned array span {x : A x = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, piv = rref_mod(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, c in enumerate(piv):
            out[k, c] = (-R[i, f]) % p
    return out


def rank_mod(A, p):
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    return len(rref_mod(A, p)[1])


def row_basis_mod(A, p):
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return A.reshape(0, A.shape[-1] if A.ndim == 2 else 0)
    return rref_mod(A, p)[0]


def matmul_mod(A, B, p):
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


def solve_in_span_mod(basis, v, p):
    """Coefficients c with c @ basis = v, or None."""
    basis = np.asarray(basis, dtype=np.int64)
    k = basis.shape[0]
    aug = np.concatenate([basis.T, np.asarray(v, dtype=np.int64).reshape(-1, 1)], axis=1)
    R, piv = rref_mod(aug, p)
    if k in piv:
        return None
    c = np.zeros(k, dtype=np.int64)
    for i, col in enumerate(piv):
        c[col] = R[i, k]
    return c


def inv_mod(A, p):
    A = np.asarray(A, dtype=np.int64) % p
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, piv = rref_mod(aug, p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix mod p")
    return R[:, n:]
