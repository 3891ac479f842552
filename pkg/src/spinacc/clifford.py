"""Clifford algebra Cl(n) over Q(zeta_M) with e_i^2 = +1, Pin/Spin elements,
the covering map pi, the elements z_B and kappa, and the spin representation.

Coordinates in the public API are 1-based; monomials are stored as bitmasks
(bit i-1 for e_i).
"""

from __future__ import annotations

from functools import lru_cache

from .cyclotomic import CycNum, CycMatrix, cos_sin_half, imag_unit, root_of_unity
from . import linalg


class CliffordError(ValueError):
    pass


class SplitNotPreserved(CliffordError):
    pass


def _sign(a: int, b: int) -> int:
    """Sign of e_a e_b -> e_{a^b}: count pairs (i in a, j in b) with i > j."""
    s = 0
    a >>= 1
    while a:
        s += bin(a & b).count("1")
        a >>= 1
    return -1 if s & 1 else 1


class CliffordElement:
    __slots__ = ("n", "M", "terms")

    def __init__(self, n, M, terms=None):
        self.n = n
        self.M = M
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def scalar(cls, n, M, c=1):
        c = c if isinstance(c, CycNum) else CycNum.from_rational(M, c)
        return cls(n, M, {0: c})

    @classmethod
    def basis(cls, n, M, i):
        if not 1 <= i <= n:
            raise CliffordError(f"basis index {i} out of range 1..{n}")
        return cls(n, M, {1 << (i - 1): CycNum.one(M)})

    @classmethod
    def vector(cls, v):
        n = len(v)
        M = v[0].M
        return cls(n, M, {1 << i: x for i, x in enumerate(v)})

    @classmethod
    def monomial(cls, n, M, idx):
        """e_{i1} e_{i2} ... for the listed (1-based) indices, in that order."""
        out = cls.scalar(n, M)
        for i in idx:
            out = out * cls.basis(n, M, i)
        return out

    def _check(self, other):
        if self.n != other.n or self.M != other.M:
            raise CliffordError("Clifford operands differ in n or modulus")

    def __mul__(self, other):
        if isinstance(other, (int, CycNum)):
            return CliffordElement(self.n, self.M, {k: v * other for k, v in self.terms.items()})
        self._check(other)
        out = {}
        zero = CycNum.zero(self.M)
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                c = x * y
                if _sign(a, b) < 0:
                    c = -c
                k = a ^ b
                out[k] = out.get(k, zero) + c
        return CliffordElement(self.n, self.M, out)

    def __rmul__(self, other):
        return self * other

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return CliffordElement(self.n, self.M, out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.n == other.n and self.M == other.M and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.M, frozenset(self.terms.items())))

    def scalar_part(self) -> CycNum:
        return self.terms.get(0, CycNum.zero(self.M))

    def is_homogeneous(self):
        par = {bin(k).count("1") & 1 for k in self.terms}
        return len(par) <= 1

    def parity(self):
        par = {bin(k).count("1") & 1 for k in self.terms}
        if len(par) != 1:
            raise CliffordError("element is not homogeneous")
        return par.pop()

    def reverse(self):
        out = {}
        for k, v in self.terms.items():
            r = bin(k).count("1")
            out[k] = -v if (r * (r - 1) // 2) & 1 else v
        return CliffordElement(self.n, self.M, out)

    def vector_part(self):
        return [self.terms.get(1 << i, CycNum.zero(self.M)) for i in range(self.n)]

    def __repr__(self):
        parts = []
        for k in sorted(self.terms):
            idx = [str(i + 1) for i in range(self.n) if k >> i & 1]
            parts.append(f"{self.terms[k]}*e{''.join(idx)}" if idx else f"{self.terms[k]}")
        return "Cl(" + " + ".join(parts or ["0"]) + ")"


def geometric_product(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    return a * b


class SpinElement:
    """Product of unit vectors, kept together with its factorization."""

    __slots__ = ("value", "factors", "sign")

    def __init__(self, factors, n=None, M=None, sign=1, check=True):
        self.factors = [tuple(f) for f in factors]
        self.sign = sign
        if not self.factors:
            if n is None or M is None:
                raise CliffordError("empty factorization needs n and M")
            val = CliffordElement.scalar(n, M)
        else:
            val = None
            for f in self.factors:
                if check and linalg.dot(f, f) != 1:
                    raise CliffordError("factor is not a unit vector")
                v = CliffordElement.vector(list(f))
                val = v if val is None else val * v
        self.value = val * sign if sign != 1 else val

    @property
    def n(self):
        return self.value.n

    @property
    def M(self):
        return self.value.M

    @property
    def parity(self):
        return len(self.factors) & 1

    @classmethod
    def identity(cls, n, M):
        return cls([], n, M)

    def __mul__(self, other):
        return SpinElement(self.factors + other.factors, self.n, self.M, self.sign * other.sign, check=False)

    def __neg__(self):
        return SpinElement(self.factors, self.n, self.M, -self.sign, check=False)

    def inverse(self):
        # unit vectors square to 1
        return SpinElement(list(reversed(self.factors)), self.n, self.M, self.sign, check=False)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = SpinElement.identity(self.n, self.M)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, SpinElement) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def embed(self, n2):
        """Same element inside Cl(n2), n2 >= n."""
        M = self.M
        z = CycNum.zero(M)
        facs = [tuple(f) + (z,) * (n2 - self.n) for f in self.factors]
        return SpinElement(facs, n2, M, self.sign, check=False)

    def to_json(self):
        return {"sign": self.sign, "factors": [[x.to_json() for x in f] for f in self.factors]}

    @classmethod
    def from_json(cls, obj, n, M):
        facs = [[CycNum.from_json(x) for x in f] for f in obj["factors"]]
        return cls(facs, n, M, obj.get("sign", 1))

    def __repr__(self):
        return f"SpinElement({self.value})"


def unit_basis(n, M, i):
    v = [CycNum.zero(M)] * n
    v[i - 1] = CycNum.one(M)
    return tuple(v)


def pi_action(g: SpinElement) -> CycMatrix:
    """Matrix of v -> (-1)^deg(g) g v g^-1 on E."""
    n, M = g.n, g.M
    ginv = g.inverse().value
    sgn = -1 if g.parity else 1
    cols = []
    for j in range(1, n + 1):
        w = g.value * CliffordElement.basis(n, M, j) * ginv
        if any(bin(k).count("1") != 1 for k in w.terms):
            raise CliffordError("conjugate of a vector left E")
        cols.append([x * sgn for x in w.vector_part()])
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    return CycMatrix.from_rows(rows, M)


def reflection_matrix(u) -> CycMatrix:
    """v -> v - 2 (u.v) u for a unit vector u."""
    n = len(u)
    M = u[0].M
    rows = [[(CycNum.one(M) if i == j else CycNum.zero(M)) - u[i] * u[j] * 2 for j in range(n)] for i in range(n)]
    return CycMatrix.from_rows(rows, M)


def rotation_matrix(n, M, i, j, k, m) -> CycMatrix:
    """Rotation by 2 pi k/m in the (i, j) plane, e_i -> cos e_i + sin e_j."""
    c, s = _cs(M, k, m)
    rows = [[CycNum.one(M) if a == b else CycNum.zero(M) for b in range(n)] for a in range(n)]
    i, j = i - 1, j - 1
    rows[i][i] = c
    rows[j][j] = c
    rows[j][i] = s
    rows[i][j] = -s
    return CycMatrix.from_rows(rows, M)


def _cs(M, k, m):
    """cos and sin of 2 pi k/m in Q(zeta_M); needs m | M."""
    if M % m or M % 4:
        raise CliffordError(f"angle 2pi*{k}/{m} not available for modulus {M}")
    z = root_of_unity(M, k * (M // m))
    zc = z.conj()
    return (z + zc) / 2, (z - zc) / (imag_unit(M) * 2)


def rotor(n, M, plane, k, m) -> SpinElement:
    """Lift of the rotation by 2 pi k/m in plane (i, j): cos(pi k/m) + sin(pi k/m) e_j e_i.

    The e_j e_i ordering makes pi(rotor) the rotation e_i -> cos e_i + sin e_j.
    Needs 2m | M (and 4 | M).
    """
    i, j = plane
    if not 1 <= i < j <= n:
        raise CliffordError("plane must satisfy 1 <= i < j <= n")
    if M % (2 * m):
        raise CliffordError(f"rotor of order {m} needs 2*{m} | M, got M = {M}")
    c, s = cos_sin_half(m, k, M)
    z = CycNum.zero(M)
    u1 = [z] * n
    u1[i - 1] = CycNum.one(M)
    u2 = [z] * n
    u2[i - 1] = c
    u2[j - 1] = -s
    return SpinElement([u1, u2], n, M)


def z_B(n, M, B) -> SpinElement:
    B = list(B)
    if len(B) % 2 or not B:
        raise CliffordError("z_B needs an even, nonempty set B")
    return SpinElement([unit_basis(n, M, b) for b in B], n, M)


def kappa(g: SpinElement, A) -> int:
    """det of pi(g) restricted to the coordinate block A (1-based indices)."""
    P = pi_action(g)
    n = g.n
    A = sorted(A)
    B = [i for i in range(1, n + 1) if i not in A]
    rows = P.rows()
    for a in A:
        for b in B:
            if not rows[a - 1][b - 1].is_zero() or not rows[b - 1][a - 1].is_zero():
                raise SplitNotPreserved("pi(g) mixes the two blocks")
    d = linalg.det([[rows[a - 1][c - 1] for c in A] for a in A])
    if d == 1:
        return 1
    if d == -1:
        return -1
    raise CliffordError("block determinant is not +-1")


class SpinRep:
    """Gamma matrices for n = 2k+1 built by the tensor recursion."""

    def __init__(self, n, M):
        if n % 2 == 0 or n < 1:
            raise CliffordError("spin representation needs odd n")
        if M % 4:
            raise CliffordError("spin representation needs i in the field")
        self.n = n
        self.M = M
        self.k = (n - 1) // 2
        i = imag_unit(M)
        one, zero = CycNum.one(M), CycNum.zero(M)
        s1 = CycMatrix.from_rows([[zero, one], [one, zero]], M)
        s2 = CycMatrix.from_rows([[zero, -i], [i, zero]], M)
        s3 = CycMatrix.from_rows([[one, zero], [zero, -one]], M)
        gam = [CycMatrix.identity(M, 1)]
        for _ in range(self.k):
            size = gam[0].shape[0]
            I = CycMatrix.identity(M, size)
            gam = [_kron(g, s1) for g in gam] + [_kron(I, s2), _kron(I, s3)]
        self.gamma = gam
        self.dim = 2 ** self.k
        self.check()

    def check(self):
        I2 = CycMatrix.identity(self.M, self.dim).scale(2)
        Z = CycMatrix.zeros(self.M, self.dim, self.dim)
        for a in range(self.n):
            for b in range(self.n):
                ac = self.gamma[a] @ self.gamma[b] + self.gamma[b] @ self.gamma[a]
                if ac != (I2 if a == b else Z):
                    raise CliffordError("gamma relations fail")

    def monomial(self, mask):
        out = CycMatrix.identity(self.M, self.dim)
        for i in range(self.n):
            if mask >> i & 1:
                out = out @ self.gamma[i]
        return out

    def matrix(self, x) -> CycMatrix:
        if isinstance(x, SpinElement):
            # product of the vector images is cheaper than expanding monomials
            out = CycMatrix.identity(self.M, self.dim)
            for f in x.factors:
                out = out @ self.vector(f)
            return out.scale(x.sign) if x.sign != 1 else out
        out = CycMatrix.zeros(self.M, self.dim, self.dim)
        for mask, c in x.terms.items():
            out = out + self.monomial(mask).scale(c)
        return out

    def vector(self, v) -> CycMatrix:
        out = CycMatrix.zeros(self.M, self.dim, self.dim)
        for i, c in enumerate(v):
            if not c.is_zero():
                out = out + self.gamma[i].scale(c)
        return out


@lru_cache(maxsize=None)
def spin_rep(n, M) -> SpinRep:
    return SpinRep(n, M)


def _kron(A: CycMatrix, B: CycMatrix) -> CycMatrix:
    ra, ca = A.shape
    rb, cb = B.shape
    Ar, Br = A.rows(), B.rows()
    rows = [[Ar[i // rb][j // cb] * Br[i % rb][j % cb] for j in range(ca * cb)] for i in range(ra * rb)]
    return CycMatrix.from_rows(rows, A.M)


def spin_trace(g, rep: SpinRep | None = None) -> CycNum:
    """Trace of g on S, normalised by trace(1) = 2^k."""
    if isinstance(g, SpinElement):
        rep = rep or spin_rep(g.n, g.M)
        return rep.matrix(g).trace()
    rep = rep or spin_rep(g.n, g.M)
    return rep.matrix(g).trace()


def spin_trace_scalar(g) -> CycNum:
    """Second route for even elements: trace of gamma_S vanishes unless S is empty
    or full, and the full monomial is odd for odd n, so tr = 2^k * scalar part."""
    val = g.value if isinstance(g, SpinElement) else g
    if val.parity() != 0:
        raise CliffordError("scalar-part route needs an even element")
    return val.scalar_part() * (2 ** ((val.n - 1) // 2))


class LiftUnavailable(CliffordError):
    pass


def lift_orthogonal(A: CycMatrix) -> SpinElement:
    """A Pin lift of an orthogonal matrix, by Cartan-Dieudonne reflections.

    Each step sends B e_i back to +-e_i with a reflection about B e_i -+ e_i; the
    normalising square root must exist in the field, else LiftUnavailable.
    """
    from .cyclotomic import sqrt_exact
    n, M = A.shape[0], A.M
    B = [list(r) for r in A.rows()]
    facs = []

    def refl(u):
        # B <- r_u B, r_u = I - 2 u u^T (u unit)
        nonlocal B
        cols = [[B[i][j] for i in range(n)] for j in range(n)]
        new = []
        for c in cols:
            t = linalg.dot(u, c) * 2
            new.append([x - t * y for x, y in zip(c, u)])
        B = [[new[j][i] for j in range(n)] for i in range(n)]
        facs.append(tuple(u))

    for i in range(n):
        col = [B[k][i] for k in range(n)]
        if all((col[k] - (1 if k == i else 0)).is_zero() for k in range(n)):
            continue
        done = False
        for s in (-1, 1):
            w = [col[k] + (s if k == i else 0) for k in range(n)]
            q = linalg.dot(w, w)
            r = sqrt_exact(q)
            if r is None or r.is_zero():
                continue
            refl([x / r for x in w])
            if s == 1:
                refl(list(unit_basis(n, M, i + 1)))
            done = True
            break
        if not done:
            raise LiftUnavailable("normalising square root not in the field")
    # A = r_{u1} ... r_{uk}, hence the lift u1 ... uk
    g = SpinElement(facs, n, M) if facs else SpinElement.identity(n, M)
    if pi_action(g) != A:
        raise LiftUnavailable("reflection factorisation did not reproduce the matrix")
    return g
