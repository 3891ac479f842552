"""Exact arithmetic in the cyclotomic field Q(zeta_M), 4 | M.

Elements are stored as an integer numerator vector in the power basis
1, z, ..., z^(D-1) (D = deg Phi_M) together with one positive denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np


class CyclotomicError(ValueError):
    pass


class DenominatorDividesP(CyclotomicError):
    pass


# ---------------------------------------------------------------------------
# polynomials with integer coefficients, lowest degree first

def _poly_divexact(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1]
        if c % lead:
            raise CyclotomicError("inexact polynomial division")
        c //= lead
        q[k] = c
        if c:
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    if any(a[: len(b) - 1]):
        raise CyclotomicError("nonzero remainder")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Phi_m as a coefficient tuple, by dividing x^m - 1 by Phi_d for d | m, d < m."""
    if m < 1:
        raise CyclotomicError("modulus must be positive")
    p = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            p = _poly_divexact(p, cyclotomic_poly(d))
    return tuple(p)


class _Field:
    """Per-modulus tables."""

    def __init__(self, M):
        self.M = M
        self.phi = cyclotomic_poly(M)
        D = len(self.phi) - 1
        self.D = D
        # pow_table[k] = z^k in the power basis, k = 0..M-1
        table = []
        vec = [0] * D
        vec[0] = 1
        for k in range(M):
            table.append(tuple(vec))
            # multiply by z
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(D):
                    vec[i] -= top * self.phi[i]
        self.pow_table = table
        self.maxpow = max(abs(c) for row in table for c in row)
        T = np.zeros((D, D, D), dtype=np.int64)
        for a in range(D):
            for b in range(D):
                T[a, b, :] = table[(a + b) % M]
        self.T = T
        self.units = [a for a in range(1, M) if gcd(a, M) == 1]

    def reduce(self, poly):
        """Reduce an integer polynomial (any length) into the power basis."""
        D = self.D
        out = list(poly[:D]) + [0] * max(0, D - len(poly))
        M = self.M
        for k in range(D, len(poly)):
            c = poly[k]
            if c:
                row = self.pow_table[k % M]
                for i in range(D):
                    if row[i]:
                        out[i] += c * row[i]
        return out


@lru_cache(maxsize=None)
def field(M: int) -> _Field:
    if M < 4 or M % 4:
        raise CyclotomicError(f"modulus {M} is not a positive multiple of 4")
    return _Field(M)


def _normalize(num, den):
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if g == 1:
            break
        g = gcd(g, c)
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


class CycNum:
    """An element of Q(zeta_M)."""

    __slots__ = ("M", "num", "den", "_hash")

    def __init__(self, M: int, coeffs=(), *, _raw=None):
        F = field(M)
        self.M = M
        self._hash = None
        if _raw is not None:
            self.num, self.den = _raw
            return
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        poly = [int(c * den) for c in coeffs]
        self.num, self.den = _normalize(F.reduce(poly), den)

    # construction helpers
    @classmethod
    def _make(cls, M, num, den):
        return cls(M, _raw=_normalize(num, den))

    @classmethod
    def from_int(cls, M, k):
        F = field(M)
        return cls(M, _raw=_normalize([k] + [0] * (F.D - 1), 1))

    @classmethod
    def zero(cls, M):
        return cls.from_int(M, 0)

    @classmethod
    def one(cls, M):
        return cls.from_int(M, 1)

    @classmethod
    def from_rational(cls, M, q):
        q = Fraction(q)
        F = field(M)
        return cls(M, _raw=_normalize([q.numerator] + [0] * (F.D - 1), q.denominator))

    @property
    def coeffs(self):
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def degree(self):
        return len(self.num)

    def is_zero(self):
        return not any(self.num)

    def is_rational(self):
        return not any(self.num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise CyclotomicError("not a rational number")
        return Fraction(self.num[0], self.den)

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.M != self.M:
                raise CyclotomicError(f"modulus mismatch {self.M} vs {other.M}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rational(self.M, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self.den, o.den
        if d1 == d2:
            return CycNum._make(self.M, [a + b for a, b in zip(self.num, o.num)], d1)
        return CycNum._make(self.M, [a * d2 + b * d1 for a, b in zip(self.num, o.num)], d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.M, _raw=(tuple(-a for a in self.num), self.den))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.num, o.num
        if not any(a) or not any(b):
            return CycNum.zero(self.M)
        if not any(b[1:]):
            return CycNum._make(self.M, [x * b[0] for x in a], self.den * o.den)
        if not any(a[1:]):
            return CycNum._make(self.M, [x * a[0] for x in b], self.den * o.den)
        D = len(a)
        prod = [0] * (2 * D - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycNum._make(self.M, field(self.M).reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def galois(self, a: int) -> "CycNum":
        """The automorphism z -> z^a (a coprime to M)."""
        F = field(self.M)
        if gcd(a, self.M) != 1:
            raise CyclotomicError("galois exponent must be a unit mod M")
        out = [0] * F.D
        for k, c in enumerate(self.num):
            if c:
                row = F.pow_table[(k * a) % self.M]
                for i in range(F.D):
                    out[i] += c * row[i]
        return CycNum._make(self.M, out, self.den)

    def conj(self) -> "CycNum":
        return self.galois(self.M - 1)

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        prod = CycNum.one(self.M)
        for a in field(self.M).units:
            prod = prod * self.galois(a)
        return prod.rational()

    def inv(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycNum.from_rational(self.M, 1 / self.rational())
        other = CycNum.one(self.M)
        for a in field(self.M).units[1:]:
            other = other * self.galois(a)
        n = (self * other).rational()
        return other * (1 / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = CycNum.one(self.M)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(self.M, other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.M == other.M and self.den == other.den and self.num == other.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.M, self.num, self.den))
        return self._hash

    def embed(self, M2: int) -> "CycNum":
        """Image under Q(zeta_M) -> Q(zeta_M2), zeta_M -> zeta_M2^(M2/M)."""
        if M2 % self.M:
            raise CyclotomicError(f"cannot embed modulus {self.M} into {M2}")
        F2 = field(M2)
        s = M2 // self.M
        out = [0] * F2.D
        for k, c in enumerate(self.num):
            if c:
                row = F2.pow_table[(k * s) % M2]
                for i in range(F2.D):
                    out[i] += c * row[i]
        return CycNum._make(M2, out, self.den)

    def to_complex(self) -> complex:
        import cmath
        z = cmath.exp(2j * cmath.pi / self.M)
        return sum(c * z ** k for k, c in enumerate(self.num)) / self.den

    def to_json(self):
        return {"M": self.M, "coeffs": [[c.numerator, c.denominator] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, int):
            raise CyclotomicError("bare integers need a modulus")
        M = int(obj["M"])
        coeffs = []
        for c in obj["coeffs"]:
            if isinstance(c, (list, tuple)):
                coeffs.append(Fraction(int(c[0]), int(c[1])))
            else:
                coeffs.append(Fraction(c))
        return cls(M, coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        return f"CycNum<{self.M}>(" + (" + ".join(terms) or "0") + ")"


def root_of_unity(M: int, k: int) -> CycNum:
    F = field(M)
    return CycNum(M, _raw=(F.pow_table[k % M], 1))


def imag_unit(M: int) -> CycNum:
    return root_of_unity(M, M // 4)


def cos_sin_half(M: int, k: int, modulus: int | None = None):
    """Exact (cos(pi k/M), sin(pi k/M)) in Q(zeta_N), N = lcm(2M, 4) or `modulus`."""
    base = 2 * M * 4 // gcd(2 * M, 4)
    N = base if modulus is None else modulus
    if N % base:
        raise CyclotomicError(f"modulus {N} does not contain zeta_{2 * M} and i")
    z = root_of_unity(N, k * (N // (2 * M)))
    zc = z.conj()
    c = (z + zc) * Fraction(1, 2)
    s = (z - zc) / (imag_unit(N) * 2)
    return c, s


def sqrt2(M: int) -> CycNum:
    if M % 8:
        raise CyclotomicError("sqrt(2) needs 8 | M")
    return root_of_unity(M, M // 8) + root_of_unity(M, -(M // 8))


def _legendre(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def sqrt_rational(M: int, q) -> CycNum | None:
    """A square root of the rational q inside Q(zeta_M), or None if there is none.

    Uses i, sqrt(2) and quadratic Gauss sums for the odd primes dividing M.
    """
    q = Fraction(q)
    if q == 0:
        return CycNum.zero(M)
    out = CycNum.one(M)
    if q < 0:
        out = imag_unit(M)
        q = -q
    # q = a/b -> sqrt(a*b)/b
    n = q.numerator * q.denominator
    out = out * Fraction(1, q.denominator)
    for p, e in _factor(n).items():
        if e // 2:
            out = out * (p ** (e // 2))
        if e % 2 == 0:
            continue
        if p == 2:
            if M % 8:
                return None
            out = out * sqrt2(M)
            continue
        if M % p:
            return None
        g = CycNum.zero(M)
        for a in range(1, p):
            g = g + root_of_unity(M, (M // p) * a) * _legendre(a, p)
        # g^2 = (-1)^((p-1)/2) p
        if p % 4 == 3:
            g = g * imag_unit(M) * -1
        out = out * g
    return out


def sqrt_exact(x: CycNum) -> CycNum | None:
    """Best-effort square root; only rational radicands are handled."""
    if x.is_rational():
        r = sqrt_rational(x.M, x.rational())
        if r is not None and r * r == x:
            return r
        return None
    return None


# ---------------------------------------------------------------------------
# prime fields

@dataclass(frozen=True)
class PrimeContext:
    p: int
    M: int
    root: int  # element of exact multiplicative order M in F_p

    def __post_init__(self):
        if (self.p - 1) % self.M:
            raise CyclotomicError(f"p = {self.p} is not 1 mod {self.M}")
        if pow(self.root, self.M, self.p) != 1:
            raise CyclotomicError("root does not have order dividing M")
        for q in _factor(self.M):
            if pow(self.root, self.M // q, self.p) == 1:
                raise CyclotomicError("root order is a proper divisor of M")

    @classmethod
    def make(cls, p: int, M: int) -> "PrimeContext":
        g = primitive_root(p)
        return cls(p, M, pow(g, (p - 1) // M, p))

    def powers(self):
        return [pow(self.root, k, self.p) for k in range(self.M)]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primitive_root(p: int) -> int:
    qs = list(_factor(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    if p == 2:
        return 1
    raise CyclotomicError(f"no primitive root mod {p}")


def reduce_mod(x: CycNum, ctx: PrimeContext) -> int:
    p = ctx.p
    if x.M != ctx.M:
        if ctx.M % x.M:
            raise CyclotomicError("prime context modulus does not contain the element's field")
        x = x.embed(ctx.M)
    if x.den % p == 0:
        raise DenominatorDividesP(f"denominator {x.den} divisible by {p}")
    w = ctx.root
    acc = 0
    wk = 1
    for c in x.num:
        acc = (acc + c * wk) % p
        wk = wk * w % p
    return acc * pow(x.den, -1, p) % p


# ---------------------------------------------------------------------------
# exact matrices backed by integer arrays

_SAFE = 1 << 62


def _gcd_array(a) -> int:
    if a.dtype == object:
        g = 0
        for v in a.flat:
            g = gcd(g, int(v))
            if g == 1:
                break
        return g
    if a.size == 0:
        return 0
    return int(np.gcd.reduce(np.abs(a).ravel()))


def _maxabs(a) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.flat)
    return int(np.abs(a).max())


class CycMatrix:
    """Exact r x c matrix over Q(zeta_M): integer array (r, c, D) / den."""

    __slots__ = ("M", "num", "den", "_key")

    def __init__(self, M, num, den=1, normalize=True):
        self.M = M
        self._key = None
        if normalize:
            num, den = _norm_array(num, den)
        self.num = num
        self.den = den

    @property
    def shape(self):
        return self.num.shape[:2]

    @classmethod
    def from_rows(cls, rows, M=None):
        rows = [list(r) for r in rows]
        if M is None:
            for r in rows:
                for x in r:
                    if isinstance(x, CycNum):
                        M = x.M
                        break
                if M is not None:
                    break
        if M is None:
            raise CyclotomicError("cannot infer modulus")
        D = field(M).D
        vals = [[x if isinstance(x, CycNum) else CycNum.from_rational(M, x) for x in r] for r in rows]
        den = 1
        for r in vals:
            for x in r:
                if x.M != M:
                    raise CyclotomicError("modulus mismatch in matrix")
                den = den * x.den // gcd(den, x.den)
        data = [[[c * (den // x.den) for c in x.num] for x in r] for r in vals]
        big = max((abs(c) for r in data for e in r for c in e), default=0)
        arr = np.array(data, dtype=object if big >= (1 << 40) else np.int64).reshape(len(rows), len(rows[0]) if rows else 0, D)
        return cls(M, arr, den)

    @classmethod
    def identity(cls, M, n):
        D = field(M).D
        a = np.zeros((n, n, D), dtype=np.int64)
        for i in range(n):
            a[i, i, 0] = 1
        return cls(M, a, 1, normalize=False)

    @classmethod
    def zeros(cls, M, r, c):
        return cls(M, np.zeros((r, c, field(M).D), dtype=np.int64), 1, normalize=False)

    def entry(self, i, j) -> CycNum:
        return CycNum._make(self.M, [int(v) for v in self.num[i, j]], self.den)

    def rows(self):
        r, c = self.shape
        return [[self.entry(i, j) for j in range(c)] for i in range(r)]

    def key(self):
        if self._key is None:
            a = self.num
            if a.dtype == object:
                self._key = (self.den, tuple(int(v) for v in a.flat), a.shape)
            else:
                self._key = (self.den, a.tobytes(), a.shape)
        return self._key

    def __eq__(self, other):
        return isinstance(other, CycMatrix) and self.M == other.M and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        if self.M != other.M:
            raise CyclotomicError("modulus mismatch")
        num = _matmul_num(self.M, self.num, other.num)
        return CycMatrix(self.M, num, self.den * other.den)

    def __add__(self, other):
        if self.M != other.M:
            raise CyclotomicError("modulus mismatch")
        a, b = _promote(self.num, other.num, self.den, other.den)
        return CycMatrix(self.M, a * other.den + b * self.den, self.den * other.den)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "CycMatrix":
        if isinstance(c, CycNum):
            s = CycMatrix.from_rows([[c]], self.M)
            r, cc = self.shape
            num = np.einsum("ija,b,abc->ijc", self.num, s.num[0, 0], field(self.M).T.astype(self.num.dtype)) if self.num.dtype != object else _scale_obj(self.M, self.num, s.num[0, 0])
            return CycMatrix(self.M, num, self.den * s.den)
        c = Fraction(c)
        num = self.num * c.numerator if _maxabs(self.num) * abs(c.numerator) < _SAFE else self.num.astype(object) * c.numerator
        return CycMatrix(self.M, num, self.den * c.denominator)

    def add_scalar_identity(self, c: CycNum) -> "CycMatrix":
        n = self.shape[0]
        return self + CycMatrix.identity(self.M, n).scale(c)

    def transpose(self):
        return CycMatrix(self.M, self.num.transpose(1, 0, 2).copy(), self.den, normalize=False)

    def conj(self):
        rows = [[x.conj() for x in r] for r in self.rows()]
        return CycMatrix.from_rows(rows, self.M)

    def trace(self) -> CycNum:
        n = min(self.shape)
        tot = sum((self.num[i, i] for i in range(n)), np.zeros(field(self.M).D, dtype=self.num.dtype))
        return CycNum._make(self.M, [int(v) for v in tot], self.den)

    def is_identity(self):
        return self == CycMatrix.identity(self.M, self.shape[0])

    def embed(self, M2):
        if M2 == self.M:
            return self
        rows = [[x.embed(M2) for x in r] for r in self.rows()]
        return CycMatrix.from_rows(rows, M2)

    def block_diag(self, other):
        r1, c1 = self.shape
        r2, c2 = other.shape
        D = field(self.M).D
        den = self.den * other.den // gcd(self.den, other.den)
        out = np.zeros((r1 + r2, c1 + c2, D), dtype=object if self.num.dtype == object or other.num.dtype == object else np.int64)
        out[:r1, :c1] = self.num * (den // self.den)
        out[r1:, c1:] = other.num * (den // other.den)
        return CycMatrix(self.M, out, den)

    def reduce_mod(self, ctx: PrimeContext) -> np.ndarray:
        if ctx.M != self.M:
            return self.embed(ctx.M).reduce_mod(ctx)
        return reduce_array_mod(self.num, self.den, ctx)

    def __repr__(self):
        return f"CycMatrix<{self.M}>({self.rows()})"


def _promote(a, b, da, db):
    if a.dtype == object or b.dtype == object or (_maxabs(a) * db) >= _SAFE or (_maxabs(b) * da) >= _SAFE:
        return a.astype(object), b.astype(object)
    return a, b


def _norm_array(num, den):
    if den < 0:
        num, den = -num, -den
    g = gcd(_gcd_array(num), den)
    if g > 1:
        num = num // g
        den //= g
    if num.dtype == object and _maxabs(num) < (1 << 40):
        num = num.astype(np.int64)
    return num, den


def _matmul_num(M, a, b):
    F = field(M)
    k = a.shape[-2] if a.ndim >= 3 else 1
    bound = _maxabs(a) * _maxabs(b) * k * F.D * F.maxpow
    if a.dtype != object and b.dtype != object and bound < _SAFE:
        if a.ndim == 4:
            return np.einsum("fija,jkb,abc->fikc", a, b, F.T, optimize=True)
        return np.einsum("ija,jkb,abc->ikc", a, b, F.T, optimize=True)
    return _matmul_obj(M, a.astype(object), b.astype(object))


def _matmul_obj(M, a, b):
    F = field(M)
    if a.ndim == 4:
        return np.stack([_matmul_obj(M, x, b) for x in a])
    r, k, D = a.shape
    c = b.shape[1]
    out = np.zeros((r, c, D), dtype=object)
    for i in range(r):
        for j in range(c):
            prod = [0] * (2 * D - 1)
            for t in range(k):
                x = a[i, t]
                y = b[t, j]
                for u in range(D):
                    xu = int(x[u])
                    if xu:
                        for v in range(D):
                            yv = int(y[v])
                            if yv:
                                prod[u + v] += xu * yv
            out[i, j] = F.reduce(prod)
    return out


def _scale_obj(M, a, s):
    F = field(M)
    out = np.zeros(a.shape, dtype=object)
    r, c, D = a.shape
    for i in range(r):
        for j in range(c):
            prod = [0] * (2 * D - 1)
            for u in range(D):
                for v in range(D):
                    prod[u + v] += int(a[i, j, u]) * int(s[v])
            out[i, j] = F.reduce(prod)
    return out


def reduce_array_mod(num: np.ndarray, den: int, ctx: PrimeContext) -> np.ndarray:
    """Reduce integer coefficient arrays (..., D) / den into F_p."""
    p = ctx.p
    if den % p == 0:
        raise DenominatorDividesP(f"denominator {den} divisible by {p}")
    D = num.shape[-1]
    w = np.array([pow(ctx.root, k, p) for k in range(D)], dtype=object if p >= (1 << 31) else np.int64)
    a = num % p if num.dtype != object else np.vectorize(lambda v: int(v) % p, otypes=[object])(num)
    if a.dtype == object:
        a = a.astype(np.int64)
    acc = np.zeros(a.shape[:-1], dtype=np.int64)
    for k in range(D):
        acc = (acc + a[..., k] * int(w[k])) % p
    return acc * pow(den, -1, p) % p
