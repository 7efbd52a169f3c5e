"""Exact arithmetic in Q(zeta_k) = Q[x]/Phi_k(x), plus cyclotomic polynomials."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def _divmod_int(a, b):
    """Exact division of integer polynomials (ascending lists), b monic."""
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return q, a[: len(b) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(k: int) -> tuple[int, ...]:
    """Phi_k over Z as ascending coefficients, by dividing x^k - 1 by Phi_j, j | k, j < k."""
    if k < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = [-1] + [0] * (k - 1) + [1]
    for j in range(1, k):
        if k % j == 0:
            num, rem = _divmod_int(num, cyclotomic_poly(j))
            assert not any(rem)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


def euler_phi(n: int) -> int:
    out, m, r = n, n, 2
    while r * r <= m:
        if m % r == 0:
            while m % r == 0:
                m //= r
            out -= out // r
        r += 1
    if m > 1:
        out -= out // m
    return out


def _reduce(coeffs, k):
    phi = cyclotomic_poly(k)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            for j in range(deg + 1):
                c[i - deg + j] -= t * phi[j]
    c = c[:deg] + [0] * max(0, deg - len(c))
    return tuple(c)


class CycloNumber:
    """An element of Q(zeta_k), stored reduced modulo Phi_k.

    Coordinates are Fractions (or ints) on the basis 1, z, ..., z^{phi(k)-1}.
    Supports field operations so that polynomial algorithms can run over it.
    """

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs=(), reduced: bool = False):
        self.k = k
        if not reduced:
            coeffs = _reduce([c if isinstance(c, Fraction) else Fraction(c) for c in coeffs], k)
        self.coeffs = tuple(coeffs)

    @classmethod
    def zeta_power(cls, k: int, i: int) -> "CycloNumber":
        c = [0] * k
        c[i % k] = 1
        return cls(k, c)

    @classmethod
    def from_rational(cls, k: int, r) -> "CycloNumber":
        return cls(k, [r])

    @classmethod
    def from_exponent_counts(cls, k: int, counts) -> "CycloNumber":
        """sum_t counts[t] * zeta^t."""
        c = [0] * k
        for t, v in enumerate(counts):
            c[t % k] += v
        return cls(k, c)

    def _coerce(self, other):
        if isinstance(other, CycloNumber):
            if other.k != self.k:
                raise ValueError("mismatched cyclotomic conductors")
            return other
        return CycloNumber(self.k, [other])

    def __add__(self, other):
        o = self._coerce(other)
        return CycloNumber(self.k, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)), True)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.k, tuple(-a for a in self.coeffs), True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, CycloNumber):
            return CycloNumber(self.k, tuple(a * other for a in self.coeffs), True)
        o = self._coerce(other)
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycloNumber(self.k, _reduce(prod, self.k), True)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if not self:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        # extended Euclid in Q[x]: s*self + t*Phi_k = 1
        r0 = [Fraction(c) for c in cyclotomic_poly(self.k)]
        r1 = _strip(list(self.coeffs))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        c = r1[0]
        return CycloNumber(self.k, [x / c for x in s1])

    def __truediv__(self, other):
        if not isinstance(other, CycloNumber):
            return CycloNumber(self.k, tuple(a / Fraction(other) for a in self.coeffs), True)
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, CycloNumber):
            return self.k == other.k and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _reduce([Fraction(other)], self.k)
        return NotImplemented

    def __hash__(self):
        return hash((self.k, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integer(self) -> bool:
        """True iff the element is a rational integer."""
        return self.is_rational() and Fraction(self.coeffs[0]).denominator == 1

    def is_algebraic_integer_coords(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coeffs)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.coeffs[0])

    def conjugate(self, t: int) -> "CycloNumber":
        """Image under the automorphism zeta -> zeta^t (gcd(t, k) = 1)."""
        c = [Fraction(0)] * self.k
        for i, a in enumerate(self.coeffs):
            c[i * t % self.k] += a
        return CycloNumber(self.k, c)

    def integer_coords(self) -> list[int]:
        if not self.is_algebraic_integer_coords():
            raise ValueError("coordinates are not integral")
        return [int(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return f"CycloNumber({self.k}: {' + '.join(terms) or '0'})"


# alias used where elements are known to be cyclotomic integers
CycloInt = CycloNumber


def _strip(a):
    while len(a) > 1 and not a[-1]:
        a.pop()
    return a


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _strip(out)


def _psub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _strip([x - y for x, y in zip(a, b)])


def _pdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    r = _strip(a[: len(b) - 1] or [Fraction(0)])
    return _strip(q), r
