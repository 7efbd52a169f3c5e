"""Finite fields F_{p^D} and the towers F_p ⊂ F_q ⊂ F_{q^{d_i m}} ⊂ F_{q^{dm}}.

Elements are plain Python ints: the base-p encoding ``sum(c_j * p**j)`` of the
coefficient vector ``(c_0, ..., c_{D-1})`` relative to the field's defining
polynomial. Arithmetic goes through exp/log/Zech tables, which also back the
vectorised (numpy) evaluation used by the point counters. In the log domain
the zero element is represented by the sentinel ``field.zero_log == Q - 1``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SizeError, ValidationError

DEFAULT_ENUM_CAP = int(os.environ.get("PARTIALZETA_ENUM_CAP", 1 << 22))

_TABLE_BLOCK = 1 << 14


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = 3
    while r * r <= n:
        if n % r == 0:
            return False
        r += 2
    return True


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    r = 2
    while r * r <= n:
        while n % r == 0:
            out[r] = out.get(r, 0) + 1
            n //= r
        r += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def lcm_list(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


# -- dense polynomials over F_p (ascending coefficient lists) --------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a, f, p):
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for j, fj in enumerate(f):
            a[shift + j] = (a[shift + j] - c * fj) % p
        _trim(a)
    return a


def _poly_from_code(code: int, p: int, length: int):
    out = []
    for _ in range(length):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _code_from_poly(coeffs, p: int) -> int:
    code = 0
    for c in reversed(coeffs):
        code = code * p + c
    return code


@lru_cache(maxsize=None)
def monic_irreducibles(p: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All monic irreducible polynomials of degree k over F_p, in increasing encoding."""
    found = []
    for rest in range(p**k):
        f = _poly_from_code(rest, p, k) + [1]
        if _is_irreducible(f, p):
            found.append(tuple(f))
    return tuple(found)


def _is_irreducible(f, p) -> bool:
    k = len(f) - 1
    if k <= 1:
        return k == 1
    for j in range(1, k // 2 + 1):
        for h in monic_irreducibles(p, j):
            if not _poly_rem(list(f), list(h), p):
                return False
    return True


@lru_cache(maxsize=None)
def defining_polynomial(p: int, degree: int) -> tuple[int, ...]:
    """Least monic irreducible of the given degree (ordering: base-p encoding)."""
    for rest in range(p**degree):
        f = _poly_from_code(rest, p, degree) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """The field F_{p^degree} = F_p[x]/(f) with f from :func:`defining_polynomial`."""

    def __init__(self, p: int, degree: int):
        if not is_prime(p):
            raise ValidationError(f"p={p} is not prime")
        self.p = p
        self.degree = degree
        self.order = p**degree
        self.group_order = self.order - 1
        self.zero_log = self.group_order
        self.modulus = defining_polynomial(p, degree)
        self.generator = self._find_generator()
        self._build_tables()

    # -- slow digit-level arithmetic, used only while building tables --

    def _mulmod(self, a, b):
        p = self.p
        prod = [0] * (len(a) + len(b) - 1) if a and b else []
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return _poly_rem(prod, list(self.modulus), p)

    def _powmod(self, a, e):
        result = [1]
        base = list(a)
        while e:
            if e & 1:
                result = self._mulmod(result, base)
            base = self._mulmod(base, base)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        n = self.group_order
        primes = list(factorize(n)) if n > 1 else []
        for code in range(1, self.order):
            a = _poly_from_code(code, self.p, self.degree)
            if all(self._powmod(a, n // r) != [1] for r in primes):
                return code
        raise AssertionError("no primitive element")  # pragma: no cover

    def _mult_matrix(self, code):
        """Row j = digits of x^j * element; digits_out = digits_in @ M (mod p)."""
        D, p = self.degree, self.p
        a = _poly_from_code(code, p, D)
        rows = []
        for j in range(D):
            r = self._mulmod([0] * j + [1], a)
            rows.append(r + [0] * (D - len(r)))
        return np.array(rows, dtype=np.float64)

    def _build_tables(self):
        p, D, N1 = self.p, self.degree, self.group_order
        # absolute traces of the basis x^j
        tvec = []
        for j in range(D):
            xj = [0] * j + [1]
            acc = [0] * D
            for i in range(D):
                t = self._powmod(xj, p**i)
                for k, c in enumerate(t):
                    acc[k] = (acc[k] + c) % p
            assert all(c == 0 for c in acc[1:])
            tvec.append(acc[0])
        tvec = np.array(tvec, dtype=np.float64)
        powers = p ** np.arange(D, dtype=np.int64)

        block = 1
        while block < min(N1, _TABLE_BLOCK):
            block *= 2
        base = np.zeros((1, D), dtype=np.float64)
        base[0, 0] = 1.0
        step = self._mult_matrix(self.generator)
        while base.shape[0] < block:
            base = np.vstack([base, np.mod(base @ step, p)])
            step = np.mod(step @ step, p)

        exp = np.empty(self.order, dtype=np.int64)
        trace = np.empty(self.order, dtype=np.int64)
        shift = np.eye(D, dtype=np.float64)
        for start in range(0, N1, block):
            digits = np.mod(base @ shift, p)[: N1 - start]
            exp[start:start + len(digits)] = digits.astype(np.int64) @ powers
            trace[start:start + len(digits)] = np.mod(digits @ tvec, p).astype(np.int64)
            shift = np.mod(shift @ step, p)
        exp[N1] = 0
        trace[N1] = 0

        log = np.empty(self.order, dtype=np.int64)
        log[exp[:N1]] = np.arange(N1, dtype=np.int64)
        log[0] = self.zero_log
        if not np.array_equal(log[exp[:N1]], np.arange(N1)):  # pragma: no cover
            raise AssertionError("generator is not primitive")

        plus_one = exp[:N1].copy()
        low = plus_one % p
        plus_one += (low + 1) % p - low
        zech = log[plus_one]

        self.exp_table = exp
        self.log_table = log
        self.trace_table = trace
        self.zech_table = zech
        self.basis_traces = tuple(int(t) for t in tvec)

    # -- scalar arithmetic on encoded ints --

    def digits(self, x: int) -> list[int]:
        return _poly_from_code(x, self.p, self.degree)

    def from_digits(self, coeffs) -> int:
        return _code_from_poly([c % self.p for c in coeffs], self.p)

    def log(self, x: int) -> int:
        if x == 0:
            raise ValidationError("discrete log of zero")
        return int(self.log_table[x])

    def exp(self, k: int) -> int:
        return int(self.exp_table[k % self.group_order])

    def from_int(self, c: int) -> int:
        return c % self.p

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        if x == 0:
            return y
        if y == 0:
            return x
        lx, ly = int(self.log_table[x]), int(self.log_table[y])
        z = int(self.zech_table[(ly - lx) % self.group_order])
        if z == self.zero_log:
            return 0
        return int(self.exp_table[(lx + z) % self.group_order])

    def neg(self, x: int) -> int:
        if x == 0 or self.p == 2:
            return x
        return int(self.exp_table[(int(self.log_table[x]) + self.group_order // 2) % self.group_order])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp_table[(int(self.log_table[x]) + int(self.log_table[y])) % self.group_order])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return int(self.exp_table[(-int(self.log_table[x])) % self.group_order])

    def pow(self, x: int, e: int) -> int:
        if e == 0:
            return 1
        if x == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return int(self.exp_table[(int(self.log_table[x]) * e) % self.group_order])

    def frobenius(self, x: int, k: int = 1) -> int:
        return self.pow(x, self.p**k)

    def trace(self, x: int) -> int:
        """Absolute trace to F_p, as an int in [0, p)."""
        return int(self.trace_table[self.log_table[x]])

    def elements(self):
        return range(self.order)

    # -- vectorised log-domain arithmetic (int64 arrays, zero = zero_log) --

    def lmul(self, a, b):
        z = self.zero_log
        return np.where((a == z) | (b == z), z, (a + b) % self.group_order)

    def ladd(self, a, b):
        z, n = self.zero_log, self.group_order
        s = self.zech_table[(b - a) % n] if n > 0 else np.full(np.shape(a), z)
        r = np.where(s == z, z, (a + s) % max(n, 1))
        return np.where(a == z, b, np.where(b == z, a, r))

    def lpow(self, a, e: int):
        if e == 0:
            return np.zeros_like(a)
        z = self.zero_log
        return np.where(a == z, z, (a * e) % max(self.group_order, 1))

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"


@lru_cache(maxsize=16)
def galois_field(p: int, degree: int) -> GF:
    return GF(p, degree)


@dataclass(frozen=True)
class TowerSpec:
    """Per-variable extension degrees over F_q, q = p^a, at ground level m."""

    p: int
    a: int
    d_list: tuple
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "d_list", tuple(int(v) for v in self.d_list))
        if not is_prime(self.p):
            raise ValidationError(f"p={self.p} is not prime")
        if self.a < 1 or self.m < 1:
            raise ValidationError("a and m must be >= 1")
        if not self.d_list or any(v < 1 for v in self.d_list):
            raise ValidationError("d_list must be a non-empty list of integers >= 1")

    @property
    def q(self) -> int:
        return self.p**self.a

    @property
    def n(self) -> int:
        return len(self.d_list)

    @property
    def d(self) -> int:
        return lcm_list(self.d_list)

    @property
    def degree(self) -> int:
        """Degree of the ambient field F_{q^{dm}} over F_p."""
        return self.a * self.d * self.m

    @property
    def ambient_size(self) -> int:
        return self.p**self.degree

    def q_i(self, i: int) -> int:
        return self.q ** self.d_list[i]

    def at_level(self, m: int) -> "TowerSpec":
        return TowerSpec(self.p, self.a, self.d_list, m)


class FieldTower:
    """A level-m tower: ambient field plus the canonical subfields F_{q_i^m}.

    Coefficients of polynomial systems live in the level-1 ambient field
    F_{q^d}; :meth:`embed` carries them into the level-m ambient field.
    """

    def __init__(self, spec: TowerSpec, field: GF, base: GF):
        self.spec = spec
        self.field = field
        self.base = base
        self.indices = tuple(
            field.group_order // (spec.q_i(i) ** spec.m - 1) for i in range(spec.n)
        )
        self._embed_log = self._find_embedding() if spec.m > 1 else 1

    @property
    def generator(self) -> int:
        return self.field.generator

    def subfield_size(self, i: int) -> int:
        return self.spec.q_i(i) ** self.spec.m

    def subfield_elements(self, i: int):
        """0 followed by g^{e_i k}, k = 0, 1, ...: exactly q_i^m elements."""
        if not 0 <= i < self.spec.n:
            raise ValidationError(f"variable index {i} out of range")
        yield 0
        e = self.indices[i]
        for k in range(self.subfield_size(i) - 1):
            yield int(self.field.exp_table[e * k])

    def is_in_subfield(self, x: int, k: int) -> bool:
        """True iff x^{p^k} = x."""
        if self.field.degree % k:
            raise ValidationError(f"{k} does not divide the ambient degree {self.field.degree}")
        return self.field.frobenius(x, k) == x

    def trace_to_base(self, x: int, from_degree: int, to_degree: int) -> int:
        if to_degree <= 0 or from_degree % to_degree or self.field.degree % from_degree:
            raise ValidationError(f"cannot trace from degree {from_degree} to {to_degree}")
        F = self.field
        acc = 0
        y = x
        for _ in range(from_degree // to_degree):
            acc = F.add(acc, y)
            y = F.frobenius(y, to_degree)
        return acc

    def discrete_log(self, x: int) -> int:
        if x == 0:
            raise ValidationError("discrete log of zero")
        return self.field.log(x)

    def _find_embedding(self) -> int:
        F, K = self.field, self.base
        e = F.group_order // K.group_order
        cand = np.concatenate(
            [[F.zero_log], (e * np.arange(K.group_order, dtype=np.int64))]
        )
        val = np.full(cand.shape, F.zero_log, dtype=np.int64)
        for c in reversed(K.modulus):
            val = F.lmul(val, cand)
            if c:
                val = F.ladd(val, np.full(cand.shape, F.log_table[c]))
        codes = F.exp_table[cand[val == F.zero_log]]
        beta = int(codes.min())
        image = 0
        power = 1
        for c in K.digits(K.generator):
            image = F.add(image, F.mul(c, power))
            power = F.mul(power, beta)
        return F.log(image)

    def embed(self, x: int) -> int:
        """Image of a level-1 element under the fixed embedding F_{q^d} -> F_{q^{dm}}."""
        if self.spec.m == 1 or x == 0:
            return x
        return self.field.exp(self._embed_log * self.base.log(x))

    def embed_log(self, x: int) -> int:
        """Log (level m) of embed(x); zero maps to the sentinel."""
        y = self.embed(x)
        return self.field.zero_log if y == 0 else int(self.field.log_table[y])

    def __repr__(self):
        return f"FieldTower({self.spec})"


def build_tower(spec: TowerSpec, enum_cap: int | None = None) -> FieldTower:
    cap = DEFAULT_ENUM_CAP if enum_cap is None else enum_cap
    if spec.ambient_size > cap:
        raise SizeError(
            f"ambient field of size {spec.p}^{spec.degree} exceeds the enumeration cap {cap}"
        )
    return _build_tower(spec)


@lru_cache(maxsize=64)
def _build_tower(spec: TowerSpec) -> FieldTower:
    field = galois_field(spec.p, spec.degree)
    base = galois_field(spec.p, spec.a * spec.d)
    return FieldTower(spec, field, base)
