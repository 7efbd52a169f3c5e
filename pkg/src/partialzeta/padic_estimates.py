"""Digit sums, p-weights, divisibility bounds, and p-adic valuations.

Two independent valuation routes exist for elements of Z[zeta_p]:

* :func:`pi_adic_valuation` divides exactly by pi = 1 - zeta_p;
* :class:`PadicElt` works in (W/p^K)[y]/Phi_p(y), W = Z_p[x]/(f~) the
  unramified ring lifting the residue field, and reads the valuation off
  the pi-power basis.

All valuations are ord_p internally; ord_q = ord_p / a at reporting time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .cyclotomic import CycloNumber
from .errors import InconsistencyError, PrecisionError, ValidationError
from .finite_fields import GF
from .point_counting import MultiPoly, PolySystem, count_points

INF = math.inf
MAX_PRECISION = 256


def digit_sum(b: int, p: int) -> int:
    if b < 0:
        raise ValidationError("digit_sum needs b >= 0")
    s = 0
    while b:
        b, r = divmod(b, p)
        s += r
    return s


def p_weight(F: MultiPoly, p: int) -> int:
    """w_p(F) = max over monomials x^u of sum_i digit_sum(u_i, p)."""
    if F.is_zero():
        raise ValidationError("p-weight of the zero polynomial is undefined")
    return max(sum(digit_sum(e, p) for e in u) for u, _ in F.terms)


def v_p(n: int, p: int):
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ord_p(c, p: int):
    """p-adic valuation of an int, Fraction, or element of Q(zeta_p)."""
    if isinstance(c, CycloNumber):
        return cyclo_valuation(c, p)
    c = Fraction(c)
    if c == 0:
        return INF
    return Fraction(v_p(c.numerator, p) - v_p(c.denominator, p))


# -- divisibility bounds from weights -----------------------------------------


@dataclass
class BoundReport:
    bound: object
    value: object
    passed: bool
    vacuous: bool = False
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"bound": _num_json(self.bound), "value": _num_json(self.value),
               "pass": self.passed, "vacuous": self.vacuous}
        out.update({k: _num_json(v) for k, v in self.extra.items()})
        return out


def _num_json(v):
    if v is None or isinstance(v, bool):
        return v
    if v == INF:
        return "inf"
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    return v


def _weights(system: PolySystem) -> list[int]:
    return [p_weight(F, system.spec.p) for F in system.polys]


def zeta_slope_bound(system: PolySystem) -> Fraction:
    """((d_1+...+d_n) - d sum_i w_p(F_i)) / max_i w_p(F_i), in ord_q units."""
    w = _weights(system)
    if not w or max(w) == 0:
        raise ValidationError("every polynomial in the system is constant")
    s = system.spec
    return Fraction(sum(s.d_list) - s.d * sum(w), max(w))


def omega_bound(system: PolySystem) -> int:
    """omega = max(0, ceil(a * zeta_slope_bound))."""
    rho = zeta_slope_bound(system)
    return max(0, math.ceil(system.spec.a * rho))


def verify_divisibility(system: PolySystem, **count_kwargs) -> BoundReport:
    """Check p^omega | N_1(d), with N_1 from enumeration."""
    p = system.spec.p
    N1 = count_points(system, 1, **count_kwargs)
    try:
        omega = omega_bound(system)
    except ValidationError:
        if not system.polys or any(F.is_zero() for F in system.polys):
            raise
        # only nonzero constants: the variety is empty and N_1 = 0
        return BoundReport(None, v_p(N1, p), N1 == 0, vacuous=True,
                           extra={"omega": None, "N1": N1})
    passed = N1 % p**omega == 0
    report = BoundReport(omega, v_p(N1, p), passed, vacuous=omega == 0,
                         extra={"omega": omega, "N1": N1})
    if not passed:
        raise InconsistencyError(f"p^{omega} does not divide N_1 = {N1} for {system}")
    return report


# -- exact pi-adic valuation on Z[zeta_p] ---------------------------------


@lru_cache(maxsize=None)
def _phi_quotient(p: int) -> tuple:
    """R(y) = (Phi_p(y) - p) / (y - 1), ascending coefficients (degree p - 2)."""
    num = [1 - p] + [1] * (p - 1)
    # synthetic division by (y - 1)
    out = [0] * (len(num) - 1)
    carry = 0
    for i in range(len(num) - 1, 0, -1):
        carry = num[i] + carry
        out[i - 1] = carry
    assert carry + num[0] == 0
    return tuple(out)


def _divide_by_pi(c: list[int], p: int) -> list[int]:
    """c / (1 - zeta_p) in Z[zeta_p], assuming c(1) = 0 mod p."""
    n = len(c)
    quot = [0] * n
    carry = 0
    for i in range(n - 1, 0, -1):
        carry = c[i] + carry
        quot[i - 1] = carry
    rem = carry + c[0]
    t, r = divmod(rem, p)
    assert r == 0
    R = _phi_quotient(p)
    return [t * R[i] - quot[i] for i in range(n)]


def pi_adic_valuation(z: CycloNumber):
    """ord_p(z) = v_pi(z) / (p - 1) for z in Z[zeta_p]; infinity for z = 0."""
    p = z.k
    c = z.integer_coords()
    if not any(c):
        return INF
    v = 0
    while True:
        if all(x % p == 0 for x in c):
            c = [x // p for x in c]
            v += p - 1
            continue
        if p == 2 or sum(c) % p:
            return Fraction(v, p - 1)
        c = _divide_by_pi(c, p)
        v += 1


def cyclo_valuation(z: CycloNumber, p: int):
    """ord_p on Q(zeta_p) via clearing denominators."""
    if z.k != p:
        raise ValidationError("valuation needs an element of Q(zeta_p)")
    if not z:
        return INF
    den = math.lcm(*(Fraction(c).denominator for c in z.coeffs))
    return pi_adic_valuation(z * den) - v_p(den, p)


# -- truncated unramified p-adic arithmetic -------------------------------


class PadicRing:
    """(W / p^K)[y] / Phi_p(y) with W = Z_p[x]/(f~), f~ the naive lift of the
    residue field's defining polynomial."""

    def __init__(self, field: GF, K: int):
        if K < 1:
            raise ValidationError("precision K must be >= 1")
        self.field = field
        self.p = field.p
        self.K = K
        self.mod = self.p**K
        self.modulus = tuple(field.modulus)
        self.D = field.degree
        self.width = max(self.p - 1, 1)

    # W-level operations on tuples of D ints
    def w_add(self, a, b):
        return tuple((x + y) % self.mod for x, y in zip(a, b))

    def w_scale(self, a, s):
        return tuple(x * s % self.mod for x in a)

    def w_mul(self, a, b):
        D, mod, f = self.D, self.mod, self.modulus
        prod = [0] * (2 * D - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for i in range(2 * D - 2, D - 1, -1):
            c = prod[i]
            if c:
                for j in range(D + 1):
                    prod[i - D + j] -= c * f[j]
        return tuple(x % mod for x in prod[:D])

    def w_pow(self, a, e: int):
        result = self.w_one()
        base = a
        while e:
            if e & 1:
                result = self.w_mul(result, base)
            base = self.w_mul(base, base)
            e >>= 1
        return result

    def w_zero(self):
        return (0,) * self.D

    def w_one(self):
        return (1,) + (0,) * (self.D - 1)

    def w_valuation(self, a):
        """min coordinate valuation; >= K means undetermined (returned as K)."""
        return min((v_p(x, self.p) for x in a if x), default=self.K)

    def teichmuller(self, residue: int):
        """The lift t with t^Q = t reducing to ``residue`` (a field element)."""
        if residue == 0:
            return self.w_zero()
        t = tuple(self.field.digits(residue))
        Q = self.field.order
        for _ in range(self.K + 2):
            nxt = self.w_pow(t, Q)
            if nxt == t:
                return t
            t = nxt
        raise PrecisionError("Teichmuller iteration did not converge")

    def element(self, coeffs=None) -> "PadicElt":
        coeffs = coeffs or [self.w_zero()] * self.width
        return PadicElt(self, tuple(coeffs))

    def from_w(self, w, y_power: int = 0) -> "PadicElt":
        c = [self.w_zero()] * (self.p if self.p > 2 else 2)
        c[y_power % self.p] = w
        return PadicElt(self, tuple(_reduce_phi(self, c)))

    def from_int(self, n: int) -> "PadicElt":
        return self.from_w(self.w_scale(self.w_one(), n))

    def from_cyclo(self, z: CycloNumber) -> "PadicElt":
        coords = z.integer_coords()
        return PadicElt(self, tuple(self.w_scale(self.w_one(), c) for c in coords))


def _reduce_phi(ring: PadicRing, c):
    """Reduce a list of W-coefficients in y modulo Phi_p(y) = 1 + y + ... + y^{p-1}."""
    p = ring.p
    c = list(c)
    deg = p - 1
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if any(t):
            for j in range(deg):
                c[i - deg + j] = ring.w_add(c[i - deg + j], ring.w_scale(t, -1))
        c[i] = ring.w_zero()
    c = c[:deg]
    return c + [ring.w_zero()] * (ring.width - len(c))


@dataclass(frozen=True)
class PadicElt:
    """An element of (W/p^K)[y]/Phi_p(y), y standing for zeta_p."""

    ring: PadicRing
    coeffs: tuple

    def __add__(self, other):
        r = self.ring
        return PadicElt(r, tuple(r.w_add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s: int):
        r = self.ring
        return PadicElt(r, tuple(r.w_scale(a, s) for a in self.coeffs))

    def __mul__(self, other):
        r = self.ring
        if isinstance(other, int):
            return self.scale(other)
        prod = [r.w_zero()] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if any(a):
                for j, b in enumerate(other.coeffs):
                    if any(b):
                        prod[i + j] = r.w_add(prod[i + j], r.w_mul(a, b))
        return PadicElt(r, tuple(_reduce_phi(r, prod)))

    def is_zero(self) -> bool:
        return not any(any(a) for a in self.coeffs)

    def pi_coordinates(self):
        """Coefficients c_k with self = sum_k c_k pi^k, pi = 1 - y."""
        r = self.ring
        n = len(self.coeffs)
        out = []
        for k in range(n):
            acc = r.w_zero()
            for j in range(k, n):
                acc = r.w_add(acc, r.w_scale(self.coeffs[j], comb(j, k) * (-1) ** k))
            out.append(acc)
        return out

    def valuation(self):
        """ord_p, exact when below the precision horizon K; else PrecisionError."""
        r = self.ring
        e = max(r.p - 1, 1)
        best = None
        for k, c in enumerate(self.pi_coordinates()):
            if any(c):
                v = r.w_valuation(c) + Fraction(k, e)
                if best is None or v < best:
                    best = v
        if best is None or best >= r.K:
            raise PrecisionError(f"valuation not determined at precision K={r.K}")
        return best

    def residue(self):
        """Reduction modulo pi: an element of the residue field (as digits)."""
        r = self.ring
        acc = r.w_zero()
        for c in self.coeffs:
            acc = r.w_add(acc, c)
        return tuple(x % r.p for x in acc)


def teichmuller_lift(field: GF, x: int, K: int):
    """Teichmuller lift of a residue-field element in W/p^K, as D integer coordinates."""
    return PadicRing(field, K).teichmuller(x)


@lru_cache(maxsize=32)
def _teichmuller_powers(field: GF, K: int):
    ring = PadicRing(field, K)
    omega = ring.teichmuller(field.generator)
    powers = [ring.w_one()]
    for _ in range(field.group_order - 1):
        powers.append(ring.w_mul(powers[-1], omega))
    return ring, powers


@dataclass
class GaussCoefficient:
    m: int
    value: PadicElt
    ord_q: Fraction
    expected: Fraction
    precision: int


def _gauss_at_precision(m: int, field: GF, a: int, K: int) -> GaussCoefficient:
    ring, powers = _teichmuller_powers(field, K)
    Q, N = field.order, field.group_order
    p = field.p
    expected = Fraction(digit_sum(m, p), a * (p - 1))
    if m == 0:
        value = ring.from_int(1)
    elif m == N:
        value = ring.from_int(-Q * pow(N, -1, ring.mod))
    else:
        buckets = [ring.w_zero() for _ in range(p)]
        for k in range(N):
            t = int(field.trace_table[k])
            buckets[t] = ring.w_add(buckets[t], powers[(-m * k) % N])
        g = ring.element()
        for t, w in enumerate(buckets):
            g = g + ring.from_w(w, t)
        value = g.scale(pow(N, -1, ring.mod))
    return GaussCoefficient(m, value, value.valuation() / a, expected, K)


def gauss_coefficient(m: int, field: GF, a: int, K: int | None = None,
                      check: bool = True) -> GaussCoefficient:
    """Interpolation coefficient c_m of psi on the Teichmuller units of ``field``.

    c_0 = 1, c_{Q-1} = -Q/(Q-1), c_m = g_m/(Q-1) with the Gauss sum
    g_m = sum_{z^{Q-1}=1} z^{-m} psi(z bar). ``a`` is the degree of F_q over
    F_p so that ord_q = ord_p / a. Precision doubles until the valuation is
    determined; with ``check`` the result must equal digit_sum(m)/(a(p-1)).
    """
    if not 0 <= m <= field.group_order:
        raise ValidationError(f"m={m} outside [0, {field.group_order}]")
    p = field.p
    if K is None:
        K = math.ceil(Fraction(digit_sum(m, p), p - 1)) + 10
    while True:
        try:
            res = _gauss_at_precision(m, field, a, K)
            break
        except PrecisionError:
            if 2 * K > MAX_PRECISION:
                raise
            K *= 2
    if check and res.ord_q != res.expected:
        raise InconsistencyError(
            f"ord_q c_{m} = {res.ord_q} but digit sum predicts {res.expected}")
    return res


# -- Newton polygons -------------------------------------------------------


def newton_polygon(valuations) -> list[tuple[Fraction, int]]:
    """Lower convex hull of (i, valuations[i]); returns (slope, length) pairs.

    Infinite entries (zero coefficients) are skipped. The slopes are the
    valuations of the reciprocal roots when valuations[0] is finite.
    """
    pts = [(i, Fraction(v)) for i, v in enumerate(valuations) if v != INF]
    if not pts or pts[0][0] != 0:
        raise ValidationError("Newton polygon needs a nonzero constant term")
    out = []
    i = 0
    while i < len(pts) - 1:
        x0, y0 = pts[i]
        best_j, best_s = None, None
        for j in range(i + 1, len(pts)):
            s = (pts[j][1] - y0) / (pts[j][0] - x0)
            if best_s is None or s <= best_s:
                best_j, best_s = j, s
        length = pts[best_j][0] - x0
        if out and out[-1][0] == best_s:
            out[-1] = (best_s, out[-1][1] + length)
        else:
            out.append((best_s, length))
        i = best_j
    return out


def newton_slopes(poly, p: int, a: int = 1) -> list[tuple[Fraction, int]]:
    """Newton slopes of a polynomial with exact coefficients, in ord_q = ord_p / a."""
    vals = [ord_p(c, p) for c in poly]
    return [(s / a, mult) for s, mult in newton_polygon(vals)]


def check_slopes(r, p: int, a: int, bound) -> BoundReport:
    """Every Newton slope of numerator and denominator is >= bound."""
    slopes = newton_slopes(r.num, p, a) + newton_slopes(r.den, p, a)
    low = min((s for s, _ in slopes), default=INF)
    return BoundReport(bound, low, low >= bound, vacuous=not slopes,
                       extra={"slopes": [[str(s), m] for s, m in slopes]})
