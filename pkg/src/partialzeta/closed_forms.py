"""Explicit partial zeta functions: affine space, hyperplanes, and y = x^n.

For the curve C_n: y = x^n with x over F_{q^{d_1}} and y over F_{q^{d_2}},
c = gcd(d_1, d_2) and M_i = (q^{d_1 i} - 1)/(q^{c i} - 1),

    N_m = gcd(n, M_m) (q^{cm} - 1) + 1,
    Z = 1/(1 - T) * prod_{k | phi(n)} (B_k(T) / B_k(q^c T))^{a_k},
    a_k = (1/phi(n)) sum_{i=1}^{phi(n)} gcd(n, M_i) zeta_k^i,

where B_k(T) = prod_{ord(zeta) = k} (1 - zeta T) is Phi_k with its constant
term normalised to 1. Only M_i mod n is ever needed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cyclotomic import CycloNumber, cyclotomic_poly, euler_phi
from .errors import ConjectureViolation, ValidationError
from .finite_fields import TowerSpec, factorize
from .point_counting import MultiPoly, PolySystem
from .rational_reconstruction import Factor, RationalFn, compose_scale


def gcd_list(values) -> int:
    out = 0
    for v in values:
        out = math.gcd(out, v)
    return out


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def affine_space_zeta(d_list, q: int) -> RationalFn:
    return RationalFn.from_factors([Factor((1, -(q ** sum(d_list))), -1)])


def hyperplane_exponent(d_list) -> int:
    """c = sum_{k>=2} (-1)^k sum_{i_1<...<i_k} gcd(d_{i_1}, ..., d_{i_k})."""
    return sum((-1) ** k * gcd_list(sub)
               for k in range(2, len(d_list) + 1)
               for sub in combinations(d_list, k))


def hyperplane_zeta(d_list, q: int) -> RationalFn:
    if len(d_list) < 2:
        raise ValidationError("a hyperplane needs n >= 2 variables")
    c = hyperplane_exponent(d_list)
    return RationalFn.from_factors([Factor((1, -(q**c)), -1)])


def cyclotomic_block(k: int) -> tuple:
    """prod over primitive k-th roots zeta of (1 - zeta T): Phi_k reversed."""
    return tuple(reversed(cyclotomic_poly(k)))


@dataclass(frozen=True)
class CurveSpec:
    """The curve y = x^n with x in F_{q^{d_1}}, y in F_{q^{d_2}}."""

    n: int
    q: int
    d1: int
    d2: int

    def __post_init__(self):
        if self.n < 1 or self.d1 < 1 or self.d2 < 1:
            raise ValidationError("n, d1, d2 must be >= 1")
        if len(factorize(self.q)) != 1:
            raise ValidationError(f"q={self.q} is not a prime power")

    @property
    def c(self) -> int:
        return math.gcd(self.d1, self.d2)

    @property
    def phi(self) -> int:
        return euler_phi(self.n)

    @property
    def p(self) -> int:
        return next(iter(factorize(self.q)))

    @property
    def a(self) -> int:
        return next(iter(factorize(self.q).values()))

    def M_mod_n(self, i: int) -> int:
        """M_i mod n via the geometric sum sum_{j < d_1/c} q^{c i j}."""
        base = pow(self.q, self.c * i, self.n)
        return sum(pow(base, j, self.n) for j in range(self.d1 // self.c)) % self.n

    def delta(self, i: int) -> int:
        return math.gcd(self.n, self.M_mod_n(i))

    def tower_spec(self) -> TowerSpec:
        return TowerSpec(self.p, self.a, (self.d1, self.d2))

    def system(self) -> PolySystem:
        """y - x^n = 0 with variables (x, y)."""
        p = self.p
        f = MultiPoly(2, (((0, 1), 1), ((self.n, 0), p - 1 if p > 2 else 1)))
        return PolySystem(self.tower_spec(), (f,))


def gcd_count(curve: CurveSpec, m: int) -> int:
    return curve.delta(m) * (curve.q ** (curve.c * m) - 1) + 1


def gcd_sequence(curve: CurveSpec, M: int) -> list[int]:
    return [curve.delta(i) for i in range(1, M + 1)]


def minimal_period(seq) -> int:
    n = len(seq)
    for t in range(1, n + 1):
        if all(seq[i] == seq[i + t] for i in range(n - t)):
            return t
    return n


def exponent_sum(deltas, k: int) -> CycloNumber:
    """(1/len(deltas)) sum_{i=1}^{len} deltas[i-1] zeta_k^i in Q(zeta_k)."""
    counts = [0] * k
    for i, v in enumerate(deltas, start=1):
        counts[i % k] += v
    return CycloNumber(k, counts) / len(deltas)


def a_k_exponent(curve: CurveSpec, k: int) -> int:
    phi = curve.phi
    if phi % k:
        raise ValidationError(f"k={k} does not divide phi({curve.n})={phi}")
    value = exponent_sum([curve.delta(i) for i in range(1, phi + 1)], k)
    if not value.is_integer():
        raise ConjectureViolation(
            f"a_{k} is not an integer for {curve}: {value!r}", witness=value)
    return int(value.rational_value())


def curve_exponents(curve: CurveSpec) -> dict[int, int]:
    return {k: a_k_exponent(curve, k) for k in divisors(curve.phi)}


def curve_zeta_closed_form(curve: CurveSpec) -> RationalFn:
    qc = curve.q**curve.c
    factors = [Factor((1, -1), -1)]
    for k, ak in curve_exponents(curve).items():
        block = cyclotomic_block(k)
        factors.append(Factor(block, ak))
        factors.append(Factor(tuple(compose_scale([Fraction(b) for b in block], Fraction(qc))), -ak))
    return RationalFn.from_factors(factors)


def degree_bound_check(curve: CurveSpec) -> bool:
    return curve_zeta_closed_form(curve).total_degree <= 1 + 2 * curve.n**2


@dataclass
class GaloisCheck:
    ok: bool
    sums: dict = field(repr=False)
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def galois_consistency(curve: CurveSpec) -> GaloisCheck:
    """S_j = sum_i gcd(n, M_i) zeta^{-ij}, zeta of order phi(n): constant on
    additive-order classes of j, and divisible by phi(n) in Z."""
    phi = curve.phi
    deltas = [curve.delta(i) for i in range(1, phi + 1)]
    sums = {}
    for j in range(1, phi + 1):
        counts = [0] * phi
        for i, v in enumerate(deltas, start=1):
            counts[(-i * j) % phi] += v
        sums[j] = CycloNumber(phi, counts)
    by_order: dict[int, CycloNumber] = {}
    for j, s in sums.items():
        o = phi // math.gcd(j, phi)
        if o in by_order and by_order[o] != s:
            return GaloisCheck(False, sums, (j, o))
        by_order.setdefault(o, s)
        if not (s / phi).is_integer():
            return GaloisCheck(False, sums, (j, o))
    return GaloisCheck(True, sums)


@dataclass
class SweepReport:
    records: list
    violations: list

    def json_lines(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)


def conjecture_sweep(n_max: int, a_max: int, d_max: int, a_min: int = 1) -> SweepReport:
    """Integrality of (1/phi(n)) sum_i gcd(n, M_i) zeta_k^i, M_i = (a^{di}-1)/(a^i-1).

    M_i is taken as the geometric sum sum_{j<d} a^{ij} mod n, which also
    covers a = 1 (M_i = d).
    """
    records, violations = [], []
    for n in range(1, n_max + 1):
        phi = euler_phi(n)
        for a in range(a_min, a_max + 1):
            for d in range(1, d_max + 1):
                deltas = []
                for i in range(1, phi + 1):
                    base = pow(a, i, n)
                    M = sum(pow(base, j, n) for j in range(d)) % n
                    deltas.append(math.gcd(n, M))
                for k in divisors(phi):
                    value = exponent_sum(deltas, k)
                    integral = value.is_integer()
                    rec = {"n": n, "a": a, "d": d, "k": k, "integral": integral,
                           "a_k": str(value.rational_value()) if integral
                           else [str(c) for c in value.coeffs]}
                    records.append(rec)
                    if not integral:
                        violations.append(rec)
    return SweepReport(records, violations)


def galois_sweep(n_max: int, qs=(2, 3, 4, 5, 7), d_max: int = 3) -> SweepReport:
    records, violations = [], []
    for n in range(1, n_max + 1):
        for q in qs:
            for d1 in range(1, d_max + 1):
                for d2 in range(1, d_max + 1):
                    res = galois_consistency(CurveSpec(n, q, d1, d2))
                    rec = {"n": n, "q": q, "d_1": d1, "d_2": d2, "consistent": res.ok}
                    records.append(rec)
                    if not res.ok:
                        violations.append(rec)
    return SweepReport(records, violations)


def curve_table_records(curve: CurveSpec) -> list[dict]:
    """JSON-line records {n, q, d_1, d_2, k, a_k, integral} for one curve."""
    out = []
    for k in divisors(curve.phi):
        value = exponent_sum([curve.delta(i) for i in range(1, curve.phi + 1)], k)
        integral = value.is_integer()
        out.append({"n": curve.n, "q": curve.q, "d_1": curve.d1, "d_2": curve.d2, "k": k,
                    "a_k": str(value.rational_value()) if integral
                    else [str(c) for c in value.coeffs],
                    "integral": integral})
    return out
