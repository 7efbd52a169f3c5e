"""From m -> N_m (or S_m) to the rational function exp(sum N_m T^m / m).

The sequence s_m = sum_poles beta^m - sum_zeros alpha^m satisfies a linear
recurrence whose connection polynomial is C(T) = prod (1 - gamma T) over the
distinct reciprocal zeros and poles. Berlekamp-Massey finds C exactly; the
multiplicity of each root is then read off by gcds, without factoring:
with sum_m s_m T^m = P(T)/C(T), the roots of multiplicity k are exactly the
common roots of C and P + k T C'.

Coefficients are Fractions, or CycloNumbers for L-functions over Q(zeta_p).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycloNumber
from .errors import DegreeCapError, InconsistencyError, ValidationError

DEFAULT_GUARD = 10


# -- dense polynomials over an exact field (ascending lists) ----------------


def _zero(x):
    return x * 0


def _one(x):
    return x * 0 + 1


def _trim(a):
    a = list(a)
    while len(a) > 1 and not a[-1]:
        a.pop()
    return a


def padd(a, b):
    n = max(len(a), len(b))
    z = _zero(a[0] if a else b[0])
    return _trim([(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)])


def psub(a, b):
    return padd(a, [-c for c in b])


def pmul(a, b):
    z = _zero(a[0])
    out = [z] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return _trim(out)


def ppow(a, e):
    out = [_one(a[0])]
    for _ in range(e):
        out = pmul(out, a)
    return out


def pdivmod(a, b):
    b = _trim(b)
    if len(b) == 1 and not b[0]:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    z = _zero(a[0])
    if len(a) < len(b):
        return [z], _trim(a)
    q = [z] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] = a[i + j] - c * bj
    r = _trim(a[: len(b) - 1] or [z])
    return _trim(q), r


def pdeg(a):
    a = _trim(a)
    return -1 if len(a) == 1 and not a[0] else len(a) - 1


def pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while pdeg(b) >= 0:
        a, b = b, pdivmod(a, b)[1]
    return a


def normalize_constant(a):
    """Scale so the constant term is 1 (requires a(0) != 0)."""
    a = _trim(a)
    c = a[0]
    if not c:
        raise ValidationError("polynomial vanishes at T = 0")
    return [x / c for x in a]


def pderiv(a):
    if len(a) == 1:
        return [_zero(a[0])]
    return _trim([a[i] * i for i in range(1, len(a))])


def compose_scale(a, s):
    """a(s T)."""
    out = []
    power = _one(a[0])
    for c in a:
        out.append(c * power)
        power = power * s
    return _trim(out)


def eval_poly(a, x):
    acc = _zero(a[0])
    for c in reversed(a):
        acc = acc * x + c
    return acc


# -- power series ---------------------------------------------------------


@dataclass(frozen=True)
class SeriesQ:
    """Truncated power series sum_{i <= order} coeffs[i] T^i."""

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_counts(cls, values) -> "SeriesQ":
        """sum_{m>=1} N_m T^m / m truncated at order len(values)."""
        vals = [_as_exact(v) for v in values]
        z = _zero(vals[0]) if vals else Fraction(0)
        return cls(tuple([z] + [v / m for m, v in enumerate(vals, start=1)]))


def series_div(a, b, order):
    """a / b as a power series up to T^order; b(0) must be invertible."""
    a = list(a) + [_zero(b[0])] * (order + 1 - len(a))
    inv0 = 1 / b[0] if isinstance(b[0], Fraction) else b[0].inverse()
    out = []
    for n in range(order + 1):
        acc = a[n]
        for j in range(1, min(n, len(b) - 1) + 1):
            acc = acc - b[j] * out[n - j]
        out.append(acc * inv0)
    return out


def series_exp(s: SeriesQ) -> SeriesQ:
    """exp of a series with zero constant term, via n E_n = sum_k k s_k E_{n-k}."""
    c = s.coeffs
    if c and c[0]:
        raise ValidationError("series_exp needs a zero constant term")
    E = [_one(c[0]) if c else Fraction(1)]
    for n in range(1, len(c)):
        acc = _zero(E[0])
        for k in range(1, n + 1):
            if c[k]:
                acc = acc + c[k] * k * E[n - k]
        E.append(acc / n)
    return SeriesQ(tuple(E))


# -- rational functions ---------------------------------------------------


def _as_exact(v):
    if isinstance(v, CycloNumber):
        return v
    return Fraction(v)


@dataclass(frozen=True)
class Factor:
    """A block B(T) raised to ``exponent``; B(0) = 1. Linear blocks are 1 - gamma T."""

    block: tuple
    exponent: int

    @property
    def is_linear(self) -> bool:
        return len(self.block) == 2

    @property
    def gamma(self):
        if not self.is_linear:
            raise ValueError("block is not linear")
        return -self.block[1]

    def to_json(self) -> dict:
        return _factor_json(self)


@dataclass(frozen=True, eq=False)
class RationalFn:
    """num(T)/den(T), reduced, with num(0) = den(0) = 1.

    ``factors`` optionally records a factored form prod B(T)^e (positive e in
    the numerator) that multiplies out to num/den.
    """

    num: tuple
    den: tuple
    factors: tuple | None = None

    @classmethod
    def from_polys(cls, num, den, factors=None) -> "RationalFn":
        num, den = _trim(num), _trim(den)
        g = pgcd(num, den)
        if pdeg(g) > 0:
            num = pdivmod(num, g)[0]
            den = pdivmod(den, g)[0]
        c = den[0]
        num = [x / c for x in num]
        den = [x / c for x in den]
        if num[0] != 1:
            raise ValidationError("rational function must have value 1 at T = 0")
        return cls(tuple(num), tuple(den), tuple(factors) if factors is not None else None)

    @classmethod
    def from_factors(cls, factors, one=Fraction(1)) -> "RationalFn":
        num, den = [one], [one]
        merged: dict = {}
        for f in factors:
            block = tuple(normalize_constant([_as_exact(c) for c in f.block]))
            merged[block] = merged.get(block, 0) + f.exponent
        kept = []
        for block, e in merged.items():
            if e > 0:
                num = pmul(num, ppow(list(block), e))
            elif e < 0:
                den = pmul(den, ppow(list(block), -e))
            if e:
                kept.append(Factor(block, e))
        return cls.from_polys(num, den, kept)

    @classmethod
    def one(cls) -> "RationalFn":
        return cls((Fraction(1),), (Fraction(1),), ())

    def __eq__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return tuple(_trim(self.num)) == tuple(_trim(other.num)) and tuple(
            _trim(self.den)
        ) == tuple(_trim(other.den))

    def __hash__(self):
        return hash((self.num, self.den))

    @property
    def total_degree(self) -> int:
        return pdeg(self.num) + pdeg(self.den)

    def counts(self, M: int) -> list:
        """s_1..s_M with T Z'/Z = sum s_m T^m, i.e. N_m for a zeta function."""
        num, den = list(self.num), list(self.den)
        a = series_div([_zero(num[0])] + pderiv(num), num, M)
        b = series_div([_zero(den[0])] + pderiv(den), den, M)
        return [a[m] - b[m] for m in range(1, M + 1)]

    def series(self, M: int) -> SeriesQ:
        return SeriesQ(tuple(series_div(list(self.num), list(self.den), M)))

    def unit_factors(self) -> list[Factor]:
        """Factors (1 - T) or (1 + T), i.e. unit reciprocal roots +-1."""
        out = []
        for sign in (1, -1):
            block = (Fraction(1), Fraction(-sign))
            e = _multiplicity(list(self.num), list(block)) - _multiplicity(list(self.den), list(block))
            if e:
                out.append(Factor(block, e))
        return out

    def to_json(self) -> dict:
        out = {"numerator": [_coeff_json(c) for c in self.num],
               "denominator": [_coeff_json(c) for c in self.den]}
        if self.factors is not None:
            out["factors"] = [_factor_json(f) for f in self.factors]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RationalFn":
        num = [_coeff_from_json(c) for c in data["numerator"]]
        den = [_coeff_from_json(c) for c in data["denominator"]]
        factors = None
        if "factors" in data:
            factors = [Factor(tuple(_coeff_from_json(c) for c in f["block"]), int(f["exponent"]))
                       for f in data["factors"]]
        return cls.from_polys(num, den, factors)

    def __repr__(self):
        return f"RationalFn(num={_fmt_poly(self.num)}, den={_fmt_poly(self.den)})"


def _multiplicity(a, block):
    e = 0
    while pdeg(a) >= 1:
        q, r = pdivmod(a, block)
        if pdeg(r) >= 0:
            break
        a, e = q, e + 1
    return e


def _coeff_json(c):
    if isinstance(c, CycloNumber):
        return {"zeta": c.k, "coords": [str(Fraction(x)) for x in c.coeffs]}
    return str(Fraction(c))


def _coeff_from_json(c):
    if isinstance(c, dict):
        return CycloNumber(int(c["zeta"]), [Fraction(x) for x in c["coords"]])
    return Fraction(c)


def _factor_json(f: Factor) -> dict:
    out = {"block": [_coeff_json(c) for c in f.block], "exponent": f.exponent}
    if f.is_linear and not isinstance(f.block[1], CycloNumber):
        out["gamma"] = str(Fraction(f.gamma))
    return out


def _fmt_poly(a):
    return "[" + ", ".join(str(c) for c in a) + "]"


# -- recurrence detection -------------------------------------------------


def berlekamp_massey(seq):
    """Minimal connection polynomial C (C[0] = 1) and its length L.

    s_n + C_1 s_{n-1} + ... + C_L s_{n-L} = 0 for all L <= n < len(seq).
    """
    if not seq:
        return [Fraction(1)], 0
    one = _one(seq[0])
    C, B = [one], [one]
    L, shift, b = 0, 1, one
    for n, s in enumerate(seq):
        d = s
        for i in range(1, L + 1):
            if i < len(C):
                d = d + C[i] * seq[n - i]
        if not d:
            shift += 1
            continue
        coef = d / b
        update = [_zero(one)] * shift + [coef * c for c in B]
        newC = psub(C, update) if len(update) else C
        if 2 * L <= n:
            B, b, L, shift = C, d, n + 1 - L, 1
        else:
            shift += 1
        C = newC
    C = list(C) + [_zero(one)] * (L + 1 - len(C))
    return C[: L + 1], L


def reconstruct(values, degree_cap: int, guard: int = DEFAULT_GUARD,
                max_multiplicity: int = 512) -> RationalFn:
    """The rational function whose log-derivative sequence is ``values``.

    ``degree_cap`` bounds the recurrence order, i.e. the number of distinct
    reciprocal zeros and poles. The first ``len(values) - guard`` terms are
    used for detection and every term is checked against the result.
    """
    seq = [_as_exact(v) for v in values]
    N = len(seq)
    if degree_cap < 0 or guard < 0:
        raise ValidationError("degree_cap and guard must be non-negative")
    if N < 2 * degree_cap + guard:
        raise ValidationError(
            f"{N} terms given; need at least 2*{degree_cap} + {guard}"
        )
    if N == 0:
        return RationalFn.one()
    one = _one(seq[0])
    C, L = berlekamp_massey(seq[: N - guard])
    if L > degree_cap:
        raise DegreeCapError(f"minimal recurrence has order {L} > degree cap {degree_cap}")
    if L == 0:
        result = RationalFn.from_factors([], one)
    else:
        S = [_zero(one)] + seq
        P = pmul(C, S)[: L + 1]
        TC = [_zero(one)] + pderiv(C)
        remaining = list(C)
        factors = []
        k = 0
        while pdeg(remaining) > 0:
            k = -k if k > 0 else 1 - k
            if abs(k) > max_multiplicity:
                raise InconsistencyError("sequence has non-integral multiplicities")
            g = pgcd(remaining, padd(P, [c * k for c in TC]))
            if pdeg(g) > 0:
                g = normalize_constant(g)
                factors.append(Factor(tuple(g), -k))
                remaining = pdivmod(remaining, g)[0]
        result = RationalFn.from_factors(factors, one)
    check = result.counts(N)
    for m, (a, b) in enumerate(zip(check, seq), start=1):
        if a != b:
            raise InconsistencyError(f"guard mismatch at term m={m}: fitted {a}, given {b}")
    return result


def reconstruct_auto(values, guard: int = DEFAULT_GUARD, start: int = 8,
                     max_cap: int | None = None) -> RationalFn:
    """Escalating degree cap: start, 2*start, ... while the data allows."""
    N = len(values)
    limit = (N - guard) // 2
    if max_cap is not None:
        limit = min(limit, max_cap)
    if limit < 0:
        raise ValidationError(f"{N} terms cannot cover a guard of {guard}")
    cap = min(start, limit)
    while True:
        try:
            return reconstruct(values, cap, guard)
        except DegreeCapError:
            if cap >= limit:
                raise
            cap = min(2 * cap, limit)


def factor_over_q(r: RationalFn) -> list[Factor]:
    """Factor num and den over Q into (1 - gamma T) and irreducible blocks.

    Rational-coefficient functions are factored completely (via sympy); for
    cyclotomic coefficients the multiplicity blocks from reconstruction are
    returned unchanged.
    """
    if any(isinstance(c, CycloNumber) for c in r.num + r.den):
        if r.factors is None:
            return [Factor(tuple(r.num), 1), Factor(tuple(r.den), -1)]
        return list(r.factors)
    import sympy

    T = sympy.Symbol("T")
    out = []
    for poly, sign in ((r.num, 1), (r.den, -1)):
        if len(poly) == 1:
            continue
        expr = sum(sympy.Rational(c.numerator, c.denominator) * T**i
                   for i, c in enumerate(map(Fraction, poly)))
        _, facs = sympy.factor_list(expr, T)
        for f, e in facs:
            coeffs = [Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
                      for c in reversed(sympy.Poly(f, T).all_coeffs())]
            out.append(Factor(tuple(normalize_constant(coeffs)), sign * int(e)))
    out.sort(key=lambda f: (len(f.block), [abs(c) for c in f.block], -f.exponent, f.block))
    return out
