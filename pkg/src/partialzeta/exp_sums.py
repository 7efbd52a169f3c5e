"""Partial exponential sums, mixed character sums and their L-functions.

S_m(d, f) = sum over x_i in F_{q_i^m} of zeta_p^{Tr(b f(x))}, Tr the absolute
trace of the level-m ambient field. Untwisted sums are exact elements of
Z[zeta_p]; twisted sums with Teichmuller characters are computed p-adically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .cyclotomic import CycloNumber
from .errors import PrecisionError, SizeError, ValidationError
from .finite_fields import TowerSpec, build_tower
from .padic_estimates import (INF, MAX_PRECISION, BoundReport, check_slopes,
                              digit_sum, p_weight, pi_adic_valuation, _teichmuller_powers)
from .point_counting import DEFAULT_WORK_CAP, MultiPoly, _eval_logs, _ranges
from .rational_reconstruction import DEFAULT_GUARD, RationalFn, reconstruct


@dataclass(frozen=True)
class CharacterSpec:
    """psi_b(t) = zeta_p^{Tr(b t)} and chi_i(x) = Teichmuller(x)^{e_i} for i < r."""

    b: int = 1
    exponents: tuple = ()

    def __post_init__(self):
        if self.b == 0:
            raise ValidationError("the additive character must be nontrivial (b != 0)")
        object.__setattr__(self, "exponents", tuple(self.exponents))

    @property
    def twisted(self) -> bool:
        return bool(self.exponents)


@dataclass
class SumSequence:
    values: list
    spec: TowerSpec
    character: CharacterSpec


def _check_poly(f: MultiPoly, spec: TowerSpec):
    if f.n != spec.n:
        raise ValidationError(f"polynomial has {f.n} variables but the tower has {spec.n}")
    Q = spec.p ** (spec.a * spec.d)
    if any(c >= Q for _, c in f.terms):
        raise ValidationError("coefficient outside F_{q^d}")


def _var_logs(tower, sizes, start, stop, units_only=()):
    """Logs of the variables for flat indices [start, stop); mixed radix.

    Index digit t maps to 0 (t = 0) or g^{(t-1) e_i}; for i in units_only the
    digit t maps to g^{t e_i} and zero is skipped.
    """
    z = tower.field.zero_log
    idx = np.arange(start, stop, dtype=np.int64)
    out = [None] * len(sizes)
    for i in range(len(sizes) - 1, -1, -1):
        idx, t = np.divmod(idx, sizes[i])
        if i in units_only:
            out[i] = t * tower.indices[i]
        else:
            out[i] = np.where(t == 0, z, (t - 1) * tower.indices[i])
    return out


def _work_check(work, work_cap):
    cap = DEFAULT_WORK_CAP if work_cap is None else work_cap
    if work > cap:
        raise SizeError(f"enumeration of {work} points exceeds the work cap {cap}")


def partial_exp_sum(f: MultiPoly, spec: TowerSpec, m: int = 1, b: int = 1, *,
                    enum_cap=None, work_cap=None) -> CycloNumber:
    """S_m(d, f) for psi_b, as an element of Z[zeta_p] with integer coordinates."""
    _check_poly(f, spec)
    if b == 0:
        raise ValidationError("the additive character must be nontrivial (b != 0)")
    tower = build_tower(spec.at_level(m), enum_cap)
    F = tower.field
    z, N, p = F.zero_log, F.group_order, F.p
    blog = tower.embed_log(b)
    terms = [(u, tower.embed_log(c)) for u, c in f.terms]
    sizes = [tower.subfield_size(i) for i in range(spec.n)]
    work = math.prod(sizes)
    if all(not any(u) for u, _ in f.terms):
        # constant f: every point contributes the same root of unity
        c = terms[0][1] if terms else z
        t = 0 if c == z else int(F.trace_table[(c + blog) % N])
        return CycloNumber.from_exponent_counts(p, [work if s == t else 0 for s in range(p)])
    _work_check(work, work_cap)
    hist = np.zeros(p, dtype=np.int64)
    for start, stop in _ranges(work):
        logs = _var_logs(tower, sizes, start, stop)
        val = _eval_logs(F, terms, logs, stop - start)
        val = np.where(val == z, z, (val + blog) % N)
        hist += np.bincount(F.trace_table[val], minlength=p)
    return CycloNumber.from_exponent_counts(p, [int(h) for h in hist])


def sum_sequence(f: MultiPoly, spec: TowerSpec, M: int, character: CharacterSpec | None = None,
                 **kwargs) -> SumSequence:
    ch = character or CharacterSpec()
    if ch.twisted:
        if M != 1:
            raise ValidationError("twisted sums are computed at level m = 1 only")
        values = [mixed_char_sum(f, spec, ch.exponents, b=ch.b, **kwargs)]
    else:
        values = [partial_exp_sum(f, spec, m, ch.b, **kwargs) for m in range(1, M + 1)]
    return SumSequence(values, spec, ch)


def prime_field_exp_sum(f: MultiPoly, p: int, m: int = 1) -> CycloNumber:
    """Direct oracle for m = 1 over (F_p)^n with integer arithmetic mod p.

    Only for coefficients in F_p (codes < p); independent of the tower tables.
    """
    if m != 1:
        raise ValidationError("the prime-field oracle handles m = 1 only")
    if any(c >= p for _, c in f.terms):
        raise ValidationError("coefficients must lie in F_p")
    counts = [0] * p
    for x in product(range(p), repeat=f.n):
        v = 0
        for u, c in f.terms:
            t = c
            for xi, e in zip(x, u):
                t = t * pow(xi, e, p) % p
            v += t
        counts[v % p] += 1
    return CycloNumber.from_exponent_counts(p, counts)


def L_function(f: MultiPoly, spec: TowerSpec, M: int, degree_cap: int,
               guard: int = DEFAULT_GUARD, b: int = 1, **kwargs) -> RationalFn:
    """L(d, f, T) = exp(sum S_m T^m / m) reconstructed over Q(zeta_p)."""
    seq = sum_sequence(f, spec, M, CharacterSpec(b), **kwargs)
    return reconstruct(seq.values, degree_cap, guard)


# -- twisted sums -----------------------------------------------------------


@dataclass
class MixedSum:
    value: object  # PadicElt
    ord_q: object  # Fraction, or a lower bound when undetermined
    determined: bool
    precision: int


def _mixed_histogram(f, spec, exponents, b, enum_cap, work_cap):
    tower = build_tower(spec, enum_cap)
    F = tower.field
    z, N, p = F.zero_log, F.group_order, F.p
    r = len(exponents)
    blog = tower.embed_log(b)
    terms = [(u, tower.embed_log(c)) for u, c in f.terms]
    sizes = [tower.subfield_size(i) - (1 if i < r else 0) for i in range(spec.n)]
    work = math.prod(sizes)
    _work_check(work, work_cap)
    hist = np.zeros(N * p, dtype=np.int64)
    for start, stop in _ranges(work):
        logs = _var_logs(tower, sizes, start, stop, units_only=range(r))
        E = np.zeros(stop - start, dtype=np.int64)
        for i, e in enumerate(exponents):
            E = (E + logs[i] * e) % N
        val = _eval_logs(F, terms, logs, stop - start)
        val = np.where(val == z, z, (val + blog) % N)
        hist += np.bincount(E * p + F.trace_table[val], minlength=N * p)
    return F, hist.reshape(N, p)


def mixed_char_sum(f: MultiPoly, spec: TowerSpec, exponents, b: int = 1,
                   K: int | None = None, strict: bool = False, *,
                   enum_cap=None, work_cap=None) -> MixedSum:
    """sum x_1^{e_1} ... x_r^{e_r} psi_b(f(x bar)) over Teichmuller points.

    x_i runs over the nonzero Teichmuller points of its subfield for i < r
    and over all of them for i >= r. The valuation is found by precision
    doubling; if it stays undetermined up to the cap the sum is reported as
    ord_q >= K/a (``determined`` false), or PrecisionError with ``strict``.
    """
    _check_poly(f, spec)
    exponents = tuple(exponents)
    if not 1 <= len(exponents) <= spec.n:
        raise ValidationError("need 1 <= r <= n multiplicative exponents")
    for i, e in enumerate(exponents):
        if not 1 <= e <= spec.q_i(i) - 1:
            raise ValidationError(f"e_{i + 1}={e} outside [1, q_{i + 1} - 1]")
    if b == 0:
        raise ValidationError("the additive character must be nontrivial (b != 0)")
    F, hist = _mixed_histogram(f, spec, exponents, b, enum_cap, work_cap)
    a = spec.a
    if K is None:
        try:
            K = max(math.ceil(twisted_bound(f, spec, exponents) * a), 0) + 10
        except ValidationError:
            K = 10
    nz = np.argwhere(hist)
    if _exact_zero(hist, F.group_order, F.p):
        ring, _ = _teichmuller_powers(F, K)
        return MixedSum(ring.element(), INF, True, K)
    while True:
        ring, powers = _teichmuller_powers(F, K)
        buckets = [ring.w_zero() for _ in range(F.p)]
        for E, t in nz:
            buckets[t] = ring.w_add(buckets[t], ring.w_scale(powers[E], int(hist[E, t])))
        value = ring.element()
        for t, w in enumerate(buckets):
            value = value + ring.from_w(w, t)
        try:
            return MixedSum(value, value.valuation() / a, True, K)
        except PrecisionError:
            if 2 * K > MAX_PRECISION:
                if strict:
                    raise
                return MixedSum(value, Fraction(K, a), False, K)
            K *= 2


EXACT_ZERO_LIMIT = 1 << 14


def _exact_zero(hist, N: int, p: int) -> bool:
    """Whether sum hist[E, t] zeta_N^E zeta_p^t vanishes, decided in Q(zeta_{Np}).

    Mapping zeta_N to the Teichmuller lift of g is a field embedding, so this
    is exactly the vanishing of the p-adic sum. Skipped (False) for large N.
    """
    k = math.lcm(N, p)
    if k > EXACT_ZERO_LIMIT:
        return False
    counts = [0] * k
    for E, t in np.argwhere(hist):
        counts[(int(E) * (k // N) + int(t) * (k // p)) % k] += int(hist[E, t])
    return not CycloNumber.from_exponent_counts(k, counts)


def twisted_bound(f: MultiPoly, spec: TowerSpec, exponents=()) -> Fraction:
    """(1/w_p(f)) (sum d_i - sum_i sigma_p(e_i)/(a(p-1)))."""
    w = p_weight(f, spec.p)
    if w == 0:
        raise ValidationError("the bound needs a nonconstant f")
    s = sum(digit_sum(e, spec.p) for e in exponents)
    return (sum(spec.d_list) - Fraction(s, spec.a * (spec.p - 1))) / w


def verify_L_bound(f: MultiPoly, spec: TowerSpec, exponents=(), b: int = 1,
                   L: RationalFn | None = None, **kwargs) -> BoundReport:
    """ord_q S_1 >= twisted_bound, and Newton slopes of L (if given) >= (sum d_i)/w_p(f)."""
    bound = twisted_bound(f, spec, exponents)
    a = spec.a
    extra = {}
    if exponents:
        res = mixed_char_sum(f, spec, exponents, b, **kwargs)
        value = res.ord_q
        extra["determined"] = res.determined
        passed = value >= bound
    else:
        S1 = partial_exp_sum(f, spec, 1, b, **kwargs)
        v = pi_adic_valuation(S1)
        value = v if v == INF else v / a
        passed = value >= bound
        extra["S1"] = [int(c) for c in S1.coeffs]
    if L is not None:
        eta = twisted_bound(f, spec)
        slopes = check_slopes(L, spec.p, a, eta)
        extra["min_slope"] = slopes.value
        extra["slopes_pass"] = slopes.passed
        passed = passed and slopes.passed
    return BoundReport(bound, value, passed, vacuous=bound <= 0, extra=extra)


def galois_twist_check(f: MultiPoly, spec: TowerSpec, m: int = 1, **kwargs) -> bool:
    """sigma_t(S_m(f)) = S_m(t f) for every t in (Z/p)^x."""
    p = spec.p
    S = partial_exp_sum(f, spec, m, **kwargs)
    tower = build_tower(spec, kwargs.get("enum_cap"))
    F = tower.field
    for t in range(1, p):
        # t as an element of F_p inside F_{q^d}; coefficient codes of t*c
        tf = MultiPoly.from_dict(f.n, {u: F.mul(t, c) for u, c in f.terms})
        if S.conjugate(t) != partial_exp_sum(tf, spec, m, **kwargs):
            return False
    return True
