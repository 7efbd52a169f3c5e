"""Random and exhaustive instance generators, and the sweeps built on them."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .closed_forms import SweepReport
from .errors import ValidationError
from .exp_sums import partial_exp_sum, twisted_bound
from .finite_fields import TowerSpec, galois_field
from .padic_estimates import INF, omega_bound, p_weight, pi_adic_valuation, v_p
from .parser import format_poly
from .point_counting import MultiPoly, PolySystem, count_fp, count_points, restrict_scalars


@dataclass(frozen=True)
class SystemRanges:
    primes: tuple = (2, 3)
    a_max: int = 2
    n_max: int = 3
    r_max: int = 2
    deg_max: int = 3
    d_max: int = 2
    terms_max: int = 4


def random_poly(rng: random.Random, n: int, deg_max: int, Q: int, terms_max: int = 4,
                allow_constant: bool = True) -> MultiPoly:
    while True:
        coeffs = {}
        for _ in range(rng.randint(1, terms_max)):
            total = rng.randint(0 if allow_constant else 1, deg_max)
            u = [0] * n
            for _ in range(total):
                u[rng.randrange(n)] += 1
            coeffs[tuple(u)] = rng.randrange(1, Q)
        f = MultiPoly.from_dict(n, coeffs)
        if not f.is_zero() and (allow_constant or f.degree > 0):
            return f


def random_system(rng: random.Random, ranges: SystemRanges = SystemRanges()) -> PolySystem:
    p = rng.choice(ranges.primes)
    a = rng.randint(1, ranges.a_max)
    n = rng.randint(1, ranges.n_max)
    d_list = tuple(rng.randint(1, ranges.d_max) for _ in range(n))
    spec = TowerSpec(p, a, d_list)
    Q = p ** (a * spec.d)
    r = rng.randint(1, ranges.r_max)
    polys = tuple(random_poly(rng, n, ranges.deg_max, Q, ranges.terms_max) for _ in range(r))
    return PolySystem(spec, polys)


def describe(system: PolySystem) -> dict:
    s = system.spec
    F = galois_field(s.p, s.a * s.d)
    return {"p": s.p, "a": s.a, "d": list(s.d_list),
            "polys": [format_poly(f, F) for f in system.polys]}


def divisibility_sweep(count: int = 500, seed: int = 0, ranges: SystemRanges = SystemRanges(),
                       threads: int = 1) -> SweepReport:
    """p^omega | N_1 on random systems. Systems of constants only are redrawn."""
    rng = random.Random(seed)
    records, violations = [], []
    while len(records) < count:
        system = random_system(rng, ranges)
        if all(p_weight(f, system.spec.p) == 0 for f in system.polys):
            continue
        N1 = count_points(system, 1, threads=threads)
        omega = omega_bound(system)
        ok = N1 % system.spec.p**omega == 0
        rec = describe(system) | {"N1": N1, "omega": omega, "v_p": _val(v_p(N1, system.spec.p)),
                                  "pass": ok, "vacuous": omega == 0}
        records.append(rec)
        if not ok:
            violations.append(rec)
    return SweepReport(records, violations)


def rescalars_sweep(count: int = 100, seed: int = 1, ranges: SystemRanges = SystemRanges(),
                    basis: str = "primitive") -> SweepReport:
    """N_1 by the tower against the F_p count of the restricted system."""
    rng = random.Random(seed)
    records, violations = [], []
    for _ in range(count):
        system = random_system(rng, ranges)
        N1 = count_points(system, 1)
        restricted = restrict_scalars(system, basis)
        Nfp = count_fp(restricted)
        rec = describe(system) | {"N1": N1, "N_fp": Nfp, "fp_vars": restricted.n,
                                  "fp_polys": len(restricted.polys), "match": N1 == Nfp}
        records.append(rec)
        if N1 != Nfp:
            violations.append(rec)
    return SweepReport(records, violations)


def expsum_sweep(count: int = 200, seed: int = 2, primes=(2, 3, 5), n_max: int = 2,
                 d_max: int = 2, deg_max: int = 3) -> SweepReport:
    """ord_q S_1(d, f) >= (sum d_i)/w_p(f) on random nonconstant f."""
    rng = random.Random(seed)
    records, violations = [], []
    for _ in range(count):
        p = rng.choice(primes)
        n = rng.randint(1, n_max)
        spec = TowerSpec(p, 1, tuple(rng.randint(1, d_max) for _ in range(n)))
        f = random_poly(rng, n, deg_max, p**spec.d, allow_constant=False)
        if p_weight(f, p) == 0:
            continue
        S1 = partial_exp_sum(f, spec)
        v = pi_adic_valuation(S1)
        bound = twisted_bound(f, spec)
        ok = v >= bound
        F = galois_field(p, spec.d)
        rec = {"p": p, "d": list(spec.d_list), "f": format_poly(f, F), "bound": str(bound),
               "ord_q": _val(v), "pass": ok, "equality": v == bound}
        records.append(rec)
        if not ok:
            violations.append(rec)
    return SweepReport(records, violations)


def _val(v):
    if v == INF:
        return "inf"
    return str(v)


def parse_ranges(text: str | None) -> SystemRanges:
    """'primes=2,3;a_max=2;...' -> SystemRanges."""
    if not text:
        return SystemRanges()
    kw = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in SystemRanges.__dataclass_fields__:
            raise ValidationError(f"unknown sweep range {key!r}")
        kw[key] = tuple(int(x) for x in val.split(",")) if key == "primes" else int(val)
    return SystemRanges(**kw)
