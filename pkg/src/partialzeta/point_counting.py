"""Point counts N_m(d) of affine systems over mixed subfield products.

Points are enumerated as products of subfield streams: coordinate i runs over
F_{q_i^m} inside the level-m ambient field, never over the whole ambient
field. Evaluation is vectorised in the log domain (see :mod:`finite_fields`).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import SizeError, ValidationError
from .finite_fields import GF, FieldTower, TowerSpec, build_tower, galois_field

DEFAULT_WORK_CAP = int(os.environ.get("PARTIALZETA_WORK_CAP", 1 << 26))
CHUNK = 1 << 18


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial in n variables with coefficients encoded in F_{q^d}.

    ``terms`` is a sorted tuple of ``(exponent_vector, coefficient)`` pairs with
    distinct exponents and nonzero coefficients.
    """

    n: int
    terms: tuple = ()

    def __post_init__(self):
        seen = set()
        clean = []
        for u, c in self.terms:
            u = tuple(int(e) for e in u)
            if len(u) != self.n or any(e < 0 for e in u):
                raise ValidationError(f"bad exponent vector {u} for {self.n} variables")
            if u in seen:
                raise ValidationError(f"repeated exponent vector {u}")
            seen.add(u)
            if c:
                clean.append((u, int(c)))
        object.__setattr__(self, "terms", tuple(sorted(clean)))

    @classmethod
    def from_dict(cls, n: int, coeffs: dict) -> "MultiPoly":
        return cls(n, tuple(coeffs.items()))

    @classmethod
    def variable(cls, n: int, i: int, coeff: int = 1) -> "MultiPoly":
        u = [0] * n
        u[i] = 1
        return cls(n, ((tuple(u), coeff),))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(u) for u, _ in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {i for u, _ in self.terms for i, e in enumerate(u) if e}

    def evaluate(self, field: GF, point) -> int:
        """Scalar evaluation; coefficients must already live in ``field``."""
        acc = 0
        for u, c in self.terms:
            term = c
            for x, e in zip(point, u):
                if e:
                    term = field.mul(term, field.pow(x, e))
            acc = field.add(acc, term)
        return acc

    def scale(self, field: GF, c: int) -> "MultiPoly":
        return MultiPoly(self.n, tuple((u, field.mul(c, v)) for u, v in self.terms))


@dataclass(frozen=True)
class PolySystem:
    """F_1 = ... = F_r = 0 with F_i over F_{q^d} (level-1 ambient field)."""

    spec: TowerSpec
    polys: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if self.spec.m != 1:
            raise ValidationError("a PolySystem is specified at level m = 1")
        Q = self.spec.p ** (self.spec.a * self.spec.d)
        for f in self.polys:
            if f.n != self.spec.n:
                raise ValidationError(
                    f"polynomial has {f.n} variables but the tower has {self.spec.n}"
                )
            if any(c >= Q for _, c in f.terms):
                raise ValidationError("coefficient outside F_{q^d}")

    @property
    def n(self) -> int:
        return self.spec.n


@dataclass
class CountSequence:
    values: list
    d_list: tuple
    system: PolySystem | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.values)


# -- vectorised evaluation ------------------------------------------------


def _eval_logs(F: GF, terms, var_logs, size: int):
    """Evaluate a polynomial on arrays of variable logs; returns logs."""
    z, n = F.zero_log, F.group_order
    acc = np.full(size, z, dtype=np.int64)
    for u, clog in terms:
        if clog == z:
            continue
        val = np.full(size, clog, dtype=np.int64)
        zero = np.zeros(size, dtype=bool)
        for v, e in enumerate(u):
            if e:
                lv = var_logs[v]
                zero |= lv == z
                val += lv * e
        acc = F.ladd(acc, np.where(zero, z, val % n))
    return acc


def _find_eliminations(system: PolySystem) -> dict:
    """Map poly index -> (var, coeff) for variables solved as c*x_v + H = 0.

    x_v must occur in no other polynomial and only in the single monomial
    c*x_v. Each eliminated variable is then determined by the others, and
    the point counts as a solution iff -H/c lies in x_v's subfield.
    """
    where = {}
    for j, f in enumerate(system.polys):
        for v in f.variables():
            where.setdefault(v, set()).add(j)
    out = {}
    for j, f in enumerate(system.polys):
        for v in sorted(f.variables()):
            if where[v] != {j}:
                continue
            hits = [(u, c) for u, c in f.terms if u[v]]
            if len(hits) == 1 and sum(hits[0][0]) == 1:
                out[j] = (v, hits[0][1])
                break
    return out


class _Counter:
    """Counts zeros of a system at one level, chunk by chunk over a flat index."""

    def __init__(self, system: PolySystem, tower: FieldTower, eliminate: bool):
        self.F = F = tower.field
        self.tower = tower
        elim = _find_eliminations(system) if eliminate else {}
        minus_one = F.group_order // 2 if F.p != 2 else 0
        self.elim = []
        self.checks = []
        for j, f in enumerate(system.polys):
            if j in elim:
                v, c = elim[j]
                rest = [(u, tower.embed_log(cc)) for u, cc in f.terms if not u[v]]
                self.elim.append((v, rest, minus_one - tower.embed_log(c)))
            else:
                self.checks.append([(u, tower.embed_log(c)) for u, c in f.terms])
        gone = {v for v, _, _ in self.elim}
        self.free = [i for i in range(system.n) if i not in gone]
        self.sizes = [tower.subfield_size(i) for i in self.free]
        self.work = math.prod(self.sizes)
        self.n = system.n

    def count_range(self, start: int, stop: int) -> int:
        F = self.F
        z = F.zero_log
        size = stop - start
        idx = np.arange(start, stop, dtype=np.int64)
        var_logs = [None] * self.n
        for i, s in zip(reversed(self.free), reversed(self.sizes)):
            idx, t = np.divmod(idx, s)
            var_logs[i] = np.where(t == 0, z, (t - 1) * self.tower.indices[i])
        ok = np.ones(size, dtype=bool)
        for v, rest, shift in self.elim:
            val = _eval_logs(F, rest, var_logs, size)
            e = self.tower.indices[v]
            ok &= (val == z) | ((val + shift) % F.group_order % e == 0)
        for terms in self.checks:
            ok &= _eval_logs(F, terms, var_logs, size) == z
        return int(np.count_nonzero(ok))


def _ranges(total: int, chunk: int = CHUNK):
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def count_points(system: PolySystem, m: int = 1, *, eliminate: bool = True,
                 threads: int = 1, enum_cap: int | None = None,
                 work_cap: int | None = None) -> int:
    """#{x : x_i in F_{q_i^m}, F_1(x) = ... = F_r(x) = 0}."""
    tower = build_tower(system.spec.at_level(m), enum_cap)
    counter = _Counter(system, tower, eliminate)
    cap = DEFAULT_WORK_CAP if work_cap is None else work_cap
    if counter.work > cap:
        raise SizeError(f"enumeration of {counter.work} points exceeds the work cap {cap}")
    if not system.polys:
        return counter.work
    ranges = _ranges(counter.work)
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return sum(pool.map(lambda r: counter.count_range(*r), ranges))
    return sum(counter.count_range(*r) for r in ranges)


def count_sequence(system: PolySystem, M: int, **kwargs) -> CountSequence:
    values = [count_points(system, m, **kwargs) for m in range(1, M + 1)]
    return CountSequence(values, system.spec.d_list, system)


def affordable_levels(system: PolySystem, M: int, *, enum_cap=None, work_cap=None,
                      eliminate: bool = True) -> int:
    """Largest m0 <= M such that every level 1..m0 fits within the caps."""
    from .finite_fields import DEFAULT_ENUM_CAP

    ecap = DEFAULT_ENUM_CAP if enum_cap is None else enum_cap
    wcap = DEFAULT_WORK_CAP if work_cap is None else work_cap
    spec = system.spec
    elim_vars = set()
    if eliminate and system.polys:
        # eliminations depend only on the shape of the system, not on m
        elim_vars = {v for v, _ in _find_eliminations(system).values()}
    best = 0
    for m in range(1, M + 1):
        s = spec.at_level(m)
        if s.ambient_size > ecap:
            break
        work = math.prod(s.q_i(i) ** m for i in range(s.n) if i not in elim_vars)
        if system.polys and work > wcap:
            break
        best = m
    return best


# -- restriction of scalars -----------------------------------------------


def _reduce_exponent(e: int, p: int) -> int:
    return e if e < p else (e - 1) % (p - 1) + 1


def _solve_mod_p(rows, p):
    """Inverse of a square matrix over F_p (rows as lists)."""
    n = len(rows)
    a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] % p)
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], -1, p)
        a[col] = [v * inv % p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] % p:
                c = a[r][col]
                a[r] = [(x - c * y) % p for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _least_primitive_of_subfield(K: GF, k: int) -> int:
    """Least-encoded generator of the multiplicative group of F_{p^k} inside K."""
    sub_order = K.p**k - 1
    e = K.group_order // sub_order
    best = None
    for t in range(sub_order):
        if math.gcd(t, sub_order) == 1:
            c = K.exp(e * t)
            if best is None or c < best:
                best = c
    return best


def restrict_scalars(system: PolySystem, basis: str = "primitive") -> PolySystem:
    """Rewrite x_i = sum_j z_ij mu_ij over F_p and split on a basis of F_{q^d}.

    Returns a system over F_p in a*(d_1+...+d_n) variables with a*d*r
    polynomials (zero polynomials are kept as empty MultiPolys). ``basis``
    selects the power basis of the least primitive element of each subfield
    (``"primitive"``) or of the canonical subfield generator g^{e_i}
    (``"canonical"``); the F_p-count does not depend on the choice.
    """
    spec = system.spec
    p, a = spec.p, spec.a
    K = galois_field(p, a * spec.d)
    D = K.degree
    offsets = []
    nv = 0
    gens = []
    for i, di in enumerate(spec.d_list):
        k = a * di
        offsets.append(nv)
        nv += k
        if basis == "primitive":
            gens.append(_least_primitive_of_subfield(K, k))
        elif basis == "canonical":
            gens.append(K.exp(K.group_order // (p**k - 1)))
        else:
            raise ValidationError(f"unknown basis {basis!r}")

    if basis == "primitive":
        mu = _least_primitive_of_subfield(K, D)
        rows = [K.digits(K.pow(mu, l)) for l in range(D)]
        to_coords = _solve_mod_p(rows, p)
    else:
        to_coords = [[int(i == j) for j in range(D)] for i in range(D)]

    # linear forms x_i^{p^t} = sum_j z_ij * (beta_i^j)^{p^t}
    def linear_form(i, t):
        k = a * spec.d_list[i]
        out = {}
        for j in range(k):
            u = [0] * nv
            u[offsets[i] + j] = 1
            c = K.pow(K.pow(gens[i], j), p**t)
            if c:
                out[tuple(u)] = c
        return out

    def multiply(f, g):
        out = {}
        for u, c in f.items():
            for v, e in g.items():
                w = tuple(_reduce_exponent(x + y, p) for x, y in zip(u, v))
                out[w] = K.add(out.get(w, 0), K.mul(c, e))
        return {w: c for w, c in out.items() if c}

    result = []
    for F in system.polys:
        expanded = {}
        for u, c in F.terms:
            prod_f = {tuple([0] * nv): c}
            for i, e in enumerate(u):
                t = 0
                while e:
                    e, digit = divmod(e, p)
                    if digit:
                        lf = linear_form(i, t)
                        for _ in range(digit):
                            prod_f = multiply(prod_f, lf)
                    t += 1
            for w, v in prod_f.items():
                expanded[w] = K.add(expanded.get(w, 0), v)
        split = [dict() for _ in range(D)]
        for w, v in expanded.items():
            if not v:
                continue
            digits = K.digits(v)
            coords = [sum(dj * to_coords[j][l] for j, dj in enumerate(digits)) % p
                      for l in range(D)]
            for l, cl in enumerate(coords):
                if cl:
                    split[l][w] = cl
        result.extend(MultiPoly.from_dict(nv, s) for s in split)
    return PolySystem(TowerSpec(p, 1, (1,) * nv, 1), tuple(result))


def count_fp(system: PolySystem) -> int:
    """Zeros in F_p^N of a system with coefficients in F_p, by plain integer arithmetic.

    Independent of the table-driven field code; used as the oracle for the
    restriction of scalars.
    """
    spec = system.spec
    if spec.degree != 1:
        raise ValidationError("count_fp needs a system over the prime field")
    p, N = spec.p, spec.n
    total = 0
    for start, stop in _ranges(p**N):
        idx = np.arange(start, stop, dtype=np.int64)
        coords = []
        for _ in range(N):
            idx, r = np.divmod(idx, p)
            coords.append(r)
        ok = np.ones(stop - start, dtype=bool)
        for f in system.polys:
            val = np.zeros(stop - start, dtype=np.int64)
            for u, c in f.terms:
                term = np.full(stop - start, c % p, dtype=np.int64)
                for x, e in zip(coords, u):
                    for _ in range(e):
                        term = term * x % p
                val = (val + term) % p
            ok &= val == 0
        total += int(np.count_nonzero(ok))
    return total
