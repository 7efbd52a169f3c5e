"""Command-line interface: ``partialzeta <command> [options]``.

Every run prints its resolved configuration next to the result. Exit codes:
0 success, 1 validation error, 2 cap or precision exhausted, 3 a
mathematical-consistency check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .closed_forms import (CurveSpec, conjecture_sweep, curve_exponents, curve_zeta_closed_form,
                           galois_sweep, gcd_count)
from .cyclotomic import CycloNumber
from .errors import DegreeCapError, PartialZetaError, SizeError, ValidationError
from .exp_sums import mixed_char_sum, partial_exp_sum, twisted_bound, verify_L_bound
from .finite_fields import DEFAULT_ENUM_CAP, TowerSpec, factorize, galois_field
from .padic_estimates import (INF, check_slopes, gauss_coefficient, verify_divisibility,
                              zeta_slope_bound, pi_adic_valuation)
from .parser import format_poly, parse_poly
from .point_counting import DEFAULT_WORK_CAP, PolySystem, affordable_levels, count_points
from .rational_reconstruction import (DEFAULT_GUARD, RationalFn, berlekamp_massey,
                                      factor_over_q, reconstruct)
from .sweeps import divisibility_sweep, expsum_sweep, parse_ranges, rescalars_sweep

MIN_AUTO_GUARD = 2
MAX_AUTO_TERMS = 64


@dataclass
class JobConfig:
    command: str
    p: int | None = None
    a: int | None = 1
    d: tuple = ()
    polys: tuple = ()
    m: int | None = None
    terms: int | None = None
    degree_cap: int | None = None
    guard: int | None = None
    enum_cap: int = DEFAULT_ENUM_CAP
    work_cap: int = DEFAULT_WORK_CAP
    precision: int | None = None
    format: str = "json"
    threads: int = 1
    options: dict = field(default_factory=dict)

    def echo(self) -> dict:
        """The resolved config as printed; thread count is left out so output
        does not depend on it."""
        out = asdict(self)
        out.pop("threads")
        out.pop("format")
        out["d"] = list(self.d)
        out["polys"] = list(self.polys)
        opts = out.pop("options")
        out.update(opts)
        return {k: v for k, v in sorted(out.items()) if v is not None and v != []}


# -- argument handling ------------------------------------------------------


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}")


def _add_common(sp, tower=True, poly=True):
    if tower:
        sp.add_argument("--p", type=int, help="characteristic")
        sp.add_argument("--a", type=int, default=1, help="q = p^a")
        sp.add_argument("--d", type=str, help="comma-separated d_1,...,d_n")
    if poly:
        sp.add_argument("--poly", action="append", default=[], help="polynomial (repeatable)")
        sp.add_argument("--poly-file", help="file with one polynomial per line")
    sp.add_argument("--m", type=int)
    sp.add_argument("--terms", type=int)
    sp.add_argument("--degree-cap", type=int)
    sp.add_argument("--guard", type=int)
    sp.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    sp.add_argument("--work-cap", type=int, default=DEFAULT_WORK_CAP)
    sp.add_argument("--precision", type=int)
    sp.add_argument("--format", choices=("json", "tsv", "human"), default="json")
    sp.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="partialzeta",
                                 description="Partial zeta functions over finite field towers.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("count", "point counts N_1..N_m"),
                        ("zeta", "reconstruct the partial zeta function"),
                        ("bounds", "divisibility and slope bounds"),
                        ("expsum", "partial exponential / mixed character sums"),
                        ("lfunction", "reconstruct the L-function of f")):
        sp = sub.add_parser(name, help=help_)
        _add_common(sp)
        if name in ("expsum", "lfunction"):
            sp.add_argument("--b", default="1", help="additive twist, a field constant")
        if name == "expsum":
            sp.add_argument("--chi", help="multiplicative exponents e_1,...,e_r")
    sp = sub.add_parser("curve", help="closed form for y = x^n")
    _add_common(sp, tower=False, poly=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--d", type=str, required=True, help="d_1,d_2")
    sp = sub.add_parser("gauss", help="Stickelberger table of Gauss coefficients")
    _add_common(sp, poly=False)
    sp = sub.add_parser("sweep", help="conjecture and consistency sweeps (JSON lines)")
    sp.add_argument("kind", choices=("conjecture", "galois", "divisibility", "rescalars", "expsum"))
    _add_common(sp, tower=False, poly=False)
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--a-max", type=int, default=5)
    sp.add_argument("--d-max", type=int, default=4)
    sp.add_argument("--qs", type=str, default="2,3,4,5,7")
    sp.add_argument("--count", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--ranges", type=str, help="e.g. 'primes=2,3;a_max=2;n_max=3'")
    return ap


def resolve(args: argparse.Namespace) -> JobConfig:
    cfg = JobConfig(command=args.command, m=args.m, terms=args.terms,
                    degree_cap=args.degree_cap, guard=args.guard, enum_cap=args.enum_cap,
                    work_cap=args.work_cap, precision=args.precision, format=args.format,
                    threads=args.threads)
    if cfg.threads < 1 or cfg.enum_cap < 1 or cfg.work_cap < 1:
        raise ValidationError("caps and thread counts must be positive")
    for key in ("m", "terms", "degree_cap", "guard", "precision"):
        v = getattr(cfg, key)
        if v is not None and v < (1 if key in ("m", "terms", "precision") else 0):
            raise ValidationError(f"--{key.replace('_', '-')} out of range: {v}")
    cmd = args.command
    if cmd == "curve":
        d = _int_list(args.d)
        if len(d) != 2:
            raise ValidationError("--d for curve needs exactly d_1,d_2")
        cfg.d = d
        cfg.a = None
        cfg.options = {"n": args.n, "q": args.q}
        return cfg
    if cmd == "sweep":
        opts = {"kind": args.kind, "seed": args.seed}
        if args.kind == "conjecture":
            opts.update(n_max=args.n_max, a_max=args.a_max, d_max=args.d_max)
        elif args.kind == "galois":
            opts.update(n_max=args.n_max, qs=list(_int_list(args.qs)), d_max=args.d_max)
        else:
            default = {"divisibility": 500, "rescalars": 100, "expsum": 200}[args.kind]
            opts.update(count=args.count or default)
            if args.ranges:
                opts["ranges"] = args.ranges
        cfg.a = None
        cfg.options = opts
        return cfg
    if args.p is None or args.d is None:
        raise ValidationError("--p and --d are required")
    if len(factorize(args.p)) != 1 or factorize(args.p) != {args.p: 1}:
        raise ValidationError(f"--p {args.p} is not prime")
    if args.a < 1:
        raise ValidationError("--a must be >= 1")
    cfg.p, cfg.a, cfg.d = args.p, args.a, _int_list(args.d)
    if not cfg.d or min(cfg.d) < 1:
        raise ValidationError("--d needs positive integers")
    if cmd == "gauss":
        if TowerSpec(cfg.p, cfg.a, cfg.d).ambient_size > cfg.enum_cap:
            raise SizeError("ambient field exceeds the enumeration cap")
        return cfg
    texts = list(args.poly)
    if args.poly_file:
        try:
            with open(args.poly_file) as fh:
                texts += [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        except OSError as exc:
            raise ValidationError(f"cannot read --poly-file: {exc}")
    if cmd in ("expsum", "lfunction") and len(texts) != 1:
        raise ValidationError(f"{cmd} takes exactly one polynomial")
    spec = TowerSpec(cfg.p, cfg.a, cfg.d)
    if spec.ambient_size > cfg.enum_cap:
        raise SizeError(f"ambient field of size {cfg.p}^{spec.degree} exceeds the enumeration cap")
    F = galois_field(cfg.p, cfg.a * spec.d)
    cfg.polys = tuple(format_poly(parse_poly(t, len(cfg.d), F), F) for t in texts)
    if cmd in ("expsum", "lfunction"):
        b = parse_poly(args.b, 1, F)
        if b.degree > 0 or b.is_zero():
            raise ValidationError("--b must be a nonzero field constant")
        cfg.options = {"b": format_poly(b, F)}
        if cmd == "expsum" and args.chi:
            cfg.options["chi"] = list(_int_list(args.chi))
    return cfg


# -- helpers ---------------------------------------------------------------


def _tower(cfg: JobConfig):
    spec = TowerSpec(cfg.p, cfg.a, cfg.d)
    return spec, galois_field(cfg.p, cfg.a * spec.d)


def _system(cfg: JobConfig) -> PolySystem:
    spec, F = _tower(cfg)
    return PolySystem(spec, tuple(parse_poly(t, spec.n, F) for t in cfg.polys))


def _caps(cfg):
    return {"enum_cap": cfg.enum_cap, "work_cap": cfg.work_cap}


def _num(v):
    if v == INF:
        return "inf"
    if isinstance(v, Fraction):
        return str(v)
    return v


def _auto_reconstruct(values, cfg: JobConfig):
    """reconstruct with --degree-cap/--guard, or from the recurrence order."""
    N = len(values)
    if cfg.degree_cap is not None:
        guard = DEFAULT_GUARD if cfg.guard is None else cfg.guard
        if N < 2 * cfg.degree_cap + guard:
            raise DegreeCapError(f"{N} affordable terms; degree cap {cfg.degree_cap} with "
                                 f"guard {guard} needs {2 * cfg.degree_cap + guard}")
        return reconstruct(values, cfg.degree_cap, guard), cfg.degree_cap, guard
    _, L = berlekamp_massey([v if isinstance(v, CycloNumber) else Fraction(v) for v in values])
    guard = N - 2 * L if cfg.guard is None else cfg.guard
    if guard < MIN_AUTO_GUARD or N < 2 * L + guard:
        raise DegreeCapError(
            f"{N} terms leave {N - 2 * L} guard terms for a recurrence of order {L}; "
            f"need at least {max(MIN_AUTO_GUARD, guard)}")
    return reconstruct(values, L, guard), L, guard


def _fmt_coeff(c):
    if isinstance(c, CycloNumber):
        terms = [f"{x}" if i == 0 else f"{x}*z^{i}" for i, x in enumerate(c.coeffs) if x]
        return "(" + " + ".join(terms or ["0"]) + ")"
    return str(c)


def format_block(block) -> str:
    parts = []
    for i, c in enumerate(block):
        if not c:
            continue
        mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
        if isinstance(c, CycloNumber):
            parts.append(f"{_fmt_coeff(c)}{mono}" if i else _fmt_coeff(c))
            continue
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = f"{mag}{mono}" if (mag != 1 or not mono) else mono
        parts.append((sign, body))
    out = ""
    for j, part in enumerate(parts):
        if isinstance(part, str):
            out += (" + " if j else "") + part
        else:
            sign, body = part
            out += (f" {sign} " if j else ("-" if sign == "-" else "")) + body
    return f"({out})"


def format_factored(factors) -> str:
    """(1 - T)^2 / (1 - 7T)^3 style."""
    num = [f for f in factors if f.exponent > 0]
    den = [f for f in factors if f.exponent < 0]

    def side(fs):
        if not fs:
            return "1"
        return "".join(format_block(f.block) + (f"^{abs(f.exponent)}" if abs(f.exponent) > 1 else "")
                       for f in fs)

    return side(num) if not den else f"{side(num)} / {side(den)}"


def _zeta_payload(r: RationalFn) -> dict:
    factors = factor_over_q(r)
    return {"rational_function": r.to_json(),
            "factored": [f.to_json() for f in factors],
            "formula": format_factored(factors),
            "total_degree": r.total_degree,
            "unit_factors": [f.to_json() for f in r.unit_factors()]}


# -- commands ---------------------------------------------------------------


def cmd_count(cfg: JobConfig):
    system = _system(cfg)
    M = cfg.m or 1
    counts = [count_points(system, m, threads=cfg.threads, **_caps(cfg)) for m in range(1, M + 1)]
    return {"counts": counts}, 0


def cmd_zeta(cfg: JobConfig):
    system = _system(cfg)
    M = cfg.terms or affordable_levels(system, MAX_AUTO_TERMS, **_caps(cfg))
    if M < 1:
        raise DegreeCapError("no level is affordable within the caps")
    counts = [count_points(system, m, threads=cfg.threads, **_caps(cfg)) for m in range(1, M + 1)]
    r, cap, guard = _auto_reconstruct(counts, cfg)
    out = {"counts": counts, "terms": M, "degree_cap": cap, "guard": guard}
    out.update(_zeta_payload(r))
    return out, 0


def cmd_curve(cfg: JobConfig):
    n, q = cfg.options["n"], cfg.options["q"]
    curve = CurveSpec(n, q, cfg.d[0], cfg.d[1])
    closed = curve_zeta_closed_form(curve)
    system = curve.system()
    M = cfg.m if cfg.m is not None else min(3, affordable_levels(system, 3, **_caps(cfg)))
    checks = []
    ok = True
    closed_counts = closed.counts(max(M, 1))
    for m in range(1, M + 1):
        brute = count_points(system, m, threads=cfg.threads, **_caps(cfg))
        expected = gcd_count(curve, m)
        good = brute == expected == closed_counts[m - 1]
        ok &= good
        checks.append({"m": m, "brute_force": brute, "formula": expected,
                       "closed_form": int(closed_counts[m - 1]), "match": good})
    out = {"c": curve.c, "phi": curve.phi, "exponents": {str(k): v for k, v in curve_exponents(curve).items()},
           "crosscheck": ok, "checked_levels": checks}
    out.update(_zeta_payload(closed))
    out["formula"] = f"{out['formula']} with c={curve.c}"
    return out, 0 if ok else 3


def cmd_bounds(cfg: JobConfig):
    system = _system(cfg)
    report = verify_divisibility(system, threads=cfg.threads, **_caps(cfg))
    out = report.to_json()
    try:
        rho = zeta_slope_bound(system)
    except ValidationError:
        rho = None
    out["rho"] = _num(rho)
    code = 0
    if cfg.terms and rho is not None:
        counts = [count_points(system, m, threads=cfg.threads, **_caps(cfg))
                  for m in range(1, cfg.terms + 1)]
        r, _, _ = _auto_reconstruct(counts, cfg)
        sl = check_slopes(r, system.spec.p, system.spec.a, rho)
        out["slopes"] = sl.extra["slopes"]
        out["slopes_pass"] = sl.passed
        if not sl.passed:
            code = 3
    return out, code


def _one_poly(cfg):
    spec, F = _tower(cfg)
    f = parse_poly(cfg.polys[0], spec.n, F)
    b = parse_poly(cfg.options.get("b", "1"), 1, F).as_dict().get((0,), 1)
    return spec, F, f, b


def cmd_expsum(cfg: JobConfig):
    spec, F, f, b = _one_poly(cfg)
    chi = cfg.options.get("chi")
    if chi:
        res = mixed_char_sum(f, spec, chi, b, K=cfg.precision, **_caps(cfg))
        try:
            bound = twisted_bound(f, spec, chi)
        except ValidationError:
            bound = None
        ok = bound is None or res.ord_q >= bound
        out = {"ord_q": _num(res.ord_q), "determined": res.determined,
               "precision": res.precision, "bound": _num(bound), "pass": ok}
        return out, 0 if ok else 3
    sums = []
    for m in range(1, (cfg.m or 1) + 1):
        S = partial_exp_sum(f, spec, m, b, **_caps(cfg))
        v = pi_adic_valuation(S)
        sums.append({"m": m, "coords": [int(c) for c in S.coeffs],
                     "ord_q": _num(v if v == INF else v / spec.a)})
    out = {"sums": sums}
    try:
        report = verify_L_bound(f, spec, b=b, **_caps(cfg))
        out["bound"] = report.to_json()
        code = 0 if report.passed else 3
    except ValidationError:
        code = 0
    return out, code


def cmd_lfunction(cfg: JobConfig):
    spec, F, f, b = _one_poly(cfg)
    M = cfg.terms
    if M is None:
        M = affordable_levels(PolySystem(spec, (f,)), MAX_AUTO_TERMS, eliminate=False, **_caps(cfg))
    values = [partial_exp_sum(f, spec, m, b, **_caps(cfg)) for m in range(1, M + 1)]
    L, cap, guard = _auto_reconstruct(values, cfg)
    out = {"terms": M, "degree_cap": cap, "guard": guard, "L": L.to_json(),
           "sums": [[int(c) for c in S.coeffs] for S in values]}
    code = 0
    try:
        eta = twisted_bound(f, spec)
        sl = check_slopes(L, spec.p, spec.a, eta)
        out.update({"bound": str(eta), "slopes": sl.extra["slopes"], "pass": sl.passed})
        code = 0 if sl.passed else 3
    except ValidationError:
        pass
    return out, code


def cmd_gauss(cfg: JobConfig):
    spec, F = _tower(cfg)
    rows = []
    ok = True
    for m in range(F.order):
        res = gauss_coefficient(m, F, spec.a, K=cfg.precision, check=False)
        match = res.ord_q == res.expected
        ok &= match
        rows.append({"m": m, "ord_q": str(res.ord_q), "expected": str(res.expected),
                     "match": match, "precision": res.precision})
    return {"field_order": F.order, "rows": rows, "all_match": ok}, 0 if ok else 3


def cmd_sweep(cfg: JobConfig):
    o = cfg.options
    kind = o["kind"]
    if kind == "conjecture":
        rep = conjecture_sweep(o["n_max"], o["a_max"], o["d_max"])
    elif kind == "galois":
        rep = galois_sweep(o["n_max"], tuple(o["qs"]), o["d_max"])
    elif kind == "divisibility":
        rep = divisibility_sweep(o["count"], o["seed"], parse_ranges(o.get("ranges")), cfg.threads)
    elif kind == "rescalars":
        rep = rescalars_sweep(o["count"], o["seed"], parse_ranges(o.get("ranges")))
    else:
        rep = expsum_sweep(o["count"], o["seed"])
    summary = {"records": len(rep.records), "violations": len(rep.violations)}
    if kind == "divisibility":
        summary["vacuous"] = sum(r["vacuous"] for r in rep.records)
    return {"records": rep.records, "summary": summary}, 3 if rep.violations else 0


COMMANDS = {"count": cmd_count, "zeta": cmd_zeta, "curve": cmd_curve, "bounds": cmd_bounds,
            "expsum": cmd_expsum, "lfunction": cmd_lfunction, "gauss": cmd_gauss,
            "sweep": cmd_sweep}


# -- output ----------------------------------------------------------------


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    else:
        yield prefix, obj


def render(cfg: JobConfig, result: dict) -> str:
    echo = cfg.echo()
    if cfg.command == "sweep":
        records = result["records"]
        if cfg.format == "json":
            lines = [json.dumps({"config": echo}, sort_keys=True)]
            lines += [json.dumps(r, sort_keys=True) for r in records]
            lines.append(json.dumps({"summary": result["summary"]}, sort_keys=True))
            return "\n".join(lines) + "\n"
        if cfg.format == "tsv":
            keys = sorted({k for r in records for k in r})
            rows = ["\t".join(keys)]
            rows += ["\t".join(json.dumps(r.get(k)) for k in keys) for r in records]
            return "\n".join(rows) + "\n"
        s = result["summary"]
        return (f"sweep {echo['kind']}: {s['records']} records, {s['violations']} violations"
                + (f", {s['vacuous']} vacuous" if "vacuous" in s else "") + "\n")
    if cfg.format == "json":
        return json.dumps({"command": cfg.command, "config": echo, "result": result},
                          sort_keys=True) + "\n"
    if cfg.format == "tsv":
        rows = [f"config.{k}\t{json.dumps(v)}" for k, v in echo.items()]
        rows += [f"{k}\t{json.dumps(v)}" for k, v in _flatten(result)]
        return "\n".join(rows) + "\n"
    return _human(cfg, echo, result)


def _human(cfg, echo, result) -> str:
    lines = [f"{cfg.command}: " + ", ".join(f"{k}={v}" for k, v in echo.items() if k != "command")]
    if "formula" in result:
        lines.append(f"  Z(T) = {result['formula']}")
    if cfg.command == "curve":
        lines.append("  exponents a_k: " + ", ".join(f"a_{k}={v}" for k, v in result["exponents"].items()))
        lines.append(f"  cross-check on {len(result['checked_levels'])} levels: "
                     + ("ok" if result["crosscheck"] else "FAILED"))
    elif cfg.command == "gauss":
        for row in result["rows"]:
            lines.append(f"  m={row['m']:>4}  ord_q={row['ord_q']:>6}  digit-sum={row['expected']:>6}"
                         f"  {'ok' if row['match'] else 'MISMATCH'}")
    else:
        for k, v in _flatten(result):
            if k not in ("formula",) and not k.startswith(("rational_function", "factored", "L.")):
                lines.append(f"  {k}: {v if not isinstance(v, (list, dict)) else json.dumps(v)}")
    return "\n".join(lines) + "\n"


def load_schema(name: str) -> dict:
    """Checked-in JSON schema for a command's output (``sweep_line`` for sweeps)."""
    from importlib.resources import files

    return json.loads(files("partialzeta").joinpath("schemas", f"{name}.json").read_text())


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = resolve(args)
        result, code = COMMANDS[cfg.command](cfg)
    except PartialZetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render(cfg, result))
    return code


if __name__ == "__main__":
    sys.exit(main())
