"""Valuations of the Gauss coefficients c_m next to the digit-sum prediction.

    python scripts/stickelberger_table.py --p 2 --a 2
"""
import argparse
from fractions import Fraction

from partialzeta.finite_fields import galois_field
from partialzeta.padic_estimates import digit_sum, gauss_coefficient


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--a", type=int, default=1)
    args = ap.parse_args()
    p, a = args.p, args.a
    F = galois_field(p, a)
    print("m\tsigma_p(m)\tord_q c_m\tpredicted\tprecision")
    bad = 0
    for m in range(F.order):
        res = gauss_coefficient(m, F, a, check=False)
        pred = Fraction(digit_sum(m, p), a * (p - 1))
        bad += res.ord_q != pred
        print(f"{m}\t{digit_sum(m, p)}\t{res.ord_q}\t{pred}\t{res.precision}")
    print(f"# {bad} mismatches")


if __name__ == "__main__":
    main()
