"""Partial zeta functions, exponential sums and their p-adic estimates over
towers of finite fields."""

from .closed_forms import (CurveSpec, affine_space_zeta, conjecture_sweep, curve_exponents,
                           curve_zeta_closed_form, galois_consistency, galois_sweep,
                           hyperplane_zeta, gcd_count)
from .cyclotomic import CycloNumber, cyclotomic_poly
from .errors import (ConjectureViolation, DegreeCapError, InconsistencyError, ParseError,
                     PartialZetaError, PrecisionError, SizeError, ValidationError)
from .exp_sums import (CharacterSpec, L_function, mixed_char_sum, partial_exp_sum,
                       sum_sequence, verify_L_bound)
from .finite_fields import GF, FieldTower, TowerSpec, build_tower, galois_field
from .padic_estimates import (BoundReport, PadicElt, PadicRing, digit_sum, gauss_coefficient,
                              newton_polygon, omega_bound, p_weight, pi_adic_valuation,
                              teichmuller_lift, verify_divisibility)
from .parser import format_poly, parse_poly
from .point_counting import (MultiPoly, PolySystem, count_fp, count_points, count_sequence,
                             restrict_scalars)
from .rational_reconstruction import RationalFn, berlekamp_massey, reconstruct

__version__ = "0.1.0"
