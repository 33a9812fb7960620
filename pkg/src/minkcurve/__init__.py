"""Frenet and equiform invariants of curves in Minkowski 4-space E_1^4."""

from .classify import (ClassificationReport, CurvatureProfile, HyperplaneFit, build_profile,
                       classify, detect_general_helix, detect_hyperplanar, detect_planar_2d,
                       detect_w_curve, helix_identity_residual)
from .curvedoc import CurveSpecDocument, load_curve_spec
from .curves import (FAMILIES, CurveSource, ExpressionCurve, SampledCurve, Tolerances,
                     UnitSpeedCurve, arclength, builtin_family, derivatives,
                     reparametrize_unit_speed)
from .equiform import (EquiformApparatus, equiform_apparatus, equiform_curvatures_via_frame,
                       equiform_frenet_residual, equiform_parameter, homothety_check)
from .errors import CurveError, KernelError, ValidationError
from .expr import differentiate, eval_expr, parse_expression, simplify, to_text
from .frenet import FrenetApparatus, MuSignature, frenet_apparatus, frenet_residual
from .lorentz import causal_character, pseudo_dot, pseudo_norm, triple_cross
from .runner import run_analyze, run_verify

__version__ = "0.1.0"
