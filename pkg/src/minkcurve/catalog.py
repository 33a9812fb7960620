"""Reference curves with known classification.

The six builtin families plus two curves embedded in coordinate hyperplanes:
a timelike W-curve in {x3 = 0} and a spacelike twisted cubic in {x1 = 0}.
"""

from __future__ import annotations

from .curves import FAMILIES, CurveSource, ExpressionCurve, builtin_family

HYPERPLANE_TIMELIKE = ("hyperplane_timelike", ("sqrt(2)*sinh(t)", "sqrt(2)*cosh(t)", "0", "t"), (0.0, 2.0))
HYPERPLANE_CUBIC = ("hyperplane_cubic", ("0", "t", "t^2", "t^3"), (0.2, 1.2))

EXPECTED_VERDICTS = {
    "spacelike_w": {"GeneralHelix", "WCurve"},
    "timelike_w": {"GeneralHelix", "WCurve"},
    "hyperplanar_spacelike": {"GeneralHelix", "WCurve", "Hyperplanar"},
    "planar_circle": {"GeneralHelix", "WCurve", "Planar2D", "Hyperplanar"},
    "planar_timelike": {"GeneralHelix", "WCurve", "Planar2D", "Hyperplanar"},
    "nonhelix_control": set(),
    "hyperplane_timelike": {"GeneralHelix", "WCurve", "Hyperplanar"},
    "hyperplane_cubic": {"Hyperplanar"},
}


def catalog_curves() -> dict[str, CurveSource]:
    out: dict[str, CurveSource] = {name: builtin_family(name) for name in FAMILIES}
    for name, comps, dom in (HYPERPLANE_TIMELIKE, HYPERPLANE_CUBIC):
        out[name] = ExpressionCurve(comps, dom, name=name)
    return out
