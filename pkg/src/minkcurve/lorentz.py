"""Vector algebra of Minkowski 4-space with signature (-, +, +, +).

Vectors are plain float64 numpy arrays whose last axis has length 4, so every
function here also works on stacks of vectors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ZeroScale

METRIC = np.array([-1.0, 1.0, 1.0, 1.0])
EPS_NULL = 1e-10

E1 = np.array([1.0, 0.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0, 0.0])
E4 = np.array([0.0, 0.0, 0.0, 1.0])


def vec4(x1, x2, x3, x4) -> np.ndarray:
    v = np.array([x1, x2, x3, x4], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector components {v}")
    return v


def pseudo_dot(x, y):
    """-x1*y1 + x2*y2 + x3*y3 + x4*y4 along the last axis."""
    return np.sum(METRIC * np.asarray(x, float) * np.asarray(y, float), axis=-1)


def pseudo_norm(x):
    return np.sqrt(np.abs(pseudo_dot(x, x)))


class Causal(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


@dataclass(frozen=True)
class CausalCharacter:
    kind: Causal
    square: float

    @property
    def sign(self) -> int:
        return {Causal.SPACELIKE: 1, Causal.TIMELIKE: -1, Causal.LIGHTLIKE: 0}[self.kind]


def causal_character(x, eps_null: float = EPS_NULL) -> CausalCharacter:
    if eps_null < 0:
        raise ValueError("eps_null must be non-negative")
    q = float(pseudo_dot(x, x))
    if q > eps_null:
        kind = Causal.SPACELIKE
    elif q < -eps_null:
        kind = Causal.TIMELIKE
    else:
        kind = Causal.LIGHTLIKE
    return CausalCharacter(kind, q)


def triple_cross_components(x, y, z):
    """Cofactor expansion of the formal determinant with first row (-e1, e2, e3, e4).

    ``x``, ``y`` and ``z`` are sequences of four components; the components can
    be anything supporting ``*``, ``+`` and ``-`` (floats, arrays, series).
    """
    def det3(a, b, c):
        # columns a, b, c of the three argument rows
        return (x[a] * (y[b] * z[c] - y[c] * z[b])
                - x[b] * (y[a] * z[c] - y[c] * z[a])
                + x[c] * (y[a] * z[b] - y[b] * z[a]))

    m1 = det3(1, 2, 3)
    m2 = det3(0, 2, 3)
    m3 = det3(0, 1, 3)
    m4 = det3(0, 1, 2)
    return [-m1, -m2, m3, -m4]


def triple_cross(x1, x2, x3) -> np.ndarray:
    x1, x2, x3 = (np.asarray(v, float) for v in (x1, x2, x3))
    comps = triple_cross_components(
        [x1[..., i] for i in range(4)],
        [x2[..., i] for i in range(4)],
        [x3[..., i] for i in range(4)],
    )
    return np.stack(comps, axis=-1)


def apply_homothety(x, lam: float) -> np.ndarray:
    if lam == 0:
        raise ZeroScale("homothety coefficient must be non-zero")
    return lam * np.asarray(x, float)
