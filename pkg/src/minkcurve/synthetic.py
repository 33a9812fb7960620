"""Sampled curves with prescribed constant equiform curvatures.

With constant K2, K3 and K1 = c, the Frenet frame in the equiform parameter
solves f' = B f for a constant matrix B, and rho = rho0 * exp(c sigma).  Both
the frame and the position then have closed forms through matrix exponentials.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .curves import SampledCurve
from .frenet import SIGNATURES, SIGNATURE_BY_CASE

# initial frames (rows t, n, b1, b2) with the right causal pattern and det = +1
_INITIAL_FRAMES = {
    "SpacelikeN_SpacelikeB1": np.array([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0]], float),
    "SpacelikeN_TimelikeB1": np.array([[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]], float),
    "TimelikeN": np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], float),
    "TimelikeTangent": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], float),
}


def frenet_generator(mu, K2: float, K3: float) -> np.ndarray:
    m1, m2, m3, m4, m5 = mu
    return np.array([
        [0.0, 1.0, 0.0, 0.0],
        [m1, 0.0, m2 * K2, 0.0],
        [0.0, m3 * K2, 0.0, m4 * K3],
        [0.0, 0.0, m5 * K3, 0.0],
    ])


def equiform_helix_positions(sigma, K1: float, K2: float, K3: float, rho0: float = 1.0,
                             case: str = "SpacelikeN_SpacelikeB1") -> np.ndarray:
    """Positions alpha(sigma), alpha(0) = 0, of the curve with the given equiform curvatures."""
    sig = SIGNATURE_BY_CASE[case]
    F0 = _INITIAL_FRAMES[case]
    C = frenet_generator(sig.mu, K2, K3) + K1 * np.eye(4)
    Cinv = np.linalg.inv(C)
    e1 = np.array([1.0, 0.0, 0.0, 0.0])
    rows = [rho0 * e1 @ Cinv @ (expm(s * C) - np.eye(4)) @ F0 for s in np.atleast_1d(sigma)]
    return np.array(rows)


def equiform_helix_samples(K1: float = 0.3, K2: float = 0.8, K3: float = 0.5, rho0: float = 1.0,
                           sigma_max: float = 3.0, spacing: float = 0.08,
                           case: str = "SpacelikeN_SpacelikeB1", name: str = "equiform_helix"
                           ) -> SampledCurve:
    """Sampled general helix; the sample parameter is sigma itself."""
    sigma = np.arange(0.0, sigma_max + 0.5 * spacing, spacing)
    return SampledCurve(sigma, equiform_helix_positions(sigma, K1, K2, K3, rho0, case), name=name)


__all__ = ["SIGNATURES", "equiform_helix_positions", "equiform_helix_samples", "frenet_generator"]
