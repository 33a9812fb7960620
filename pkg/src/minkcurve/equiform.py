"""Equiform parameter, scaled frame and equiform curvatures.

With rho = 1/k1 the scaled frame is W_i = rho * f_i and, in the equiform
parameter sigma (d sigma = k1 ds), it obeys

    W1' = K1 W1 + W2
    W2' = mu1 W1 + K1 W2 + mu2 K2 W3
    W3' = mu3 K2 W2 + K1 W3 + mu4 K3 W4
    W4' = mu5 K3 W3 + K1 W4

where K1 = d rho/ds, K2 = k2/k1 and K3 = k3/k1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import UnitSpeedCurve, d_ds
from .errors import DegenerateCurvature, ZeroScale
from .frenet import (OK, SIGNATURES, FrenetJets, MuSignature, frame_residual_from_stencil,
                     frenet_jets, raise_for_status, stencil_parameters)
from .jets import Series
from .quadrature import adaptive_gauss_legendre

_METRIC = np.array([-1.0, 1.0, 1.0, 1.0])


@dataclass(frozen=True)
class EquiformApparatus:
    s: float
    sigma: float
    rho: float
    frame: np.ndarray     # rows W1..W4
    EK1: float
    EK2: float
    EK3: float
    signature: MuSignature

    @property
    def curvatures(self) -> tuple[float, float, float]:
        return self.EK1, self.EK2, self.EK3


@dataclass
class EquiformJets:
    """Equiform data stacked over parameters; Series are in the curve parameter."""

    frenet: FrenetJets
    rho: Series
    K1: Series
    K2: Series
    K3: Series

    @property
    def status(self):
        return self.frenet.status

    def frame_values(self) -> np.ndarray:
        return self.frenet.frame_values() * self.rho.value[:, :, None]

    def curvature_values(self) -> np.ndarray:
        return np.stack([self.K1.value[:, 0], self.K2.value[:, 0], self.K3.value[:, 0]], axis=1)

    def sigma_derivatives(self) -> np.ndarray:
        """(P, 3): dK_i/dsigma = rho dK_i/ds."""
        inv = self.frenet.inv_speed
        rho = self.rho.value[:, 0]
        return np.stack([rho * d_ds(K, inv).value[:, 0] for K in (self.K1, self.K2, self.K3)], axis=1)


def equiform_jets(curve: UnitSpeedCurve, t) -> EquiformJets:
    fj = frenet_jets(curve, t)
    with np.errstate(all="ignore"):
        rho = fj.k1.reciprocal()
        K1 = d_ds(rho, fj.inv_speed)
        K2 = fj.k2 * rho
        K3 = fj.k3 * rho
    return EquiformJets(fj, rho, K1, K2, K3)


# --------------------------------------------------------------------------
# equiform parameter

def _k1_density(curve: UnitSpeedCurve, eps_deg: float):
    def k1(t):
        alpha, inv_speed = curve.jets(t, 2)
        acc = d_ds(d_ds(alpha, inv_speed), inv_speed).value
        val = np.sqrt(np.abs(np.sum(_METRIC * acc * acc, axis=-1)))
        bad = np.sqrt(np.sum(acc * acc, axis=-1)) < eps_deg
        if np.any(bad):
            raise DegenerateCurvature(
                f"first curvature vanishes near t={np.atleast_1d(t)[bad][0]:.6g}")
        return val
    return k1


def sigma_at_parameters(curve: UnitSpeedCurve, t, t0: float | None = None) -> np.ndarray:
    """sigma(t) = integral of k1 ds from ``t0`` (default: domain start), vectorised."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    t0 = curve.domain[0] if t0 is None else t0
    k1 = _k1_density(curve, curve.tolerances.eps_deg)
    integrand = lambda u: k1(u) * curve.speed(u)
    order = np.argsort(t, kind="stable")
    out = np.empty_like(t)
    acc, prev = 0.0, t0
    for i in order:
        acc += adaptive_gauss_legendre(integrand, prev, t[i], tol=curve.tolerances.quad_tol)
        prev = t[i]
        out[i] = acc
    return out


def equiform_parameter(curve: UnitSpeedCurve, s0: float, s: float) -> float:
    """Equiform arclength between arclength values ``s0`` and ``s``."""
    if s == s0:
        return 0.0
    t0, t1 = curve.t_of_s(float(s0)), curve.t_of_s(float(s))
    return float(sigma_at_parameters(curve, np.array([t1]), t0)[0])


# --------------------------------------------------------------------------
# apparatus

def equiform_apparatus(curve: UnitSpeedCurve, s: float) -> EquiformApparatus:
    t = curve.t_of_s(float(s))
    ej = equiform_jets(curve, np.array([t]))
    code = int(ej.status[0])
    if code != OK:
        raise_for_status(code, f"s={float(s):.9g}")
    sigma = float(sigma_at_parameters(curve, np.array([t]))[0])
    EK1, EK2, EK3 = ej.curvature_values()[0]
    return EquiformApparatus(float(s), sigma, float(ej.rho.value[0, 0]), ej.frame_values()[0],
                             float(EK1), float(EK2), float(EK3), ej.frenet.signature(0))


def equiform_coefficient_matrix(mu, K1, K2, K3) -> np.ndarray:
    m1, m2, m3, m4, m5 = mu
    return np.array([
        [K1, 1.0, 0.0, 0.0],
        [m1, K1, m2 * K2, 0.0],
        [0.0, m3 * K2, K1, m4 * K3],
        [0.0, 0.0, m5 * K3, K1],
    ])


def sigma_stencil(curve: UnitSpeedCurve, s: float, h_sigma: float, offsets=None):
    t0 = curve.t_of_s(float(s))
    curve = curve.localized(t0)
    k1 = _k1_density(curve, curve.tolerances.eps_deg)
    kw = {} if offsets is None else {"offsets": offsets}
    ts = stencil_parameters(curve, t0, h_sigma, density=k1, **kw)
    ej = equiform_jets(curve, np.concatenate([[t0], ts]))
    for code in ej.status:
        if code != OK:
            raise_for_status(int(code), f"s={float(s):.9g}")
    return ej


def equiform_frame_derivatives(curve: UnitSpeedCurve, s: float,
                               h_sigma: float | None = None) -> tuple[EquiformApparatus, np.ndarray]:
    """Apparatus at ``s`` and dW_i/dsigma by 5-point central differences."""
    from .frenet import WEIGHTS
    h = curve.tolerances.fd_step if h_sigma is None else h_sigma
    ej = sigma_stencil(curve, s, h)
    W = ej.frame_values()
    deriv = np.tensordot(WEIGHTS, W[1:], axes=(0, 0)) / h
    EK1, EK2, EK3 = ej.curvature_values()[0]
    app = EquiformApparatus(float(s), float("nan"), float(ej.rho.value[0, 0]), W[0],
                            float(EK1), float(EK2), float(EK3), ej.frenet.signature(0))
    return app, deriv


def equiform_curvatures_via_frame(app: EquiformApparatus, frame_derivs, j: int = 1
                                  ) -> tuple[float, float, float]:
    """(K1, K2, K3) recovered from sigma-derivatives of the scaled frame.

    K1 uses member ``j`` (1-based); dividing by <W_j, W_j> keeps the sign right
    for the timelike member.
    """
    if j not in (1, 2, 3, 4):
        raise ValueError("j must be 1, 2, 3 or 4")
    W = np.asarray(app.frame, float)
    D = np.asarray(frame_derivs, float)
    dot = lambda x, y: float(np.sum(_METRIC * x * y))
    mu, eps = app.signature.mu, app.signature.eps
    r2 = app.rho**2
    K1 = dot(D[j - 1], W[j - 1]) / dot(W[j - 1], W[j - 1])
    K2 = dot(D[1], W[2]) / (mu[1] * eps[2] * r2)
    K3 = dot(D[2], W[3]) / (mu[3] * eps[3] * r2)
    return K1, K2, K3


def equiform_frenet_residual(curve: UnitSpeedCurve, s: float, h_sigma: float | None = None,
                             ek2_offset: float = 0.0) -> float:
    """Defect of the equiform Frenet system at ``s``, in frame coefficients.

    ``ek2_offset`` perturbs K2 on the right-hand side (negative control).
    """
    h = curve.tolerances.fd_step if h_sigma is None else h_sigma
    ej = sigma_stencil(curve, s, h)
    W = ej.frame_values()
    K1, K2, K3 = ej.curvature_values()[0]
    A = equiform_coefficient_matrix(SIGNATURES[int(ej.frenet.case[0])].mu, K1, K2 + ek2_offset, K3)
    rho = float(ej.rho.value[0, 0])
    return frame_residual_from_stencil(W[1:], W[0], A, ej.frenet.eps[0], h, scale=rho**2)


# --------------------------------------------------------------------------
# homotheties

@dataclass
class HomothetyReport:
    lam: float
    kappa: tuple[float, float, float]
    rho: float
    K: tuple[float, float, float]
    sigma: float
    points: int
    extras: dict = field(default_factory=dict)

    @property
    def worst(self) -> float:
        return float(max(*self.kappa, self.rho, *self.K, self.sigma))

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "kappa": list(self.kappa), "rho": self.rho,
                "K": list(self.K), "sigma": self.sigma, "points": self.points}


def _nanmax(x) -> float:
    x = np.asarray(x, float)
    x = x[np.isfinite(x)]
    return float(np.max(x)) if x.size else 0.0


def homothety_check(curve: UnitSpeedCurve, lam: float, grid) -> HomothetyReport:
    """Compare invariants of ``curve`` at ``s`` with those of ``lam * curve`` at ``lam * s``."""
    if lam == 0:
        raise ZeroScale("homothety coefficient must be non-zero")
    if lam < 0:
        raise ValueError("homothety coefficient must be positive")
    grid = np.asarray(grid, dtype=float)
    scaled = curve.scaled(lam)
    t = curve.t_of_s(grid)
    ts = scaled.t_of_s(np.clip(lam * grid, 0.0, scaled.length))
    a, b = equiform_jets(curve, t), equiform_jets(scaled, ts)
    ka, kb = a.frenet.curvature_values(), b.frenet.curvature_values()
    Ka, Kb = a.curvature_values(), b.curvature_values()
    sa, sb = sigma_at_parameters(curve, t), sigma_at_parameters(scaled, ts)
    return HomothetyReport(
        lam=float(lam),
        kappa=tuple(_nanmax(np.abs(lam * kb[:, i] - ka[:, i])) for i in range(3)),
        rho=_nanmax(np.abs(b.rho.value[:, 0] / lam - a.rho.value[:, 0])),
        K=tuple(_nanmax(np.abs(Kb[:, i] - Ka[:, i])) for i in range(3)),
        sigma=_nanmax(np.abs(sb - sa)),
        points=int(grid.size),
    )
