"""Frenet apparatus of unit-speed non-null curves in E_1^4.

All four causal cases share one coefficient pattern

    t'  = k1 n
    n'  = mu1 k1 t + mu2 k2 b1
    b1' = mu3 k2 n + mu4 k3 b2
    b2' = mu5 k3 b1

with the sign vector ``mu`` fixed by which frame member is timelike.  For a
timelike tangent the effective signs (1, 1, -1, 1, -1) reproduce the usual
system T' = k1 N, N' = k1 T + k2 B1, B1' = -k2 N + k3 B2, B2' = -k3 B1.

The geometry is computed on truncated Taylor series in the curve parameter,
so curvature derivatives come out exactly alongside the curvatures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import MAX_ORDER, UnitSpeedCurve, d_ds
from .errors import DegenerateCurvature, DegenerateTorsion, NullFrameVector
from .jets import Series, mdot
from .lorentz import triple_cross_components
from .quadrature import gauss_legendre


@dataclass(frozen=True)
class MuSignature:
    case: str
    mu: tuple[int, int, int, int, int]
    eps: tuple[int, int, int, int]

    @property
    def timelike_index(self) -> int:
        return self.eps.index(-1)


SPACELIKE_N_SPACELIKE_B1 = MuSignature("SpacelikeN_SpacelikeB1", (-1, 1, -1, 1, 1), (1, 1, 1, -1))
SPACELIKE_N_TIMELIKE_B1 = MuSignature("SpacelikeN_TimelikeB1", (-1, 1, 1, 1, 1), (1, 1, -1, 1))
TIMELIKE_N = MuSignature("TimelikeN", (1, 1, 1, 1, -1), (1, -1, 1, 1))
TIMELIKE_TANGENT = MuSignature("TimelikeTangent", (1, 1, -1, 1, -1), (-1, 1, 1, 1))

SIGNATURES = (SPACELIKE_N_SPACELIKE_B1, SPACELIKE_N_TIMELIKE_B1, TIMELIKE_N, TIMELIKE_TANGENT)
SIGNATURE_BY_CASE = {sig.case: sig for sig in SIGNATURES}
_CODE = {sig.case: i for i, sig in enumerate(SIGNATURES)}

# per-point status codes of the vectorised core
OK, DEGENERATE_CURVATURE, NULL_NORMAL, DEGENERATE_TORSION, NULL_BINORMAL = range(5)


def signature_for(eps_t: int, eps_n: int, eps_b1: int) -> MuSignature:
    if eps_t < 0:
        return TIMELIKE_TANGENT
    if eps_n < 0:
        return TIMELIKE_N
    if eps_b1 < 0:
        return SPACELIKE_N_TIMELIKE_B1
    return SPACELIKE_N_SPACELIKE_B1


def coefficient_matrix(mu, k1, k2, k3) -> np.ndarray:
    """Matrix A with f' = A f for the frame stacked as rows (t, n, b1, b2)."""
    m1, m2, m3, m4, m5 = mu
    return np.array([
        [0.0, k1, 0.0, 0.0],
        [m1 * k1, 0.0, m2 * k2, 0.0],
        [0.0, m3 * k2, 0.0, m4 * k3],
        [0.0, 0.0, m5 * k3, 0.0],
    ])


@dataclass(frozen=True)
class FrenetApparatus:
    """Frame and curvatures at one arclength value.

    ``frame`` holds (t, n, b1, b2) as rows.  For a planar point (vanishing
    second curvature) ``b1``/``b2`` rows are NaN and ``k3`` is NaN.
    """

    s: float
    frame: np.ndarray
    k1: float
    k2: float
    k3: float
    signature: MuSignature

    @property
    def t(self):
        return self.frame[0]

    @property
    def n(self):
        return self.frame[1]

    @property
    def b1(self):
        return self.frame[2]

    @property
    def b2(self):
        return self.frame[3]

    @property
    def kappas(self) -> tuple[float, float, float]:
        return self.k1, self.k2, self.k3


def _abs_series(q: Series) -> Series:
    return q * np.sign(q.value)


def _euclid(x: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(x * x, axis=-2))[..., 0]


@dataclass
class FrenetJets:
    """Vectorised Frenet data at parameters ``t`` (shape ``(P,)``).

    Frame members and curvatures are Series in the curve parameter, so
    ``d_ds`` gives their arclength derivatives.  Orders available: k1 up to 3,
    k2 and the frame up to 2, k3 up to 1.
    """

    t: np.ndarray
    inv_speed: Series
    frame: list[Series]
    k1: Series
    k2: Series
    k3: Series
    mu: np.ndarray          # (P, 5)
    eps: np.ndarray         # (P, 4)
    case: np.ndarray        # (P,) index into SIGNATURES, -1 when undefined
    status: np.ndarray      # (P,) status code

    def signature(self, i: int) -> MuSignature | None:
        c = int(self.case[i])
        return SIGNATURES[c] if c >= 0 else None

    def frame_values(self) -> np.ndarray:
        """(P, 4, 4): frame member index, then coordinate."""
        return np.stack([f.value for f in self.frame], axis=1)

    def curvature_values(self) -> np.ndarray:
        return np.stack([self.k1.value[:, 0], self.k2.value[:, 0], self.k3.value[:, 0]], axis=1)


def frenet_jets(curve: UnitSpeedCurve, t, eps_deg: float | None = None,
                eps_null: float | None = None, order: int = MAX_ORDER) -> FrenetJets:
    """Frenet data at curve parameters ``t``; degenerate points get a status code."""
    tol = curve.tolerances
    eps_deg = tol.eps_deg if eps_deg is None else eps_deg
    eps_null = tol.eps_null if eps_null is None else eps_null
    t = np.atleast_1d(np.asarray(t, dtype=float))
    alpha, inv_speed = curve.jets(t, order)
    P = t.size
    status = np.zeros(P, dtype=int)

    with np.errstate(all="ignore"):
        tan = d_ds(alpha, inv_speed)
        acc = d_ds(tan, inv_speed)
        acc_e = _euclid(acc.value[..., None])
        q_acc = mdot(acc, acc)
        eps_t = np.full(P, curve.eps_t)
        eps_n = np.where(q_acc.value[:, 0] < 0, -1, 1)
        status[np.abs(q_acc.value[:, 0]) <= eps_null * np.maximum(acc_e**2, 1e-300)] = NULL_NORMAL
        status[acc_e < eps_deg] = DEGENERATE_CURVATURE

        k1 = _abs_series(q_acc).sqrt()
        nrm = acc * k1.reciprocal()
        mu1 = -eps_n / eps_t
        w = d_ds(nrm, inv_speed) - tan.truncate(2) * (k1 * mu1[:, None])
        w_e = _euclid(w.value[..., None])
        q_w = mdot(w, w)
        eps_b1 = np.where(q_w.value[:, 0] < 0, -1, 1)
        fine = status == OK
        status[fine & (np.abs(q_w.value[:, 0]) <= eps_null * np.maximum(w_e**2, 1e-300))] = NULL_BINORMAL
        status[fine & (w_e < eps_deg)] = DEGENERATE_TORSION

        k2 = _abs_series(q_w).sqrt()
        b1 = w * k2.reciprocal()
        r = Series.stack(triple_cross_components(tan.components(), nrm.components(), b1.components()))
        q_r = mdot(r, r)
        eps_b2 = np.where(q_r.value[:, 0] < 0, -1, 1)
        # unit b2 oriented so that det[t, n, b1, b2] = +1
        b2 = r * (_abs_series(q_r).sqrt().reciprocal() * (-eps_b2)[:, None])

        case = np.array([_CODE[signature_for(a, b, c).case] for a, b, c in zip(eps_t, eps_n, eps_b1)])
        mu = np.array([SIGNATURES[c].mu for c in case], dtype=float)
        eps = np.stack([eps_t, eps_n, eps_b1, eps_b2], axis=1).astype(float)
        # the sign of b2 follows from the other three; a mismatch means numerical trouble
        mism = (status == OK) & (eps_b2 != np.array([SIGNATURES[c].eps[3] for c in case]))
        status[mism] = NULL_BINORMAL

        b1p = d_ds(b1, inv_speed)
        k3 = mdot(b1p, b2) * (mu[:, 3] * eps_b2)[:, None]

    bad_frame = status >= DEGENERATE_TORSION
    first_bad = (status == DEGENERATE_CURVATURE) | (status == NULL_NORMAL)
    case = np.where(first_bad, -1, case)
    for arr in (b1.c, b2.c, k2.c, k3.c):
        arr[bad_frame | first_bad] = np.nan
    # a planar point still has k2 = 0 exactly in the ODE sense
    k2.c[status == DEGENERATE_TORSION] = 0.0
    for arr in (k1.c, nrm.c):
        arr[first_bad] = np.nan
    return FrenetJets(t, inv_speed, [tan.truncate(2), nrm.truncate(2), b1.truncate(2), b2.truncate(2)],
                      k1, k2, k3, mu, eps, case, status)


def raise_for_status(code: int, where: str, partial=None) -> None:
    if code == DEGENERATE_CURVATURE:
        raise DegenerateCurvature(f"first curvature vanishes at {where}; the frame is undefined")
    if code == NULL_NORMAL:
        raise NullFrameVector(f"second derivative is lightlike at {where}")
    if code == NULL_BINORMAL:
        raise NullFrameVector(f"first binormal direction is lightlike at {where}")
    if code == DEGENERATE_TORSION:
        raise DegenerateTorsion(f"second curvature vanishes at {where}; the curve is planar there",
                                partial=partial)


def frenet_apparatus(curve: UnitSpeedCurve, s: float) -> FrenetApparatus:
    """Frame (t, n, b1, b2) and curvatures (k1, k2, k3) at arclength ``s``."""
    t = curve.t_of_s(float(s))
    fj = frenet_jets(curve, np.array([t]))
    code = int(fj.status[0])
    if code != OK:
        partial = None
        if code == DEGENERATE_TORSION:
            partial = {"s": float(s), "k1": float(fj.k1.value[0, 0]),
                       "t": fj.frame[0].value[0].copy(), "n": fj.frame[1].value[0].copy(),
                       "signature_partial": (int(fj.eps[0, 0]), int(fj.eps[0, 1]))}
        raise_for_status(code, f"s={float(s):.9g}", partial)
    k1, k2, k3 = fj.curvature_values()[0]
    return FrenetApparatus(float(s), fj.frame_values()[0], float(k1), float(k2), float(k3),
                           fj.signature(0))


# --------------------------------------------------------------------------
# finite-difference stencils measured along the curve

STENCIL = np.array([-2.0, -1.0, 1.0, 2.0])
WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
SECOND_WEIGHTS = np.array([-1.0, 16.0, 16.0, -1.0]) / 12.0   # centre weight -30/12


def stencil_parameters(curve: UnitSpeedCurve, t0: float, h: float, offsets=STENCIL,
                       density=None) -> np.ndarray:
    """Curve parameters ``t_k`` with integral of ``density * speed`` from t0 equal to ``k*h``.

    ``density`` is a vectorised function of t (default 1, giving arclength).
    Points may fall slightly outside the nominal domain; expression curves
    extend analytically there.
    """
    def g(t):
        v = curve.speed(t)
        return v if density is None else v * density(t)

    targets = np.asarray(offsets, dtype=float) * h
    t = t0 + targets / g(np.array([t0]))[0]
    for _ in range(50):
        f = gauss_legendre(g, np.full_like(t, t0), t, 16) - targets
        step = f / g(t)
        t = t - step
        if np.all(np.abs(step) <= 1e-15 * (1.0 + np.abs(t))):
            break
    return t


def _check_stencil(fj: FrenetJets, where: str) -> None:
    for code in fj.status:
        if code != OK:
            raise_for_status(int(code), where)


def frame_residual_from_stencil(frames: np.ndarray, centre: np.ndarray, A: np.ndarray,
                                eps, h: float, scale: float = 1.0) -> float:
    """Max over rows and frame components of the defect of a 5-point derivative.

    ``frames`` is (4 stencil points, 4 members, 4 coords) ordered as STENCIL.
    Each row defect r is measured by its frame coefficients eps_j <r, f_j>,
    divided by ``scale`` (the squared length of the members).
    """
    deriv = np.tensordot(WEIGHTS, frames, axes=(0, 0)) / h
    defect = deriv - A @ centre
    coeffs = np.einsum("ik,jk->ij", defect * np.array([-1.0, 1, 1, 1]), centre) * np.asarray(eps)
    return float(np.max(np.abs(coeffs)) / scale)


def frenet_residual(curve: UnitSpeedCurve, s: float, h: float | None = None,
                    mu_override=None) -> float:
    """Defect of the Frenet system at ``s`` with frame derivatives by central differences.

    ``mu_override`` replaces the sign vector in the right-hand side (used for
    negative controls).
    """
    h = curve.tolerances.fd_step if h is None else h
    t0 = curve.t_of_s(float(s))
    curve = curve.localized(t0)
    ts = stencil_parameters(curve, t0, h)
    fj = frenet_jets(curve, np.concatenate([[t0], ts]))
    _check_stencil(fj, f"s={float(s):.9g}")
    frames = fj.frame_values()
    k1, k2, k3 = fj.curvature_values()[0]
    mu = fj.signature(0).mu if mu_override is None else mu_override
    A = coefficient_matrix(mu, k1, k2, k3)
    return frame_residual_from_stencil(frames[1:], frames[0], A, fj.eps[0], h)
