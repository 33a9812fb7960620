"""Curve classification from equiform curvature profiles.

A curve is a general helix when K2 and K3 are constant, a W-curve when in
addition K1 vanishes, lies in an affine 2-plane when K2 vanishes and in an
affine hyperplane when K3 vanishes.  Each verdict is backed by the numeric
evidence it was decided on.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .curves import UnitSpeedCurve
from .equiform import sigma_stencil, equiform_jets, sigma_at_parameters
from .errors import (DegenerateCurvature, InsufficientSamples, MixedCausality,
                     TheoremHypothesisViolated)
from .frenet import (DEGENERATE_TORSION, OK, SECOND_WEIGHTS, SIGNATURES)
from .lorentz import METRIC, pseudo_dot

log = logging.getLogger(__name__)

VERDICT_ORDER = ("GeneralHelix", "WCurve", "Planar2D", "Hyperplanar")
PLANAR_CASE = "Planar"
MIN_SAMPLES = 20
RANK_GAP = 1e6

_STATUS_TEXT = {1: "DegenerateCurvature", 2: "NullFrameVector", 4: "NullFrameVector"}


@dataclass
class CurvatureProfile:
    """Curvatures and equiform curvatures on an arclength grid.

    Rows at which the second curvature vanishes are kept with
    ``k2 = k3 = EK2 = EK3 = 0`` and case ``"Planar"``; rows where the frame is
    undefined are dropped and listed in ``dropped``.
    """

    name: str
    s: np.ndarray
    t: np.ndarray
    sigma: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    k3: np.ndarray
    EK1: np.ndarray
    EK2: np.ndarray
    EK3: np.ndarray
    case: list[str]
    frames: np.ndarray                # (n, 4, 4) Frenet frames, NaN rows when planar
    dropped: list[tuple[float, str]] = field(default_factory=list)
    spacing: float = 0.0

    def __len__(self) -> int:
        return int(self.s.size)

    @property
    def planar_rows(self) -> np.ndarray:
        return np.array([c == PLANAR_CASE for c in self.case], dtype=bool)

    @property
    def signature_case(self) -> str:
        cases = {c for c in self.case if c != PLANAR_CASE}
        return cases.pop() if cases else PLANAR_CASE

    def rows(self):
        for i in range(len(self)):
            yield (self.s[i], self.sigma[i], self.k1[i], self.k2[i], self.k3[i],
                   self.EK1[i], self.EK2[i], self.EK3[i], self.case[i])


def build_profile(curve: UnitSpeedCurve, samples: int = 100, grid=None) -> CurvatureProfile:
    """Evaluate the profile on ``grid`` (arclength) or on ``samples`` uniform points of [0, L]."""
    s = np.linspace(0.0, curve.length, samples) if grid is None else np.asarray(grid, float)
    t = curve.t_of_s(s)
    ej = equiform_jets(curve, t)
    status = ej.status
    keep = (status == OK) | (status == DEGENERATE_TORSION)
    if not np.any(keep):
        raise DegenerateCurvature(
            f"frame undefined at every sample of s in [{s[0]:.9g}, {s[-1]:.9g}]")
    dropped = []
    for si, code in zip(s[~keep], status[~keep]):
        dropped.append((float(si), _STATUS_TEXT.get(int(code), "Degenerate")))
        log.warning("dropping sample at s=%.9g: %s", si, dropped[-1][1])
    planar = status[keep] == DEGENERATE_TORSION
    kv = ej.frenet.curvature_values()[keep]
    Kv = ej.curvature_values()[keep]
    for arr in (kv, Kv):
        arr[planar, 1:] = 0.0
    cases = [PLANAR_CASE if p else SIGNATURES[c].case
             for p, c in zip(planar, ej.frenet.case[keep])]
    distinct = {c for c in cases if c != PLANAR_CASE}
    if len(distinct) > 1:
        raise MixedCausality(f"frame changes causal case along the curve: {sorted(distinct)}")
    ts = t[keep]
    return CurvatureProfile(
        name=curve.source.name, s=s[keep], t=ts, sigma=sigma_at_parameters(curve, ts),
        k1=kv[:, 0], k2=kv[:, 1], k3=kv[:, 2], EK1=Kv[:, 0], EK2=Kv[:, 1], EK3=Kv[:, 2],
        case=cases, frames=ej.frenet.frame_values()[keep], dropped=dropped,
        spacing=float(s[1] - s[0]) if s.size > 1 else 0.0,
    )


# --------------------------------------------------------------------------
# reports

@dataclass
class ClassificationReport:
    verdicts: set = field(default_factory=set)
    evidence: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)

    def __contains__(self, item) -> bool:
        return item in self.verdicts

    def verdict_list(self) -> list[str]:
        out = [v for v in VERDICT_ORDER if v in self.verdicts]
        return out or ["None"]

    def merge(self, other: "ClassificationReport") -> "ClassificationReport":
        return ClassificationReport(self.verdicts | other.verdicts,
                                    {**self.evidence, **other.evidence},
                                    {**self.thresholds, **other.thresholds})


@dataclass
class HyperplaneFit:
    p: np.ndarray
    q: np.ndarray
    causal: str                    # spacelike, timelike or lightlike (indeterminate)
    residual: float
    diameter: float

    def as_dict(self) -> dict:
        return {"p": self.p.tolist(), "q": self.q.tolist(), "causal": self.causal,
                "residual": self.residual, "diameter": self.diameter}


@dataclass
class HelixIdentityCoefficients:
    psi1: float
    psi2: float
    psi3: float
    psi4: float


def _require(profile: CurvatureProfile) -> None:
    if len(profile) < MIN_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_SAMPLES} samples, have {len(profile)}")


def _spread(x: np.ndarray) -> tuple[float, float]:
    m = float(np.mean(x))
    return float(np.max(np.abs(x - m))), m


def detect_general_helix(profile: CurvatureProfile, tol: float = 1e-6) -> ClassificationReport:
    _require(profile)
    d2, m2 = _spread(profile.EK2)
    d3, m3 = _spread(profile.EK3)
    ok = d2 <= tol * (1 + abs(m2)) and d3 <= tol * (1 + abs(m3))
    return ClassificationReport(
        {"GeneralHelix"} if ok else set(),
        {"EK2_spread": d2, "EK2_mean": m2, "EK3_spread": d3, "EK3_mean": m3},
        {"tol": tol})


def detect_w_curve(profile: CurvatureProfile, tol: float = 1e-6) -> ClassificationReport:
    helix = detect_general_helix(profile, tol)
    k1max = float(np.max(np.abs(profile.EK1)))
    ok = "GeneralHelix" in helix and k1max <= tol
    rep = ClassificationReport({"WCurve"} if ok else set(), {"EK1_max": k1max}, {"tol": tol})
    return helix.merge(rep)


def _centered_positions(curve: UnitSpeedCurve, n: int = 101):
    t = curve.t_of_s(np.linspace(0.0, curve.length, n))
    x = curve.source.position(t)
    p = x.mean(axis=0)
    return x, p


def detect_planar_2d(profile: CurvatureProfile, tol: float = 1e-6,
                     curve: UnitSpeedCurve | None = None) -> ClassificationReport:
    """K2 test, plus a rank test of the sample positions when ``curve`` is given."""
    _require(profile)
    k2max = float(np.max(np.abs(profile.EK2)))
    all_planar = bool(np.all(profile.planar_rows))
    ok = k2max <= tol or all_planar
    evidence = {"EK2_max": k2max, "all_rows_planar": all_planar}
    if curve is not None:
        x, p = _centered_positions(curve)
        sv = np.linalg.svd(x - p, compute_uv=False)
        # third over second singular value; tiny when the points span a 2-plane
        ratio = float(sv[2] / sv[1]) if sv[1] > 0 else 0.0
        evidence["rank_ratio"] = ratio
        evidence["rank2"] = ratio < 1.0 / RANK_GAP
        ok = ok and ratio < 1.0 / RANK_GAP
    return ClassificationReport({"Planar2D"} if ok else set(), evidence, {"tol": tol})


def fit_hyperplane(curve: UnitSpeedCurve, n: int = 101) -> HyperplaneFit:
    """Affine hyperplane through the sample centroid, normal from Euclidean SVD."""
    x, p = _centered_positions(curve, n)
    _, _, vt = np.linalg.svd(x - p)
    qe = vt[-1]
    # <x, G qe> = x . qe, so G qe is the pseudo-normal of the Euclidean fit
    q = METRIC * qe
    sq = float(pseudo_dot(q, q))
    eps_null = curve.tolerances.eps_null
    if abs(sq) <= eps_null:
        causal = "lightlike"
    else:
        q = q / np.sqrt(abs(sq))
        causal = "spacelike" if sq > 0 else "timelike"
    q = q * np.sign(q[np.argmax(np.abs(q))])
    resid = float(np.max(np.abs(pseudo_dot(x - p, q))))
    diam = float(np.max(np.linalg.norm(x - x[0], axis=1)))
    return HyperplaneFit(p, q, causal, resid, diam)


def detect_hyperplanar(curve: UnitSpeedCurve, profile: CurvatureProfile, tol: float = 1e-6
                       ) -> tuple[ClassificationReport, HyperplaneFit]:
    """Curvature test (K3 = 0) and a geometric hyperplane fit; both must agree."""
    _require(profile)
    k2max = float(np.max(np.abs(profile.EK2)))
    if k2max <= tol or np.all(profile.planar_rows):
        raise TheoremHypothesisViolated(
            "second equiform curvature vanishes identically; use the 2-plane test instead")
    k3max = float(np.max(np.abs(profile.EK3)))
    by_curvature = k3max <= tol
    fit = fit_hyperplane(curve)
    geometric = None if fit.causal == "lightlike" else fit.residual <= tol * fit.diameter
    if geometric is None:
        ok, agree = by_curvature, None
    else:
        agree = geometric == by_curvature
        ok = by_curvature and geometric
    evidence = {"EK3_max": k3max, "curvature_test": by_curvature,
                "geometric_test": "Indeterminate" if geometric is None else geometric,
                "tests_agree": agree, "hyperplane": fit.as_dict()}
    return ClassificationReport({"Hyperplanar"} if ok else set(), evidence, {"tol": tol}), fit


# --------------------------------------------------------------------------
# helix identity

def helix_identity_coefficients(mu, rho_dK1, K1, K2, K3) -> HelixIdentityCoefficients:
    """Coefficients of W3'' + psi1 W3 = psi2 W1 + psi3 W2 + psi4 W4.

    ``rho_dK1`` is rho * dK1/ds, i.e. dK1/dsigma.
    """
    m1, m2, m3, m4, m5 = mu
    return HelixIdentityCoefficients(
        -(rho_dK1 + K1**2 + m2 * m3 * K2**2 + m4 * m5 * K3**2),
        m1 * m3 * K2,
        2 * m3 * K1 * K2,
        2 * m4 * K1 * K3,
    )


def helix_identity_residual(curve: UnitSpeedCurve, s: float, h_sigma: float = 1e-3) -> float:
    """Defect of the general-helix identity at ``s``, with W3'' by central differences in sigma."""
    ej = sigma_stencil(curve, s, h_sigma)
    W = ej.frame_values()
    centre = W[0]
    d2 = (np.tensordot(SECOND_WEIGHTS, W[1:, 2], axes=(0, 0)) - 2.5 * centre[2]) / h_sigma**2
    K1, K2, K3 = ej.curvature_values()[0]
    dK1 = ej.sigma_derivatives()[0, 0]
    sig = SIGNATURES[int(ej.frenet.case[0])]
    c = helix_identity_coefficients(sig.mu, dK1, K1, K2, K3)
    r = d2 + c.psi1 * centre[2] - c.psi2 * centre[0] - c.psi3 * centre[1] - c.psi4 * centre[3]
    rho2 = float(ej.rho.value[0, 0]) ** 2
    coeffs = pseudo_dot(r, centre) * np.asarray(sig.eps) / rho2
    return float(np.max(np.abs(coeffs)))


# --------------------------------------------------------------------------
# combined

def classify(curve: UnitSpeedCurve, profile: CurvatureProfile | None = None,
             tol: float | None = None) -> tuple[ClassificationReport, HyperplaneFit | None]:
    tol = curve.tolerances.tol if tol is None else tol
    profile = build_profile(curve) if profile is None else profile
    report = detect_w_curve(profile, tol)
    report = report.merge(detect_planar_2d(profile, tol, curve))
    fit = None
    if "Planar2D" in report:
        report.verdicts.add("Hyperplanar")
        report.evidence["hyperplanar_from"] = "Planar2D"
    else:
        try:
            hyp, fit = detect_hyperplanar(curve, profile, tol)
            report = report.merge(hyp)
        except TheoremHypothesisViolated as exc:
            report.evidence["hyperplanar_skipped"] = str(exc)
    return report, fit
