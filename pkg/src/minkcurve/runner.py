"""Analysis and verification pipelines behind the command line."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classify import (CurvatureProfile, ClassificationReport, HyperplaneFit, build_profile,
                       classify, helix_identity_residual)
from .curvedoc import CurveSpecDocument
from .curves import Tolerances, UnitSpeedCurve
from .equiform import equiform_frenet_residual, homothety_check
from .errors import DegenerateTorsion, NullFrameVector
from .frenet import frenet_residual

log = logging.getLogger(__name__)

PROFILE_COLUMNS = ("s", "sigma", "k1", "k2", "k3", "EK1", "EK2", "EK3", "case")
FRAME_COLUMNS = ("s",) + tuple(f"f{i}_x{j}" for i in range(1, 5) for j in range(1, 5))
HELIX_STEP = 1e-3
# the identity holds to discretisation error on helices; this multiple of tol separates them
HELIX_FACTOR = 10.0


def fmt(x) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return format(float(x) + 0.0, ".17g")


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


@dataclass
class SuiteResult:
    name: str
    max_residual: float | None
    threshold: float
    points: int
    skipped: list = field(default_factory=list)
    passed: bool = True
    note: str = ""

    def as_dict(self) -> dict:
        return {"max_residual": self.max_residual, "threshold": self.threshold,
                "points": self.points, "skipped": self.skipped, "passed": self.passed,
                "note": self.note}


@dataclass
class AnalysisReport:
    name: str
    kind: str
    causal: str
    case: str
    length: float
    tolerances: Tolerances
    profile: CurvatureProfile
    classification: ClassificationReport
    hyperplane: HyperplaneFit | None
    suites: dict = field(default_factory=dict)
    homothety: list = field(default_factory=list)
    samples_requested: int = 0

    @property
    def verdicts(self) -> list[str]:
        return self.classification.verdict_list()

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites.values()) and all(
            h["passed"] for h in self.homothety)

    def as_dict(self) -> dict:
        return _clean({
            "name": self.name,
            "kind": self.kind,
            "causal_character": self.causal,
            "case": self.case,
            "arclength": self.length,
            "tolerances": self.tolerances.__dict__,
            "samples_requested": self.samples_requested,
            "rows": len(self.profile),
            "dropped": [{"s": s, "reason": r} for s, r in self.profile.dropped],
            "verdicts": self.verdicts,
            "evidence": self.classification.evidence,
            "thresholds": self.classification.thresholds,
            "hyperplane": None if self.hyperplane is None else self.hyperplane.as_dict(),
            "suites": {k: v.as_dict() for k, v in self.suites.items()},
            "homothety": self.homothety,
            "passed": self.passed,
        })


def interior_grid(curve: UnitSpeedCurve, n: int) -> np.ndarray:
    """Arclength points away from the ends, so finite-difference stencils stay near the domain."""
    return np.linspace(0.05, 0.95, n) * curve.length


def run_suite(name: str, fn, curve: UnitSpeedCurve, grid, threshold: float) -> SuiteResult:
    values, skipped = [], []
    for s in grid:
        try:
            values.append(fn(curve, float(s)))
        except (DegenerateTorsion, NullFrameVector) as exc:
            skipped.append({"s": float(s), "reason": type(exc).__name__})
    if not values:
        return SuiteResult(name, None, threshold, 0, skipped, True,
                           "frame undefined on the whole grid; suite not applicable")
    worst = float(max(values))
    return SuiteResult(name, worst, threshold, len(values), skipped, worst <= threshold)


def residual_suites(curve: UnitSpeedCurve, grid, classification: ClassificationReport) -> dict:
    tol = curve.tolerances
    h = tol.fd_step
    suites = {
        "frenet": run_suite("frenet", lambda c, s: frenet_residual(c, s, h), curve, grid, tol.tol),
        "equiform_frenet": run_suite("equiform_frenet",
                                     lambda c, s: equiform_frenet_residual(c, s, h),
                                     curve, grid, tol.tol),
    }
    helix = run_suite("helix_identity", lambda c, s: helix_identity_residual(c, s, HELIX_STEP),
                      curve, grid, HELIX_FACTOR * tol.tol)
    is_helix = "GeneralHelix" in classification
    if helix.max_residual is not None:
        holds = helix.max_residual <= helix.threshold
        # the identity must hold exactly when the constancy test says helix
        helix.passed = holds == is_helix
        helix.note = "identity holds" if holds else "not a helix"
        if not helix.passed:
            helix.note += " (disagrees with the constancy test)"
    suites["helix_identity"] = helix
    return suites


def _homothety(curve: UnitSpeedCurve, lambdas, points: int = 50) -> list[dict]:
    threshold = 0.1 * curve.tolerances.tol
    out = []
    for lam in lambdas:
        rep = homothety_check(curve, lam, interior_grid(curve, points))
        d = rep.as_dict()
        d["threshold"] = threshold
        d["passed"] = rep.worst <= threshold
        out.append(d)
    return out


def _analysis(spec: CurveSpecDocument, tolerances: Tolerances | None, grid_points: int,
              lambdas) -> AnalysisReport:
    tol = tolerances or spec.tolerances
    curve = UnitSpeedCurve(spec.build_source(), tol)
    profile = build_profile(curve, spec.samples)
    report, fit = classify(curve, profile, tol.tol)
    grid = interior_grid(curve, grid_points)
    return AnalysisReport(
        name=spec.name, kind=spec.kind, causal=curve.causal.value,
        case=profile.signature_case, length=curve.length, tolerances=tol,
        profile=profile, classification=report, hyperplane=fit,
        suites=residual_suites(curve, grid, report),
        homothety=_homothety(curve, lambdas), samples_requested=spec.samples,
    )


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")


def write_outputs(report: AnalysisReport, out_dir, fmt_: str = "csv") -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prof = report.profile
    prof_rows = list(prof.rows())
    frame_rows = [(s, *f.ravel()) for s, f in zip(prof.s, prof.frames)]
    written = []
    if fmt_ == "csv":
        _write_csv(out / "profile.csv", PROFILE_COLUMNS, prof_rows)
        _write_csv(out / "frame.csv", FRAME_COLUMNS, frame_rows)
        written += [out / "profile.csv", out / "frame.csv"]
    elif fmt_ == "json":
        for fname, cols, rows in (("profile.json", PROFILE_COLUMNS, prof_rows),
                                  ("frame.json", FRAME_COLUMNS, frame_rows)):
            data = [dict(zip(cols, r)) for r in rows]
            (out / fname).write_text(json.dumps(_clean(data), indent=1) + "\n")
            written.append(out / fname)
    else:
        raise ValueError(f"unknown output format {fmt_!r}")
    (out / "report.json").write_text(json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n")
    written.append(out / "report.json")
    return written


def run_analyze(spec: CurveSpecDocument, out_dir=None, format: str = "csv",
                tolerances: Tolerances | None = None) -> AnalysisReport:
    """Profile, classify and lightly verify a curve; write files when ``out_dir`` is given."""
    report = _analysis(spec, tolerances, grid_points=10, lambdas=[2.0])
    if out_dir is not None:
        write_outputs(report, out_dir, format)
    return report


def run_verify(spec: CurveSpecDocument, lambda_list=(2.0,),
               tolerances: Tolerances | None = None) -> AnalysisReport:
    """Residual suites over the full interior grid plus homothety checks for each lambda."""
    return _analysis(spec, tolerances, grid_points=spec.samples, lambdas=list(lambda_list))
