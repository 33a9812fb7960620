"""Curve description documents (JSON).

A document names one curve in one of three ways::

    {"name": "w", "kind": "expression",
     "components": ["sinh(t)", "cosh(t)", "sqrt(2)*cos(t)", "sqrt(2)*sin(t)"],
     "domain": [0, 2], "samples": 100, "tolerances": {"tol": 1e-6}}

    {"kind": "builtin", "family": "spacelike_w", "params": {"a": 1, "b": 1.41421356}}

    {"kind": "samples", "data": "helix.csv"}

Family parameters may also be given as top-level keys of a builtin document.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import expr as ex
from .curves import (FAMILIES, CurveSource, ExpressionCurve, Tolerances, builtin_family,
                     load_samples_csv)
from .errors import FileError, ParseError, SpecValidationError

KINDS = ("expression", "builtin", "samples")
TOLERANCE_KEYS = ("tol", "eps_null", "eps_deg", "fd_step")
_COMMON = {"name", "kind", "domain", "samples", "tolerances"}
_PAYLOAD = {"expression": {"components"}, "builtin": {"family", "params"}, "samples": {"data"}}
DEFAULT_SAMPLES = 100
MIN_SAMPLES = 20


@dataclass(frozen=True)
class CurveSpecDocument:
    name: str
    kind: str
    components: tuple[str, ...] | None = None
    family: str | None = None
    params: dict = field(default_factory=dict)
    data: Path | None = None
    domain: tuple[float, float] | None = None
    samples: int = DEFAULT_SAMPLES
    tolerances: Tolerances = Tolerances()

    def build_source(self) -> CurveSource:
        if self.kind == "expression":
            return ExpressionCurve(self.components, self.domain, name=self.name)
        if self.kind == "builtin":
            src = builtin_family(self.family, self.params, self.domain)
            src.name = self.name
            return src
        src = load_samples_csv(self.data, name=self.name)
        if self.domain is not None:
            lo, hi = src.domain
            if self.domain[0] < lo or self.domain[1] > hi:
                raise SpecValidationError("domain", f"must lie inside the sample range [{lo}, {hi}]")
            src.domain = self.domain
        return src


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SpecValidationError(where, f"expected a finite number, got {value!r}")
    return float(value)


def _domain(value) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise SpecValidationError("domain", "expected [t_min, t_max]")
    lo, hi = (_number(v, f"domain[{i}]") for i, v in enumerate(value))
    if not hi > lo:
        raise SpecValidationError("domain", f"empty interval [{lo}, {hi}]")
    return lo, hi


def _tolerances(value) -> Tolerances:
    if not isinstance(value, dict):
        raise SpecValidationError("tolerances", "expected an object")
    out = {}
    for key, v in value.items():
        if key not in TOLERANCE_KEYS:
            raise SpecValidationError(f"tolerances.{key}", f"unknown key; allowed {list(TOLERANCE_KEYS)}")
        x = _number(v, f"tolerances.{key}")
        if x <= 0:
            raise SpecValidationError(f"tolerances.{key}", "must be positive")
        out[key] = x
    return Tolerances().replace(**out)


def curve_spec_from_dict(doc, base_dir: Path | str = ".", default_name: str = "curve") -> CurveSpecDocument:
    if not isinstance(doc, dict):
        raise SpecValidationError("<document>", "top level must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecValidationError("kind", f"expected one of {list(KINDS)}, got {kind!r}")
    name = doc.get("name", default_name)
    if not isinstance(name, str) or not name:
        raise SpecValidationError("name", "expected a non-empty string")

    extra_params = {}
    for key in doc:
        if key in _COMMON or key in _PAYLOAD[kind]:
            continue
        other = [k for k, keys in _PAYLOAD.items() if key in keys]
        if other:
            raise SpecValidationError(key, f"belongs to kind {other[0]!r}, not {kind!r}")
        family_params = FAMILIES[doc["family"]].defaults if doc.get("family") in FAMILIES else {}
        if kind == "builtin" and key in family_params:
            extra_params[key] = doc[key]
            continue
        raise SpecValidationError(key, "unknown field")

    domain = _domain(doc["domain"]) if "domain" in doc else None
    samples = doc.get("samples", DEFAULT_SAMPLES)
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < MIN_SAMPLES:
        raise SpecValidationError("samples", f"expected an integer >= {MIN_SAMPLES}, got {samples!r}")
    tolerances = _tolerances(doc["tolerances"]) if "tolerances" in doc else Tolerances()
    common = dict(name=name, kind=kind, domain=domain, samples=samples, tolerances=tolerances)

    if kind == "expression":
        comps = doc.get("components")
        if not isinstance(comps, list) or len(comps) != 4:
            raise SpecValidationError("components", "expected a list of 4 expression strings")
        for i, c in enumerate(comps):
            if not isinstance(c, str):
                raise SpecValidationError(f"components[{i}]", "expected a string")
            try:
                ex.parse_expression(c)
            except ParseError as exc:
                raise ParseError(exc.position, exc.message, component=i) from None
        if domain is None:
            raise SpecValidationError("domain", "required for expression curves")
        return CurveSpecDocument(components=tuple(comps), **common)

    if kind == "builtin":
        family = doc.get("family")
        if not isinstance(family, str):
            raise SpecValidationError("family", "expected a family name")
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise SpecValidationError("params", "expected an object")
        params = {**params, **extra_params}
        params = {k: _number(v, f"params.{k}") for k, v in params.items()}
        builtin_family(family, params, domain)     # raises UnknownFamily / BadParams
        return CurveSpecDocument(family=family, params=params, **common)

    data = doc.get("data")
    if not isinstance(data, str) or not data:
        raise SpecValidationError("data", "expected a CSV path")
    return CurveSpecDocument(data=(Path(base_dir) / data), **common)


def load_curve_spec(path) -> CurveSpecDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecValidationError("<document>", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return curve_spec_from_dict(doc, path.parent, default_name=path.stem)
