"""Parametric curves in E_1^4 and their arclength reparametrisation."""

from __future__ import annotations

import copy
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import chebyshev as C

from . import expr as ex
from .errors import (BadParams, DomainError, FileError, LightlikeTangent,
                     MixedCausality, SpecValidationError, UnknownFamily, ZeroScale)
from .jets import Series, mdot
from .lorentz import METRIC, Causal
from .quadrature import adaptive_gauss_legendre, gauss_legendre

MAX_ORDER = 5


@dataclass(frozen=True)
class Tolerances:
    eps_null: float = 1e-10    # |<x,x>| at or below this counts as lightlike
    eps_deg: float = 1e-9      # curvature degeneracy threshold
    tol: float = 1e-6          # classification threshold
    fd_step: float = 1e-4      # finite-difference step for residual checks
    quad_tol: float = 1e-10    # absolute quadrature tolerance

    def replace(self, **kw) -> "Tolerances":
        vals = {k: v for k, v in kw.items() if v is not None}
        return Tolerances(**{**self.__dict__, **vals})


# --------------------------------------------------------------------------
# curve sources

class CurveSource:
    """Four coordinate functions of a parameter ``t`` on ``domain``.

    Subclasses implement ``derivs``, returning raw t-derivatives with shape
    ``(P, 4, order + 1)`` for a 1-D array of ``P`` parameters.
    """

    kind: str = ""
    name: str = ""
    domain: tuple[float, float] = (0.0, 1.0)

    def derivs(self, t, order: int = MAX_ORDER) -> np.ndarray:
        raise NotImplementedError

    def position(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self.derivs(t, 0)[..., 0]

    def velocity_sq(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        v = self.derivs(t, 1)[..., 1]
        return np.sum(METRIC * v * v, axis=-1)

    def scaled(self, lam: float) -> "CurveSource":
        return ScaledCurve(self, lam)

    def localized(self, t0: float) -> "CurveSource":
        """A source that is smooth around ``t0``; used for finite-difference stencils."""
        return self


class ExpressionCurve(CurveSource):
    def __init__(self, components, domain, name: str = "", kind: str = "expression"):
        if len(components) != 4:
            raise ValueError("a curve needs exactly four components")
        nodes = [ex.parse_expression(c) if isinstance(c, str) else c for c in components]
        self.components = tuple(nodes)
        self.chains = tuple(ex.derivative_chain(c, MAX_ORDER) for c in nodes)
        self.domain = (float(domain[0]), float(domain[1]))
        self.name = name
        self.kind = kind

    def derivs(self, t, order: int = MAX_ORDER) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((t.size, 4, order + 1))
        for i, chain in enumerate(self.chains):
            for k in range(order + 1):
                out[:, i, k] = ex.eval_expr(chain[k], t)
        return out

    def __repr__(self):
        comps = ", ".join(ex.to_text(c) for c in self.components)
        return f"ExpressionCurve({self.name!r}, [{comps}], domain={self.domain})"


class SampledCurve(CurveSource):
    """Curve known only at strictly increasing samples.

    Derivatives come from the interpolating polynomial through a window of
    ``window`` neighbouring samples centred on the interval containing ``t``.
    """

    kind = "samples"

    def __init__(self, t, x, name: str = "", window: int = 12):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        if t.ndim != 1 or x.shape != (t.size, 4):
            raise ValueError("samples need shapes (N,) and (N, 4)")
        if t.size < 11:
            raise ValueError("at least 11 samples are required")
        if np.any(np.diff(t) <= 0):
            raise ValueError("sample parameters must be strictly increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(x))):
            raise ValueError("samples must be finite")
        self.t = t
        self.x = x
        self.window = min(window, t.size)
        self.domain = (float(t[0]), float(t[-1]))
        self.name = name
        self._fits: dict[int, tuple[float, float, np.ndarray]] = {}

    def _fit(self, start: int):
        fit = self._fits.get(start)
        if fit is None:
            tw = self.t[start:start + self.window]
            centre = 0.5 * (tw[0] + tw[-1])
            half = 0.5 * (tw[-1] - tw[0])
            coef = C.chebfit((tw - centre) / half, self.x[start:start + self.window],
                             self.window - 1)
            fit = self._fits[start] = (centre, half, coef)
        return fit

    def derivs(self, t, order: int = MAX_ORDER) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        n, w = self.t.size, self.window
        interval = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, n - 2)
        starts = np.clip(interval - (w // 2 - 1), 0, n - w)
        out = np.empty((t.size, 4, order + 1))
        for start in np.unique(starts):
            sel = starts == start
            centre, half, coef = self._fit(int(start))
            xs = (t[sel] - centre) / half
            c = coef
            for k in range(order + 1):
                out[sel, :, k] = (C.chebval(xs, c) / half**k).T
                c = C.chebder(c)
        return out

    def localized(self, t0: float) -> "CurveSource":
        t0 = float(t0)
        n, w = self.t.size, self.window
        interval = int(np.clip(np.searchsorted(self.t, t0, side="right") - 1, 0, n - 2))
        start = int(np.clip(interval - (w // 2 - 1), 0, n - w))
        return _WindowPolynomial(self, start)


class _WindowPolynomial(CurveSource):
    """The interpolant of one sample window, used beyond its own interval."""

    def __init__(self, base: SampledCurve, start: int):
        self.base, self.start = base, start
        self.domain, self.kind, self.name = base.domain, base.kind, base.name

    def derivs(self, t, order: int = MAX_ORDER) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        centre, half, c = self.base._fit(self.start)
        xs = (t - centre) / half
        out = np.empty((t.size, 4, order + 1))
        for k in range(order + 1):
            out[:, :, k] = (C.chebval(xs, c) / half**k).T
            c = C.chebder(c)
        return out


class ScaledCurve(CurveSource):
    """Image of a curve under the homothety x -> lam * x."""

    def __init__(self, base: CurveSource, lam: float):
        if lam == 0:
            raise ZeroScale("homothety coefficient must be non-zero")
        self.base = base
        self.lam = float(lam)
        self.domain = base.domain
        self.kind = base.kind
        self.name = f"{base.name}*{lam:g}"

    def derivs(self, t, order: int = MAX_ORDER) -> np.ndarray:
        return self.lam * self.base.derivs(t, order)

    def localized(self, t0: float) -> "CurveSource":
        return ScaledCurve(self.base.localized(t0), self.lam)


# --------------------------------------------------------------------------
# builtin families

@dataclass(frozen=True)
class Family:
    name: str
    template: tuple[str, str, str, str]
    defaults: dict = field(default_factory=dict)
    domain: tuple[float, float] = (0.0, 2.0)
    # (label, function of params returning the residual that must vanish)
    constraint: tuple | None = None


_SQ2 = math.sqrt(2.0)

FAMILIES = {
    f.name: f
    for f in (
        Family("spacelike_w",
               ("{a}*sinh({m}*t)", "{a}*cosh({m}*t)", "{b}*cos({n}*t)", "{b}*sin({n}*t)"),
               {"a": 1.0, "m": 1.0, "b": _SQ2, "n": 1.0}, (0.0, 2.0),
               ("b^2 n^2 - a^2 m^2 = 1",
                lambda p: p["b"]**2 * p["n"]**2 - p["a"]**2 * p["m"]**2 - 1.0)),
        Family("timelike_w",
               ("{a}*sinh({m}*t)", "{a}*cosh({m}*t)", "{b}*cos({n}*t)", "{b}*sin({n}*t)"),
               {"a": _SQ2, "m": 1.0, "b": 1.0, "n": 1.0}, (0.0, 2.0),
               ("a^2 m^2 - b^2 n^2 = 1",
                lambda p: p["a"]**2 * p["m"]**2 - p["b"]**2 * p["n"]**2 - 1.0)),
        Family("hyperplanar_spacelike", ("sinh(t)", "cosh(t)", "sqrt(2)*t", "0")),
        Family("planar_circle", ("0", "cos(t)", "sin(t)", "0"), domain=(0.0, math.pi)),
        Family("planar_timelike", ("sinh(t)", "cosh(t)", "0", "0")),
        Family("nonhelix_control", ("t^2/2", "t", "cos(t)", "sin(t)"), domain=(0.3, 1.3)),
    )
}


def builtin_family(name: str, params: dict | None = None,
                   domain: tuple[float, float] | None = None) -> ExpressionCurve:
    try:
        fam = FAMILIES[name]
    except KeyError:
        raise UnknownFamily(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
    params = dict(params or {})
    unknown = set(params) - set(fam.defaults)
    if unknown:
        raise BadParams(f"{name} takes no parameters {sorted(unknown)}")
    values = {**fam.defaults, **{k: float(v) for k, v in params.items()}}
    if fam.constraint is not None:
        label, residual = fam.constraint
        r = residual(values)
        if abs(r) > 1e-8:
            raise BadParams(f"{name}: constraint {label} violated by {r:.3g}")
    comps = [c.format(**{k: f"({v!r})" for k, v in values.items()}) for c in fam.template]
    return ExpressionCurve(comps, domain or fam.domain, name=name, kind="builtin")


# --------------------------------------------------------------------------
# sampled data files

CSV_HEADER = ["t", "x1", "x2", "x3", "x4"]


def load_samples_csv(path, name: str | None = None) -> SampledCurve:
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise FileError(f"cannot read {path}: {exc}") from exc
    if not rows or [h.strip() for h in rows[0]] != CSV_HEADER:
        raise SpecValidationError("data", f"{path}: header must be {','.join(CSV_HEADER)}")
    try:
        data = np.array([[float(v) for v in row] for row in rows[1:] if row], dtype=float)
    except ValueError as exc:
        raise SpecValidationError("data", f"{path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 5:
        raise SpecValidationError("data", f"{path}: every row needs 5 values")
    try:
        return SampledCurve(data[:, 0], data[:, 1:], name=name or path.stem)
    except ValueError as exc:
        raise SpecValidationError("data", f"{path}: {exc}") from exc


def write_samples_csv(path, t, x) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for ti, xi in zip(t, x):
            w.writerow([format(float(v), ".17g") for v in (ti, *xi)])


# --------------------------------------------------------------------------
# arclength

def _speed_fn(source: CurveSource, eps_null: float):
    def speed(t):
        v = np.sqrt(np.abs(source.velocity_sq(t)))
        if np.any(v < eps_null):
            bad = np.atleast_1d(t)[v < eps_null][0]
            raise LightlikeTangent(f"tangent is lightlike near t={bad:.6g}")
        return v
    return speed


def _check_domain(source: CurveSource, *ts) -> None:
    lo, hi = source.domain
    for t in ts:
        if not lo - 1e-12 <= t <= hi + 1e-12:
            raise DomainError(f"t={t} outside the curve domain [{lo}, {hi}]")


def arclength(source: CurveSource, t0: float, t: float,
              tolerances: Tolerances = Tolerances()) -> float:
    """Integral of the pseudo-norm of the velocity from ``t0`` to ``t``."""
    _check_domain(source, t0, t)
    return adaptive_gauss_legendre(_speed_fn(source, tolerances.eps_null), t0, t,
                                   tol=tolerances.quad_tol)


class UnitSpeedCurve:
    """Arclength reparametrisation of a non-null curve.

    The map s(t) is tabulated on uniform panels (adaptive Gauss-Legendre per
    panel) and refined inside a panel with a fixed 20-point rule; t(s) inverts
    it by bracketed Newton iteration.
    """

    def __init__(self, source: CurveSource, tolerances: Tolerances = Tolerances(),
                 panels: int = 64, check_points: int = 200):
        self.source = source
        self.tolerances = tolerances
        lo, hi = source.domain
        if not hi > lo:
            raise DomainError(f"empty domain {source.domain}")
        grid = np.linspace(lo, hi, check_points)
        q = source.velocity_sq(grid)
        null = np.abs(q) <= tolerances.eps_null
        if np.any(null):
            raise LightlikeTangent(f"tangent is lightlike near t={grid[null][0]:.6g}")
        if np.any(q > 0) and np.any(q < 0):
            flip = grid[1:][np.sign(q[1:]) != np.sign(q[:-1])][0]
            raise MixedCausality(f"tangent changes causal character near t={flip:.6g}")
        self.causal = Causal.SPACELIKE if q[0] > 0 else Causal.TIMELIKE
        self.eps_t = 1 if q[0] > 0 else -1

        self._speed = _speed_fn(source, tolerances.eps_null)
        self._tb = np.linspace(lo, hi, panels + 1)
        pieces = [adaptive_gauss_legendre(self._speed, a, b, tol=tolerances.quad_tol / panels)
                  for a, b in zip(self._tb[:-1], self._tb[1:])]
        self._sb = np.concatenate([[0.0], np.cumsum(pieces)])
        self.length = float(self._sb[-1])

    @property
    def domain(self) -> tuple[float, float]:
        return self.source.domain

    def speed(self, t):
        return self._speed(np.asarray(t, dtype=float))

    def _panel(self, t):
        return np.clip(np.searchsorted(self._tb, t, side="right") - 1, 0, self._tb.size - 2)

    def s_of_t(self, t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t)
        k = self._panel(flat)
        s = self._sb[k] + gauss_legendre(self._speed, self._tb[k], flat, 20)
        return s.reshape(t.shape) if t.ndim else float(s[0])

    def t_of_s(self, s):
        s = np.asarray(s, dtype=float)
        flat = np.atleast_1d(s).copy()
        if np.any(flat < -1e-12) or np.any(flat > self.length + 1e-12):
            raise DomainError(f"s outside [0, {self.length}]")
        k = np.clip(np.searchsorted(self._sb, flat, side="right") - 1, 0, self._tb.size - 2)
        lo, hi = self._tb[k].copy(), self._tb[k + 1].copy()
        frac = (flat - self._sb[k]) / (self._sb[k + 1] - self._sb[k])
        t = lo + frac * (hi - lo)
        for _ in range(60):
            f = self.s_of_t(t) - flat
            lo = np.where(f < 0, t, lo)
            hi = np.where(f > 0, t, hi)
            step = f / self.speed(t)
            new = t - step
            outside = (new <= lo) | (new >= hi)
            new = np.where(outside & (hi > lo), 0.5 * (lo + hi), new)
            done = np.abs(new - t) <= 1e-14 * (1.0 + np.abs(t))
            t = new
            if np.all(done):
                break
        return t.reshape(s.shape) if s.ndim else float(t[0])

    def jets(self, t, order: int = MAX_ORDER) -> tuple[Series, Series]:
        """Position series in t - t_i and 1/speed series at each parameter t_i."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        alpha = Series.from_derivatives(self.source.derivs(t, order))
        vel = alpha.deriv()
        speed = (mdot(vel, vel) * self.eps_t).sqrt()
        return alpha, speed.reciprocal()

    def localized(self, t0: float) -> "UnitSpeedCurve":
        """Same arclength table, source replaced by one smooth around ``t0``."""
        if self.source.localized(t0) is self.source:
            return self
        view = copy.copy(self)
        view.source = self.source.localized(t0)
        view._speed = _speed_fn(view.source, self.tolerances.eps_null)
        return view

    def scaled(self, lam: float) -> "UnitSpeedCurve":
        return UnitSpeedCurve(self.source.scaled(lam), self.tolerances,
                              panels=self._tb.size - 1)


def reparametrize_unit_speed(source: CurveSource,
                             tolerances: Tolerances = Tolerances()) -> UnitSpeedCurve:
    return UnitSpeedCurve(source, tolerances)


def d_ds(f: Series, inv_speed: Series) -> Series:
    """Arclength derivative of a series expressed in the curve parameter."""
    return f.deriv() * inv_speed


def derivatives(curve: UnitSpeedCurve, s: float, max_order: int = 4) -> list[np.ndarray]:
    """alpha'(s), alpha''(s), ... up to ``max_order`` with respect to arclength."""
    if not 1 <= max_order <= MAX_ORDER:
        raise ValueError(f"max_order must lie in 1..{MAX_ORDER}")
    t = curve.t_of_s(s)
    alpha, inv_speed = curve.jets(t, max_order)
    out = []
    f = alpha
    for _ in range(max_order):
        f = d_ds(f, inv_speed)
        out.append(f.value[0].copy())
    return out
