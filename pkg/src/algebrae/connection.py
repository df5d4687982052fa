"""Spread vector fields, the covariant derivative, geodesics and curvature.

A tangent vector ``t`` at ``p`` spreads to the field ``T_x = pi[x] t pi'[x]``.
The analytic formulas are paired with finite-difference evaluators so the
identities can be checked numerically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import CXC, Scalar, to_real
from .errors import (
    BaseMismatchError,
    DegeneratePlaneError,
    GeometryError,
    NonRealSpanError,
    NullGeodesicError,
    ZeroTanceError,
    ZeroTangentError,
)
from .hermitian import ModuleVector, form
from .projective import (
    MetricConvention,
    ProjPoint,
    Tangent,
    g_metric,
    herm_metric,
    parallel_matrix,
    perp_matrix,
    project,
    tance,
)

DEFAULT_STEP = 1e-5
NULL_TOL = 1e-10

VectorField = Callable[[ProjPoint], Tangent]


def _same_base(t: Tangent, s: Tangent) -> Tangent:
    """``s`` re-expressed on ``t``'s representative."""
    try:
        return t._aligned(s)
    except BaseMismatchError:
        raise
    except GeometryError as exc:
        raise BaseMismatchError(str(exc)) from exc


# -- spread fields ----------------------------------------------------------


@dataclass(frozen=True)
class SpreadField:
    source: Tangent

    def __call__(self, x: ProjPoint) -> Tangent:
        return spread_at(self, x)


def spread_at(field: SpreadField | Tangent, x: ProjPoint) -> Tangent:
    t = field.source if isinstance(field, SpreadField) else field
    x.require_regular()
    _, vec = project(x, t.apply(x.rep))
    return Tangent(x, vec, tol=1e-9)


def nabla_spread(t: Tangent, s: Tangent, x: ProjPoint) -> Tangent:
    """Covariant derivative of the spread of ``s`` along the spread of ``t`` at ``x``."""
    s = _same_base(t, s)
    x.require_regular()
    _, t_perp = project(x, t.apply(x.rep))
    s_par, _ = project(x, s.apply(x.rep))
    _, vec = project(x, s.apply(t_perp) - t.apply(s_par))
    return Tangent(x, vec, tol=1e-9)


def _check_step(step: float) -> None:
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step}")


def _shifted(p: ProjPoint, direction: ModuleVector, eps: float) -> ProjPoint:
    return ProjPoint(p.rep + eps * direction)


def nabla_numeric(field: VectorField, t: Tangent, step: float = DEFAULT_STEP) -> Tangent:
    """``(d/de X(p + e t(p)))_p`` by a central difference of operator matrices."""
    _check_step(step)
    p = t.base
    plus = field(_shifted(p, t.vec, step)).matrix()
    minus = field(_shifted(p, t.vec, -step)).matrix()
    deriv = (plus - minus) / (2.0 * step)
    vec = perp_matrix(p) @ deriv @ p.rep.flat
    return Tangent(p, p.space.from_flat(vec), tol=1e-6)


@dataclass(frozen=True)
class ProjectionDerivative:
    numeric: np.ndarray
    analytic: np.ndarray

    @property
    def max_error(self) -> float:
        return float(np.max(np.abs(self.numeric - self.analytic)))


def proj_derivative(t: Tangent, probes=None, step: float = DEFAULT_STEP) -> ProjectionDerivative:
    """Compare ``d/de pi'[p + e tp]`` with ``t + t*`` on probe vectors.

    Probes default to the standard real basis, which compares the full
    operator matrices.
    """
    _check_step(step)
    p = t.base
    if probes is None:
        probe_arr = np.eye(p.space.real_dim)
    else:
        probe_arr = np.array([v.flat for v in probes])

    def at(k):
        return parallel_matrix(_shifted(p, t.vec, k * step))

    # fourth-order central stencil: truncation stays below roundoff at small steps
    deriv = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * step)
    analytic = t.matrix() + t.adjoint_matrix()
    return ProjectionDerivative(probe_arr @ deriv.T, probe_arr @ analytic.T)


def tn_at(t: Tangent, x: ProjPoint) -> Tangent:
    """The spread of ``t`` at ``x`` divided by ``tance(p, x)``."""
    ta = tance(t.base, x)
    if not ta.is_unit():
        raise ZeroTanceError(f"tance({t.base!r}, {x!r}) is not invertible")
    spread = spread_at(t, x)
    return Tangent(x, ta.inverse() * spread.vec, tol=1e-9)


def tn_field(t: Tangent) -> VectorField:
    return lambda x: tn_at(t, x)


# -- curves and brackets ----------------------------------------------------


def curve_velocity(lift: Callable[[float], ModuleVector], theta: float, step: float = 1e-4) -> Tangent:
    """Velocity of ``theta -> [lift(theta)]``: ``pi[c] c'`` on the lifted curve."""
    _check_step(step)
    c = ProjPoint(lift(theta))
    deriv = (lift(theta + step) - lift(theta - step)) / (2.0 * step)
    _, vec = project(c, deriv)
    return Tangent(c, vec, tol=1e-6)


def _lift_field(field: VectorField, v: ModuleVector) -> ModuleVector:
    return field(ProjPoint(v)).vec


def lie_bracket_numeric(
    field_x: VectorField, field_y: VectorField, p: ProjPoint, step: float = DEFAULT_STEP
) -> Tangent:
    """Bracket of two fields at ``p`` through their homogeneous lifts to V."""
    _check_step(step)
    x_p = _lift_field(field_x, p.rep)
    y_p = _lift_field(field_y, p.rep)

    def directional(field, direction):
        plus = _lift_field(field, p.rep + step * direction)
        minus = _lift_field(field, p.rep - step * direction)
        return (plus - minus) / (2.0 * step)

    bracket = directional(field_y, x_p) - directional(field_x, y_p)
    _, vec = project(p, bracket)
    return Tangent(p, vec, tol=1e-6)


def metric_compat_defect(
    t1: Tangent, t2: Tangent, s: Tangent, conv=MetricConvention.PLUS, step: float = DEFAULT_STEP
) -> float:
    """``S<T1,T2> - <nabla_S T1, T2> - <T1, nabla_S T2>`` at ``p``.

    The derivative of the metric is a central difference along
    ``p + e s(p)``; the covariant terms use the analytic formula.
    """
    _check_step(step)
    t2 = _same_base(t1, t2)
    s = _same_base(t1, s)
    p = t1.base

    def metric_at(eps):
        x = _shifted(p, s.vec, eps)
        return g_metric(spread_at(t1, x), spread_at(t2, x), conv)

    deriv = (metric_at(step) - metric_at(-step)) / (2.0 * step)
    n1 = nabla_spread(s, t1, p)
    n2 = nabla_spread(s, t2, p)
    return deriv - g_metric(n1, t2, conv) - g_metric(t1, n2, conv)


# -- geodesics --------------------------------------------------------------


class Family(enum.Enum):
    CIRCULAR = "Circular"
    HYPERBOLIC = "Hyperbolic"
    NULL = "Null"


@dataclass(frozen=True)
class Geodesic:
    """Geodesic through ``base`` with initial direction ``dir``.

    ``base`` and ``dir`` are in normal form: ``|<p,p>| = 1`` and
    ``|<tp,tp>|`` equal to 1 or 0.
    """

    base: ProjPoint
    dir: Tangent
    family: Family
    norms: tuple[float, float]

    def lift(self, theta: float) -> ModuleVector:
        p, tp = self.base.rep, self.dir.vec
        if self.family is Family.CIRCULAR:
            return math.cos(theta) * p + math.sin(theta) * tp
        if self.family is Family.HYPERBOLIC:
            return math.cosh(theta) * p + math.sinh(theta) * tp
        return p + theta * tp

    def lift_derivative(self, theta: float) -> ModuleVector:
        p, tp = self.base.rep, self.dir.vec
        if self.family is Family.CIRCULAR:
            return -math.sin(theta) * p + math.cos(theta) * tp
        if self.family is Family.HYPERBOLIC:
            return math.sinh(theta) * p + math.cosh(theta) * tp
        return tp

    def point(self, theta: float) -> ProjPoint:
        return ProjPoint(self.lift(theta))


def _real_value_of(z: Scalar, what: str) -> float:
    try:
        return to_real(z)
    except GeometryError as exc:
        raise NonRealSpanError(f"{what} = {z!r} is not real") from exc


def make_geodesic(p: ProjPoint, t: Tangent) -> Geodesic:
    """Classify and normalize the geodesic through ``p`` in direction ``t``."""
    if not t.base.rep.allclose(p.rep, atol=0.0):
        t = t.pinned_to(p)
    if t.vec.norm() == 0.0:
        raise ZeroTangentError("geodesic direction is zero")

    pp = _real_value_of(form(p.rep, p.rep), "<p,p>")
    lam = 1.0 / math.sqrt(abs(pp))
    rep, vec = lam * p.rep, lam * t.vec

    mixed = form(vec, rep)
    if mixed.norm() > 1e-9 * max(1.0, vec.norm()):
        raise NullGeodesicError(f"<tp, p> = {mixed!r} is not zero")

    unit_vec = vec / vec.norm()
    if form(unit_vec, unit_vec).norm() < NULL_TOL:
        family, tt = Family.NULL, 0.0
    else:
        tt = _real_value_of(form(vec, vec), "<tp,tp>")
        vec = (1.0 / math.sqrt(abs(tt))) * vec
        tt = math.copysign(1.0, tt)
        family = Family.CIRCULAR if pp * tt > 0 else Family.HYPERBOLIC
    base = ProjPoint(rep)
    return Geodesic(base, Tangent(base, vec, tol=1e-9), family, (math.copysign(1.0, pp), tt))


def geodesic_point(g: Geodesic, theta: float) -> ProjPoint:
    return g.point(theta)


def geodesic_velocity(g: Geodesic, theta: float, step: float = 1e-4) -> Tangent:
    return curve_velocity(g.lift, theta, step)


# -- curvature --------------------------------------------------------------


def curvature(t1: Tangent, t2: Tangent, s: Tangent) -> Tangent:
    """``R(t1,t2)s = -s(t1* t2 - t2* t1) + (t1 t2* - t2 t1*) s`` at the base."""
    t2 = _same_base(t1, t2)
    s = _same_base(t1, s)
    m1, m2, ms = t1.matrix(), t2.matrix(), s.matrix()
    a1, a2 = t1.adjoint_matrix(), t2.adjoint_matrix()
    op = -ms @ (a1 @ m2 - a2 @ m1) + (m1 @ a2 - m2 @ a1) @ ms
    p = t1.base
    return Tangent(p, p.space.from_flat(op @ p.rep.flat), tol=1e-9)


def sectional(t1: Tangent, t2: Tangent, conv=MetricConvention.PLUS, tol: float = 1e-12) -> float:
    """``g(R(t1,t2)t2, t1) / (g11 g22 - g12^2)`` for any spanning pair."""
    t2 = _same_base(t1, t2)
    g11 = g_metric(t1, t1, conv)
    g22 = g_metric(t2, t2, conv)
    g12 = g_metric(t1, t2, conv)
    det = g11 * g22 - g12 * g12
    scale = max(abs(g11 * g22), g12 * g12, t1.vec.norm() ** 2 * t2.vec.norm() ** 2 * 1e-6, 1e-300)
    if abs(det) <= tol * scale:
        raise DegeneratePlaneError(f"plane has degenerate metric (det = {det:.3g})")
    return g_metric(curvature(t1, t2, t2), t1, conv) / det


def sectional_closed_form(
    t1: Tangent, t2: Tangent, conv=MetricConvention.PLUS, tol: float = 1e-9
) -> float:
    """``conv (1 - 3 b^2 / (a1 a2))`` for a g-orthonormal pair.

    ``a_i`` and ``b`` are the Hermitian products without the sign
    convention; ``b^2`` is checked to be real.
    """
    conv = MetricConvention.parse(conv)
    if t1.base.alg == CXC:
        raise ValueError("closed-form sectional curvature needs a real-valued metric")
    t2 = _same_base(t1, t2)
    a1 = _real_value_of(herm_metric(t1, t1), "<t1,t1>")
    a2 = _real_value_of(herm_metric(t2, t2), "<t2,t2>")
    b = herm_metric(t1, t2)
    if abs(abs(a1) - 1.0) > tol or abs(abs(a2) - 1.0) > tol or abs(b.coeffs[0]) > tol:
        raise ValueError(f"pair is not orthonormal: a1={a1:.6g}, a2={a2:.6g}, Re b={b.coeffs[0]:.3g}")
    b_sq = b * b
    rest = np.delete(b_sq.coeffs, 0)
    if np.any(np.abs(rest) > 1e-10):
        raise NonRealSpanError(f"b^2 = {b_sq!r} is not real")
    return float(conv) * (1.0 - 3.0 * b_sq.coeffs[0] / (a1 * a2))


def g_orthonormalize(t1: Tangent, t2: Tangent, conv=MetricConvention.PLUS, tol: float = 1e-8):
    """Gram-Schmidt for the real metric on a plane; fails on null directions."""
    t2 = _same_base(t1, t2)
    g11 = g_metric(t1, t1, conv)
    if abs(g11) < tol * t1.vec.norm() ** 2:
        raise DegeneratePlaneError("first vector is null")
    e1 = (1.0 / math.sqrt(abs(g11))) * t1
    w = t2 - (g_metric(t2, e1, conv) * math.copysign(1.0, g11)) * e1
    g22 = g_metric(w, w, conv)
    if abs(g22) < tol * max(w.vec.norm() ** 2, 1e-300):
        raise DegeneratePlaneError("plane is degenerate")
    return e1, (1.0 / math.sqrt(abs(g22))) * w
