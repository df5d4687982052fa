"""Projective lines as spaces of oriented geodesics of two-dimensional geometries.

* ``P^1_C`` (sig ++) and oriented great circles of the round sphere;
* ``P^1_D`` and oriented lines of the Euclidean plane, with
  ``V = C + eps C`` written as ``D^2`` via ``a + eps b -> (Re a + eps Re b, Im a + eps Im b)``;
* regular points of ``P^1_Cs`` and oriented geodesics of the hyperbolic plane,
  with the double cover onto de Sitter space ``dS^2`` (``RP^2`` with sig -++).

Split-complex numbers are handled in the split coordinates ``(x+y, x-y)``
of :func:`algebrae.algebra.cs_split`, written ``(a, a')`` below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import CS, HS, C, D, R, cs_join, cs_split, kt, kt_embed
from .connection import curve_velocity
from .errors import GeometryError, SingularPointError, SpaceMismatchError
from .hermitian import HermitianSpace, ModuleVector
from .projective import MetricConvention, ProjPoint, Tangent, g_metric

PC1 = HermitianSpace(C, "++")
PD1 = HermitianSpace(D, "++")
PCS1 = HermitianSpace(CS, "++")
DS2 = HermitianSpace(R, "-++")


def _require_space(u: ProjPoint, space: HermitianSpace) -> None:
    if u.space != space:
        raise SpaceMismatchError(f"expected a point of P({space}), got {u.space}")


# -- sphere -----------------------------------------------------------------


def _complex_pair(u: ProjPoint) -> tuple[complex, complex]:
    z0, z1 = (complex(*row) for row in u.rep.entries)
    return z0, z1


def hopf(u: ProjPoint) -> np.ndarray:
    """Unit vector of ``S^2`` attached to a point of ``P^1_C``."""
    if u.alg != C or u.space.n != 2:
        raise SpaceMismatchError(f"hopf needs a point of a complex projective line, got {u.space}")
    z0, z1 = _complex_pair(u)
    w = z0 * z1.conjugate()
    total = abs(z0) ** 2 + abs(z1) ** 2
    return np.array([2 * w.real, 2 * w.imag, abs(z0) ** 2 - abs(z1) ** 2]) / total


@dataclass(frozen=True)
class OrientedGreatCircle:
    pole: tuple[float, float, float]

    def __post_init__(self):
        if abs(np.linalg.norm(self.pole) - 1.0) > 1e-9:
            raise ValueError(f"pole {self.pole} is not a unit vector")


def circle_of(u: ProjPoint) -> OrientedGreatCircle:
    """Equator seen counterclockwise from ``hopf(u)``."""
    return OrientedGreatCircle(tuple(float(x) for x in hopf(u)))


def circle_angle(c1: OrientedGreatCircle, c2: OrientedGreatCircle, tol: float = 1e-12) -> float:
    """Angle between the poles; undefined when the circles share their support."""
    cos = float(np.dot(c1.pole, c2.pole))
    if abs(cos) >= 1.0 - tol:
        raise GeometryError("circles coincide up to orientation; their angle is undefined")
    return math.acos(cos)


# -- Euclidean plane --------------------------------------------------------


def pd1_point(a: complex, b: complex) -> ProjPoint:
    """The class of ``a + eps b`` with ``a, b`` complex."""
    a, b = complex(a), complex(b)
    return ProjPoint(PD1.vector([[a.real, b.real], [a.imag, b.imag]]))


def pd1_parts(u: ProjPoint) -> tuple[complex, complex]:
    """``(a, b)`` with representative ``a + eps b``."""
    _require_space(u, PD1)
    (x0, y0), (x1, y1) = u.rep.entries
    return complex(x0, x1), complex(y0, y1)


@dataclass(frozen=True)
class OrientedLineE2:
    """The line ``t -> s i e + e t``."""

    e: complex
    s: float

    def __post_init__(self):
        if abs(abs(self.e) - 1.0) > 1e-9:
            raise ValueError(f"direction {self.e} is not a unit complex number")

    def at(self, t: float) -> complex:
        return self.s * 1j * self.e + self.e * t


def _normal_form_pd1(u: ProjPoint) -> tuple[complex, float]:
    """``(e, k)`` with ``u = [e + k eps i e]`` and ``|e| = 1``."""
    a, b = pd1_parts(u)
    if abs(a) == 0.0:
        raise SingularPointError("the eps-free part vanishes")
    e = a / abs(a)
    k = (b / abs(a) * e.conjugate()).imag
    return e, k


def line_from_pd1(u: ProjPoint) -> OrientedLineE2:
    e, k = _normal_form_pd1(u)
    return OrientedLineE2(e * e, 2.0 * k)


def pd1_from_line(line: OrientedLineE2) -> ProjPoint:
    e = cmath.sqrt(line.e)
    return pd1_point(e, 0.5 * line.s * 1j * e)


def lines_through_point(a: float, b: float, tol: float = 1e-9) -> Callable[[OrientedLineE2], bool]:
    """Predicate: the line passes through ``a + i b``."""

    def passes(line: OrientedLineE2) -> bool:
        return abs(line.s - (b * line.e.real - a * line.e.imag)) <= tol

    return passes


def pencil_line(a: float, b: float, theta: float) -> OrientedLineE2:
    """Oriented line through ``a + i b`` with direction angle ``theta``."""
    return OrientedLineE2(cmath.exp(1j * theta), -a * math.sin(theta) + b * math.cos(theta))


# -- hyperbolic plane and de Sitter space -----------------------------------


def mink_form(u, v) -> float:
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    return float(-u[0] * v[0] + u[1] * v[1] + u[2] * v[2])


def mink_cross(u, v) -> np.ndarray:
    """Cross product of R^3 with the -++ form."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    return np.array(
        [
            -(u[1] * v[2] - u[2] * v[1]),
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    )


def pcs1_point(first: tuple[float, float], second: tuple[float, float]) -> ProjPoint:
    """``[(a, a') : (b, b')]`` from split coordinates."""
    return ProjPoint(PCS1.vector([cs_join(*first), cs_join(*second)]))


def pcs1_split(u: ProjPoint) -> tuple[float, float, float, float]:
    """Split coordinates ``(a, a', b, b')`` of the representative."""
    _require_space(u, PCS1)
    a, a2 = cs_split(u.rep[0])
    b, b2 = cs_split(u.rep[1])
    return a, a2, b, b2


def _require_regular_pcs1(u: ProjPoint, tol: float = 1e-12) -> tuple[float, float, float, float]:
    a, a2, b, b2 = pcs1_split(u)
    scale = a * a + a2 * a2 + b * b + b2 * b2
    if abs(a * a2 + b * b2) <= tol * scale:
        raise SingularPointError(f"aa' + bb' = 0 at {u!r}")
    return a, a2, b, b2


@dataclass(frozen=True)
class OrientedGeodesicH2:
    """Geodesic from the ideal point ``B`` to the ideal point ``A``."""

    A: ProjPoint
    B: ProjPoint
    ds_point: ProjPoint


def boundary_points(u: ProjPoint) -> tuple[np.ndarray, np.ndarray]:
    a, a2, b, b2 = _require_regular_pcs1(u)
    A = np.array([a * a + b * b, a * a - b * b, 2 * a * b])
    B = np.array([a2 * a2 + b2 * b2, -a2 * a2 + b2 * b2, -2 * a2 * b2])
    return A, B


def h2_from_pcs1(u: ProjPoint) -> OrientedGeodesicH2:
    A, B = boundary_points(u)
    return OrientedGeodesicH2(
        ProjPoint(DS2.vector(A)), ProjPoint(DS2.vector(B)), ProjPoint(DS2.vector(mink_cross(A, B)))
    )


def double_cover_lift(v: ModuleVector) -> np.ndarray:
    """Quadratic map ``(ab'-a'b, ab'+a'b, -aa'+bb')`` on representatives."""
    a, a2 = cs_split(v[0])
    b, b2 = cs_split(v[1])
    return np.array([a * b2 - a2 * b, a * b2 + a2 * b, -a * a2 + b * b2])


def double_cover_f(u: ProjPoint) -> ProjPoint:
    _require_regular_pcs1(u)
    return ProjPoint(DS2.vector(double_cover_lift(u.rep)))


def rev(u: ProjPoint) -> ProjPoint:
    """Orientation reversal ``[(a,a'):(b,b')] -> [(b',b):(-a',-a)]``."""
    a, a2, b, b2 = _require_regular_pcs1(u)
    return pcs1_point((b2, b), (-a2, -a))


def standard_frame_pcs1(u: ProjPoint) -> tuple[Tangent, Tangent]:
    """Tangents ``<., p> v`` and ``<., p> j v`` with ``v = ((b',b),(-a',-a))``.

    The representative is rescaled first so that ``aa' + bb' = 1``; the
    pair is then g-orthonormal with ``g(t1,t1) = 1`` and ``g(t2,t2) = -1``.
    """
    a, a2, b, b2 = _require_regular_pcs1(u)
    c = a * a2 + b * b2
    p = pcs1_point((a / c, a2), (b / c, b2))
    a, a2, b, b2 = pcs1_split(p)
    v = PCS1.vector([cs_join(b2, b), cs_join(-a2, -a)])
    j = CS.basis_element(1)
    return Tangent(p, v, tol=1e-9), Tangent(p, j * v, tol=1e-9)


def _line_through(p: ProjPoint, t: Tangent):
    if not t.base.rep.allclose(p.rep, atol=0.0):
        t = t.pinned_to(p)
    return lambda theta: p.rep + theta * t.vec


def ds2_pushforward(t: Tangent) -> Tangent:
    """``df(t)`` for the double cover, via the curve ``[p + theta tp]``."""
    p = t.base
    _require_regular_pcs1(p)
    line = _line_through(p, t)
    # the lifted curve is quadratic in theta, so the central difference is exact
    # for any step; this one keeps p and step * tp on the same scale
    size = t.vec.norm()
    step = p.rep.norm() / size if size > 0 else 1.0
    return curve_velocity(lambda theta: DS2.vector(double_cover_lift(line(theta))), 0.0, step=step)


def _stencil(func, h: float):
    """Fourth-order central derivative at 0."""
    return (-func(2 * h) + 8 * func(h) - 8 * func(-h) + func(-2 * h)) / (12.0 * h)


def cylinder_pushforward(t: Tangent, h: float = 1e-4) -> tuple[complex, float]:
    """``df(t) = (dE, ds)`` for ``[e + k eps i e] -> (e^2, 2k)``.

    The step is measured relative to ``|a| / |da|``, the scale on which the
    eps-free part of the representative turns.
    """
    line = _line_through(t.base, t)
    a, _ = pd1_parts(t.base)
    da = complex(*line(1.0).entries[:, 0]) - a
    if abs(da) > abs(a):
        h *= abs(a) / abs(da)

    def coords(theta):
        lf = line_from_pd1(ProjPoint(line(theta)))
        return np.array([lf.e.real, lf.e.imag, lf.s])

    d = _stencil(coords, h)
    return complex(d[0], d[1]), float(d[2])


def pushforward_metric_check(kind: str, t1: Tangent, t2: Tangent) -> tuple[float, float]:
    """``(pulled, source)`` metric values for the map ``kind``.

    ``"h2"``: double cover ``P^1_Cs -> dS^2``, target metric with the
    negative sign convention. ``"e2"``: ``P^1_D -> S^1 x R`` with target
    metric ``Re(u1 conj(u2))``.
    """
    source = g_metric(t1, t2, MetricConvention.PLUS)
    if kind == "h2":
        d1 = ds2_pushforward(t1)
        d2 = ds2_pushforward(t2)
        pulled = g_metric(d1, d2, MetricConvention.MINUS)
    elif kind == "e2":
        u1, _ = cylinder_pushforward(t1)
        u2, _ = cylinder_pushforward(t2)
        pulled = (u1 * u2.conjugate()).real
    else:
        raise ValueError(f"unknown map {kind!r}; expected 'h2' or 'e2'")
    return float(pulled), float(source)


# -- transition inside the split quaternions --------------------------------


def transition_embed(t: float, u: ProjPoint) -> ProjPoint:
    """Send ``[z0 : ... : zn]`` over ``K_t`` to the same coordinates over ``Hs``."""
    alg = kt(t)
    if u.alg != alg:
        raise SpaceMismatchError(f"expected a point over {alg}, got {u.space}")
    target = HermitianSpace(HS, u.space.signature)
    return ProjPoint(target.vector([kt_embed(t, u.rep[i]) for i in range(u.space.n)]))


# -- charts -----------------------------------------------------------------

TORUS_R = 2.0
TORUS_r = 1.0


def torus_chart(u: ProjPoint) -> tuple[np.ndarray, tuple[float, float]]:
    """``P^1_Cs`` as a torus: each split factor is an ``RP^1``, doubled to an angle."""
    a, a2, b, b2 = pcs1_split(u)
    phi = 2.0 * math.atan2(b, a)
    psi = 2.0 * math.atan2(b2, a2)
    ring = TORUS_R + TORUS_r * math.cos(psi)
    xyz = np.array([ring * math.cos(phi), ring * math.sin(phi), TORUS_r * math.sin(psi)])
    return xyz, (math.remainder(phi, 2 * math.pi), math.remainder(psi, 2 * math.pi))


def cylinder_chart(u: ProjPoint) -> tuple[np.ndarray, tuple[float, float]]:
    line = line_from_pd1(u)
    return np.array([line.e.real, line.e.imag, line.s]), (cmath.phase(line.e), line.s)


def sphere_chart(u: ProjPoint) -> tuple[np.ndarray, tuple[float, float]]:
    n = hopf(u)
    return n, (math.acos(max(-1.0, min(1.0, n[2]))), math.atan2(n[1], n[0]))


def chart_for(u: ProjPoint):
    """Chart matching the line's algebra, or None."""
    if u.space.n != 2:
        return None
    return {"C": sphere_chart, "D": cylinder_chart, "Cs": torus_chart}.get(u.alg.tag)


def chart_residual(kind: str, xyz) -> float:
    """How far ``xyz`` is from the chart's surface."""
    x, y, z = (float(c) for c in xyz)
    if kind == "torus":
        return abs((math.hypot(x, y) - TORUS_R) ** 2 + z * z - TORUS_r**2)
    if kind == "cylinder":
        return abs(x * x + y * y - 1.0)
    if kind == "sphere":
        return abs(x * x + y * y + z * z - 1.0)
    raise ValueError(f"unknown chart {kind!r}")


__all__ = [
    "DS2",
    "OrientedGeodesicH2",
    "OrientedGreatCircle",
    "OrientedLineE2",
    "PC1",
    "PCS1",
    "PD1",
    "boundary_points",
    "chart_residual",
    "circle_angle",
    "circle_of",
    "cylinder_chart",
    "cylinder_pushforward",
    "double_cover_f",
    "double_cover_lift",
    "ds2_pushforward",
    "h2_from_pcs1",
    "hopf",
    "line_from_pd1",
    "lines_through_point",
    "mink_cross",
    "mink_form",
    "standard_frame_pcs1",
    "pcs1_point",
    "pcs1_split",
    "pd1_from_line",
    "pd1_parts",
    "pd1_point",
    "pencil_line",
    "pushforward_metric_check",
    "rev",
    "sphere_chart",
    "torus_chart",
    "transition_embed",
]
