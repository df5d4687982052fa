"""Projective points over F, tangent vectors, projections and metrics.

A point is the class of a good vector up to left multiplication by units.
A tangent vector at ``p`` is an F-linear map ``F p -> p^perp``; it is
stored as the image ``vec`` of one fixed representative, so that
``t(alpha rep) = alpha vec``.

F-linear operators on ``V`` are handled as real ``(N, N)`` matrices acting
on flattened coefficient vectors, ``N = n dim F``.
"""

from __future__ import annotations

import enum

import numpy as np

from .algebra import Scalar, format_coeffs, real_value
from .errors import (
    BadPointError,
    BaseMismatchError,
    SignatureNotConstantError,
    SingularPointError,
    SpaceMismatchError,
)
from .hermitian import (
    HermitianSpace,
    ModuleVector,
    form,
    form_matrix,
    has_unit_self_product,
    is_good,
    pairing_matrix,
    perp_basis,
    random_vector,
    times_vector_matrix,
)

# tolerance for <vec, rep> = 0, relative to |vec| |rep|
TANGENT_TOL = 1e-12
DERIVED_TOL = 1e-9


class MetricConvention(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value) -> "MetricConvention":
        if isinstance(value, MetricConvention):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("plus", "+", "+1", "1"):
                return cls.PLUS
            if key in ("minus", "-", "-1", "−"):
                return cls.MINUS
            raise ValueError(f"unknown metric convention {value!r}")
        return cls(int(value))


class Regularity(enum.Enum):
    REGULAR = "Regular"
    SINGULAR = "Singular"


class ProjPoint:
    """Class ``[rep]`` of a good vector."""

    __slots__ = ("rep",)

    def __init__(self, rep: ModuleVector, tol: float | None = None):
        if not isinstance(rep, ModuleVector):
            raise TypeError(f"expected a ModuleVector, got {type(rep).__name__}")
        if not is_good(rep, tol):
            raise BadPointError(f"{rep!r} is not a good vector")
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("ProjPoint is immutable")

    @classmethod
    def of(cls, space: HermitianSpace, entries) -> "ProjPoint":
        return cls(space.vector(entries))

    @property
    def space(self) -> HermitianSpace:
        return self.rep.space

    @property
    def alg(self):
        return self.rep.space.alg

    def __repr__(self):
        inner = " : ".join(format_coeffs(row) for row in self.rep.entries)
        return f"ProjPoint({self.space}, [{inner}])"

    def self_product(self) -> Scalar:
        return form(self.rep, self.rep)

    def rescaled(self, alpha: Scalar) -> "ProjPoint":
        """Same point, representative ``alpha rep``."""
        return ProjPoint(alpha * self.rep)

    def normalized(self) -> "ProjPoint":
        return ProjPoint(self.rep / self.rep.norm())

    def is_regular(self, tol: float | None = None) -> bool:
        return classify(self, tol) is Regularity.REGULAR

    def require_regular(self, tol: float | None = None) -> None:
        if not self.is_regular(tol):
            raise SingularPointError(
                f"{self!r} is singular: <p,p> = {format_coeffs(self.self_product().coeffs)}"
            )


def classify(p: ProjPoint | ModuleVector, tol: float | None = None) -> Regularity:
    """Regular iff ``<p, p>`` is a unit, judged independently of the representative.

    A bare vector is accepted too; a vector that is not good never has a
    unit self-product, so it classifies as singular.
    """
    rep = p if isinstance(p, ModuleVector) else p.rep
    return Regularity.REGULAR if has_unit_self_product(rep, tol) else Regularity.SINGULAR


def unit_factor(p: ProjPoint, q: ProjPoint, tol: float = 1e-9) -> Scalar | None:
    """A unit ``alpha`` with ``alpha q.rep = p.rep``, or None."""
    if p.space != q.space:
        raise SpaceMismatchError(f"{p.space} vs {q.space}")
    alg = p.alg
    # h with <q, h> = 1 exists because q is good
    h, *_ = np.linalg.lstsq(pairing_matrix(q.rep), alg.one, rcond=None)
    h = p.space.from_flat(h)
    alpha = form(p.rep, h)
    if not alpha.is_unit():
        return None
    pn, qn = p.rep.norm(), q.rep.norm()
    residual = (alpha * q.rep - p.rep).norm()
    if residual > tol * max(pn, alpha.norm() * qn):
        return None
    return alpha


def equal(p: ProjPoint, q: ProjPoint, tol: float = 1e-9) -> bool:
    return unit_factor(p, q, tol) is not None


def _inverse_self_product(p: ProjPoint) -> Scalar:
    p.require_regular()
    # regularity was judged scale-free above, so no second threshold here
    pp = p.self_product()
    return Scalar(p.alg, p.alg.inverse_array(pp.coeffs, tol=0.0))


def project(p: ProjPoint, v: ModuleVector) -> tuple[ModuleVector, ModuleVector]:
    """Split ``v`` into its ``F p`` part and its ``p^perp`` part."""
    inv = _inverse_self_product(p)
    parallel = (form(v, p.rep) * inv) * p.rep
    return parallel, v - parallel


def parallel_matrix(p: ProjPoint) -> np.ndarray:
    """Matrix of ``v -> <v,p> <p,p>^-1 p``."""
    inv = _inverse_self_product(p)
    alg = p.alg
    return times_vector_matrix(p.rep) @ alg.right_matrix(inv.coeffs) @ form_matrix(p.rep)


def perp_matrix(p: ProjPoint) -> np.ndarray:
    return np.eye(p.space.real_dim) - parallel_matrix(p)


class Tangent:
    """Tangent vector at ``base``: the map ``alpha rep -> alpha vec``."""

    __slots__ = ("base", "vec")

    def __init__(self, base: ProjPoint, vec: ModuleVector, tol: float = TANGENT_TOL):
        base.rep._check(vec)
        base.require_regular()
        pairing = form(vec, base.rep).norm()
        if pairing > tol * max(1.0, vec.norm() * base.rep.norm()):
            raise ValueError(f"tangent vector is not orthogonal to its base (|<vec,p>| = {pairing:.3g})")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "vec", vec)

    def __setattr__(self, name, value):
        raise AttributeError("Tangent is immutable")

    def __repr__(self):
        return f"Tangent(at {self.base!r}, vec={self.vec!r})"

    @property
    def space(self) -> HermitianSpace:
        return self.base.space

    def apply(self, v: ModuleVector) -> ModuleVector:
        """``t(v) = <v,p> <p,p>^-1 t(p)``, extended to all of V."""
        inv = _inverse_self_product(self.base)
        return (form(v, self.base.rep) * inv) * self.vec

    def matrix(self) -> np.ndarray:
        inv = _inverse_self_product(self.base)
        alg = self.base.alg
        return times_vector_matrix(self.vec) @ alg.right_matrix(inv.coeffs) @ form_matrix(self.base.rep)

    def adjoint_matrix(self) -> np.ndarray:
        """Matrix of ``v -> <v, t p> <p,p>^-1 p``."""
        inv = _inverse_self_product(self.base)
        alg = self.base.alg
        return times_vector_matrix(self.base.rep) @ alg.right_matrix(inv.coeffs) @ form_matrix(self.vec)

    def pinned_to(self, point: ProjPoint) -> "Tangent":
        """The same tangent vector, expressed on another representative."""
        alpha = unit_factor(point, self.base)
        if alpha is None:
            raise BaseMismatchError(f"{point!r} is not the base point {self.base!r}")
        return Tangent(point, alpha * self.vec, tol=DERIVED_TOL)

    def _aligned(self, other: "Tangent") -> "Tangent":
        if other.base.rep.allclose(self.base.rep, atol=0.0):
            return other
        return other.pinned_to(self.base)

    # operands were validated already; results only carry rounding error
    def __add__(self, other: "Tangent") -> "Tangent":
        return Tangent(self.base, self.vec + self._aligned(other).vec, tol=DERIVED_TOL)

    def __sub__(self, other: "Tangent") -> "Tangent":
        return Tangent(self.base, self.vec - self._aligned(other).vec, tol=DERIVED_TOL)

    def __neg__(self) -> "Tangent":
        return Tangent(self.base, -self.vec, tol=DERIVED_TOL)

    def __rmul__(self, k) -> "Tangent":
        # k t: left multiplication of the image, still F-linear in p
        return Tangent(self.base, k * self.vec, tol=DERIVED_TOL)

    def is_zero(self, atol: float = 1e-12) -> bool:
        return self.vec.norm() <= atol * max(1.0, self.base.rep.norm())


def tangent(p: ProjPoint, w: ModuleVector) -> Tangent:
    """Tangent vector at ``p`` sending ``p`` to the perp part of ``w``."""
    _, perp = project(p, w)
    return Tangent(p, perp, tol=1e-9)


def adjoint_apply(t: Tangent, v: ModuleVector) -> ModuleVector:
    inv = _inverse_self_product(t.base)
    return (form(v, t.vec) * inv) * t.base.rep


def herm_metric(t1: Tangent, t2: Tangent, conv=MetricConvention.PLUS) -> Scalar:
    conv = MetricConvention.parse(conv)
    t2 = t1._aligned(t2)
    inv = _inverse_self_product(t1.base)
    return float(conv) * (form(t1.vec, t2.vec) * inv)


def g_metric(t1: Tangent, t2: Tangent, conv=MetricConvention.PLUS) -> float:
    """Real metric: the real part of the Hermitian one (CxC: both parts summed)."""
    return real_value(herm_metric(t1, t2, conv))


def tance(p: ProjPoint, q: ProjPoint) -> Scalar:
    """``<p,q><q,p> / (<p,p><q,q>)``."""
    if p.space != q.space:
        raise SpaceMismatchError(f"{p.space} vs {q.space}")
    num = form(p.rep, q.rep) * form(q.rep, p.rep)
    # (<p,p><q,q>)^-1, inverting each regular factor on its own scale
    return num * (_inverse_self_product(q) * _inverse_self_product(p))


def tangent_real_basis(p: ProjPoint) -> list[Tangent]:
    """Real basis ``{e_a b_k}`` of the tangent space at ``p``."""
    alg = p.alg
    out = []
    for b in perp_basis(p.rep):
        for a in range(alg.dim):
            out.append(Tangent(p, alg.basis_element(a) * b, tol=1e-9))
    return out


def metric_gram(tangents, conv=MetricConvention.PLUS) -> np.ndarray:
    m = len(tangents)
    g = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            g[i, j] = g_metric(tangents[i], tangents[j], conv)
    return 0.5 * (g + g.T)


def sign_pattern(gram: np.ndarray) -> str:
    """Eigenvalue signs written as ``+`` first, then ``-``, then ``0``."""
    eig = np.linalg.eigvalsh(gram)
    cut = 1e-9 * max(1.0, float(np.max(np.abs(eig))) if eig.size else 1.0)
    pos = int(np.sum(eig > cut))
    neg = int(np.sum(eig < -cut))
    return "+" * pos + "-" * neg + "0" * (len(eig) - pos - neg)


def _in_region(p: ProjPoint, region) -> bool:
    if region is None:
        return True
    reals = p.alg.real_components(p.self_product().coeffs)
    signs = np.broadcast_to(np.asarray(region), reals.shape)
    return bool(np.all(np.sign(reals) == signs))


def random_regular_point(
    space: HermitianSpace,
    rng: np.random.Generator,
    region=None,
    max_tries: int = 10_000,
) -> ProjPoint:
    """Gaussian representative, redrawn until regular (and in ``region``).

    ``region`` is a sign, or a tuple of signs per real component of
    ``<p, p>``; None accepts every regular point.
    """
    for _ in range(max_tries):
        v = random_vector(space, rng)
        if not is_good(v):
            continue
        p = ProjPoint(v)
        if p.is_regular() and _in_region(p, region):
            return p
    raise RuntimeError(f"no regular point found in {space} for region {region!r}")


def signature_of_metric(
    space: HermitianSpace,
    conv=MetricConvention.PLUS,
    samples: int = 8,
    rng: np.random.Generator | None = None,
    seed: int | None = 0,
    region=None,
) -> str:
    """Sign pattern of the real metric, checked to agree across samples."""
    conv = MetricConvention.parse(conv)
    rng = np.random.default_rng(seed) if rng is None else rng
    patterns = set()
    for _ in range(samples):
        p = random_regular_point(space, rng, region)
        patterns.add(sign_pattern(metric_gram(tangent_real_basis(p), conv)))
    if len(patterns) != 1:
        raise SignatureNotConstantError(f"sign pattern varies across samples: {sorted(patterns)}")
    return patterns.pop()


__all__ = [
    "MetricConvention",
    "ProjPoint",
    "Regularity",
    "Tangent",
    "adjoint_apply",
    "classify",
    "equal",
    "g_metric",
    "herm_metric",
    "metric_gram",
    "parallel_matrix",
    "perp_matrix",
    "project",
    "random_regular_point",
    "sign_pattern",
    "signature_of_metric",
    "tance",
    "tangent",
    "tangent_real_basis",
    "unit_factor",
]
