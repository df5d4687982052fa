"""The projective line over C x C and the bidisc.

``C x C`` coefficients are ``(Re a, Im a, Re b, Im b)`` for the pair
``(a, b)``; the conjugation acts on each factor. With the form of
signature -+ the regular points fall into four balls labelled by the signs
of the two real components of ``<u, u>``, and ``B--`` is the bidisc.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import CXC, C, Scalar, to_real
from .errors import GeometryError, SingularPointError, SpaceMismatchError
from .hermitian import HermitianSpace, ModuleVector, form
from .projective import (
    MetricConvention,
    ProjPoint,
    Regularity,
    Tangent,
    classify,
    g_metric,
    tance,
)

BIDISC_SPACE = HermitianSpace(CXC, "-+")
DISC_SPACE = HermitianSpace(C, "-+")
J = np.diag([-1.0, 1.0])

BALLS = ("B++", "B+-", "B-+", "B--")
SINGULAR = "Singular"


def cxc(a: complex, b: complex) -> Scalar:
    a, b = complex(a), complex(b)
    return Scalar(CXC, [a.real, a.imag, b.real, b.imag])


def cxc_parts(z: Scalar) -> tuple[complex, complex]:
    c = z.coeffs
    return complex(c[0], c[1]), complex(c[2], c[3])


def bidisc_vector(entries) -> ModuleVector:
    """Vector from pairs ``(a_i, b_i)`` of complex numbers."""
    return BIDISC_SPACE.vector([cxc(a, b) for a, b in entries])


def bidisc_point(entries) -> ProjPoint:
    return ProjPoint(bidisc_vector(entries))


def _factor_vectors(v: ModuleVector) -> tuple[np.ndarray, np.ndarray]:
    first = np.array([complex(row[0], row[1]) for row in v.entries])
    second = np.array([complex(row[2], row[3]) for row in v.entries])
    return first, second


def _check_space(v: ModuleVector) -> None:
    if v.space != BIDISC_SPACE:
        raise SpaceMismatchError(f"expected a vector of {BIDISC_SPACE}, got {v.space}")


def classify_ball(u: ModuleVector | ProjPoint) -> str:
    """``B`` followed by the signs of the two components of ``<u, u>``."""
    point = u if isinstance(u, ProjPoint) else ProjPoint(u)
    _check_space(point.rep)
    if classify(point) is Regularity.SINGULAR:
        return SINGULAR
    uu = point.self_product().coeffs
    return "B" + "".join("+" if x > 0 else "-" for x in (uu[0], uu[2]))


def _disc_point(z: np.ndarray) -> ProjPoint:
    if not np.any(z):
        raise GeometryError("a factor of the vector vanishes")
    return ProjPoint(DISC_SPACE.vector([[w.real, w.imag] for w in z]))


def lambda_split(u: ProjPoint) -> tuple[ProjPoint, ProjPoint]:
    """``[(a1,b1):(a2,b2)] -> ([a1:a2], [b1:b2])``."""
    _check_space(u.rep)
    first, second = _factor_vectors(u.rep)
    return _disc_point(first), _disc_point(second)


def split_tangent(t: Tangent) -> tuple[Tangent, Tangent]:
    """Push a tangent vector forward along both factor maps."""
    p1, p2 = lambda_split(t.base)
    v1, v2 = _factor_vectors(t.vec)
    return (
        Tangent(p1, DISC_SPACE.vector([[w.real, w.imag] for w in v1]), tol=1e-9),
        Tangent(p2, DISC_SPACE.vector([[w.real, w.imag] for w in v2]), tol=1e-9),
    )


def _require_bidisc(p: ProjPoint) -> None:
    ball = classify_ball(p)
    if ball != "B--":
        raise SingularPointError(f"base point lies in {ball}, not in the bidisc B--")


def bidisc_metric(t1: Tangent, t2: Tangent) -> float:
    """Real metric: negative convention, both components summed."""
    _require_bidisc(t1.base)
    return g_metric(t1, t2, MetricConvention.MINUS)


def product_metric(t1: Tangent, t2: Tangent) -> float:
    """Sum of the two Poincare disc metrics of the split tangents."""
    _require_bidisc(t1.base)
    a1, b1 = split_tangent(t1)
    a2, b2 = split_tangent(t2)
    return g_metric(a1, a2, MetricConvention.MINUS) + g_metric(b1, b2, MetricConvention.MINUS)


@dataclass(frozen=True)
class CxCMatrix2:
    """2x2 matrix over C x C, stored as its two complex factor matrices."""

    first: np.ndarray
    second: np.ndarray

    def __post_init__(self):
        for m in (self.first, self.second):
            if np.shape(m) != (2, 2):
                raise ValueError(f"factor matrices must be 2x2, got {np.shape(m)}")
        object.__setattr__(self, "first", np.array(self.first, dtype=complex))
        object.__setattr__(self, "second", np.array(self.second, dtype=complex))

    @classmethod
    def identity(cls) -> "CxCMatrix2":
        return cls(np.eye(2), np.eye(2))

    def entry(self, i: int, k: int) -> Scalar:
        return cxc(self.first[i, k], self.second[i, k])

    def apply(self, v: ModuleVector) -> ModuleVector:
        _check_space(v)
        first, second = _factor_vectors(v)
        return bidisc_vector(zip(self.first @ first, self.second @ second))

    def __matmul__(self, other: "CxCMatrix2") -> "CxCMatrix2":
        return CxCMatrix2(self.first @ other.first, self.second @ other.second)


def unitary_check(m: CxCMatrix2, tol: float = 1e-9) -> bool:
    """Both factors satisfy ``M^H J M = J`` with ``J = diag(-1, 1)``."""
    return all(
        np.allclose(f.conj().T @ J @ f, J, rtol=0.0, atol=tol) for f in (m.first, m.second)
    )


def preserves_form(m: CxCMatrix2, rng: np.random.Generator, pairs: int = 20, tol: float = 1e-9) -> bool:
    """Check ``<Mu, Mv> = <u, v>`` on random vectors with CxC arithmetic."""
    for _ in range(pairs):
        u = ModuleVector(BIDISC_SPACE, rng.standard_normal((2, 4)))
        v = ModuleVector(BIDISC_SPACE, rng.standard_normal((2, 4)))
        before = form(u, v)
        after = form(m.apply(u), m.apply(v))
        if not after.allclose(before, atol=tol * (1.0 + before.norm())):
            return False
    return True


def random_u11(rng: np.random.Generator) -> np.ndarray:
    """Random element of U(1,1) for ``J = diag(-1, 1)``."""
    beta = complex(*rng.standard_normal(2))
    alpha = np.sqrt(1.0 + abs(beta) ** 2) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
    return phase * np.array([[alpha, beta], [np.conj(beta), np.conj(alpha)]])


def random_unitary(rng: np.random.Generator) -> CxCMatrix2:
    return CxCMatrix2(random_u11(rng), random_u11(rng))


def tau(u: ProjPoint) -> ProjPoint:
    """Swap the two factors: ``[(a1,b1):(a2,b2)] -> [(b1,a1):(b2,a2)]``."""
    _check_space(u.rep)
    swapped = u.rep.entries[:, [2, 3, 0, 1]]
    return ProjPoint(ModuleVector(BIDISC_SPACE, swapped))


def tance_pair(u: ProjPoint, v: ProjPoint, tol: float = 1e-12) -> tuple[float, float]:
    """The two real components of the C x C valued tance."""
    _check_space(u.rep)
    ta = tance(u, v).coeffs
    if max(abs(ta[1]), abs(ta[3])) > tol * (1.0 + np.linalg.norm(ta)):
        raise GeometryError(f"tance {ta} is not self-adjoint")
    return float(ta[0]), float(ta[2])


def factor_tance_pair(u: ProjPoint, v: ProjPoint) -> tuple[float, float]:
    """Tance of the split factors, computed over C."""
    u1, u2 = lambda_split(u)
    v1, v2 = lambda_split(v)
    return to_real(tance(u1, v1)), to_real(tance(u2, v2))


def canonical_bidisc_rep(u: ProjPoint) -> ModuleVector:
    """Representative with ``<u,u>`` equal to ``(+-1, +-1)``."""
    uu = u.self_product().coeffs
    scale = cxc(1.0 / np.sqrt(abs(uu[0])), 1.0 / np.sqrt(abs(uu[2])))
    return scale * u.rep
