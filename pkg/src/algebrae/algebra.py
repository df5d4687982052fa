"""Finite-dimensional involutive real algebras.

An element is a real coefficient vector in a fixed basis:

====  =========================  ==========================
tag   basis                      notes
====  =========================  ==========================
R     1
C     1, i                       i^2 = -1
D     1, eps                     eps^2 = 0
Cs    1, j                       j^2 = 1
H     1, i, j, k                 quaternions
Hs    1, i, j, k                 i^2 = -1, j^2 = k^2 = 1
CxC   Re a, Im a, Re b, Im b     componentwise complex pair
Kt    1, sigma(t)                sigma(t) = (1-t) i + t j in Hs
====  =========================  ==========================

Products come from a structure-constant table ``table[a, b, k]`` (the
``k``-th coefficient of ``e_a e_b``). Every involution here is diagonal in
its basis, so conjugation is a sign flip per coefficient.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AlgebraMismatchError, GeometryError, NotAUnitError

TAGS = ("R", "C", "D", "Cs", "H", "Hs", "CxC", "Kt")

# (sign, index) of e_a e_b for a, b in {i, j, k} = {1, 2, 3}
_H_RULES = {
    (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}
_HS_RULES = {
    (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 1): (-1, 3), (2, 2): (1, 0), (2, 3): (-1, 1),
    (3, 1): (1, 2), (3, 2): (1, 1), (3, 3): (1, 0),
}


def default_tol() -> float:
    """Default numerical tolerance; ``ALGEBRAE_TOL`` overrides it."""
    return float(os.environ.get("ALGEBRAE_TOL", "1e-9"))


def _quadratic_table(square: float) -> np.ndarray:
    # basis (1, u) with u^2 = square
    table = np.zeros((2, 2, 2))
    table[0, 0, 0] = 1.0
    table[0, 1, 1] = 1.0
    table[1, 0, 1] = 1.0
    table[1, 1, 0] = square
    return table


def _quaternion_table(rules) -> np.ndarray:
    table = np.zeros((4, 4, 4))
    for a in range(4):
        table[0, a, a] = 1.0
        table[a, 0, a] = 1.0
    for (a, b), (sign, k) in rules.items():
        table[a, b, k] = sign
    return table


def _cxc_table() -> np.ndarray:
    table = np.zeros((4, 4, 4))
    table[:2, :2, :2] = _quadratic_table(-1.0)
    table[2:, 2:, 2:] = _quadratic_table(-1.0)
    return table


def sigma_square(t: float) -> float:
    """Real number sigma(t)^2 = -(1-t)^2 + t^2."""
    return -((1.0 - t) ** 2) + t**2


@dataclass(frozen=True)
class Algebra:
    """One of the supported algebras; ``t`` is only set for ``Kt``."""

    tag: str
    t: float | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown algebra tag {self.tag!r}; expected one of {TAGS}")
        if self.tag == "Kt":
            if self.t is None or not 0.0 <= self.t <= 1.0:
                raise ValueError(f"Kt needs a parameter t in [0, 1], got {self.t!r}")
            object.__setattr__(self, "t", float(self.t))
        elif self.t is not None:
            raise ValueError(f"algebra {self.tag} takes no parameter")

    def __str__(self):
        return f"Kt({self.t:g})" if self.tag == "Kt" else self.tag

    @cached_property
    def table(self) -> np.ndarray:
        if self.tag == "R":
            return np.ones((1, 1, 1))
        if self.tag == "C":
            return _quadratic_table(-1.0)
        if self.tag == "D":
            return _quadratic_table(0.0)
        if self.tag == "Cs":
            return _quadratic_table(1.0)
        if self.tag == "Kt":
            return _quadratic_table(sigma_square(self.t))
        if self.tag == "H":
            return _quaternion_table(_H_RULES)
        if self.tag == "Hs":
            return _quaternion_table(_HS_RULES)
        return _cxc_table()

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    @cached_property
    def conj_signs(self) -> np.ndarray:
        signs = -np.ones(self.dim)
        signs[0] = 1.0
        if self.tag == "CxC":
            signs[2] = 1.0
        return signs

    @cached_property
    def one(self) -> np.ndarray:
        e = np.zeros(self.dim)
        e[0] = 1.0
        if self.tag == "CxC":
            e[2] = 1.0
        return e

    @cached_property
    def real_slots(self) -> tuple[int, ...]:
        """Coefficient positions spanning the self-adjoint subalgebra."""
        return (0, 2) if self.tag == "CxC" else (0,)

    @property
    def iso_class(self) -> str:
        """Isomorphism class; for ``Kt`` one of C, D, Cs by the sign of sigma^2."""
        if self.tag != "Kt":
            return self.tag
        s = sigma_square(self.t)
        if s < 0:
            return "C"
        return "D" if s == 0 else "Cs"

    # -- raw coefficient arithmetic (broadcasts over leading axes) --------

    def mul_arrays(self, a, b) -> np.ndarray:
        return np.einsum("...a,...b,abk->...k", a, b, self.table)

    def conj_array(self, a) -> np.ndarray:
        return np.asarray(a) * self.conj_signs

    def left_matrix(self, a) -> np.ndarray:
        """Matrix of x -> a x."""
        return np.einsum("a,abk->kb", np.asarray(a, dtype=float), self.table)

    def right_matrix(self, b) -> np.ndarray:
        """Matrix of x -> x b."""
        return np.einsum("b,abk->ka", np.asarray(b, dtype=float), self.table)

    def real_components(self, a) -> np.ndarray:
        """Real coordinates of the self-adjoint part (one for ordinary
        algebras, two for CxC)."""
        return np.asarray(a)[..., list(self.real_slots)]

    def from_real_components(self, values) -> np.ndarray:
        values = np.broadcast_to(np.asarray(values, dtype=float), (len(self.real_slots),))
        out = np.zeros(self.dim)
        out[list(self.real_slots)] = values
        return out

    @property
    def det_root(self) -> float:
        """Exponent taking ``|det T_a|`` to degree at most 2 in ``a``."""
        return 1.0 / max(1.0, self.dim / 2.0)

    def unit_measure(self, a) -> float:
        """``|det T_a|``, with the four-dimensional algebras brought down to degree 2."""
        det = abs(float(np.linalg.det(self.left_matrix(a))))
        return det**self.det_root

    def unit_threshold(self, a, tol: float | None = None) -> float:
        tol = default_tol() if tol is None else tol
        return tol * (1.0 + float(np.dot(a, a)))

    def is_unit_array(self, a, tol: float | None = None) -> bool:
        a = np.asarray(a, dtype=float)
        return bool(self.unit_measure(a) > self.unit_threshold(a, tol))

    def inverse_array(self, a, tol: float | None = None) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        if not self.is_unit_array(a, tol):
            raise NotAUnitError(f"{format_coeffs(a)} is not a unit of {self}")
        return np.linalg.solve(self.left_matrix(a), self.one)

    def scalar(self, coeffs) -> "Scalar":
        return Scalar(self, coeffs)

    def real(self, x: float) -> "Scalar":
        return Scalar(self, x * self.one)

    def basis_element(self, index: int) -> "Scalar":
        e = np.zeros(self.dim)
        e[index] = 1.0
        return Scalar(self, e)


R = Algebra("R")
C = Algebra("C")
D = Algebra("D")
CS = Algebra("Cs")
H = Algebra("H")
HS = Algebra("Hs")
CXC = Algebra("CxC")


def kt(t: float) -> Algebra:
    return Algebra("Kt", t)


def algebra(tag: str, t: float | None = None) -> Algebra:
    if tag == "Kt":
        return kt(t)
    return Algebra(tag)


def format_coeffs(a) -> str:
    return "[" + ", ".join(f"{x:g}" for x in np.asarray(a).ravel()) + "]"


class Scalar:
    """Immutable algebra element."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: Algebra, coeffs):
        coeffs = np.array(coeffs, dtype=float).reshape(-1)
        if coeffs.shape != (alg.dim,):
            raise ValueError(f"{alg} needs {alg.dim} coefficients, got {coeffs.size}")
        coeffs.flags.writeable = False
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __repr__(self):
        return f"Scalar({self.alg}, {format_coeffs(self.coeffs)})"

    def _coerce(self, other) -> "Scalar | None":
        if isinstance(other, Scalar):
            if other.alg != self.alg:
                raise AlgebraMismatchError(f"{self.alg} vs {other.alg}")
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return self.alg.real(float(other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.alg, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.alg, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.alg, other.coeffs - self.coeffs)

    def __neg__(self):
        return Scalar(self.alg, -self.coeffs)

    def __mul__(self, other):
        other_s = self._coerce(other)
        if other_s is None:
            return NotImplemented
        return mul(self, other_s)

    def __rmul__(self, other):
        other_s = self._coerce(other)
        if other_s is None:
            return NotImplemented
        return mul(other_s, self)

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return Scalar(self.alg, self.coeffs / float(other))
        return NotImplemented

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = self._coerce(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))

    def conj(self) -> "Scalar":
        return conj(self)

    def is_unit(self, tol: float | None = None) -> bool:
        return is_unit(self, tol)

    def inverse(self, tol: float | None = None) -> "Scalar":
        return inverse(self, tol)


def _same(a: Scalar, b: Scalar) -> None:
    if a.alg != b.alg:
        raise AlgebraMismatchError(f"cannot combine {a.alg} and {b.alg} elements")


def mul(a: Scalar, b: Scalar) -> Scalar:
    _same(a, b)
    return Scalar(a.alg, a.alg.mul_arrays(a.coeffs, b.coeffs))


def conj(a: Scalar) -> Scalar:
    return Scalar(a.alg, a.alg.conj_array(a.coeffs))


def norm_form(a: Scalar) -> Scalar:
    """``a a*``; self-adjoint, hence real except over CxC."""
    return mul(a, conj(a))


def left_mult_matrix(a: Scalar) -> np.ndarray:
    return a.alg.left_matrix(a.coeffs)


def is_unit(a: Scalar, tol: float | None = None) -> bool:
    """Unit test through ``|det T_a|`` against a homogeneous relative cutoff."""
    return a.alg.is_unit_array(a.coeffs, tol)


def inverse(a: Scalar, tol: float | None = None) -> Scalar:
    return Scalar(a.alg, a.alg.inverse_array(a.coeffs, tol))


def zero_divisor_witness(a: Scalar, tol: float | None = None) -> Scalar | None:
    """A unit-norm ``b`` with ``a b = 0`` when ``a`` is not a unit, else None."""
    if is_unit(a, tol):
        return None
    _, s, vt = np.linalg.svd(left_mult_matrix(a))
    return Scalar(a.alg, vt[-1])


def re(a: Scalar) -> Scalar:
    """Self-adjoint part ``(a + a*) / 2``."""
    return Scalar(a.alg, 0.5 * (a.coeffs + a.alg.conj_array(a.coeffs)))


def real_value(a: Scalar) -> float:
    """Real number carried by ``re(a)``.

    For CxC the two real components are summed, which is how a real metric
    is read off an R x R valued Hermitian metric.
    """
    return float(np.sum(a.alg.real_components(re(a).coeffs)))


def to_real(a: Scalar, tol: float = 1e-10) -> float:
    """Interpret ``a`` as a real multiple of 1, failing if it is not one."""
    reals = a.alg.real_components(a.coeffs)
    rest = np.delete(a.coeffs, list(a.alg.real_slots))
    scale = 1.0 + a.norm()
    if np.any(np.abs(rest) > tol * scale) or np.ptp(reals) > tol * scale:
        raise GeometryError(f"{a!r} is not a real number")
    return float(reals[0])


def sigma(t: float) -> Scalar:
    """``(1-t) i + t j`` in the split-quaternions."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return Scalar(HS, [0.0, 1.0 - t, t, 0.0])


def kt_embed(t: float, a: Scalar) -> Scalar:
    """Send ``x + y sigma(t)`` in K_t to the same element of Hs."""
    if a.alg != kt(t):
        raise AlgebraMismatchError(f"expected an element of Kt({t}), got {a.alg}")
    x, y = a.coeffs
    return Scalar(HS, [x, y * (1.0 - t), y * t, 0.0])


def cs_split(a: Scalar) -> tuple[float, float]:
    """Isomorphism Cs -> R x R, ``x + jy -> (x + y, x - y)``."""
    if a.alg != CS:
        raise AlgebraMismatchError(f"cs_split needs a Cs element, got {a.alg}")
    x, y = a.coeffs
    return float(x + y), float(x - y)


def cs_join(first: float, second: float) -> Scalar:
    return Scalar(CS, [(first + second) / 2.0, (first - second) / 2.0])
