"""Free modules F^n with a diagonal Hermitian form.

The form is ``<u, v> = sum_i c_i u_i v_i*`` with each ``c_i`` in {-1, +1};
it is left-linear in ``u``. Vectors are ``(n, dim F)`` coefficient arrays.
Many routines work with real-linear maps between ``R^(n dim F)`` and
``R^(dim F)``, built by evaluating on the standard real basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Scalar, default_tol, format_coeffs, real_value
from .errors import (
    DegenerateSpanError,
    IsotropicPointError,
    LinearDependenceError,
    SpaceMismatchError,
)


def parse_signature(sig) -> tuple[int, ...]:
    """Accept ``"-++"``, ``"−++"`` or a sequence of +-1."""
    if isinstance(sig, str):
        out = []
        for ch in sig.strip():
            if ch == "+":
                out.append(1)
            elif ch in "-−":
                out.append(-1)
            else:
                raise ValueError(f"bad signature character {ch!r} in {sig!r}")
        return tuple(out)
    out = tuple(int(c) for c in sig)
    if any(c not in (-1, 1) for c in out):
        raise ValueError(f"signature entries must be +1 or -1, got {sig!r}")
    return out


@dataclass(frozen=True)
class HermitianSpace:
    alg: Algebra
    signature: tuple[int, ...]

    def __post_init__(self):
        sig = parse_signature(self.signature)
        if not sig:
            raise ValueError("rank must be positive")
        object.__setattr__(self, "signature", sig)

    def __str__(self):
        sig = "".join("+" if c > 0 else "-" for c in self.signature)
        return f"{self.alg}^{self.n}({sig})"

    @property
    def n(self) -> int:
        return len(self.signature)

    @property
    def real_dim(self) -> int:
        return self.n * self.alg.dim

    def vector(self, entries) -> "ModuleVector":
        """Build a vector from Scalars, coefficient lists, or (n, d) data.

        Plain numbers are accepted for one-dimensional algebras and are
        otherwise read as real multiples of 1.
        """
        if isinstance(entries, ModuleVector):
            return ModuleVector(self, entries.entries)
        rows = []
        for e in entries:
            if isinstance(e, Scalar):
                if e.alg != self.alg:
                    raise SpaceMismatchError(f"entry in {e.alg}, space over {self.alg}")
                rows.append(e.coeffs)
            elif np.ndim(e) == 0:
                rows.append(float(e) * self.alg.one)
            else:
                rows.append(np.asarray(e, dtype=float))
        return ModuleVector(self, np.array(rows, dtype=float))

    def from_flat(self, flat) -> "ModuleVector":
        return ModuleVector(self, np.asarray(flat, dtype=float).reshape(self.n, self.alg.dim))

    def zero(self) -> "ModuleVector":
        return ModuleVector(self, np.zeros((self.n, self.alg.dim)))

    def basis_vector(self, i: int) -> "ModuleVector":
        e = np.zeros((self.n, self.alg.dim))
        e[i] = self.alg.one
        return ModuleVector(self, e)

    def real_basis(self) -> np.ndarray:
        """Standard real basis, shape ``(N, n, d)``."""
        return np.eye(self.real_dim).reshape(self.real_dim, self.n, self.alg.dim)

    def form_arrays(self, u, v) -> np.ndarray:
        """Raw form on coefficient arrays; broadcasts over leading axes."""
        prod = self.alg.mul_arrays(u, self.alg.conj_array(v))
        return np.einsum("i,...ik->...k", np.asarray(self.signature, dtype=float), prod)


class ModuleVector:
    """Immutable element of a HermitianSpace."""

    __slots__ = ("space", "entries")

    def __init__(self, space: HermitianSpace, entries):
        entries = np.array(entries, dtype=float)
        if entries.shape != (space.n, space.alg.dim):
            raise ValueError(
                f"{space} vectors have shape {(space.n, space.alg.dim)}, got {entries.shape}"
            )
        entries.flags.writeable = False
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleVector is immutable")

    def __repr__(self):
        inner = ", ".join(format_coeffs(row) for row in self.entries)
        return f"ModuleVector({self.space}, [{inner}])"

    def __getitem__(self, i) -> Scalar:
        return Scalar(self.space.alg, self.entries[i])

    def __len__(self):
        return self.space.n

    @property
    def flat(self) -> np.ndarray:
        return self.entries.reshape(-1)

    def _check(self, other: "ModuleVector") -> None:
        if not isinstance(other, ModuleVector) or other.space != self.space:
            raise SpaceMismatchError(f"vector spaces differ: {self.space} vs {getattr(other, 'space', other)}")

    def __add__(self, other):
        self._check(other)
        return ModuleVector(self.space, self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return ModuleVector(self.space, self.entries - other.entries)

    def __neg__(self):
        return ModuleVector(self.space, -self.entries)

    def __rmul__(self, alpha):
        # alpha * v: left scalar multiplication, coordinatewise alpha v_i
        if isinstance(alpha, Scalar):
            if alpha.alg != self.space.alg:
                raise SpaceMismatchError(f"scalar in {alpha.alg}, vector over {self.space.alg}")
            return ModuleVector(self.space, self.space.alg.mul_arrays(alpha.coeffs, self.entries))
        if isinstance(alpha, (int, float, np.integer, np.floating)):
            return ModuleVector(self.space, float(alpha) * self.entries)
        return NotImplemented

    def __truediv__(self, x):
        return ModuleVector(self.space, self.entries / float(x))

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def allclose(self, other: "ModuleVector", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.entries, other.entries, rtol=0.0, atol=atol))


def form(u: ModuleVector, v: ModuleVector) -> Scalar:
    u._check(v)
    return Scalar(u.space.alg, u.space.form_arrays(u.entries, v.entries))


def real_rank(matrix: np.ndarray, tol: float | None = None) -> int:
    tol = default_tol() if tol is None else tol
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def pairing_matrix(u: ModuleVector) -> np.ndarray:
    """``(d, N)`` matrix of the real-linear map ``h -> <u, h>``."""
    space = u.space
    return space.form_arrays(u.entries, space.real_basis()).T


def self_product_measure(u: ModuleVector) -> float:
    """How far ``<u,u>`` is from the zero divisors, invariant under ``u -> alpha u``.

    Both ``det T_<u,u>`` and ``det(P P^T)``, with ``P`` the pairing matrix,
    pick up the factor ``det(T_alpha)^2`` under a unit rescaling, so their
    ratio depends only on the class of ``u``. It is raised to the same
    power as in the unit test. Zero for vectors that are not good.
    """
    alg = u.space.alg
    pm = pairing_matrix(u)
    gram = float(np.linalg.det(pm @ pm.T))
    if gram <= 0.0:
        return 0.0
    pp = form(u, u).coeffs
    ratio = abs(float(np.linalg.det(alg.left_matrix(pp)))) / gram
    return ratio**alg.det_root


def has_unit_self_product(u: ModuleVector, tol: float | None = None) -> bool:
    tol = default_tol() if tol is None else tol
    return self_product_measure(u) > tol


def form_matrix(v: ModuleVector) -> np.ndarray:
    """``(d, N)`` matrix of the real-linear map ``u -> <u, v>``."""
    space = v.space
    return space.form_arrays(space.real_basis(), v.entries).T


def times_vector_matrix(w: ModuleVector) -> np.ndarray:
    """``(N, d)`` matrix of ``z -> z w`` for z in F."""
    alg = w.space.alg
    return np.concatenate([alg.right_matrix(row) for row in w.entries], axis=0)


def scalar_action_matrix(space: HermitianSpace, alpha: Scalar) -> np.ndarray:
    """``(N, N)`` matrix of ``v -> alpha v``."""
    return np.kron(np.eye(space.n), space.alg.left_matrix(alpha.coeffs))


def is_good(u: ModuleVector, tol: float | None = None) -> bool:
    """True when ``h -> <u, h>`` is onto F (full real rank ``dim F``)."""
    return real_rank(pairing_matrix(u), tol) == u.space.alg.dim


def span_matrix(vectors) -> np.ndarray:
    """Columns spanning the F-span of ``vectors`` over R."""
    vectors = list(vectors)
    if not vectors:
        return np.zeros((0, 0))
    alg = vectors[0].space.alg
    cols = [
        alg.mul_arrays(alg.basis_element(a).coeffs, v.entries).reshape(-1)
        for v in vectors
        for a in range(alg.dim)
    ]
    return np.array(cols).T


def span_rank(vectors, tol: float | None = None) -> int:
    return real_rank(span_matrix(vectors), tol)


def _unit_measure(z: np.ndarray, alg: Algebra) -> float:
    """Scale-1 measure of how far ``z`` is from the zero divisors."""
    det = abs(np.linalg.det(alg.left_matrix(z)))
    return det ** (1.0 / alg.dim)


def _rsqrt_abs(z: np.ndarray, alg: Algebra) -> np.ndarray:
    # 1/sqrt|.| applied to each real component of a self-adjoint unit
    return alg.from_real_components(1.0 / np.sqrt(np.abs(alg.real_components(z))))


def orthonormalize(vectors, tol: float | None = None) -> list[ModuleVector]:
    """Gram-Schmidt with pivoting for indefinite forms over F.

    Each step projects the remaining vectors off the basis built so far and
    picks the one whose self-product is farthest from the zero divisors.
    If every remaining vector is isotropic, a pair ``p, q`` with unit
    pairing is replaced by ``p + q~, p - q~`` (``q~`` rescaled so that
    ``<p, q~> = 1``), whose self-products are ``+2`` and ``-2``.
    """
    tol = default_tol() if tol is None else tol
    vectors = list(vectors)
    if not vectors:
        return []
    space = vectors[0].space
    alg = space.alg
    for v in vectors:
        vectors[0]._check(v)
    if real_rank(np.array([v.flat for v in vectors]), tol) < len(vectors):
        raise LinearDependenceError("vectors are linearly dependent over R")

    basis: list[ModuleVector] = []
    remaining = vectors
    while remaining:
        remaining = [_project_off(v, basis) for v in remaining]
        scores = [
            _unit_measure(form(v, v).coeffs, alg) / max(v.norm() ** 2, 1e-300)
            for v in remaining
        ]
        # earliest vector among the (near-)best keeps plain Gram-Schmidt order
        top = max(scores)
        best = next(i for i, s in enumerate(scores) if s >= (1.0 - 1e-9) * top)
        if scores[best] > tol:
            v = remaining.pop(best)
            scale = Scalar(alg, _rsqrt_abs(form(v, v).coeffs, alg))
            basis.append(scale * v)
            continue
        pair = _best_pair(remaining, tol)
        if pair is None:
            raise DegenerateSpanError(
                "every remaining vector and pair is isotropic or pairs to a zero divisor"
            )
        i, j = pair
        p, q = remaining[i], remaining[j]
        z = form(p, q)
        q = Scalar(alg, alg.conj_array(alg.inverse_array(z.coeffs))) * q
        remaining[i], remaining[j] = p + q, p - q
    return basis


def _project_off(v: ModuleVector, basis) -> ModuleVector:
    alg = v.space.alg
    for b in basis:
        bb = form(b, b).coeffs
        coef = alg.mul_arrays(form(v, b).coeffs, alg.inverse_array(bb))
        v = v - Scalar(alg, coef) * b
    return v


def _best_pair(vectors, tol):
    alg = vectors[0].space.alg
    best, best_score = None, tol
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            scale = vectors[i].norm() * vectors[j].norm()
            if scale == 0.0:
                continue
            score = _unit_measure(form(vectors[i], vectors[j]).coeffs, alg) / scale
            if score > best_score:
                best, best_score = (i, j), score
    return best


def perp_basis(p: ModuleVector, tol: float | None = None) -> list[ModuleVector]:
    """An F-basis of ``p^perp`` for non-isotropic ``p``.

    Candidates ``b - (<b,p>/<p,p>) p`` are taken from the standard basis
    first and then from sums and differences of pairs of it, keeping each
    one that enlarges the F-span by a full copy of F.
    """
    space = p.space
    alg = space.alg
    pp = form(p, p)
    if not has_unit_self_product(p, tol):
        raise IsotropicPointError(f"<p,p> = {format_coeffs(pp.coeffs)} is not a unit")
    inv = Scalar(alg, alg.inverse_array(pp.coeffs, tol=0.0))

    candidates = [space.basis_vector(k) for k in range(space.n)]
    for k in range(space.n):
        for m in range(k + 1, space.n):
            candidates.append(space.basis_vector(k) + space.basis_vector(m))
            candidates.append(space.basis_vector(k) - space.basis_vector(m))

    chosen: list[ModuleVector] = []
    for b in candidates:
        if len(chosen) == space.n - 1:
            break
        w = b - (form(b, p) * inv) * p
        if span_rank(chosen + [w], tol) == (len(chosen) + 1) * alg.dim:
            chosen.append(w)
    if len(chosen) != space.n - 1:
        raise IsotropicPointError("could not complete a basis of p^perp")
    return chosen


def gram_real(vectors, sign: int = 1) -> np.ndarray:
    """Real symmetric matrix ``sign * Re <v_i, v_j>`` (CxC: components summed)."""
    vectors = list(vectors)
    m = len(vectors)
    g = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            g[i, j] = sign * real_value(form(vectors[i], vectors[j]))
    return g


def random_vector(space: HermitianSpace, rng: np.random.Generator) -> ModuleVector:
    return ModuleVector(space, rng.standard_normal((space.n, space.alg.dim)))
