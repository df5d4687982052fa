import math

import numpy as np
import pytest

from algebrae.algebra import CS, CXC, HS, C, D, H, R, Scalar, cs_split, kt
from algebrae.errors import (
    DegenerateSpanError,
    IsotropicPointError,
    LinearDependenceError,
    SpaceMismatchError,
)
from algebrae.hermitian import (
    HermitianSpace,
    form,
    gram_real,
    is_good,
    orthonormalize,
    parse_signature,
    perp_basis,
    random_vector,
    span_rank,
)
from conftest import ALL_ALGEBRAS, coeffs_close, rand_scalar

SQ2 = math.sqrt(2.0)


def test_parse_signature_variants():
    assert parse_signature("-++") == (-1, 1, 1)
    assert parse_signature("−+") == (-1, 1)
    assert parse_signature([1, -1]) == (1, -1)
    with pytest.raises(ValueError):
        parse_signature("+x")
    with pytest.raises(ValueError):
        parse_signature([2])
    with pytest.raises(ValueError):
        HermitianSpace(R, "")


def test_vector_shape_is_checked():
    with pytest.raises(ValueError):
        HermitianSpace(C, "++").vector([[1, 0, 0], [0, 1, 0]])


class TestFormExamples:
    def test_complex_norm(self):
        u = HermitianSpace(C, "++").vector([[1, 0], [0, 1]])
        assert coeffs_close(form(u, u), [2, 0])

    def test_split_complex_isotropic_entry(self):
        u = HermitianSpace(CS, "++").vector([[1, 1], [0, 0]])
        assert coeffs_close(form(u, u), [0, 0])

    def test_lorentzian_real(self):
        u = HermitianSpace(R, "-++").vector([SQ2, 1, 0])
        assert form(u, u).coeffs[0] == pytest.approx(-1.0, abs=1e-12)

    def test_space_mismatch(self):
        u = HermitianSpace(C, "++").vector([1, 0])
        v = HermitianSpace(C, "-+").vector([1, 0])
        with pytest.raises(SpaceMismatchError):
            form(u, v)


@pytest.mark.parametrize("alg", ALL_ALGEBRAS + [kt(0.3)], ids=str)
@pytest.mark.parametrize("sig", ["++", "-+", "+-+"])
def test_hermitian_axioms(alg, sig, rng):
    space = HermitianSpace(alg, sig)
    for _ in range(50):
        u, v, w = (random_vector(space, rng) for _ in range(3))
        z = rand_scalar(alg, rng)
        assert coeffs_close(form(u + v, w), form(u, w) + form(v, w))
        assert coeffs_close(form(z * u, w), z * form(u, w), atol=1e-11)
        assert coeffs_close(form(u, v).conj(), form(v, u))
        assert coeffs_close(form(u, u).conj(), form(u, u))


class TestIsGood:
    def test_dual_unit_coordinate(self):
        assert is_good(HermitianSpace(D, "++").vector([[1, 0], [0, 0]]))

    def test_dual_nilpotent_pair(self):
        assert not is_good(HermitianSpace(D, "++").vector([[0, 1], [0, 1]]))

    def test_split_complex_opposite_idempotents(self):
        assert is_good(HermitianSpace(CS, "++").vector([[1, 1], [1, -1]]))

    def test_zero_is_bad(self):
        assert not is_good(HermitianSpace(C, "++").zero())

    @pytest.mark.parametrize("alg", ALL_ALGEBRAS, ids=str)
    def test_random_vectors_are_good(self, alg, rng):
        space = HermitianSpace(alg, "-++")
        assert all(is_good(random_vector(space, rng)) for _ in range(1000))

    @pytest.mark.parametrize(
        "alg, entries",
        [
            (D, [[1, 0], [0, 0]]),
            (D, [[0, 1], [0, 1]]),
            (CS, [[1, 1], [1, -1]]),
            (CS, [[1, 1], [2, 2]]),
            (CXC, [[1, 0, 0, 0], [0, 1, 0, 0]]),
            (CXC, [[1, 0, 0, 0], [0, 0, 1, 0]]),
            (HS, [[1, 0, 1, 0], [0, 0, 0, 0]]),
        ],
    )
    def test_invariant_under_change_of_basis(self, alg, entries, rng):
        """``u -> u M`` for an invertible F-matrix ``M`` acting on the right."""
        space = HermitianSpace(alg, "++")
        u = space.vector(entries)
        expected = is_good(u)
        for _ in range(20):
            m = [[rand_scalar(alg, rng) for _ in range(2)] for _ in range(2)]
            # real matrix of v -> v M; invertible iff it has full real rank
            cols = []
            for e in space.real_basis():
                v = space.vector(e)
                cols.append(np.concatenate([(v[0] * m[0][k] + v[1] * m[1][k]).coeffs for k in range(2)]))
            if np.linalg.matrix_rank(np.array(cols)) < space.real_dim:
                continue
            moved = space.vector([(u[0] * m[0][k] + u[1] * m[1][k]).coeffs for k in range(2)])
            assert is_good(moved) == expected


class TestOrthonormalize:
    def test_real_gram_schmidt(self):
        space = HermitianSpace(R, "++")
        out = orthonormalize([space.vector([1, 1]), space.vector([1, 0])])
        assert np.allclose(out[0].entries.ravel(), [1 / SQ2, 1 / SQ2], atol=1e-12)
        assert np.allclose(out[1].entries.ravel(), [1 / SQ2, -1 / SQ2], atol=1e-12)

    def test_negative_unit_vector_kept(self):
        space = HermitianSpace(R, "-+")
        (b,) = orthonormalize([space.vector([1, 0])])
        assert np.allclose(b.entries.ravel(), [1, 0])
        assert form(b, b).coeffs[0] == -1.0

    def test_isotropic_split_complex_line(self):
        space = HermitianSpace(CS, "++")
        with pytest.raises(DegenerateSpanError):
            orthonormalize([space.vector([[1, 1], [0, 0]])])

    def test_dependent_input(self):
        space = HermitianSpace(R, "++")
        with pytest.raises(LinearDependenceError):
            orthonormalize([space.vector([1, 1]), space.vector([2, 2])])

    def test_isotropic_pair_pivot(self):
        """Two null vectors pairing to 1 become a +-1 pair."""
        space = HermitianSpace(R, "-+")
        out = orthonormalize([space.vector([1, 1]), space.vector([1, -1])])
        signs = sorted(form(b, b).coeffs[0] for b in out)
        assert signs == pytest.approx([-1.0, 1.0], abs=1e-12)
        assert abs(form(out[0], out[1]).coeffs[0]) < 1e-12

    @pytest.mark.parametrize("alg", [R, C, D, CS, H, HS, kt(0.7)], ids=str)
    def test_random_families(self, alg, rng):
        sig = "-++" if alg is not D else "+++"
        space = HermitianSpace(alg, sig)
        for _ in range(20):
            vecs = [random_vector(space, rng) for _ in range(3)]
            out = orthonormalize(vecs)
            for i, b in enumerate(out):
                for k, c in enumerate(out):
                    value = form(b, c).coeffs
                    if i == k:
                        assert abs(abs(value[0]) - 1) < 1e-9
                        assert np.allclose(value[1:], 0, atol=1e-9)
                    else:
                        assert np.allclose(value, 0, atol=1e-9)
            # same F-span: adding the output does not enlarge it
            assert span_rank(vecs + out, 1e-8) == span_rank(vecs, 1e-8) == span_rank(out, 1e-8)


class TestPerpBasis:
    def test_complex_canonical(self):
        (v,) = perp_basis(HermitianSpace(C, "++").vector([1, 0]))
        assert np.allclose(v.entries, [[0, 0], [1, 0]])

    def test_lorentzian_canonical(self):
        out = perp_basis(HermitianSpace(R, "-++").vector([1, 0, 0]))
        assert np.allclose([b.entries.ravel() for b in out], [[0, 1, 0], [0, 0, 1]])

    def test_lorentzian_tilted(self):
        space = HermitianSpace(R, "-+")
        p = space.vector([SQ2, 1])
        (v,) = perp_basis(p)
        assert abs(form(v, p).coeffs[0]) < 1e-12
        x, y = v.entries.ravel()
        assert y == pytest.approx(SQ2 * x, rel=1e-12)

    def test_isotropic_base(self):
        with pytest.raises(IsotropicPointError):
            perp_basis(HermitianSpace(R, "-+").vector([1, 1]))
        with pytest.raises(IsotropicPointError):
            perp_basis(HermitianSpace(CS, "++").vector([[1, 1], [0, 0]]))

    @pytest.mark.parametrize("alg", ALL_ALGEBRAS, ids=str)
    def test_random_points_complete_a_basis(self, alg, rng):
        space = HermitianSpace(alg, "-++")
        for _ in range(30):
            p = random_vector(space, rng)
            basis = perp_basis(p)
            assert len(basis) == space.n - 1
            for b in basis:
                assert np.allclose(form(b, p).coeffs, 0, atol=1e-12 * (1 + p.norm() ** 2 * b.norm()))
            assert span_rank(basis + [p]) == space.real_dim


class TestGramReal:
    def test_orthonormal_pair(self):
        space = HermitianSpace(C, "++")
        assert np.allclose(gram_real([space.basis_vector(0), space.basis_vector(1)]), np.eye(2))

    def test_split_complex_pair(self):
        space = HermitianSpace(CS, "+")
        t = space.vector([[1, 0]])
        jt = Scalar(CS, [0, 1]) * t
        assert np.allclose(gram_real([t, jt]), np.diag([1, -1]))

    def test_dual_pair(self):
        space = HermitianSpace(D, "+")
        t = space.vector([[1, 0]])
        et = Scalar(D, [0, 1]) * t
        assert np.allclose(gram_real([t, et]), np.diag([1, 0]))

    def test_sign_and_cxc_sum(self):
        space = HermitianSpace(CXC, "+")
        v = space.vector([[1, 0, 2, 0]])
        assert gram_real([v], sign=-1)[0, 0] == pytest.approx(-5.0)

    def test_symmetric(self, rng):
        space = HermitianSpace(HS, "-+")
        g = gram_real([random_vector(space, rng) for _ in range(4)])
        assert np.allclose(g, g.T, atol=1e-12)


def test_cs_split_of_good_point_images():
    """The pairing images of (1+j, 1-j) split to (2,0) and (0,2)."""
    space = HermitianSpace(CS, "++")
    u = space.vector([[1, 1], [1, -1]])
    images = [cs_split(form(u, space.basis_vector(k))) for k in range(2)]
    assert np.allclose(images, [[2, 0], [0, 2]])
