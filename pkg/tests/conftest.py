import numpy as np
import pytest

from algebrae.algebra import CS, CXC, HS, C, D, H, R, Scalar, kt

ALL_ALGEBRAS = [R, C, D, CS, H, HS, CXC]
KT_GRID = [kt(t) for t in (0.0, 0.2, 0.5, 0.8, 1.0)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def rand_scalar(alg, rng, integer=False):
    if integer:
        return Scalar(alg, rng.integers(-9, 10, alg.dim).astype(float))
    return Scalar(alg, rng.standard_normal(alg.dim))


def coeffs_close(a, b, atol=1e-12):
    a = a.coeffs if isinstance(a, Scalar) else np.asarray(a, dtype=float)
    b = b.coeffs if isinstance(b, Scalar) else np.asarray(b, dtype=float)
    return np.allclose(a, b, rtol=0.0, atol=atol)
