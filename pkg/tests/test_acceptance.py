"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``PASS criterion N`` or ``FAIL criterion N`` line
(visible in ``pytest -v`` output) and then asserts. Base points for the
numerical checks are drawn from the interior of the regular region:
every real component of ``<p,p>`` is at least ``INTERIOR`` for a unit-norm
representative. Near the light cone ``<p,p> = 0`` roundoff grows like
``eps / r^2`` and no fixed absolute tolerance can hold.
"""

import contextlib
import io
import json
import math

import numpy as np
import pytest

from algebrae.algebra import CS, CXC, HS, C, D, H, R, Scalar, conj, inverse, is_unit, kt, sigma_square, zero_divisor_witness
from algebrae.bidisc import (
    BIDISC_SPACE,
    bidisc_metric,
    product_metric,
    random_unitary,
    tance_pair,
    tau,
    unitary_check,
)
from algebrae.cli import main
from algebrae.connection import (
    Family,
    SpreadField,
    g_orthonormalize,
    geodesic_velocity,
    lie_bracket_numeric,
    make_geodesic,
    metric_compat_defect,
    nabla_spread,
    proj_derivative,
    sectional,
    tn_at,
)
from algebrae.errors import DegeneratePlaneError
from algebrae.geodesic_spaces import (
    DS2,
    PC1,
    PCS1,
    PD1,
    boundary_points,
    chart_residual,
    double_cover_f,
    hopf,
    lines_through_point,
    mink_cross,
    pencil_line,
    pushforward_metric_check,
    rev,
    transition_embed,
)
from algebrae.hermitian import HermitianSpace, ModuleVector, random_vector
from algebrae.projective import (
    MetricConvention,
    ProjPoint,
    Tangent,
    equal,
    random_regular_point,
    signature_of_metric,
    tance,
    tangent,
)

PLUS, MINUS = MetricConvention.PLUS, MetricConvention.MINUS
SEED = 20240601
INTERIOR = 0.1
FD_CONSTANT = 1e3


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def report(capsys, number: int, title: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL"
    with capsys.disabled():
        detail = "" if not failures else f" ({len(failures)} failed; first: {failures[0]})"
        print(f"\n{status} criterion {number}: {title}{detail}")
    assert not failures, failures[:5]


def interior_point(space, rng, region=None) -> ProjPoint:
    while True:
        p = random_regular_point(space, rng, region).normalized()
        if np.min(np.abs(p.alg.real_components(p.self_product().coeffs))) >= INTERIOR:
            return p


def unit_tangent(p, rng) -> Tangent:
    while True:
        t = tangent(p, random_vector(p.space, rng))
        if t.vec.norm() > 1e-6:
            return (1.0 / t.vec.norm()) * t


def cli(argv) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main(argv)
    return code, buf.getvalue()


# -- 1 ----------------------------------------------------------------------


def _known_zero_divisor(alg):
    """A fixed zero divisor, or None when the algebra is a division algebra."""
    e = np.zeros(alg.dim)
    if alg.tag == "Kt":
        s = sigma_square(alg.t)
        if s < 0:
            return None
        e[:2] = (math.sqrt(s), 1.0)
    elif alg.tag == "D":
        e[1] = 1.0
    elif alg.tag == "Cs":
        e[:2] = (1.0, 1.0)
    elif alg.tag == "Hs":
        e[1:3] = (1.0, 1.0)
    elif alg.tag == "CxC":
        e[0] = 1.0
    else:
        return None
    return Scalar(alg, e)


def test_criterion_1_algebra_laws(capsys, rng):
    failures = []
    tol = 1e-12
    algebras = [R, C, D, CS, H, HS, CXC] + [kt(t) for t in np.linspace(0, 1, 11)]
    for alg in algebras:
        one = Scalar(alg, alg.one)
        for i in range(1000):
            a, b, c = (Scalar(alg, rng.standard_normal(alg.dim)) for _ in range(3))
            checks = {
                "associativity": (a * b) * c - a * (b * c),
                "antiautomorphism": conj(a * b) - conj(b) * conj(a),
                "involution": conj(conj(a)) - a,
                "additivity": conj(a + b) - conj(a) - conj(b),
            }
            if is_unit(a):
                # a residual below eps |a| |a^-1| is all floating point can certify
                inv = inverse(a)
                scale = max(1.0, a.norm() * inv.norm())
                for name, diff in (("right inverse", a * inv - one), ("left inverse", inv * a - one)):
                    if np.abs(diff.coeffs).max() > tol * scale:
                        failures.append(f"{alg} {name}: {np.abs(diff.coeffs).max():.2e} at scale {scale:.1e}")
            elif zero_divisor_witness(a) is None:
                failures.append(f"{alg} sample {i} is neither a unit nor a zero divisor")
            for name, diff in checks.items():
                if np.abs(diff.coeffs).max() > tol:
                    failures.append(f"{alg} {name}: {np.abs(diff.coeffs).max():.2e}")
        e = _known_zero_divisor(alg)
        if (e is None) != (alg.iso_class in ("R", "C", "H")):
            failures.append(f"{alg}: unexpected zero-divisor structure")
        for _ in range(100 if e is not None else 0):
            u, v = (Scalar(alg, rng.standard_normal(alg.dim)) for _ in range(2))
            z = u * e * v
            w = zero_divisor_witness(z)
            if is_unit(z) or w is None or np.abs((z * w).coeffs).max() > tol * (1 + z.norm()):
                failures.append(f"{alg}: {z} is not a clean zero divisor")
    report(capsys, 1, "algebra laws and unit/zero-divisor dichotomy, 1e-12", failures)


# -- 2 ----------------------------------------------------------------------


def test_criterion_2_signature_table(capsys):
    table = {R: "+", D: "+0", C: "++", CS: "+-", H: "++++", HS: "++--"}
    failures = []
    for alg, expected in table.items():
        got = signature_of_metric(HermitianSpace(alg, "++"), samples=100, seed=SEED)
        if got != expected:
            failures.append(f"{alg}: {got} != {expected}")
    report(capsys, 2, "projective line signature table over 100 points each", failures)


# -- 3 ----------------------------------------------------------------------


def _random_frame(p, rng, conv=PLUS):
    while True:
        try:
            return g_orthonormalize(unit_tangent(p, rng), unit_tangent(p, rng), conv)
        except (DegeneratePlaneError, ValueError):
            continue


FAMILIES = {
    "sinh": (lambda j, e1, e2, th: math.sinh(th) * (j * e1) + math.cosh(th) * e2, lambda th: 1 - 3 * math.sinh(th) ** 2),
    "cosh": (lambda j, e1, e2, th: math.cosh(th) * (j * e1) + math.sinh(th) * e2, lambda th: 1 + 3 * math.cosh(th) ** 2),
    "cos": (lambda j, e1, e2, th: j * (math.cos(th) * e1 + math.sin(th) * e2), lambda th: 1 + 3 * math.cos(th) ** 2),
}


def test_criterion_3_curvature_constants(capsys, rng):
    failures = []
    tol = 1e-9
    for alg in (CS, HS):
        space = HermitianSpace(alg, "++")
        for _ in range(100):
            p = interior_point(space, rng)
            k = sectional(*_random_frame(p, rng))
            if abs(k - 4) > tol:
                failures.append(f"P1 over {alg}: K = {k!r}")

    for alg in (CS, HS):
        space = HermitianSpace(alg, "+++")
        p = ProjPoint(space.basis_vector(0))
        e1, e2 = Tangent(p, space.basis_vector(1)), Tangent(p, space.basis_vector(2))
        j = alg.basis_element(1 if alg is CS else 2)
        for name, (make, expected) in FAMILIES.items():
            for theta in np.linspace(-1.5, 1.5, 21):
                k = sectional(e1, make(j, e1, e2, theta))
                if abs(k - expected(theta)) > tol:
                    failures.append(f"{name} family over {alg} at {theta}: {k} vs {expected(theta)}")

    space = HermitianSpace(D, "+++")
    found = 0
    while found < 100:
        p = interior_point(space, rng)
        try:
            k = sectional(unit_tangent(p, rng), unit_tangent(p, rng))
        except DegeneratePlaneError:
            continue
        found += 1
        if abs(k - 1) > tol:
            failures.append(f"P2 over D: K = {k!r}")

    space = HermitianSpace(C, "-++")
    values = []
    for _ in range(1000):
        p = interior_point(space, rng, region=-1)
        values.append(sectional(unit_tangent(p, rng), unit_tangent(p, rng), MINUS))
    lo, hi = min(values), max(values)
    if lo < -4 - tol or hi > -1 + tol:
        failures.append(f"complex hyperbolic range [{lo}, {hi}] leaves [-4, -1]")
    if lo > -4 + 0.05 or hi < -1 - 0.05:
        failures.append(f"complex hyperbolic range [{lo}, {hi}] misses an endpoint")
    report(capsys, 3, "curvature constants (split lines, families, dual plane, pinching)", failures)


# -- 4 ----------------------------------------------------------------------


def test_criterion_4_connection_identities(capsys, rng):
    failures = []
    cases = [(R, "+++"), (C, "-++"), (D, "+++"), (CS, "+++"), (H, "+++"), (HS, "-++"), (CXC, "-++")]
    for alg, sig in cases:
        space = HermitianSpace(alg, sig)
        for _ in range(10):
            p = interior_point(space, rng)
            t1, t2, s = (unit_tangent(p, rng) for _ in range(3))
            for step in (1e-4, 1e-5):
                bound = FD_CONSTANT * step**2
                compat = abs(metric_compat_defect(t1, t2, s, step=step))
                bracket = lie_bracket_numeric(SpreadField(t1), SpreadField(s), p, step=step)
                torsion = (nabla_spread(t1, s, p) - nabla_spread(s, t1, p) - bracket).vec.norm()
                if compat > bound:
                    failures.append(f"{alg} metric compatibility {compat:.2e} at step {step}")
                if torsion > bound:
                    failures.append(f"{alg} torsion {torsion:.2e} at step {step}")
            base = nabla_spread(t1, s, p).vec.norm()
            if base > 1e-12:
                failures.append(f"{alg} nabla of a spread at its base: {base:.2e}")
            err = proj_derivative(t1, step=1e-5).max_error
            if err > 1e-8:
                failures.append(f"{alg} projection derivative: {err:.2e}")
    report(capsys, 4, "metric compatibility, torsion, spread at base, projection derivative", failures)


# -- 5 ----------------------------------------------------------------------


def _null_direction(alg):
    """A regular base point with a null tangent direction for each algebra."""
    zero, one = [0.0] * alg.dim, [1.0] + [0.0] * (alg.dim - 1)
    if alg is D:
        eps = [0.0, 1.0]
        return HermitianSpace(D, "+++"), [one, zero, zero], [zero, eps, zero]
    if alg in (CS, HS):
        j = [0.0] * alg.dim
        j[1 if alg is CS else 2] = 1.0
        return HermitianSpace(alg, "+++"), [one, zero, zero], [zero, one, j]
    return HermitianSpace(alg, "+-+"), [one, zero, zero], [zero, one, one]


def test_criterion_5_geodesic_ode(capsys, rng):
    failures = []
    tol = 1e-6
    for alg in (R, C, D, CS, HS):
        families = set()
        samples = []
        for sig in ("+++", "-++"):
            space = HermitianSpace(alg, sig)
            for _ in range(20):
                p = interior_point(space, rng)
                samples.append(make_geodesic(p, unit_tangent(p, rng)))
        space, base, direction = _null_direction(alg)
        p = ProjPoint.of(space, base)
        samples.append(make_geodesic(p, Tangent(p, space.vector(direction))))
        for geo in samples:
            families.add(geo.family)
            for theta in np.linspace(-0.6, 0.6, 7):
                velocity = geodesic_velocity(geo, float(theta))
                expected = tn_at(geo.dir, velocity.base)
                err = (velocity - expected).vec.norm()
                if err > tol * (1 + expected.vec.norm()):
                    failures.append(f"{alg} {geo.family.value} at {theta:.2f}: {err:.2e}")
        if families != set(Family):
            failures.append(f"{alg}: families covered {sorted(f.value for f in families)}")
    report(capsys, 5, "geodesic velocity equals Tn for all three families", failures)


# -- 6 ----------------------------------------------------------------------


def test_criterion_6_double_cover(capsys, rng):
    failures = []
    checked = 0
    for _ in range(1000):
        u = interior_point(PCS1, rng)
        t = unit_tangent(u, rng)
        pulled, source = pushforward_metric_check("h2", t, t)
        if abs(source) > 1e-6:
            checked += 1
            if abs(pulled / source + 4) > 1e-8:
                failures.append(f"ratio {pulled / source!r}")
        A, B = boundary_points(u)
        f = double_cover_f(u)
        if not equal(f, ProjPoint(DS2.vector(mink_cross(A, B)))):
            failures.append("f is not [A x B]")
        back = rev(u)
        if equal(back, u) or not equal(rev(back), u) or not equal(double_cover_f(back), f):
            failures.append("rev is not a fixed-point-free involution preserving f")
    if checked < 900:
        failures.append(f"only {checked} non-null tangents")
    report(capsys, 6, "double cover ratio -4, f = [A x B], rev", failures)


# -- 7 ----------------------------------------------------------------------


def test_criterion_7_euclidean_lines(capsys, rng):
    failures = []
    checked = 0
    for _ in range(1000):
        u = interior_point(PD1, rng)
        t = unit_tangent(u, rng)
        pulled, source = pushforward_metric_check("e2", t, t)
        if abs(source) > 1e-6:
            checked += 1
            if abs(pulled / source - 4) > 1e-8:
                failures.append(f"ratio {pulled / source!r}")
    if checked < 900:
        failures.append(f"only {checked} non-degenerate tangents")
    for _ in range(100):
        a, b = rng.normal(size=2) * 3
        through = lines_through_point(a, b)
        for theta in np.linspace(-math.pi, math.pi, 100, endpoint=False):
            line = pencil_line(a, b, float(theta))
            foot = (complex(a, b) * line.e.conjugate()).real
            if not through(line) or abs(line.at(foot) - complex(a, b)) > 1e-9:
                failures.append(f"pencil through ({a}, {b}) at {theta}")
    report(capsys, 7, "Euclidean ratio +4 and pencil incidence", failures)


# -- 8 ----------------------------------------------------------------------


def test_criterion_8_sphere_duality(capsys, rng):
    failures = []
    for _ in range(1000):
        p, q = ProjPoint(random_vector(PC1, rng)), ProjPoint(random_vector(PC1, rng))
        lhs = float(np.dot(hopf(p), hopf(q)))
        rhs = 2 * tance(p, q).coeffs[0] - 1
        if abs(lhs - rhs) > 1e-9:
            failures.append(f"{lhs} vs {rhs}")
    report(capsys, 8, "hopf(p).hopf(q) = 2 tance(p,q) - 1", failures)


# -- 9 ----------------------------------------------------------------------


def test_criterion_9_transition(capsys, rng):
    failures = []
    for t in np.linspace(0.0, 1.0, 21):
        t = float(t)
        space = HermitianSpace(kt(t), "++")
        for _ in range(100):
            p, q = interior_point(space, rng), interior_point(space, rng)
            inner = tance(p, q).coeffs[0]
            outer = tance(transition_embed(t, p), transition_embed(t, q)).coeffs
            scale = 1e-12 * (1 + abs(inner))
            if abs(outer[0] - inner) > scale or np.abs(outer[1:]).max() > scale:
                failures.append(f"t={t}: {inner} vs {outer}")
        sq = sigma_square(t)
        expected = -1 if t < 0.5 else (0 if t == 0.5 else 1)
        if int(np.sign(sq)) != expected:
            failures.append(f"sigma^2({t}) = {sq}")
    report(capsys, 9, "tance in K_t equals tance in Hs; sigma^2 flips sign at 1/2", failures)


# -- 10 ---------------------------------------------------------------------


def test_criterion_10_bidisc(capsys, rng):
    failures = []
    for _ in range(1000):
        p = random_regular_point(BIDISC_SPACE, rng, region=(-1, -1))
        t1 = tangent(p, ModuleVector(BIDISC_SPACE, rng.standard_normal((2, 4))))
        t2 = tangent(p, ModuleVector(BIDISC_SPACE, rng.standard_normal((2, 4))))
        value = bidisc_metric(t1, t2)
        if abs(value - product_metric(t1, t2)) > 1e-12 * max(1.0, abs(value)):
            failures.append(f"additivity {value} vs {product_metric(t1, t2)}")
    for _ in range(200):
        m = random_unitary(rng) @ random_unitary(rng)
        if not unitary_check(m):
            failures.append("random U(1,1) x U(1,1) product fails unitary_check")
        u = random_regular_point(BIDISC_SPACE, rng, region=(-1, -1))
        v = random_regular_point(BIDISC_SPACE, rng, region=(-1, -1))
        moved = tance_pair(ProjPoint(m.apply(u.rep)), ProjPoint(m.apply(v.rep)))
        if not np.allclose(moved, tance_pair(u, v), atol=1e-9, rtol=1e-9):
            failures.append(f"tance_pair moved: {moved} vs {tance_pair(u, v)}")
        if not np.array_equal(tau(tau(u)).rep.entries, u.rep.entries):
            failures.append("tau is not an involution")
        first, second = tance_pair(u, v)
        if not np.allclose(tance_pair(tau(u), tau(v)), (second, first), atol=1e-12):
            failures.append("tau does not swap tance_pair")
    report(capsys, 10, "bidisc additivity, U(1,1) invariance, tau", failures)


# -- 11 ---------------------------------------------------------------------

GOLDENS = [
    (["algebra", "mul", "--alg", "Hs", "--a", "0,1,0,0", "--b", "0,0,1,0"], '{"result":[0,0,0,1]}\n'),
    (["algebra", "inv", "--alg", "D", "--a", "1,5"], '{"result":[1,-5]}\n'),
    (["algebra", "unit", "--alg", "Cs", "--a", "1,1"], '{"unit":false}\n'),
    (["curvature", "--space", "ps1-split"], '{"K":4.0}\n'),
    (["signature", "--space", "pd1"], '{"signature":"+0"}\n'),
    (["convert", "h2", "--point", "(1,1),(0,0)"], '{"A":[1,1,0],"B":[1,-1,0],"ds":[0,0,1]}\n'),
]

TRACES = [
    ("Cs", "torus", "1,0;0,0", "0,0;1,0"),
    ("Cs", "torus", "1,0;0,0", "0,0;0,1"),
    ("Cs", "torus", "1,0;0,0", "0,0;1,1"),
    ("Cs", "torus", "1,0.2;0.3,-0.1", "0.5,0;1,0.7"),
    ("D", "cylinder", "1,0;0,0", "0,0;1,0"),
    ("D", "cylinder", "1,0;0,0", "0,0;0,1"),
    ("D", "cylinder", "1,0.4;2,1", "0,1;0.5,-0.3"),
]


def test_criterion_11_cli(capsys):
    failures = []
    for argv, expected in GOLDENS:
        first, second = cli(argv), cli(argv)
        if first != (0, expected) or second != first:
            failures.append(f"{' '.join(argv)} -> {first}")
    for alg, chart, p, tp in TRACES:
        code, out = cli(["geodesic-trace", "--alg", alg, "--sig", "++", "--p", p, "--tp", tp, "--range", "-3,3", "--steps", "61"])
        if code != 0:
            failures.append(f"trace {alg} {p} {tp} exited {code}")
            continue
        records = [json.loads(line) for line in out.splitlines()]
        worst = max(chart_residual(chart, r["chart"]) for r in records)
        if len(records) != 61 or worst >= 1e-9:
            failures.append(f"trace {alg} {p} {tp}: residual {worst:.2e}")
    report(capsys, 11, "CLI goldens byte-stable; traces lie on torus and cylinder", failures)
