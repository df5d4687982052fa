"""Command-line front end.

Every command prints JSON on stdout (one object, or one object per line
for traces); diagnostics go to stderr. Exit status 2 means the input could
not be parsed and 3 means the input was parsed but is geometrically invalid.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bidisc as bd
from . import geodesic_spaces as gs
from .algebra import Algebra, Scalar, algebra, conj, inverse, kt, norm_form, sigma_square
from .connection import make_geodesic, sectional
from .errors import DegeneratePlaneError, GeometryError
from .hermitian import HermitianSpace, random_vector
from .projective import (
    MetricConvention,
    ProjPoint,
    Tangent,
    metric_gram,
    random_regular_point,
    sign_pattern,
    tance,
    tangent,
    tangent_real_basis,
)

EXIT_USAGE = 2
EXIT_DOMAIN = 3


class UsageError(Exception):
    """Command-line input that does not parse."""


# -- value parsing ----------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_NAMES = {"pi": math.pi, "e": math.e, "tau": math.tau}
_FUNCS = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos, "sinh": math.sinh, "cosh": math.cosh}


def number(text: str) -> float:
    """Evaluate a small arithmetic expression such as ``pi/2`` or ``-sqrt(2)``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = ev(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise UsageError(f"cannot evaluate {text!r}")

    try:
        return float(ev(ast.parse(text.strip(), mode="eval")))
    except (SyntaxError, ZeroDivisionError, OverflowError) as exc:
        raise UsageError(f"cannot evaluate {text!r}: {exc}") from exc


def coeffs(text: str, alg: Algebra) -> np.ndarray:
    values = [number(part) for part in text.split(",") if part.strip()]
    if len(values) != alg.dim:
        raise UsageError(f"{alg} elements need {alg.dim} coefficients, got {len(values)} in {text!r}")
    return np.array(values)


def vector_entries(text: str, space: HermitianSpace) -> np.ndarray:
    """Entries separated by ``;``, coefficients by ``,``."""
    alg = space.alg
    if ";" in text:
        parts = [p for p in text.split(";") if p.strip()]
    elif alg.dim == 1:
        parts = [p for p in text.split(",") if p.strip()]
    else:
        parts = [text]
    if len(parts) != space.n:
        raise UsageError(f"{space} vectors need {space.n} entries, got {len(parts)} in {text!r}")
    return np.array([coeffs(p, alg) for p in parts])


def _imaginary_to_python(text: str) -> str:
    text = re.sub(r"(\d)i\b", r"\1j", text)
    return re.sub(r"(?<![\w.])i\b", "1j", text)


def complex_number(text: str) -> complex:
    """``2``, ``pi/2``, ``1+2i`` or ``-i``."""
    try:
        return complex(number(text), 0.0)
    except UsageError:
        pass
    try:
        return complex(_imaginary_to_python(text).replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot read a complex number from {text!r}") from exc


def grouped_pairs(text: str) -> list[tuple[str, str]]:
    """``"(x,y),(z,w)"`` -> ``[("x","y"), ("z","w")]``."""
    try:
        tree = ast.parse(_imaginary_to_python(text.strip()), mode="eval").body
    except SyntaxError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from exc
    if not isinstance(tree, ast.Tuple) or not all(
        isinstance(el, ast.Tuple) and len(el.elts) == 2 for el in tree.elts
    ):
        raise UsageError(f"expected pairs like (x,y),(z,w), got {text!r}")
    return [tuple(ast.unparse(c) for c in el.elts) for el in tree.elts]


def theta_grid(text: str, steps: int) -> np.ndarray:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) == 1:
        start = end = number(parts[0])
    elif len(parts) == 2:
        start, end = number(parts[0]), number(parts[1])
    else:
        raise UsageError(f"--range takes 'start,end' or a single value, got {text!r}")
    if steps < 1:
        raise UsageError("--steps must be positive")
    return np.linspace(start, end, steps)


# -- output -----------------------------------------------------------------


def clean(x: float, digits: int = 12):
    """Round, drop negative zero, and print integral values as ints."""
    x = round(float(x), digits)
    if x == 0.0:
        return 0
    if x.is_integer() and abs(x) < 2**53:
        return int(x)
    return x


def clean_scalar(x: float, digits: int = 12) -> float:
    x = round(float(x), digits)
    return 0.0 if x == 0.0 else x


def coefficient_list(a) -> list:
    return [clean(c) for c in np.asarray(a).reshape(-1)]


def canonical_coords(v, alg: Algebra) -> list:
    """First unit entry scaled to 1, otherwise unit norm; one list per entry."""
    entries = np.asarray(v.entries if hasattr(v, "entries") else v, dtype=float)
    norm = np.linalg.norm(entries)
    for row in entries:
        if norm > 0 and alg.is_unit_array(row / norm):
            inv = alg.inverse_array(row)
            entries = alg.mul_arrays(inv, entries)
            break
    else:
        entries = entries / norm
    if alg.dim == 1:
        return [clean(row[0]) for row in entries]
    return [coefficient_list(row) for row in entries]


def emit(record: dict, fmt: str = "json", out=None) -> None:
    out = sys.stdout if out is None else out
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(record.keys())
        writer.writerow(
            json.dumps(v, separators=(",", ":")) if isinstance(v, (list, dict)) else v
            for v in record.values()
        )
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(record, separators=(",", ":")) + "\n")


def emit_lines(records, fmt: str = "json", out=None) -> None:
    out = sys.stdout if out is None else out
    records = list(records)
    if fmt == "csv" and records:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(records[0].keys())
        for r in records:
            writer.writerow(
                json.dumps(v, separators=(",", ":")) if isinstance(v, (list, dict)) else v
                for v in r.values()
            )
    else:
        for r in records:
            emit(r, "json", out)


# -- spaces -----------------------------------------------------------------

# name -> (algebra, signature, metric sign, sampling region)
PRESETS = {
    "pr1": ("R", "++", MetricConvention.PLUS, None),
    "pc1": ("C", "++", MetricConvention.PLUS, None),
    "ph1": ("H", "++", MetricConvention.PLUS, None),
    "pd1": ("D", "++", MetricConvention.PLUS, None),
    "pcs1": ("Cs", "++", MetricConvention.PLUS, None),
    "ps1-split": ("Cs", "++", MetricConvention.PLUS, None),
    "phs1": ("Hs", "++", MetricConvention.PLUS, None),
    "hc2": ("C", "-++", MetricConvention.MINUS, -1),
    "pd2": ("D", "+++", MetricConvention.PLUS, None),
    "pcs2": ("Cs", "+++", MetricConvention.PLUS, None),
    "phs2": ("Hs", "+++", MetricConvention.PLUS, None),
    "bidisc": ("CxC", "-+", MetricConvention.MINUS, -1),
}


def get_algebra(args) -> Algebra:
    if args.alg is None:
        raise UsageError("--alg is required")
    try:
        return algebra(args.alg, args.t) if args.alg == "Kt" else algebra(args.alg)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def get_space(args) -> tuple[HermitianSpace, MetricConvention]:
    preset = getattr(args, "space", None)
    if preset:
        tag, sig, conv, _ = PRESETS[preset]
        alg = algebra(tag)
    else:
        alg = get_algebra(args)
        if args.sig is None:
            raise UsageError("--sig (or --space) is required")
        sig, conv = args.sig, MetricConvention.PLUS
        try:
            HermitianSpace(alg, sig)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if getattr(args, "conv", None):
        conv = MetricConvention.parse(args.conv)
    return HermitianSpace(alg, sig), conv


def get_region(args):
    """Explicit ``--region``, else the preset's default, else everywhere."""
    if getattr(args, "region", None) is not None:
        return int(args.region)
    if getattr(args, "space", None):
        return PRESETS[args.space][3]
    return None


def _tol_digits(tol: float) -> int:
    return max(0, min(12, int(round(-math.log10(tol)))))


def _seeds(seed: int, count: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _run_indexed(func, rngs, jobs: int):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, rngs))
    return [func(r) for r in rngs]


# -- commands ---------------------------------------------------------------


def cmd_algebra(args) -> int:
    alg = get_algebra(args)
    a = Scalar(alg, coeffs(args.a, alg))
    if args.op == "mul":
        if args.b is None:
            raise UsageError("mul needs --b")
        result = a * Scalar(alg, coeffs(args.b, alg))
        emit({"result": coefficient_list(result.coeffs)}, args.format)
    elif args.op == "conj":
        emit({"result": coefficient_list(conj(a).coeffs)}, args.format)
    elif args.op == "inv":
        emit({"result": coefficient_list(inverse(a).coeffs)}, args.format)
    elif args.op == "unit":
        emit({"unit": a.is_unit()}, args.format)
    else:
        emit({"result": coefficient_list(norm_form(a).coeffs)}, args.format)
    return 0


def cmd_tance(args) -> int:
    space, _ = get_space(args)
    p = ProjPoint(space.vector(vector_entries(args.p, space)))
    q = ProjPoint(space.vector(vector_entries(args.q, space)))
    emit({"tance": coefficient_list(tance(p, q).coeffs)}, args.format)
    return 0


def _chart_record(point: ProjPoint) -> dict:
    chart = gs.chart_for(point)
    if chart is None:
        return {}
    xyz, params = chart(point)
    return {"chart": [clean(c) for c in xyz], "params": [clean(c) for c in params]}


def cmd_geodesic_trace(args) -> int:
    space, conv = get_space(args)
    p = ProjPoint(space.vector(vector_entries(args.p, space)))
    t = tangent(p, space.vector(vector_entries(args.tp, space)))
    if t.is_zero():
        raise GeometryError("the tangent vector projects to zero")
    geo = make_geodesic(p, t)
    metric_sign = geo.norms[0] * geo.norms[1] * float(conv)
    sign = "null" if metric_sign == 0 else ("positive" if metric_sign > 0 else "negative")
    records = []
    for theta in theta_grid(args.range, args.steps):
        point = geo.point(float(theta))
        rec = {
            "theta": clean_scalar(theta),
            "point": canonical_coords(point.rep, space.alg),
            "family": geo.family.value,
            "sign": sign,
        }
        rec.update(_chart_record(point))
        records.append(rec)
    emit_lines(records, args.format)
    return 0


FAMILIES = {
    # t2 as (coefficient of j e1, coefficient of e2), with e1, e2 orthonormal
    "sinh": lambda th: (math.sinh(th), math.cosh(th), False),
    "cosh": lambda th: (math.cosh(th), math.sinh(th), False),
    "cos": lambda th: (math.cos(th), math.sin(th), True),
}


def _family_curvature(space: HermitianSpace, conv, family: str, theta: float) -> float:
    if space.n < 3 or space.alg.tag not in ("Cs", "Hs"):
        raise UsageError("--family needs a split space of rank 3 (pcs2 or phs2)")
    alg = space.alg
    p = ProjPoint(space.basis_vector(0))
    e1 = Tangent(p, space.basis_vector(1))
    e2 = Tangent(p, space.basis_vector(2))
    j = alg.basis_element(1 if alg.tag == "Cs" else 2)
    x, y, inside = FAMILIES[family](theta)
    t2 = j * (x * e1 + y * e2) if inside else x * (j * e1) + y * e2
    return sectional(e1, t2, conv)


def cmd_curvature(args) -> int:
    space, conv = get_space(args)
    if args.family:
        emit({"K": clean_scalar(_family_curvature(space, conv, args.family, number(args.theta)))}, args.format)
        return 0

    region = get_region(args)

    def sample(rng):
        for _ in range(100):
            p = random_regular_point(space, rng, region)
            t1 = tangent(p, random_vector(space, rng))
            t2 = tangent(p, random_vector(space, rng))
            try:
                return sectional(t1, t2, conv)
            except DegeneratePlaneError:
                continue
        return None

    values = [v for v in _run_indexed(sample, _seeds(args.seed, args.samples), args.jobs) if v is not None]
    if not values:
        raise DegeneratePlaneError(f"no nondegenerate tangent plane found in P({space})")
    lo, hi = min(values), max(values)
    digits = _tol_digits(args.tol)
    if hi - lo <= args.tol * max(1.0, abs(lo)):
        emit({"K": clean_scalar(0.5 * (lo + hi), digits)}, args.format)
    else:
        emit({"K_min": clean_scalar(lo, digits), "K_max": clean_scalar(hi, digits)}, args.format)
    return 0


def cmd_signature(args) -> int:
    space, conv = get_space(args)
    region = get_region(args)

    def sample(rng):
        p = random_regular_point(space, rng, region)
        return sign_pattern(metric_gram(tangent_real_basis(p), conv))

    patterns = sorted(set(_run_indexed(sample, _seeds(args.seed, args.samples), args.jobs)))
    if len(patterns) != 1:
        raise GeometryError(f"sign pattern is not constant: {patterns}")
    emit({"signature": patterns[0]}, args.format)
    return 0


def cmd_convert(args) -> int:
    if args.target == "s2":
        if args.pole:
            x, y, z = (number(c) for c in args.pole.split(","))
            n = math.sqrt(x * x + y * y + z * z)
            half = 0.5 * math.acos(max(-1.0, min(1.0, z / n)))
            beta = -math.atan2(y, x)
            z1 = math.sin(half) * complex(math.cos(beta), math.sin(beta))
            rep = gs.PC1.vector([[math.cos(half), 0.0], [z1.real, z1.imag]])
            emit({"point": canonical_coords(rep, gs.PC1.alg)}, args.format)
            return 0
        z0, z1 = (complex_number(c) for c in _require(args.point, "--point").split(";"))
        u = ProjPoint(gs.PC1.vector([[z0.real, z0.imag], [z1.real, z1.imag]]))
        emit({"pole": [clean(c) for c in gs.hopf(u)]}, args.format)
    elif args.target == "e2":
        if args.line:
            ex, ey, s = (number(c) for c in args.line.split(","))
            e = complex(ex, ey)
            u = gs.pd1_from_line(gs.OrientedLineE2(e / abs(e), s))
            emit({"point": canonical_coords(u.rep, gs.PD1.alg)}, args.format)
            return 0
        a, b = (complex_number(c) for c in _require(args.point, "--point").split(";"))
        line = gs.line_from_pd1(gs.pd1_point(a, b))
        emit({"E": [clean(line.e.real), clean(line.e.imag)], "s": clean(line.s)}, args.format)
    else:
        pairs = grouped_pairs(_require(args.point, "--point"))
        if len(pairs) != 2:
            raise UsageError("h2 points are written (a,a'),(b,b')")
        (a, a2), (b, b2) = ((number(x), number(y)) for x, y in pairs)
        u = gs.pcs1_point((a, a2), (b, b2))
        geo = gs.h2_from_pcs1(u)
        ds = gs.double_cover_f(u)
        emit(
            {
                "A": canonical_coords(geo.A.rep, geo.A.alg),
                "B": canonical_coords(geo.B.rep, geo.B.alg),
                "ds": canonical_coords(ds.rep, ds.alg),
            },
            args.format,
        )
    return 0


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def cmd_transition(args) -> int:
    if args.grid < 2:
        raise UsageError("--grid needs at least two points")
    records = []
    for t in np.linspace(0.0, 1.0, args.grid):
        t = float(t)
        space = HermitianSpace(kt(t), args.sig or "++")
        p_text = args.p or ";".join(["1,0"] + ["1,1"] * (space.n - 1))
        q_text = args.q or ";".join(["1,0"] + ["0,0"] * (space.n - 1))
        p = ProjPoint(space.vector(vector_entries(p_text, space)))
        q = ProjPoint(space.vector(vector_entries(q_text, space)))
        ep, eq = gs.transition_embed(t, p), gs.transition_embed(t, q)
        native = tance(p, q).coeffs
        embedded = tance(ep, eq).coeffs
        records.append(
            {
                "t": clean_scalar(t),
                "sigma_sq": clean_scalar(sigma_square(t)),
                "class": kt(t).iso_class,
                "point": [coefficient_list(row) for row in ep.rep.entries],
                "tance_kt": clean_scalar(native[0]),
                "tance_hs": clean_scalar(embedded[0]),
                "residual": clean_scalar(abs(native[0] - embedded[0]) + float(np.abs(embedded[1:]).sum())),
            }
        )
    emit_lines(records, args.format)
    return 0


def _bidisc_point(text: str) -> ProjPoint:
    pairs = grouped_pairs(text)
    if len(pairs) != 2:
        raise UsageError("bidisc points are written (a1,b1),(a2,b2)")
    return bd.bidisc_point([(complex_number(a), complex_number(b)) for a, b in pairs])


def _complex_coords(point: ProjPoint) -> list:
    return canonical_coords(point.rep, point.alg)


def cmd_bidisc(args) -> int:
    u = _bidisc_point(_require(args.point, "--point"))
    if args.op == "classify":
        emit({"ball": bd.classify_ball(u)}, args.format)
    elif args.op == "split":
        first, second = bd.lambda_split(u)
        emit({"first": _complex_coords(first), "second": _complex_coords(second)}, args.format)
    elif args.op == "tau":
        emit({"point": _complex_coords(bd.tau(u))}, args.format)
    else:
        v = _bidisc_point(_require(args.other, "--other"))
        emit({"tance_pair": [clean_scalar(x) for x in bd.tance_pair(u, v)]}, args.format)
    return 0


# -- parser -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser, space: bool = True) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    if space:
        p.add_argument("--alg", choices=("R", "C", "D", "Cs", "H", "Hs", "CxC", "Kt"))
        p.add_argument("--t", type=float, default=None, help="parameter of Kt")
        p.add_argument("--sig", help="signature such as -++")
        p.add_argument("--space", choices=sorted(PRESETS))
        p.add_argument("--conv", choices=("plus", "minus"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algebrae", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", help="arithmetic in one algebra")
    p.add_argument("op", choices=("mul", "conj", "inv", "unit", "norm"))
    p.add_argument("--a", required=True)
    p.add_argument("--b")
    p.add_argument("--alg", required=True, choices=("R", "C", "D", "Cs", "H", "Hs", "CxC", "Kt"))
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("tance", help="tance of two projective points")
    _common(p)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_tance)

    p = sub.add_parser("geodesic-trace", help="sample a geodesic as JSON lines")
    _common(p)
    p.add_argument("--p", required=True)
    p.add_argument("--tp", required=True)
    p.add_argument("--range", default="0,2*pi")
    p.add_argument("--steps", type=int, default=64)
    p.set_defaults(func=cmd_geodesic_trace)

    p = sub.add_parser("curvature", help="sectional curvature of random or named planes")
    _common(p)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--region", choices=("-1", "1"))
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--theta", default="0")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("signature", help="sign pattern of the real metric")
    _common(p)
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--region", choices=("-1", "1"))
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("convert", help="projective points as oriented geodesics")
    p.add_argument("target", choices=("s2", "e2", "h2"))
    p.add_argument("--point")
    p.add_argument("--pole", help="s2: unit vector x,y,z")
    p.add_argument("--line", help="e2: Re E, Im E, s")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("transition", help="embed K_t lines into the split quaternions")
    p.add_argument("--grid", type=int, default=21)
    p.add_argument("--sig")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("bidisc", help="points of the C x C projective line")
    p.add_argument("op", choices=("classify", "split", "tau", "tance-pair"))
    p.add_argument("--point", required=True)
    p.add_argument("--other")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_bidisc)
    return parser


# flags whose values may legitimately start with "-" (signatures, negative numbers)
_VALUE_FLAGS = frozenset(
    ("--sig", "--a", "--b", "--p", "--q", "--tp", "--range", "--theta", "--point", "--pole", "--line", "--other", "--t")
)


def _glue_values(argv):
    # "--sig -++" or "--range -3,3" would otherwise be read as unknown options
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_values(argv))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
