"""Command-line interface.

Every command reads an ideal file (one operator per line, optional
'# nvars <n>' directive, '#' comments) from a path or '-' for stdin.
Text output is stable and, for operator listings, itself a valid ideal
file.  With --json a single JSON object is printed instead, under schema
"ore-shape/1".

Exit codes:
    0  success
    2  malformed input: parse errors, arity errors, bad flags or file shape
    3  precondition failures: infinite-dimensional quotient, not in normal
       position, pole at the requested point, origin not ordinary, division
       by zero, non-cyclic class
    4  resource limits: degree cap, truncation order too small
    5  searches that exhausted their budget without an answer
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from .arith import MultiPoly, RatFunc, format_poly
from .errors import (
    ArityError,
    CyclicVectorNotFound,
    DegreeCapExceeded,
    DivisionByZero,
    NonOrdinaryOrigin,
    NormalizationFailed,
    NotCyclic,
    NotNormalPosition,
    NotZeroDimensional,
    OreShapeError,
    ParseError,
    PoleAtPoint,
    TruncationTooSmall,
)
from .gb import GroebnerBasis, TermOrder, groebner_basis
from .ore import OreOperator, TruncSeries, format_operator, format_series
from .parsing import parse_ideal_file, parse_operator
from .series import (
    d_radical_check,
    in_normal_position_series,
    solve_series,
    wronskian_x,
)
from .shape import (
    cyclic_vector,
    eliminate_dx,
    gauge_transform,
    in_normal_position,
    normalize_by_shear,
    shape_basis,
    shear_ideal,
)

SCHEMA = "ore-shape/1"

_EXIT_CODES = (
    (ParseError, 2),
    (ArityError, 2),
    (NotZeroDimensional, 3),
    (NotNormalPosition, 3),
    (NotCyclic, 3),
    (NonOrdinaryOrigin, 3),
    (PoleAtPoint, 3),
    (DivisionByZero, 3),
    (DegreeCapExceeded, 4),
    (TruncationTooSmall, 4),
    (NormalizationFailed, 5),
    (CyclicVectorNotFound, 5),
)


def _exit_code(exc: Exception) -> int:
    for cls, code in _EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 2 if isinstance(exc, ValueError) else 1


class _Input:
    """Parsed ideal file plus bookkeeping shared by all commands."""

    def __init__(self, raw: str):
        self.raw = raw
        self.digest = hashlib.sha256(raw.encode()).hexdigest()
        self.nvars, self.operators = parse_ideal_file(raw)

    def ideal(self, order: TermOrder | None = None, skip: int = 0) -> GroebnerBasis:
        gens = self.operators[skip:]
        if not gens:
            raise ValueError("the input file contains no generators")
        return groebner_basis(gens, order or TermOrder.degrevlex(self.nvars))


def _read_input(args) -> _Input:
    if args.file == "-":
        return _Input(sys.stdin.read())
    with open(args.file, "r", encoding="utf-8") as fh:
        return _Input(fh.read())


def _main_var_index(spec: str | None, nvars: int) -> int:
    """0 for Dx (no swap); k >= 1 to make Dyk play the distinguished role."""
    if spec is None or spec == "Dx":
        return 0
    name = spec[2:] if spec.startswith("Dy") else None
    if name is not None and (name == "" or name.isdigit()):
        k = 1 if name == "" else int(name)
        if name == "" and nvars != 1:
            raise ArityError(f"bare 'Dy' needs an index when nvars = {nvars}")
        if 1 <= k <= nvars:
            return k
    raise ArityError(f"--main-var must be Dx or Dy1..Dy{nvars}, got {spec!r}")


def _swap_ideal(inp: _Input, k: int, skip: int = 0) -> GroebnerBasis:
    gens = [g.swap_roles(k) for g in inp.operators[skip:]]
    if not gens:
        raise ValueError("the input file contains no generators")
    return groebner_basis(gens, TermOrder.degrevlex(inp.nvars))


def _parse_shear_vector(text: str, nvars: int) -> tuple[Fraction, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != nvars:
        raise ArityError(f"--shear needs {nvars} comma-separated rationals, got {len(parts)}")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad shear coefficient: {exc}") from None


def _op_json(op: OreOperator) -> str:
    return format_operator(op)


def _series_json(f: TruncSeries) -> dict:
    terms = [
        {"exponents": list(expo), "coefficient": str(c)}
        for expo, c in sorted(f.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    ]
    return {"order": f.order, "terms": terms}


def _frac_str(c: Fraction) -> str:
    return str(c)


# ---------------------------------------------------------------------------
# command handlers: each returns (result_dict, text_lines)


def _ideal_file_lines(nvars: int, ops) -> list[str]:
    return [f"# nvars {nvars}"] + [format_operator(g) for g in ops]


def cmd_parse(args, inp: _Input):
    result = {"operators": [_op_json(g) for g in inp.operators]}
    return result, _ideal_file_lines(inp.nvars, inp.operators)


def cmd_mul(args, inp: _Input):
    if not inp.operators:
        raise ValueError("the input file contains no operators to multiply")
    acc = inp.operators[0]
    for g in inp.operators[1:]:
        acc = acc * g
    return {"product": _op_json(acc)}, [format_operator(acc)]


def cmd_apply(args, inp: _Input):
    if len(inp.operators) < 2:
        raise ValueError("apply needs one operator line followed by ideal generators")
    op = inp.operators[0]
    gb = inp.ideal(skip=1)
    sol = solve_series(gb, order=args.trunc)
    images = [op.apply(f) for f in sol.members]
    result = {
        "dimension": sol.r,
        "applied": _op_json(op),
        "images": [_series_json(f) for f in images],
    }
    lines = [format_series(f) for f in images]
    return result, lines


def cmd_gb(args, inp: _Input):
    if args.order == "lex":
        order = TermOrder.lex(inp.nvars)
    elif args.order == "elim":
        order = TermOrder.elim(inp.nvars)
    else:
        order = TermOrder.degrevlex(inp.nvars)
    gb = inp.ideal(order)
    result = {"order": args.order, "basis": [_op_json(g) for g in gb.gens]}
    return result, _ideal_file_lines(inp.nvars, gb.gens)


def cmd_dim(args, inp: _Input):
    gb = inp.ideal()
    if gb.is_zero_dimensional():
        r = gb.dimension()
        return {"zero_dimensional": True, "dimension": r}, [f"dimension: {r}"]
    return {"zero_dimensional": False, "dimension": None}, ["not zero-dimensional"]


def cmd_eliminate(args, inp: _Input):
    k = _main_var_index(args.main_var, inp.nvars)
    gb = _swap_ideal(inp, k) if k else inp.ideal()
    p = eliminate_dx(gb, method=args.method)
    if k:
        p = p.swap_roles(k)
    return {"eliminant": _op_json(p), "method": args.method}, [format_operator(p)]


def cmd_shape(args, inp: _Input):
    k = _main_var_index(args.main_var, inp.nvars)
    gb = _swap_ideal(inp, k) if k else inp.ideal()
    sb = shape_basis(gb)
    gens = sb.generators()
    p = sb.P()
    qs = [sb.Q(i) for i in range(1, inp.nvars + 1)]
    if k:
        gens = [g.swap_roles(k) for g in gens]
        p = p.swap_roles(k)
        qs = [q.swap_roles(k) for q in qs]
    result = {
        "dimension": sb.r,
        "P": _op_json(p),
        "Q": [_op_json(q) for q in qs],
        "generators": [_op_json(g) for g in gens],
    }
    return result, _ideal_file_lines(inp.nvars, gens)


def cmd_check_normal(args, inp: _Input):
    k = _main_var_index(args.main_var, inp.nvars)
    gb = _swap_ideal(inp, k) if k else inp.ideal()
    algebraic = in_normal_position(gb)
    result = {"via": args.via}
    if args.via == "series":
        verdict = in_normal_position_series(gb, order=args.trunc)
        result["normal"] = verdict
        result["algebraic_agrees"] = verdict == algebraic
    else:
        result["normal"] = algebraic
    lines = [f"normal: {'true' if result['normal'] else 'false'}"]
    if args.via == "series":
        lines.append(f"algebraic agrees: {'true' if result['algebraic_agrees'] else 'false'}")
    return result, lines


def cmd_check_dradical(args, inp: _Input):
    gb = inp.ideal()
    verdict = d_radical_check(gb, degree_bound=args.degree_bound, order=args.trunc)
    result = {
        "verdict": verdict.tag,
        "degree_bound": verdict.degree_bound,
        "trunc_order": verdict.order,
        "witness": None
        if verdict.witness is None
        else [format_poly(p) for p in verdict.witness],
    }
    lines = [f"verdict: {verdict.tag}"]
    if verdict.witness is not None:
        lines += [f"witness[{i}]: {format_poly(p)}" for i, p in enumerate(verdict.witness)]
    return result, lines


def cmd_shear(args, inp: _Input):
    c = _parse_shear_vector(args.shear, inp.nvars)
    gb = shear_ideal(inp.ideal(), c)
    result = {
        "shear": [str(ci) for ci in c],
        "basis": [_op_json(g) for g in gb.gens],
    }
    return result, _ideal_file_lines(inp.nvars, gb.gens)


def cmd_normalize(args, inp: _Input):
    gb = inp.ideal()
    params, sheared = normalize_by_shear(
        gb, seed=args.seed, max_attempts=args.max_attempts, coeff_range=args.coeff_range
    )
    result = {
        "shear": [str(ci) for ci in params.c],
        "basis": [_op_json(g) for g in sheared.gens],
    }
    lines = ["shear: " + ",".join(str(ci) for ci in params.c)]
    lines += _ideal_file_lines(inp.nvars, sheared.gens)
    return result, lines


def cmd_solve(args, inp: _Input):
    gb = inp.ideal()
    sol = solve_series(gb, order=args.trunc)
    result = {
        "dimension": sol.r,
        "initial_monomials": [list(m) for m in sol.initial_monomials],
        "members": [_series_json(f) for f in sol.members],
    }
    lines = [f"dimension: {sol.r}"]
    lines += [format_series(f) for f in sol.members]
    return result, lines


def cmd_wronskian(args, inp: _Input):
    k = _main_var_index(args.main_var, inp.nvars)
    gb = _swap_ideal(inp, k) if k else inp.ideal()
    sol = solve_series(gb, order=args.trunc)
    if sol.r == 0:
        raise NotZeroDimensional("the unit ideal has no solutions to take a Wronskian of")
    w = wronskian_x(sol.members)
    if k:
        w = w.swap_vars(k)
    return {"dimension": sol.r, "wronskian": _series_json(w)}, [format_series(w)]


def cmd_gauge(args, inp: _Input):
    k = _main_var_index(args.main_var, inp.nvars)
    gb = _swap_ideal(inp, k) if k else inp.ideal()
    if args.cyclic_vector is not None:
        m = parse_operator(args.cyclic_vector, inp.nvars)
        if k:
            m = m.swap_roles(k)
    else:
        m = cyclic_vector(
            gb, seed=args.seed, degree_bound=args.degree_bound, max_attempts=args.max_attempts
        )
    sb = gauge_transform(gb, m)
    p = sb.P()
    qs = [sb.Q(i) for i in range(1, inp.nvars + 1)]
    gens = sb.generators()
    m_out = m
    if k:
        p = p.swap_roles(k)
        qs = [q.swap_roles(k) for q in qs]
        gens = [g.swap_roles(k) for g in gens]
        m_out = m.swap_roles(k)
    result = {
        "cyclic_vector": _op_json(m_out),
        "dimension": sb.r,
        "P": _op_json(p),
        "Q": [_op_json(q) for q in qs],
        "generators": [_op_json(g) for g in gens],
    }
    lines = [f"cyclic vector: {format_operator(m_out)}"]
    lines += _ideal_file_lines(inp.nvars, gens)
    return result, lines


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="oreshape",
        description="Exact computations with linear differential operators: "
        "left Groebner bases, elimination, shape bases, shears, and "
        "truncated series solutions.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, func, help_, main_var=False, trunc=None, search=False):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file", help="ideal file path, or - for stdin")
        p.add_argument("--json", action="store_true", help="emit a JSON object")
        if main_var:
            p.add_argument(
                "--main-var",
                metavar="D",
                default=None,
                help="distinguished derivative: Dx (default) or Dyk",
            )
        if trunc is not None:
            p.add_argument(
                "--trunc",
                type=int,
                default=trunc,
                metavar="N",
                help=f"guaranteed series order (default {trunc})",
            )
        if search:
            p.add_argument("--seed", type=int, default=0, help="search seed (default 0)")
            p.add_argument(
                "--max-attempts", type=int, default=None, help="candidate budget"
            )
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, "parse and reprint the operators canonically")
    add("mul", cmd_mul, "multiply the operators in file order")
    add("apply", cmd_apply, "apply the first operator to the solutions of the rest", trunc=8)
    pgb = add("gb", cmd_gb, "reduced left Groebner basis")
    pgb.add_argument(
        "--order",
        choices=("degrevlex", "lex", "elim"),
        default="degrevlex",
        help="term order (default degrevlex)",
    )
    add("dim", cmd_dim, "dimension of the quotient by the ideal")
    pel = add("eliminate", cmd_eliminate, "monic generator of the main-variable subideal", main_var=True)
    pel.add_argument(
        "--method",
        choices=("krylov", "elim-order"),
        default="krylov",
        help="elimination algorithm (default krylov)",
    )
    add("shape", cmd_shape, "shape basis {Dyi - Qi(Dx), P(Dx)}", main_var=True)
    pcn = add("check-normal", cmd_check_normal, "normal position test", main_var=True, trunc=8)
    pcn.add_argument(
        "--via",
        choices=("algebraic", "series"),
        default="algebraic",
        help="decision procedure (default algebraic)",
    )
    pdr = add("check-dradical", cmd_check_dradical, "search for a rational dependence among solutions", trunc=10)
    pdr.add_argument(
        "--degree-bound",
        type=int,
        default=3,
        metavar="D",
        help="max total degree of dependence multipliers (default 3)",
    )
    psh = add("shear", cmd_shear, "apply a linear change of variables to the ideal")
    psh.add_argument(
        "--shear",
        required=True,
        metavar="C1,..,CN",
        help="shear coefficients, one rational per y-variable",
    )
    pno = add("normalize", cmd_normalize, "find a shear putting the ideal in normal position", search=True)
    pno.add_argument(
        "--coeff-range",
        type=int,
        default=5,
        metavar="B",
        help="random shear coefficients drawn from [-B, B] (default 5)",
    )
    add("solve", cmd_solve, "truncated series basis of the solution space", trunc=8)
    add("wronskian", cmd_wronskian, "Wronskian of the solution basis in the main variable", main_var=True, trunc=8)
    pga = add("gauge", cmd_gauge, "shape basis of the gauge transform by a cyclic vector", main_var=True, search=True)
    pga.add_argument(
        "--cyclic-vector",
        metavar="EXPR",
        default=None,
        help="operator whose class to use (default: search for one)",
    )
    pga.add_argument(
        "--degree-bound",
        type=int,
        default=2,
        metavar="D",
        help="max x-degree of candidate multipliers in the search (default 2)",
    )
    return top


def _normalize_defaults(args):
    if getattr(args, "max_attempts", None) is None:
        args.max_attempts = 200 if args.command == "gauge" else 20


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _normalize_defaults(args)
    started = time.perf_counter()
    try:
        inp = _read_input(args)
        result, lines = args.func(args, inp)
    except (OreShapeError, ValueError, OSError) as exc:
        code = 2 if isinstance(exc, OSError) else _exit_code(exc)
        print(f"error: {exc}", file=sys.stderr)
        if getattr(args, "json", False):
            payload = {
                "schema": SCHEMA,
                "command": args.command,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            }
            print(json.dumps(payload, indent=2))
        return code
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    if args.json:
        payload = {
            "schema": SCHEMA,
            "command": args.command,
            "nvars": inp.nvars,
            "main_var": getattr(args, "main_var", None) or "Dx",
            "input_digest": inp.digest,
            "result": result,
            "timings_ms": {"total": round(elapsed_ms, 3)},
        }
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
