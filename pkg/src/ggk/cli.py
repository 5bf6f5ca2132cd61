"""``ggk`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .dissection import DissectionError, algebra_from_dissection, dissection_from_json, surface_summary
from .fixtures import example_pair
from .gentle_core import (
    GentlePair,
    InfiniteDimensionalError,
    StructureError,
    check_structure,
    pair_from_json,
    pair_to_json,
    quadratic_dual,
    validate_gentle,
)
from .homalg import DEFAULT_PRIME, HomError, hom_dims, underlying_cohomology
from .intersections import IntersectionError, int_table
from .koszul import (
    Thread,
    ThreadError,
    half_rotate,
    half_rotate_open,
    koszul_object,
    simple_resolution,
    smooth_thread,
)
from .string_model import DgModule, StringError, build_x_module, string_from_json, string_to_json, validate_string
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---- input helpers --------------------------------------------------------------------------

def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _kind(data) -> str:
    if isinstance(data, dict):
        if "polygons" in data:
            return "dissection"
        if "arrows" in data:
            return "algebra"
        if "letters" in data or "shifts" in data:
            return "arc"
        if "arcs" in data and "links" in data:
            return "thread"
    raise InputError("cannot tell whether the file holds an algebra, a dissection, an arc or a thread")


def _pair_from_data(data) -> GentlePair:
    kind = _kind(data)
    if kind == "dissection":
        return algebra_from_dissection(dissection_from_json(data))
    if kind == "algebra":
        return pair_from_json(data)
    raise InputError(f"expected an algebra or a dissection, got an {kind} file")


def _load_pair(args) -> GentlePair:
    if args.algebra is None:
        return example_pair()
    return _pair_from_data(_read_json(args.algebra))


def _load_arc(path: str):
    data = _read_json(path)
    if _kind(data) != "arc":
        raise InputError(f"{path}: expected an arc file")
    return string_from_json(data)


def _over(pair: GentlePair, s) -> GentlePair:
    return quadratic_dual(pair) if s.over == "dual" else pair


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


def _dims_json(dims: dict[int, int]) -> dict[str, int]:
    return {str(k): v for k, v in sorted(dims.items())}


def _module_json(m: DgModule) -> dict:
    return {
        "generators": [{"vertex": v, "shift": n} for v, n in m.generators],
        "differential": [
            {"from": u, "to": v, "terms": [{"path": list(p.arrows) or [f"e_{p.source}"], "coeff": str(c)}
                                           for p, c in sorted(comb.items())]}
            for (u, v), comb in sorted(m.differential.items()) if comb
        ],
    }


def _module_text(m: DgModule) -> str:
    lines = ["generators:"]
    lines += [f"  {i}: P{v}[{n}]" for i, (v, n) in enumerate(m.generators)]
    lines.append("differential:")
    for (u, v), comb in sorted(m.differential.items()):
        terms = " + ".join(f"{c}*{p.label()}" if c != 1 else p.label() for p, c in sorted(comb.items()))
        lines.append(f"  {u} -> {v}: {terms}")
    return "\n".join(lines)


# ---- commands ----------------------------------------------------------------------------------

def cmd_validate(args) -> int:
    data = _read_json(args.file)
    kind = _kind(data)
    if kind == "arc":
        s = string_from_json(data)
        pair = _over(_load_pair(args), s)
        rep = validate_string(pair, s)
        problems = rep.problems
    elif kind == "algebra":
        pair = pair_from_json(data)
        check_structure(pair)
        problems = validate_gentle(pair).violations
    elif kind == "dissection":
        d = dissection_from_json(data)
        pair = algebra_from_dissection(d)
        problems = []
        if not args.json:
            summary = surface_summary(d)
            print(f"surface: {summary.components} component(s), genus {summary.genus}, "
                  f"{summary.boundary_components} boundary components, "
                  f"{summary.open_marked_points} open marked points")
    else:
        raise InputError("validate accepts algebra, arc and dissection files")
    if args.json:
        _emit({"kind": kind, "ok": not problems, "problems": problems})
    else:
        print(f"{kind}: ok" if not problems else f"{kind}: invalid")
        for p in problems:
            print(f"  - {p}")
    return EXIT_OK if not problems else EXIT_FAIL


def cmd_from_dissection(args) -> int:
    data = _read_json(args.file)
    pair = algebra_from_dissection(dissection_from_json(data))
    _emit(pair_to_json(pair))
    return EXIT_OK


def cmd_dual(args) -> int:
    pair = _pair_from_data(_read_json(args.file))
    _emit(pair_to_json(quadratic_dual(pair)))
    return EXIT_OK


def cmd_xmod(args) -> int:
    s = _load_arc(args.arc)
    pair = _over(_load_pair(args), s)
    m = build_x_module(pair, s)
    if args.json:
        _emit(_module_json(m))
    else:
        print(_module_text(m))
    return EXIT_OK


def _field(args) -> int | None:
    return DEFAULT_PRIME if args.field == "p" else None


def cmd_hom(args) -> int:
    s, t = _load_arc(args.source), _load_arc(args.target)
    if s.over != t.over:
        raise InputError("both arcs must live over the same algebra")
    pair = _over(_load_pair(args), s)
    print(json.dumps(_dims_json(hom_dims(build_x_module(pair, s), build_x_module(pair, t), _field(args)))))
    return EXIT_OK


def cmd_int(args) -> int:
    s, t = _load_arc(args.source), _load_arc(args.target)
    if s.over != t.over:
        raise InputError("both arcs must live over the same algebra")
    pair = _over(_load_pair(args), s)
    print(json.dumps({"from": args.source, "to": args.target, "table": _dims_json(int_table(pair, s, t))}))
    return EXIT_OK


def cmd_resolve_simple(args) -> int:
    pair = _load_pair(args)
    if args.vertex not in pair.vertices:
        raise InputError(f"unknown vertex {args.vertex!r}")
    s = simple_resolution(pair, args.vertex)
    if args.json:
        _emit(string_to_json(s))
    else:
        print(s.describe())
        cohomology = underlying_cohomology(build_x_module(pair, s))
        print("cohomology: " + ", ".join(f"({v}, {d}): {n}" for (v, d), n in cohomology.items()))
    return EXIT_OK


def cmd_rotate(args) -> int:
    s = _load_arc(args.arc)
    pair = _load_pair(args)
    out = half_rotate(pair, s) if s.over == "dual" else half_rotate_open(pair, s)
    _emit(string_to_json(out))
    return EXIT_OK


def cmd_koszul_obj(args) -> int:
    s = _load_arc(args.arc)
    if s.over != "dual":
        raise InputError("koszul-obj takes a closed arc (\"over\": \"dual\")")
    m = koszul_object(_load_pair(args), s)
    if args.json:
        _emit(_module_json(m))
    else:
        print(_module_text(m))
    return EXIT_OK


def cmd_smooth(args) -> int:
    data = _read_json(args.thread)
    if not isinstance(data, dict) or set(data) - {"arcs", "links"}:
        raise InputError("thread file must be {\"arcs\": [...], \"links\": [[end, end], ...]}")
    strings = tuple(string_from_json(a) for a in data["arcs"])
    overs = {s.over for s in strings}
    if len(overs) != 1:
        raise InputError("all arcs of a thread must live over the same algebra")
    pair = _over(_load_pair(args), strings[0])
    links = tuple((str(a), str(b)) for a, b in data["links"])
    _emit(string_to_json(smooth_thread(pair, Thread(strings, links))))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, args.field)
    if args.json:
        _emit(report.to_json())
    else:
        for r in report.results:
            print(r.line())
            for m in r.mismatches[:3]:
                print("    reproducer: " + json.dumps(m))
        print("all criteria passed" if report.passed else "verification FAILED")
    return EXIT_OK if report.passed else EXIT_FAIL


# ---- parser -------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", metavar="FILE",
                        help="algebra or dissection file (default: the built-in example algebra)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--field", choices=("q", "p"), default="q",
                        help=f"q: exact rationals, p: integers mod {DEFAULT_PRIME}")

    parser = argparse.ArgumentParser(prog="ggk", description="Graded gentle algebras from surface dissections.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check an algebra, arc or dissection file").add_argument("file")
    add("from-dissection", cmd_from_dissection, "algebra of a dissection").add_argument("file")
    add("dual", cmd_dual, "quadratic dual of an algebra or dissection").add_argument("file")
    add("xmod", cmd_xmod, "the dg module of an arc").add_argument("arc")
    p = add("hom", cmd_hom, "Hom cohomology dimensions between two arcs")
    p.add_argument("source")
    p.add_argument("target")
    p = add("int", cmd_int, "oriented intersection counts between two arcs")
    p.add_argument("source")
    p.add_argument("target")
    add("resolve-simple", cmd_resolve_simple, "arc of the projective resolution of a simple").add_argument("vertex")
    add("rotate", cmd_rotate, "half rotation of an open or closed arc").add_argument("arc")
    add("koszul-obj", cmd_koszul_obj, "dg module of the half rotation of a closed arc").add_argument("arc")
    add("smooth", cmd_smooth, "smoothing of a thread file").add_argument("thread")
    p = add("verify", cmd_verify, "run the verification suites")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--seed", type=int, default=0)
    return parser


INPUT_ERRORS = (InputError, DissectionError, StringError, StructureError, InfiniteDimensionalError,
                IntersectionError, ThreadError, HomError, KeyError, TypeError, ValueError)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ggk: error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
