"""Command-line driver.

Exit codes: 0 success or verified, 1 negative search or failed
verification, 2 input error. All JSON is written with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .coloring import (
    Coloring,
    chromatic_number,
    find_coloring,
    greedy_color,
    is_coloring,
    minimal_coloring,
)
from .complex_core import (
    ComplexError,
    SimplicialComplex,
    complex_to_json,
    format_facets,
    generate_family,
    load_complex,
)
from .moment_angle import verify_lemma
from .splitting import (
    MODES,
    ExtractionError,
    SplittingCertificate,
    classes_from_assignment,
    classes_from_json,
    extract_coloring,
    equivalence_report,
    verify_chern_splitting,
    verify_pontrjagin_splitting,
)

EXPANSION_MAX_M = 24
EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad input; reported on stderr with exit code 2."""


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _read_json(path: str):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _load(path: str) -> tuple[SimplicialComplex, dict | None]:
    """The complex in ``path`` plus the JSON document, if it was JSON."""
    text = _read(path)
    doc = None
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON: {exc}") from None
    return load_complex(text), doc


def _guard_expansion(K: SimplicialComplex) -> None:
    if K.m > EXPANSION_MAX_M:
        raise InputError(
            f"m={K.m} exceeds {EXPANSION_MAX_M}; class expansion is limited to "
            f"m <= {EXPANSION_MAX_M}"
        )


def _coloring_for(K: SimplicialComplex, path: str | None, doc: dict | None) -> Coloring:
    if path is not None:
        data = _read_json(path)
    elif doc is not None and "colors" in doc:
        data = doc
    else:
        return minimal_coloring(K)
    g = Coloring.from_json(data)
    if g.m != K.m:
        raise InputError(f"coloring has {g.m} entries but the complex has m={K.m}")
    return g


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_info(args) -> int:
    K, _ = _load(args.file)
    _emit(
        {
            "config": {"command": "info"},
            "m": K.m,
            "dim": K.dim,
            "f_vector": list(K.f_vector),
            "facets": [list(f) for f in K.facets],
            "minimal_non_faces": [list(f) for f in K.minimal_non_faces()],
            "is_flag_like": K.is_flag_like,
            "ghost_vertices": list(K.ghost_vertices),
        },
        args.out,
    )
    return EXIT_OK


def cmd_color(args) -> int:
    K, _ = _load(args.file)
    method = "greedy" if args.greedy else "exact"
    config = {"command": "color", "method": method, "r": args.r}
    if args.r is not None and args.r < 1:
        raise InputError("-r must be at least 1")
    if args.greedy:
        g = greedy_color(K)
        if args.r is not None:
            g = Coloring(g.colors, args.r) if g.r <= args.r else None
    elif args.r is not None:
        g = find_coloring(K, args.r)
    else:
        g = find_coloring(K, chromatic_number(K))
    if g is None:
        _emit({"config": config, "result": "none"}, args.out)
        return EXIT_NEGATIVE
    payload = {
        "config": config,
        "result": "coloring",
        **g.to_json(),
        "used_colors": g.used_colors,
        "complex": complex_to_json(K),
    }
    if method == "exact" and args.r is None:
        payload["chromatic_number"] = g.r
    _emit(payload, args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    K, doc = _load(args.file)
    _guard_expansion(K)
    g = _coloring_for(K, args.coloring, doc)
    classes = classes_from_assignment(K, g)
    cert = SplittingCertificate(K, tuple(classes), args.mode)
    result = {
        "config": {"command": "certify", "mode": args.mode},
        "label": "cohomological certificate",
        "coloring": g.to_json(),
        "coloring_valid": is_coloring(K, g),
        "certificate": cert.to_json(),
    }
    ok = True
    if args.mode in ("chern", "both"):
        result["chern_identity"] = verify_chern_splitting(K, cert)
        ok &= result["chern_identity"]
    if args.mode in ("pontrjagin", "both"):
        result["pontrjagin_identity"] = verify_pontrjagin_splitting(K, cert)
        ok &= result["pontrjagin_identity"]
    result["verified"] = bool(ok)
    _emit(result, args.out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_extract(args) -> int:
    K, _ = _load(args.file)
    _guard_expansion(K)
    if args.classes is None:
        raise InputError("--classes is required")
    classes = classes_from_json(K, _read_json(args.classes))
    config = {"command": "extract", "mode": args.mode}
    try:
        g = extract_coloring(K, classes, args.mode)
    except ExtractionError as exc:
        _emit({"config": config, "result": "error", "error": exc.to_json()}, args.out)
        return EXIT_NEGATIVE
    _emit({"config": config, "result": "coloring", **g.to_json()}, args.out)
    return EXIT_OK


def cmd_verify_lemma(args) -> int:
    K, doc = _load(args.file)
    if args.samples < 0:
        raise InputError("--samples must be non-negative")
    if not args.seed >= 0:
        raise InputError("--seed must be a non-negative integer")
    if not args.tol >= 0:
        raise InputError("--tol must be non-negative")
    g = _coloring_for(K, args.coloring, doc)
    report = verify_lemma(K, g, args.samples, args.seed, args.tol)
    report["config"] = {
        "command": "verify-lemma",
        "samples": args.samples,
        "seed": args.seed,
        "tol": args.tol,
    }
    report["coloring"] = g.to_json()
    _emit(report, args.out)
    return EXIT_OK if report["pass"] else EXIT_NEGATIVE


def cmd_report(args) -> int:
    K, _ = _load(args.file)
    _guard_expansion(K)
    report = equivalence_report(K)
    report["config"] = {"command": "report"}
    _emit(report, args.out)
    ok = report["round_trip"] and all(report["conditions"].values())
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_gen(args) -> int:
    params = []
    for p in args.params:
        try:
            params.append(int(p))
        except ValueError:
            raise InputError(f"family parameter {p!r} is not an integer") from None
    text = format_facets(generate_family(args.family, *params))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="djsplit", description="Colorings and splitting certificates in Z[K].")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_text, takes_file=True):
        p = sub.add_parser(name, help=help_text)
        if takes_file:
            p.add_argument("file", help="facet list or JSON complex ('-' for stdin)")
        p.add_argument("--out", help="write output here instead of stdout")
        p.set_defaults(func=func)
        return p

    command("info", cmd_info, "f-vector, minimal non-faces, flagness")

    p = command("color", cmd_color, "find a coloring")
    how = p.add_mutually_exclusive_group()
    how.add_argument("--exact", action="store_true", help="canonical exact search (default)")
    how.add_argument("--greedy", action="store_true", help="DSATUR heuristic")
    p.add_argument("-r", type=int, help="palette size")

    p = command("certify", cmd_certify, "build and verify a splitting certificate")
    p.add_argument("--coloring", help="coloring JSON; default: canonical minimal coloring")
    p.add_argument("--mode", choices=MODES, default="both")

    p = command("extract", cmd_extract, "read a coloring off degree-2 classes")
    p.add_argument("--classes", help="classes or certificate JSON")
    p.add_argument("--mode", choices=MODES, default="chern")

    p = command("verify-lemma", cmd_verify_lemma, "numerical check of the fiberwise isomorphism")
    p.add_argument("--coloring", help="coloring JSON; default: canonical minimal coloring")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)

    command("report", cmd_report, "coloring/certificate equivalence report")

    p = command("gen", cmd_gen, "print a named complex as a facet list", takes_file=False)
    p.add_argument("family", help="simplex, simplex-boundary, cross-polytope, cycle, edgeless, random")
    p.add_argument("params", nargs="+", help="integer parameters")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    except (InputError, ComplexError, ValueError, TypeError, KeyError, OverflowError,
            RecursionError, OSError) as exc:
        sys.stderr.write(f"djsplit: error: {exc}\n")
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())
