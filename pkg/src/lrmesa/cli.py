"""Command line interface: ``lrmesa <subcommand> ...``.

Exit codes: 0 success, 2 domain error, 3 genericity exhaustion, 64 usage error.
JSON arguments are given inline or as ``@path``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import DomainError, GenericityFailure, LrmesaError
from .flags import solve_with_resampling
from .inflation import check_boundary, check_tiling, inflate, render_svg
from .lr import enumerate_measures, lr_coefficient, lr_oracle
from .measure import (
    ExitProfile,
    IndexTriple,
    measure_from_dict,
    measure_to_dict,
    profile_from_index_triple,
    validate,
)
from .reduce import reduction_chain, tripod_witnesses
from .sigma import sigma, sigma_from_indices
from .tree import MAX_CATALOG_R, extremal_rays

EXIT_OK, EXIT_DOMAIN, EXIT_GENERICITY, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _load(text: str):
    try:
        if text.startswith("@"):
            return json.loads(Path(text[1:]).read_text())
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON argument: {exc}") from exc


def _triple(args) -> IndexTriple:
    d = _load(args.triple)
    try:
        t = IndexTriple(int(d["n"]), tuple(d["I"]), tuple(d["J"]), tuple(d["K"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed triple: {exc}") from exc
    if args.r is not None and args.r != t.r:
        raise UsageError(f"--r {args.r} does not match the triple (r = {t.r})")
    return t


def _profile(text: str, r: int | None = None) -> ExitProfile:
    d = _load(text)
    try:
        if "n" in d:
            return profile_from_index_triple(IndexTriple.from_dict(d), r)
        return ExitProfile.from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed profile: {exc}") from exc


def _measure(text: str):
    try:
        return measure_from_dict(_load(text))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed measure: {exc}") from exc


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _witnesses(r: int):
    return extremal_rays(r) if r <= MAX_CATALOG_R else tripod_witnesses(r)


def cmd_lr(args) -> int:
    t = _triple(args)
    c = lr_oracle(t) if args.oracle else lr_coefficient(t)
    print(c)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.triple:
        p = profile_from_index_triple(_triple(args))
    elif args.profile:
        p = _profile(args.profile)
    else:
        raise UsageError("enumerate needs --triple or --profile")
    res = enumerate_measures(p)
    out = {"format": 1, "profile": p.to_dict(), "count": res.count,
           "measures": [measure_to_dict(m) for m in res.measures]}
    _emit(args, _dump(out))
    return EXIT_OK


def cmd_sigma(args) -> int:
    w = _profile(args.witness)
    if args.triple:
        print(sigma_from_indices(w, _triple(args)))
    elif args.target:
        print(sigma(w, _profile(args.target)))
    else:
        raise UsageError("sigma needs --target or --triple")
    return EXIT_OK


def cmd_catalog(args) -> int:
    cat = extremal_rays(args.r, max_r=args.max_r)
    d = cat.to_dict()
    for entry, c in zip(d["entries"], cat):
        entry["profile"] = c.profile.to_dict()
    _emit(args, _dump(d))
    return EXIT_OK


def cmd_reduce(args) -> int:
    t = _triple(args)
    chain = reduction_chain(t, _witnesses(t.r), verify=args.verify)
    _emit(args, _dump(chain.to_dict()))
    return EXIT_OK


def cmd_solve(args) -> int:
    t = _triple(args)
    sol = solve_with_resampling(t, seed=args.seed, retries=args.retries, bound=args.bound)
    _emit(args, _dump(sol.to_dict()))
    return EXIT_OK if sol.verified else EXIT_DOMAIN


def _puzzle_dict(m, pz) -> dict:
    return {
        "format": 1,
        "r": pz.r,
        "n": pz.n,
        "white": [{"triangles": [[t.a, t.b, "up" if t.up else "down"] for t in w.triangles],
                   "translation": list(w.translation)} for w in pz.whites],
        "parallelograms": [{"edge": [q.edge.a, q.edge.b, q.edge.dir], "density": q.density,
                            "polygon": [list(v) for v in q.polygon]} for q in pz.parallelograms],
        "branches": [{"point": list(b.point), "polygon": [list(v) for v in b.polygon]} for b in pz.branches],
        "tiling_ok": check_tiling(pz),
        "boundary_ok": check_boundary(m, pz),
    }


def cmd_inflate(args) -> int:
    m = _measure(args.measure)
    pz = inflate(m)
    _emit(args, _dump(_puzzle_dict(m, pz)))
    if args.svg:
        Path(args.svg).write_text(render_svg(pz, scale=args.scale))
    return EXIT_OK


def cmd_render(args) -> int:
    m = _measure(args.measure)
    rep = validate(m)
    if not rep.ok:
        from .errors import InvalidMeasure
        raise InvalidMeasure(rep.describe())
    obj = inflate(m) if args.inflate else m
    _emit(args, render_svg(obj, scale=args.scale, labels=args.labels))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lrmesa", description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=1, help="worker count (computations currently run serially)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("lr", help="Littlewood-Richardson coefficient of a triple")
    p.add_argument("--triple", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--oracle", action="store_true", help="use the tableau count instead")
    p.set_defaults(func=cmd_lr)

    p = sub.add_parser("enumerate", help="all measures with a given exit profile")
    p.add_argument("--triple")
    p.add_argument("--profile")
    p.add_argument("--r", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sigma", help="Sigma pairing of a witness profile with a target")
    p.add_argument("--witness", required=True)
    p.add_argument("--target")
    p.add_argument("--triple")
    p.add_argument("--r", type=int)
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("catalog", help="extremal measures of size r")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--max-r", type=int, default=MAX_CATALOG_R)
    p.add_argument("--output")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("reduce", help="reduction chain report")
    p.add_argument("--triple", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--verify", choices=("none", "fast", "full"), default="fast")
    p.add_argument("--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="explicit solution of a rigid problem over random flags")
    p.add_argument("--triple", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int)
    p.add_argument("--retries", type=int, default=20)
    p.add_argument("--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("inflate", help="puzzle of a measure as JSON")
    p.add_argument("--measure", required=True)
    p.add_argument("--svg")
    p.add_argument("--scale", type=float, default=40.0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_inflate)

    p = sub.add_parser("render", help="SVG drawing of a measure or its puzzle")
    p.add_argument("--measure", required=True)
    p.add_argument("--inflate", action="store_true")
    p.add_argument("--labels", action="store_true")
    p.add_argument("--scale", type=float, default=40.0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lrmesa: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenericityFailure as exc:
        print(f"lrmesa: genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except DomainError as exc:
        print(f"lrmesa: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LrmesaError as exc:
        print(f"lrmesa: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def run(argv: list[str]) -> int:
    """Like :func:`main` but also converts ``SystemExit`` from argparse into a code."""
    try:
        return main(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
