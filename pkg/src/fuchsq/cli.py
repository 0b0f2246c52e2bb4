"""Command-line entry point: ``fuchsq <command> ...``.

Exit codes: 0 success, 1 a check or construction failed, 2 usage or schema
error.  Rational arguments use the ``num/den`` form; write negative leading
values with ``=``, e.g. ``--points=-1,0``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import serialize
from .btree import group_stabilizes
from .certify import build_family, certify_family
from .construct import ConstructionInput, construct_group, validate_blueprint
from .errors import CertificateError, FuchsianError, InputError, SchemaError
from .exactnum import Q
from .fuchsian import psl_kernel
from .render import RenderSpec, render_svg

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("fuchsq")


def _rationals(text: str) -> list:
    try:
        return [Q(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a comma-separated list of rationals: {text!r}")


def _rational(text: str):
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def _fail(msg: str, code: int) -> int:
    print(f"fuchsq: {msg}", file=sys.stderr)
    return code


def _load(path: str):
    if not Path(path).is_file():
        raise SchemaError(f"{path}: no such file")
    return serialize.load_blueprint(path)


# -- commands -----------------------------------------------------------------

def cmd_construct(args) -> int:
    try:
        inp = ConstructionInput.make(
            args.points, args.prime, v0=args.v0, x1=args.x1,
            classes=args.classes, t_init=args.t_init,
        )
    except InputError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        b = construct_group(inp)
    except FuchsianError as exc:
        return _fail(f"construction failed: {exc}", EXIT_CHECK)
    serialize.save_blueprint(args.seed_out, b)
    print(f"wrote {args.seed_out}")
    print(f"generators: {len(b.generators)}")
    print("classes: " + ",".join(str(g.det_class) for g in b.generators))
    print(f"signature: {b.presentation.signature}")
    return EXIT_OK


def cmd_verify(args) -> int:
    b = _load(args.path)
    report = validate_blueprint(b)
    failures = report.failures()
    try:
        rebuilt = construct_group(b.input)
    except FuchsianError as exc:
        failures.append(f"reconstruction from the stored input: {exc}")
    else:
        if serialize.blueprint_to_json(rebuilt) != serialize.blueprint_to_json(b):
            failures.append("stored blueprint differs from reconstruction of its input")
    if failures:
        for f in failures:
            print(f"FAIL {f}")
        return EXIT_CHECK
    print(f"ok: {len(report.checks) + 1} checks passed")
    return EXIT_OK


def cmd_tree_check(args) -> int:
    b = _load(args.path)
    try:
        verdict = group_stabilizes(b, args.prime)
    except InputError as exc:
        return _fail(str(exc), EXIT_USAGE)
    print(json.dumps(verdict.to_json(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_family(args) -> int:
    if args.count < 1:
        return _fail("--count must be positive", EXIT_USAGE)
    try:
        members = build_family(args.points, args.count)
    except InputError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        certs = certify_family(members)
    except CertificateError as exc:
        return _fail(f"certificate failed: {exc}", EXIT_CHECK)
    root = serialize.write_family(args.out, args.id, members, certs)
    print(f"wrote {root}")
    print("primes: " + ",".join(str(m.prime) for m in members))
    print(f"certificates: {len(certs)}")
    return EXIT_OK


def cmd_render(args) -> int:
    b = _load(args.path)
    kw = {"width": args.width, "height": args.height, "labels": not args.no_labels}
    if args.xmin is not None:
        kw["xmin"] = args.xmin
    if args.xmax is not None:
        kw["xmax"] = args.xmax
    try:
        spec = RenderSpec.fit(b, **kw)
    except InputError as exc:
        return _fail(str(exc), EXIT_USAGE)
    svg = render_svg(b, spec)
    if args.output in (None, "-"):
        sys.stdout.write(svg)
    else:
        Path(args.output).write_text(svg, encoding="utf-8")
    return EXIT_OK


def cmd_kernel(args) -> int:
    b = _load(args.path)
    print(serialize.dumps(serialize.kernel_to_json(psl_kernel(b))), end="")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuchsq", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a blueprint from boundary points")
    c.add_argument("--points", type=_rationals, required=True)
    c.add_argument("--prime", type=int, default=3)
    c.add_argument("--v0", type=_rational)
    c.add_argument("--x1", type=_rational)
    c.add_argument("--classes", type=_ints, help="square classes n_2,...; n_1 is the prime")
    c.add_argument("--t-init", type=_rational, default=Q(1))
    c.add_argument("--seed-out", "-o", default="blueprint.json")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="re-check a stored blueprint")
    v.add_argument("path")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tree-check", help="does the group fix a vertex of the tree at a prime")
    t.add_argument("path")
    t.add_argument("--prime", type=int, required=True)
    t.set_defaults(func=cmd_tree_check)

    f = sub.add_parser("family", help="pairwise noncommensurable family with certificates")
    f.add_argument("--points", type=_rationals, required=True)
    f.add_argument("--count", type=int, default=2)
    f.add_argument("--out", default="family")
    f.add_argument("--id", default="default")
    f.set_defaults(func=cmd_family)

    r = sub.add_parser("render", help="SVG of the fundamental polygon")
    r.add_argument("path")
    r.add_argument("--output", "-o")
    r.add_argument("--xmin", type=_rational)
    r.add_argument("--xmax", type=_rational)
    r.add_argument("--width", type=int, default=800)
    r.add_argument("--height", type=int, default=400)
    r.add_argument("--no-labels", action="store_true")
    r.set_defaults(func=cmd_render)

    k = sub.add_parser("kernel", help="generators of the determinant-class kernel")
    k.add_argument("path")
    k.set_defaults(func=cmd_kernel)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SchemaError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except InputError as exc:
        return _fail(str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["main", "build_parser"]
