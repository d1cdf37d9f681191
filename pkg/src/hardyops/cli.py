"""Command-line front end.

Exit status: 0 on success or a true verdict, 2 on a false verdict, 1 on
I/O or validation errors.  Every run writes a JSON document (to ``--output``
or stdout), including failed ones.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import classify as C
from . import io as hio
from . import modelspace as MS
from .bench import BenchmarkError, bench, format_table
from .operators import (
    SymbolPair,
    hankel_matrix,
    laurent_matrix,
    paired_matrix,
    toeplitz_matrix,
    transposed_paired_matrix,
)
from .report import ClassReport, StructureError
from .selftest import run_selftest
from .trigpoly import zero

log = logging.getLogger("hardyops")

EXIT_OK, EXIT_ERROR, EXIT_FALSE = 0, 1, 2
KINDS = ["toeplitz", "hankel", "tph", "paired", "transposed", "theta-paired"]
GEN_KINDS = KINDS + ["laurent"]


class UsageError(ValueError):
    pass


def default_tol() -> float:
    raw = os.environ.get("HARDYOPS_TOL")
    if raw is None:
        return C.DEFAULT_TOL
    try:
        v = float(raw)
    except ValueError as exc:
        raise UsageError("HARDYOPS_TOL=%r is not a number" % raw) from exc
    if not v > 0:
        raise UsageError("HARDYOPS_TOL must be positive, got %r" % raw)
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hardyops", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, matrix=False):
        sp.add_argument("-o", "--output", help="write the JSON result here instead of stdout")
        sp.add_argument("--tol", type=_positive, default=None, help="tolerance (default 1e-9 or $HARDYOPS_TOL)")
        if matrix:
            sp.add_argument("--matrix", required=True, help="matrix JSON file")

    g = sub.add_parser("gen", help="build an operator section from symbol files")
    common(g)
    g.add_argument("--kind", choices=GEN_KINDS, required=True)
    g.add_argument("--symbol", help="first symbol (phi; psi for --kind hankel)")
    g.add_argument("--symbol2", help="second symbol (psi)")
    g.add_argument("--theta", help="inner function JSON (theta-paired)")
    g.add_argument("--N", type=int)
    g.add_argument("--M", type=int)
    g.add_argument("--format", choices=["json", "csv"], default="json")

    c = sub.add_parser("classify", help="run a structure test on a matrix")
    common(c, matrix=True)
    c.add_argument("--kind", choices=KINDS, required=True)
    c.add_argument("--theta", help="inner function JSON (theta-paired)")
    c.add_argument("--guard", type=int, default=None, help="override the boundary guard band")

    d = sub.add_parser("decompose", help="split a Toeplitz+Hankel section into its symbols")
    common(d, matrix=True)
    d.add_argument("--method", choices=["lsq", "beurling"], default="lsq",
                   help="minimum-norm least squares, or the inner-function pipeline")

    pr = sub.add_parser("paired", help="test an L2 section for paired structure and recover symbols")
    common(pr, matrix=True)
    pr.add_argument("--transposed", action="store_true")
    pr.add_argument("--guard", type=int, default=0)

    m = sub.add_parser("modelspace", help="model-space projection, basis or truncated Toeplitz matrix")
    common(m)
    m.add_argument("--theta", required=True)
    m.add_argument("--N", type=int, required=True)
    m.add_argument("--symbol", help="symbol for the truncated Toeplitz operator")
    m.add_argument("--what", choices=["projection", "range", "truncated"], default="projection")
    m.add_argument("--format", choices=["json", "csv"], default="json")

    s = sub.add_parser("selftest", help="run the seeded invariant suite")
    s.add_argument("-o", "--output")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--inject-fault", action="store_true", help="perturb the Toeplitz+Hankel fixtures")

    b = sub.add_parser("bench", help="time dense vs FFT Toeplitz+Hankel products")
    b.add_argument("-o", "--output")
    b.add_argument("--N", type=int, nargs="+", default=[256, 1024, 4096])
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeat", type=int, default=5)
    return p


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError("--%s is required for this command" % name)
    return v


def _symbol(path):
    return hio.symbol_from_dict(hio.load_json(path))


def _emit(args, obj=None, text=None) -> None:
    if text is None:
        text = hio.dump_json(obj)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_matrix(args, A) -> int:
    if getattr(args, "format", "json") == "csv":
        _emit(args, text=hio.matrix_to_csv(A))
    else:
        _emit(args, hio.matrix_to_dict(A))
    return EXIT_OK


def _emit_report(args, rep: ClassReport) -> int:
    _emit(args, rep.to_dict())
    return EXIT_OK if rep.verdict else EXIT_FALSE


def _false_report(exc: StructureError) -> ClassReport:
    return ClassReport(False, float("inf"), 0, None, "", {"error": str(exc)})


def cmd_gen(args) -> int:
    kind = args.kind
    if kind in ("toeplitz", "hankel"):
        sym, N = _symbol(_need(args, "symbol")), _need(args, "N")
        return _emit_matrix(args, (toeplitz_matrix if kind == "toeplitz" else hankel_matrix)(sym, N))
    if kind == "laurent":
        return _emit_matrix(args, laurent_matrix(_symbol(_need(args, "symbol")), _need(args, "M")))
    phi = _symbol(_need(args, "symbol"))
    psi = _symbol(args.symbol2) if args.symbol2 else zero(phi.block_dim)
    if kind == "tph":
        N = _need(args, "N")
        return _emit_matrix(args, toeplitz_matrix(phi, N) + hankel_matrix(psi, N))
    if kind in ("paired", "transposed"):
        fn = paired_matrix if kind == "paired" else transposed_paired_matrix
        return _emit_matrix(args, fn(SymbolPair(phi, psi), _need(args, "M")))
    theta = hio.theta_from_dict(hio.load_json(_need(args, "theta")))
    return _emit_matrix(args, MS.theta_paired_matrix(MS.ThetaPairedSpec(theta, phi, psi), _need(args, "N")))


def cmd_classify(args) -> int:
    A = hio.matrix_from_dict(hio.load_json(args.matrix))
    tol = args.tol
    kind = args.kind
    if kind == "toeplitz":
        rep = C.test_toeplitz(A, tol)
    elif kind == "hankel":
        rep = C.test_hankel(A, tol)
    elif kind == "tph":
        rep = C.test_tph(A, tol)
    elif kind in ("paired", "transposed"):
        fn = C.test_paired if kind == "paired" else C.test_transposed_paired
        rep = fn(A, tol, args.guard or 0)
    else:
        theta = hio.theta_from_dict(hio.load_json(_need(args, "theta")))
        try:
            rep = MS.test_theta_paired(A, theta, tol, 1 if args.guard is None else args.guard)
        except StructureError as exc:
            rep = _false_report(exc)
    return _emit_report(args, rep)


def cmd_decompose(args) -> int:
    A = hio.matrix_from_dict(hio.load_json(args.matrix))
    try:
        rep = (C.decompose_tph if args.method == "lsq" else C.noninjective_pipeline)(A, args.tol)
    except StructureError as exc:
        rep = _false_report(exc)
    return _emit_report(args, rep)


def cmd_paired(args) -> int:
    X = hio.matrix_from_dict(hio.load_json(args.matrix))
    fn = C.test_transposed_paired if args.transposed else C.test_paired
    return _emit_report(args, fn(X, args.tol, args.guard))


def cmd_modelspace(args) -> int:
    theta = hio.theta_from_dict(hio.load_json(args.theta))
    if args.what == "projection":
        return _emit_matrix(args, MS.model_projection(theta, args.N))
    if args.what == "range":
        return _emit_matrix(args, MS.range_projection(theta, args.N))
    return _emit_matrix(args, MS.truncated_toeplitz(_symbol(_need(args, "symbol")), theta, args.N))


def cmd_selftest(args) -> int:
    log.info("selftest seed %d", args.seed)
    print("seed: %d" % args.seed, file=sys.stderr)
    res = run_selftest(args.seed, args.inject_fault)
    _emit(args, res)
    return EXIT_OK if res["pass"] else EXIT_FALSE


def cmd_bench(args) -> int:
    rows = bench(args.N, args.seed, args.repeat)
    print(format_table(rows), file=sys.stderr)
    _emit(args, {"seed": args.seed, "rows": rows})
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "classify": cmd_classify,
    "decompose": cmd_decompose,
    "paired": cmd_paired,
    "modelspace": cmd_modelspace,
    "selftest": cmd_selftest,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for false verdicts
        if exc.code == 0:
            return EXIT_OK
        sys.stdout.write(hio.dump_json({"error": "UsageError: invalid command line"}) + "\n")
        return EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        if getattr(args, "tol", "absent") is None:
            args.tol = default_tol()
        return COMMANDS[args.verb](args)
    except (OSError, ValueError, KeyError, TypeError, BenchmarkError) as exc:
        log.error("%s", exc)
        _emit(args, {"error": "%s: %s" % (type(exc).__name__, exc)})
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
