"""Command line front end: ``seqspace <subcommand> ...``.

Results go to stdout and diagnostics to stderr. Numbers are printed with nine
significant digits, except that ``transform`` writes sequences at full
round-trip precision (so its output can be fed back in) unless ``--rounded``
is given. Exit status is 0 on success;
the check commands (dual, check-cond, map-check) exit 0, 1 or 3 for
HoldsUpToBound, DivergenceSuspected and Inconclusive. Any validation error
exits 2 with a one-line reason on stderr.
"""

import argparse
import json
import math
import sys

from .conditions import Bounds, evaluate_condition
from .core import (
    SeqSpaceError,
    exponent_stats,
    format_number,
    load_params,
    load_sequence,
    params_to_json,
)
from .duals import DUAL_KINDS, SPACES, TARGETS, MixedExponentBranch, dual_membership, matrix_map_check
from .factories import a_alpha_params, cesaro_params, euler_params, weighted_mean_params
from .norms import luxemburg_norm, modular, paranorm_h, paranorm_h_tilde
from .sources import load_matrix
from .triangle import forward_transform, inverse_coeffs, inverse_transform

EXIT_INVALID = 2


def _round(obj):
    """Round every float in a JSON-ready structure to nine significant digits."""
    if isinstance(obj, float):
        return float(format_number(obj)) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _emit_json(obj, out):
    out.write(json.dumps(_round(obj), indent=2) + "\n")


def _emit_sequence(values, out, exact=False):
    # exact output uses the shortest repr that reads back to the same double
    fmt = repr if exact else format_number
    out.write(",".join(fmt(float(v)) for v in values) + "\n")


def _params_and_p(args, need_p=True):
    params, p = load_params(args.params)
    if getattr(args, "p", None):
        p = exponent_stats(load_sequence(args.p).values)
    if need_p and p is None:
        raise SeqSpaceError("missing exponents: pass --p or put \"p\" in the params file")
    return params, p


def _bounds(args):
    return Bounds(n_rows=args.rows, l_max=args.lmax)


def cmd_transform(args, out):
    params, _ = load_params(args.params)
    x = load_sequence(args.input)
    y = inverse_transform(params, x) if args.inverse else forward_transform(params, x)
    _emit_sequence(y.values, out, exact=not args.rounded)
    return 0


def cmd_dcoeffs(args, out):
    params, _ = load_params(args.params)
    source = "determinant" if args.oracle else "recursion"
    _emit_sequence(inverse_coeffs(params.s, args.n, source=source).D, out)
    return 0


_NORMS = {"htilde": paranorm_h_tilde, "h": paranorm_h, "modular": modular}


def cmd_norm(args, out):
    params, p = _params_and_p(args)
    x = load_sequence(args.input)
    if args.kind == "luxemburg":
        res = luxemburg_norm(params, p, x, tol=args.tol)
        value, residual = res.value, res.residual
    else:
        value, residual = _NORMS[args.kind](params, p, x), 0.0
    out.write(f"{format_number(value)} {format_number(residual)}\n")
    return 0


def _verdict_exit(verdict, out):
    _emit_json(verdict.to_json(), out)
    return verdict.exit_code


def cmd_dual(args, out):
    params, p = _params_and_p(args)
    a = load_sequence(args.a)
    try:
        verdict = dual_membership(a.values, params, p, args.kind, args.space, _bounds(args))
    except MixedExponentBranch as exc:
        _emit_json({k: v.to_json() for k, v in exc.branches.items()}, out)
        raise
    return _verdict_exit(verdict, out)


def cmd_check_cond(args, out):
    src = load_matrix(args.matrix)
    p = load_sequence(args.p).values
    q = load_sequence(args.q).values if args.q else None
    return _verdict_exit(evaluate_condition(args.id, src, p, q, _bounds(args)), out)


def cmd_map_check(args, out):
    params, p = _params_and_p(args)
    src = load_matrix(args.matrix)
    q = load_sequence(args.q).values if args.q else None
    verdict = matrix_map_check(src, params, p, args.target, q=q, domain=args.domain,
                               bounds=_bounds(args))
    return _verdict_exit(verdict, out)


def cmd_factory(args, out):
    n = args.n
    if args.kind == "weighted":
        if not (args.u and args.v):
            raise SeqSpaceError("weighted needs --u and --v")
        u, v = load_sequence(args.u).values, load_sequence(args.v).values
        if min(u.size, v.size) < n:
            raise SeqSpaceError(f"--u/--v hold fewer than {n} terms")
        params = weighted_mean_params(u[:n], v[:n])
    elif args.kind == "cesaro":
        params = cesaro_params(n)
    else:
        if args.alpha is None:
            raise SeqSpaceError(f"{args.kind} needs --alpha")
        make = euler_params if args.kind == "euler" else a_alpha_params
        params = make(args.alpha, n)
    _emit_json(params_to_json(params), out)
    return 0


def _add_bounds(sp):
    sp.add_argument("--rows", type=int, default=Bounds.n_rows,
                    help="smallest truncation; 2x and 4x are also evaluated (default 16)")
    sp.add_argument("--lmax", type=int, default=Bounds.l_max,
                    help="largest L or N tried (default 2^20)")


def build_parser():
    parser = argparse.ArgumentParser(prog="seqspace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("transform", help="apply the difference means operator or its inverse")
    sp.add_argument("--params", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--inverse", action="store_true")
    sp.add_argument("--rounded", action="store_true",
                    help="print 9 significant digits instead of round-trip precision")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("dcoeffs", help="inverse coefficients D_0..D_{N-1}")
    sp.add_argument("--params", required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--oracle", action="store_true", help="use the exact determinant (N <= 13)")
    sp.set_defaults(func=cmd_dcoeffs)

    sp = sub.add_parser("norm", help="paranorms, modular or Luxemburg norm")
    sp.add_argument("--params", required=True)
    sp.add_argument("--p")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--kind", choices=("htilde", "h", "modular", "luxemburg"), required=True)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("dual", help="dual-space membership verdict")
    sp.add_argument("--params", required=True)
    sp.add_argument("--p")
    sp.add_argument("--a", required=True)
    sp.add_argument("--kind", choices=DUAL_KINDS, required=True)
    sp.add_argument("--space", choices=SPACES, required=True)
    _add_bounds(sp)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("check-cond", help="evaluate one matrix condition")
    sp.add_argument("--id", required=True)
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--p", required=True)
    sp.add_argument("--q")
    _add_bounds(sp)
    sp.set_defaults(func=cmd_check_cond)

    sp = sub.add_parser("map-check", help="matrix mapping verdict")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--params", required=True)
    sp.add_argument("--p")
    sp.add_argument("--target", choices=TARGETS, required=True)
    sp.add_argument("--domain", choices=SPACES,
                    help="domain space; l for linf/l1 (default), required for c0q, cq, linfq")
    sp.add_argument("--q")
    _add_bounds(sp)
    sp.set_defaults(func=cmd_map_check)

    sp = sub.add_parser("factory", help="parameters of a classical special case")
    sp.add_argument("--kind", choices=("weighted", "cesaro", "euler", "aalpha"), required=True)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--u")
    sp.add_argument("--v")
    sp.add_argument("-n", type=int, required=True)
    sp.set_defaults(func=cmd_factory)
    return parser


def _reason(exc):
    if isinstance(exc, SeqSpaceError):
        return exc.reason
    if isinstance(exc, OSError):
        return f"{type(exc).__name__} {exc.filename or exc}"
    return f"{type(exc).__name__} {exc}".replace("\n", " ")


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (SeqSpaceError, ValueError, OSError) as exc:
        err.write(_reason(exc) + "\n")
        return EXIT_INVALID


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
