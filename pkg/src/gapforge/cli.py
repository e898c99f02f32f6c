"""Command-line front end: params / construct / verify / estimate.

Exit codes: 0 success, 1 verification failure, 2 usage, parse, or
constraint error. Output is deterministic for a given config; the worker
thread count is accepted for interface compatibility but execution is
sequential (results are identical regardless).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import analytic, assembly, construction
from .params import DomainError, ModulusCheck, SieveParams, check_modulus, derive_params
from .primes import DEFAULT_PRESIEVE_DEPTH

BOUNDS_AUTO_LIMIT = 3000  # bounding-prime search defaults off above this x


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x", type=int, required=True, help="sieving limit")
    p.add_argument("--M", type=int, default=1, help="progression modulus")
    p.add_argument("--a", type=int, default=0, help="progression residue")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--C_U", type=float, default=2.0)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--y", type=int, default=None, help="override the smooth limit")
    p.add_argument("--z", type=int, default=None, help="override the zero-class limit")
    p.add_argument("--U", type=int, default=None, help="override the interval length")
    p.add_argument("--force", action="store_true",
                   help="suppress size/omega constraint warnings (rejections other "
                        "than coprimality never abort construct/estimate)")
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--threads", type=int, default=None,
                   help="worker count (accepted; execution is sequential)")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gapforge",
                                 description="construct and verify prime gaps in arithmetic progressions")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="derive parameters and check modulus constraints")
    _add_common(p)

    c = sub.add_parser("construct", help="sieve, cover, and emit a gap certificate")
    _add_common(c)
    c.add_argument("--bounds", dest="bounds", action="store_true", default=None,
                   help="search for bounding primes (default: on for x <= %d)" % BOUNDS_AUTO_LIMIT)
    c.add_argument("--no-bounds", dest="bounds", action="store_false")
    c.add_argument("--presieve-depth", type=int, default=DEFAULT_PRESIEVE_DEPTH)

    v = sub.add_parser("verify", help="re-verify a certificate file")
    v.add_argument("path", help="certificate JSON path")
    v.add_argument("--presieve-depth", type=int, default=DEFAULT_PRESIEVE_DEPTH)

    e = sub.add_parser("estimate", help="measured-vs-predicted survivor report")
    _add_common(e)
    e.add_argument("--m", type=int, action="append", default=None,
                   help="survivor class index (repeatable)")
    e.add_argument("--K", type=float, default=None, help="band width for the sums row")
    return ap


def _thread_count(args) -> int:
    n = getattr(args, "threads", None)
    if n is None:
        n = int(os.environ.get("GAPFORGE_THREADS", "1"))
    if n < 1:
        raise ValueError("thread count must be >= 1")
    return n


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _params_from_args(args) -> SieveParams:
    return derive_params(
        args.x, args.M, args.a, epsilon=args.epsilon, C_U=args.C_U,
        y=args.y, z=args.z, U=args.U, kappa=args.kappa,
    )


def _render_check(check: ModulusCheck) -> str:
    rows = "  ".join(f"{name}:{status}" for name, status in check.checks)
    s = f"constraints  {rows}"
    if not check.accepted:
        s += f"\n  rejected({check.reason}): {check.detail}"
    return s


def _constraint_gate(check: ModulusCheck, force: bool) -> bool:
    """True when the command may proceed. Coprimality failures are fatal;
    size/omega failures only warn (kappa gates a warning, not correctness)."""
    if check.accepted:
        return True
    if check.reason == "coprimality":
        print(f"error: rejected(coprimality): {check.detail}", file=sys.stderr)
        return False
    if not force:
        print(f"warning: rejected({check.reason}): {check.detail} "
              "(constructing anyway; --force silences this)", file=sys.stderr)
    return True


def cmd_params(args) -> int:
    try:
        params = _params_from_args(args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    check = check_modulus(args.M, args.a, args.x, args.kappa)
    if args.format == "json":
        doc = {
            "x": params.x, "M": params.M, "a": params.a,
            "epsilon": params.epsilon, "C_U": params.C_U, "kappa": params.kappa,
            "y": params.y, "z": params.z, "U": params.U,
            "w": params.w, "z0": params.z0,
            "log_implied_X": params.log_implied_X,
            "overrides_used": params.overrides_used,
            "constraints": {
                "accepted": check.accepted,
                "reason": check.reason,
                "checks": [list(c) for c in check.checks],
            },
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        lines = [
            f"x={params.x}  M={params.M}  a={params.a}  epsilon={params.epsilon}  C_U={params.C_U}",
            f"y={params.y}  z={params.z}  U={params.U}",
            f"w={params.w:.6f}  z0={params.z0:.6f}  overrides_used={params.overrides_used}",
            f"implied X = exp({params.log_implied_X:.4f})",
            _render_check(check),
        ]
        _emit("\n".join(lines) + "\n", args.output)
    return 0 if check.accepted else 2


def cmd_construct(args) -> int:
    try:
        params = _params_from_args(args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    check = check_modulus(args.M, args.a, args.x, args.kappa)
    if not _constraint_gate(check, args.force):
        return 2

    with_bounds = args.bounds if args.bounds is not None else args.x <= BOUNDS_AUTO_LIMIT
    if with_bounds and args.x > BOUNDS_AUTO_LIMIT and not args.force:
        print(f"warning: bounding-prime search at x={args.x} tests probable primes "
              f"with ~{params.x // 4} digits; expect a long run", file=sys.stderr)

    if args.U is not None:
        try:
            assignment = construction.cover_fixed_U(params)
        except construction.CoverageError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
        U_max = params.U
        final_params = params
    else:
        U_max, assignment = construction.max_covered_U(params)
        if U_max < 1:
            print("error: no coverable interval (U_max = 0)", file=sys.stderr)
            return 1
        final_params = SieveParams(
            x=params.x, M=params.M, a=params.a, epsilon=params.epsilon,
            C_U=params.C_U, y=params.y, z=params.z, U=U_max, w=params.w,
            z0=params.z0, kappa=params.kappa, implied_X=params.implied_X,
            overrides_used=True,
        )

    cert = assembly.build_certificate(final_params, assignment, with_bounds=with_bounds,
                                      presieve_depth=args.presieve_depth)
    verdict = assembly.verify_certificate(cert, presieve_depth=args.presieve_depth)

    summary = [f"U_max={U_max}", f"primorial_digits={cert.primorial_digits}"]
    if cert.gap is not None:
        summary.append(f"gap={cert.gap} (>= M*U = {cert.M * cert.U})")
        summary.append(f"primality_grade={cert.primality_grade}")
    print("  ".join(summary), file=sys.stderr)

    _emit(assembly.certificate_to_json(cert) + "\n", args.output)
    if not verdict.valid:
        print(f"error: fresh certificate failed verification: {verdict.reason}",
              file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    try:
        with open(args.path) as fh:
            cert = assembly.certificate_from_json(fh.read())
    except (OSError, ValueError, KeyError, TypeError) as e:
        print(f"error: cannot parse certificate: {e}", file=sys.stderr)
        return 2
    verdict = assembly.verify_certificate(cert, presieve_depth=args.presieve_depth)
    if verdict.valid:
        print("valid")
        return 0
    print(f"invalid: {verdict.reason}")
    return 1


def cmd_estimate(args) -> int:
    try:
        params = _params_from_args(args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    check = check_modulus(args.M, args.a, args.x, args.kappa)
    if not _constraint_gate(check, args.force):
        return 2
    if args.m is not None:
        m_list = args.m
    else:
        cap = 32
        limit = params.U / (params.z * math.log(math.log(params.x)) ** 2)
        m_list = [m for m in range(1, min(int(limit) + 1, cap + 1))
                  if analytic._assum2_ok(m, params.M)]
    report = analytic.estimate_report(params, m_list, K=args.K)
    if args.format == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.output)
    else:
        _emit(analytic.render_report_text(report), args.output)
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        _thread_count(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    handlers = {
        "params": cmd_params,
        "construct": cmd_construct,
        "verify": cmd_verify,
        "estimate": cmd_estimate,
    }
    try:
        return handlers[args.command](args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
