"""Command-line front end.

    coreep compute core-ep --in a.json --out x.json
    coreep verify thm3.6 --in a.json --in2 b.json --in3 d.json
    coreep gen lambda-pair --n 4 --root-order 2 --seed 3 --out pair.json
    coreep selftest 50 2..4 --seed 1

Exit codes: 0 success or pass, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import gen_inverses as gi
from . import instances as inst
from .errors import CoreEPError, MatrixFormatError, NoBCInverse, NoGroupInverse, NumericalFailure, OrderViolation
from .laws import (
    VerificationReport,
    verify_cor22,
    verify_lemma32,
    verify_lemma34,
    verify_thm21,
    verify_thm23,
    verify_thm33,
    verify_thm35,
    verify_thm36,
)
from .matcore import DEFAULT_TOL, ToleranceConfig, load_matrix, matrix_to_obj, residual
from .order import lemma42_check, lemma43_corner, order_holds, thm44_decompose
from .selftest import run_selftest, summary

log = logging.getLogger("coreep")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

OPS = ("mp", "drazin", "group", "core", "core-ep", "bc")
LAWS = {
    # law: (matrix operands, scalar flags)
    "thm2.1": (2, ()),
    "cor2.2": (1, ()),
    "thm2.3": (1, ()),
    "lem3.2": (2, ("lam", "mu")),
    "thm3.3": (2, ("lam", "mu")),
    "lem3.4": (1, ()),
    "thm3.5": (2, ("lam", "mu", "lam2", "mu2")),
    "thm3.6": (3, ()),
    "order": (2, ()),
    "lem4.2": (2, ()),
    "lem4.3": (2, ()),
    "thm4.4": (2, ()),
}
GEN_KINDS = ("with-index", "lambda-pair", "thm35-pair", "block-triple", "order-pair")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse "re,im" (or a bare real) into a complex number."""
    parts = text.split(",")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}") from None
    if len(vals) == 1:
        vals.append(0.0)
    if len(vals) != 2 or not all(np.isfinite(vals)):
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    return complex(vals[0], vals[1])


def parse_dims(text: str):
    lo, sep, hi = text.partition("..")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI but got {text!r}") from None
    if not 1 <= lo_i <= hi_i:
        raise argparse.ArgumentTypeError("dims need 1 <= LO <= HI")
    return lo_i, hi_i


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (np.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return v


def _add_common(p, inputs=True):
    if inputs:
        p.add_argument("--in", dest="in1", metavar="FILE", help="first matrix file")
        p.add_argument("--in2", metavar="FILE", help="second matrix file")
        p.add_argument("--in3", metavar="FILE", help="third matrix file")
    p.add_argument("--tol-eq", type=_positive, default=DEFAULT_TOL.eq_tol)
    p.add_argument("--tol-rank", type=_positive, default=DEFAULT_TOL.rank_tol)
    p.add_argument("--tol-nil", type=_positive, default=DEFAULT_TOL.nil_tol)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="FILE", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coreep", description="Core-EP inverse toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute a generalized inverse")
    p.add_argument("op", choices=OPS)
    p.add_argument("--route", default="R1", type=str.upper, choices=("R1", "R2", "R3", "ALL"))
    _add_common(p)

    p = sub.add_parser("verify", help="check one law on given operands")
    p.add_argument("law", choices=sorted(LAWS))
    p.add_argument("--lambda", dest="lam", type=parse_complex)
    p.add_argument("--mu", type=parse_complex)
    p.add_argument("--lambda2", dest="lam2", type=parse_complex)
    p.add_argument("--mu2", type=parse_complex)
    p.add_argument("--power", type=int, help="k for lem3.4 (default: every k in 1..4)")
    p.add_argument("--strict-hypothesis", action="store_true",
                   help="exit 1 when the hypothesis fails instead of reporting a vacuous pass")
    _add_common(p)

    p = sub.add_parser("gen", help="generate a seeded instance bundle")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--n", type=int, default=4, help="dimension")
    p.add_argument("--rank", type=int, help="core size for with-index")
    p.add_argument("--index", type=int, help="index for with-index")
    p.add_argument("--root-order", type=int, default=1)
    p.add_argument("--singular", action="store_true", help="append singular summands (lambda-pair)")
    p.add_argument("--r", type=int, default=2, help="A block size (block-triple)")
    p.add_argument("--s", type=int, default=2, help="D block size (block-triple)")
    p.add_argument("--mode", choices=inst.BLOCK_MODES, default="RangeB")
    p.add_argument("--dims", default="1,1,1", help="e1,e2,e3 sizes (order-pair)")
    p.add_argument("--split-dir", metavar="DIR", help="also write each matrix to DIR/<name>.json")
    _add_common(p, inputs=False)

    p = sub.add_parser("selftest", help="run the batch property suite")
    p.add_argument("n_instances", type=int)
    p.add_argument("dims", nargs="?", type=parse_dims, default=(2, 4), help="LO..HI (default 2..4)")
    _add_common(p, inputs=False)
    return parser


# --- helpers ------------------------------------------------------------------

def _cfg(args) -> ToleranceConfig:
    return ToleranceConfig(rank_tol=args.tol_rank, eq_tol=args.tol_eq, nil_tol=args.tol_nil)


def _inputs(args, count):
    paths = [args.in1, args.in2, args.in3]
    given = [p for p in paths if p]
    if len(given) != count or any(paths[i] is None for i in range(count)):
        raise UsageError(f"{args.command} {getattr(args, 'op', None) or args.law} needs exactly {count} "
                         f"matrix operand(s) via {', '.join(['--in', '--in2', '--in3'][:count])}")
    mats = []
    for path in paths[:count]:
        if not os.path.exists(path):
            raise UsageError(f"no such file: {path}")
        mats.append(load_matrix(path))
    return mats


def _emit(obj, out, indent=2):
    text = json.dumps(obj, indent=indent) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sidecar(out):
    root, ext = os.path.splitext(out)
    return f"{root}.report{ext or '.json'}"


# --- compute --------------------------------------------------------------------

def _compute(op, mats, route, cfg):
    a = mats[0]
    info = {}
    if op == "mp":
        x = gi.pinv(a, cfg)
        info["residuals"] = {
            "axa=a": residual(a @ x @ a, a),
            "xax=x": residual(x @ a @ x, x),
            "(ax)*=ax": residual((a @ x).conj().T, a @ x),
            "(xa)*=xa": residual((x @ a).conj().T, x @ a),
        }
    elif op == "drazin":
        dz = gi.drazin(a, cfg)
        x = dz.dinv
        info["index"] = dz.index
        info["residuals"] = dz.residuals
    elif op == "group":
        x = gi.group_inverse(a, cfg)
        info["residuals"] = {
            "axa=a": residual(a @ x @ a, a),
            "xax=x": residual(x @ a @ x, x),
            "ax=xa": residual(a @ x, x @ a),
        }
    elif op == "core":
        x = gi.core_inverse(a, cfg)
        info["residuals"] = {"axa=a": residual(a @ x @ a, a), "(ax)*=ax": residual((a @ x).conj().T, a @ x)}
    elif op == "core-ep":
        res = gi.core_ep(a, route, cfg)
        x = res.ceinv
        info["index"] = gi.index(a, cfg)
        info["route"] = route
        info["residuals"] = res.residuals
    else:
        b, c = mats[1], mats[2]
        x = gi.bc_inverse(a, b, c, cfg)
        info["residuals"] = {"xab=b": residual(x @ a @ b, b), "cax=c": residual(c @ a @ x, c)}
    info["residuals"] = {k: float(v) for k, v in info["residuals"].items()}
    return x, info


def cmd_compute(args, cfg):
    mats = _inputs(args, 3 if args.op == "bc" else 1)
    report = {"op": args.op, "tolerances": cfg.to_dict()}
    try:
        x, info = _compute(args.op, mats, args.route, cfg)
    except NoGroupInverse as exc:
        report.update(error="no-group-inverse", message=str(exc))
        code = EXIT_FAIL
    except NoBCInverse as exc:
        report.update(error="no-bc-inverse", message=str(exc))
        code = EXIT_FAIL
    except NumericalFailure as exc:
        report.update(error="numerical-failure", message=str(exc),
                      residuals={k: float(v) for k, v in exc.residuals.items()})
        code = EXIT_FAIL
    else:
        report.update(info)
        if args.out:
            _emit(matrix_to_obj(x), args.out, indent=None)
            _emit(report, _sidecar(args.out))
        else:
            _emit({"matrix": matrix_to_obj(x), "report": report}, None)
        return EXIT_OK
    log.error("%s: %s", report["error"], report["message"])
    if args.out:
        _emit(report, _sidecar(args.out))
    else:
        _emit({"report": report}, None)
    return code


# --- verify ---------------------------------------------------------------------

def _pair(args, mats, need):
    missing = [f"--{'lambda' if s.startswith('lam') else 'mu'}{'2' if s.endswith('2') else ''}"
               for s in need if getattr(args, s) is None]
    if missing:
        raise UsageError(f"{args.law} needs {' '.join(missing)}")
    scal = {s: getattr(args, s) for s in need}
    try:
        return inst.CommutationPair(mats[0], mats[1], scal["lam"], scal["mu"], scal.get("lam2"), scal.get("mu2"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _merge(law, reports, tol):
    res, notes = {}, []
    for k, rep in reports:
        res.update({f"{name} [k={k}]": v for name, v in rep.residuals.items()})
        notes.extend(rep.notes)
    return VerificationReport(law, all(r.hypothesis_satisfied for _, r in reports),
                              all(r.conclusion_holds for _, r in reports), res, tol, notes)


def verify_law(law, mats, cfg, args=None):
    """Dispatch one law to its verifier and return a VerificationReport."""
    a = mats[0]
    if law == "thm2.1":
        return verify_thm21(a, mats[1], cfg)
    if law == "cor2.2":
        return verify_cor22(a, cfg)
    if law == "thm2.3":
        return verify_thm23(a, cfg)
    if law == "lem3.2":
        return verify_lemma32(_pair(args, mats, ("lam", "mu")), mats[1], cfg)
    if law == "thm3.3":
        return verify_thm33(_pair(args, mats, ("lam", "mu")), cfg)
    if law == "thm3.5":
        return verify_thm35(_pair(args, mats, ("lam", "mu", "lam2", "mu2")), cfg)
    if law == "lem3.4":
        power = getattr(args, "power", None)
        if power is not None:
            if power < 1:
                raise UsageError("--power must be >= 1")
            return verify_lemma34(a, power, cfg)
        return _merge("lem3.4", [(k, verify_lemma34(a, k, cfg)) for k in range(1, 5)], cfg.eq_tol)
    if law == "thm3.6":
        return verify_thm36(a, mats[1], mats[2], cfg)
    if law == "order":
        holds, res = order_holds(a, mats[1], cfg)
        return VerificationReport("order", True, holds, res, cfg.eq_tol,
                                  [f"a is {'' if holds else 'not '}below b"])
    if law == "lem4.2":
        return lemma42_check(a, mats[1], cfg)
    if law == "lem4.3":
        return lemma43_corner(a, mats[1], cfg)
    if law == "thm4.4":
        try:
            cert = thm44_decompose(a, mats[1], cfg)
        except OrderViolation as exc:
            return VerificationReport("thm4.4", False, False, {}, cfg.eq_tol, [str(exc)])
        except NumericalFailure as exc:
            return VerificationReport("thm4.4", True, False, exc.residuals, cfg.eq_tol, [str(exc)])
        dims = cert.dims(cfg)
        return VerificationReport("thm4.4", True, cert.ok(cfg), cert.residuals, cfg.eq_tol,
                                  [f"block sizes {dims[0]}, {dims[1]}, {dims[2]}"],
                                  {k: float(v) for k, v in cert.checks.items()})
    raise UsageError(f"unknown law {law!r}")


def cmd_verify(args, cfg):
    count, _ = LAWS[args.law]
    mats = _inputs(args, count)
    shapes = {m.shape for m in mats if m.shape[0] == m.shape[1]}
    if any(m.shape[0] != m.shape[1] for m in mats if args.law != "thm3.6") or (
            args.law != "thm3.6" and len(shapes) > 1):
        raise UsageError("operands must be square matrices of one size")
    try:
        rep = verify_law(args.law, mats, cfg, args)
    except NumericalFailure as exc:
        rep = VerificationReport(args.law, True, False, exc.residuals, cfg.eq_tol, [f"numerical failure: {exc}"])
    obj = rep.to_dict()
    obj["tolerances"] = cfg.to_dict()
    _emit(obj, args.out)
    if rep.vacuous:
        return EXIT_FAIL if args.strict_hypothesis else EXIT_OK
    return EXIT_OK if rep.conclusion_holds else EXIT_FAIL


# --- gen ------------------------------------------------------------------------

def cmd_gen(args, cfg):
    seed = args.seed
    scal = {}
    if args.kind == "with-index":
        r = args.n if args.rank is None else args.rank
        k = (0 if r == args.n else 1) if args.index is None else args.index
        mats = {"A": inst.gen_with_index(inst.GenSpec(args.n, r, k, seed))}
    elif args.kind in ("lambda-pair", "thm35-pair"):
        if args.kind == "lambda-pair":
            pair = inst.gen_lambda_pair(args.n, args.root_order, seed, args.singular)
        else:
            pair = inst.gen_thm35_pair(args.n, seed)
        mats = {"A": pair.a, "B": pair.b}
        scal = {"lambda": pair.lam, "mu": pair.mu}
        if pair.lam2 is not None:
            scal.update({"lambda2": pair.lam2, "mu2": pair.mu2})
    elif args.kind == "block-triple":
        a, b, d, _ = inst.gen_block_triple(args.r, args.s, args.mode, seed)
        mats = {"A": a, "B": b, "D": d}
    else:
        try:
            dims = tuple(int(x) for x in args.dims.split(","))
        except ValueError:
            raise UsageError(f"--dims expects e1,e2,e3 but got {args.dims!r}") from None
        if len(dims) != 3:
            raise UsageError("--dims expects three sizes")
        a, b = inst.gen_order_pair(dims, seed, cfg)
        mats = {"A": a, "B": b}
    _emit(inst.bundle_to_obj(args.kind, seed, mats, scal), args.out)
    if args.split_dir:
        os.makedirs(args.split_dir, exist_ok=True)
        for name, m in mats.items():
            _emit(matrix_to_obj(m), os.path.join(args.split_dir, f"{name}.json"), indent=None)
    return EXIT_OK


# --- selftest -------------------------------------------------------------------

def cmd_selftest(args, cfg):
    if args.n_instances < 1:
        raise UsageError("n_instances must be >= 1")
    t0 = time.perf_counter()
    suites = run_selftest(args.n_instances, args.dims, args.seed, cfg)
    # wall time goes to the log so the summary file stays reproducible
    log.info("selftest finished in %.2f s", time.perf_counter() - t0)
    for s in suites:
        if s.failures:
            log.warning("%s: %d failures (cases %s)", s.law, s.failures, s.failed_cases[:10])
    _emit(summary(suites, args.seed, cfg), args.out)
    return EXIT_OK if all(s.failures == 0 for s in suites) else EXIT_FAIL


COMMANDS = {"compute": cmd_compute, "verify": cmd_verify, "gen": cmd_gen, "selftest": cmd_selftest}


SCALAR_FLAGS = ("--lambda", "--mu", "--lambda2", "--mu2")


def _glue_scalars(argv):
    # argparse reads "-1,0" as an option, so attach scalar values to their flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in SCALAR_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_scalars(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args, _cfg(args))
    except (UsageError, MatrixFormatError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except CoreEPError as exc:
        if isinstance(exc, ValueError):
            log.error("%s", exc)
            return EXIT_INPUT
        log.error("%s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
