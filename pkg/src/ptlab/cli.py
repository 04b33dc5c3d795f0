"""``ptlab``: check, measure and construct leaks from ``.ptc`` circuit files.

Exit codes: 0 the property holds, 1 it fails, 2 the input is unusable.
The JSON report goes to stdout and a one-line summary to stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import construction as cons
from . import leaks as lk
from . import process as pm
from . import purity
from .circuit import CircuitError, evaluate, parse, pretty_print
from .process import TypeMismatch
from .quality import quality
from .report import Report, digest
from .tensor import Tolerance

CHECKS = ("causal", "cp", "leak", "broadcast", "pure")


class InputError(Exception):
    pass


def _load(path: str, report: Report | None = None):
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    if report is not None:
        report.input_digest = digest(data)
    try:
        file = parse(data.decode("utf-8"))
        return file, evaluate(file)
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: not UTF-8 ({e.reason})") from None
    except CircuitError as e:
        raise InputError(f"{path}:{e}") from None


def _bound(tol: Tolerance) -> float:
    return tol.abs_eps + tol.rel_eps


def run_check(what: str, f, tol: Tolerance) -> tuple[bool, dict]:
    v: dict = {"what": what, "dom": str(f.dom), "cod": str(f.cod)}
    if what == "causal":
        res = pm.causal_residual(f)
        v["residual"] = res
        return res <= _bound(tol), v
    if what == "cp":
        v["residual"] = pm.cp_residual(f)
        return pm.is_cp(f, tol), v
    if what in ("leak", "broadcast"):
        try:
            cert = lk.is_leak(f, tol)
        except TypeMismatch as e:
            v["reason"] = str(e)
            return False, v
        v.update(residual=cert.residual, kind=cert.kind_name, leaked=str(cert.leak_system))
        if isinstance(cert.kind, lk.Constant):
            v["constant_state"] = cert.kind.state
        elif isinstance(cert.kind, lk.ClassicalCanonical):
            v["classical_leak_map"] = cert.kind.l
        elif isinstance(cert.kind, lk.CQCanonical):
            v["cq_leak_map"] = cert.kind.L
        if what == "leak":
            return cert.is_leak, v
        if cert.leak_system == f.dom:
            v["left_counit_residual"] = lk.left_counit_residual(f)
        return isinstance(cert.kind, lk.Broadcast), v
    if what == "pure":
        try:
            verdict = purity.is_pure(f, tol)
        except (TypeError, ValueError) as e:
            v["reason"] = str(e)
            return False, v
        if verdict.classical_form is not None:
            pattern, r = verdict.classical_form
            v["pattern"] = {str(i): j for i, j in sorted(pattern.items())}
            v["weights"] = r
        v.update(kraus_rank=verdict.quantum_kraus_rank, violation=verdict.violation,
                 separable=verdict.separable, product_residual=verdict.product_residual)
        if verdict.cq_blocks is not None:
            v["cq_blocks"] = [{"block": list(k), "kraus_rank": r} for k, r in verdict.cq_blocks]
        return verdict.pure, v
    raise ValueError(what)


def run_quality(f, tol: Tolerance, restarts: int, seed: int) -> tuple[bool, dict]:
    if len(f.dom) != 1:
        raise InputError(f"quality needs a leak on a single atom, got input {f.dom}")
    try:
        res = lk.leak_residual(f)
    except TypeMismatch as e:
        return False, {"reason": str(e)}
    if res > _bound(tol):
        return False, {"reason": "not a leak", "residual": res}
    q = quality(f, tol, restarts=restarts, seed=seed)
    return True, {
        "residual": res, "raw": q.raw, "circle": q.circle, "normalized": q.normalized,
        "method": q.method, "optimal_restoration": q.optimal_restoration.transfer,
        "constant_certificate": q.constant_certificate,
    }


def _theory_for(pre: cons.PreLeak, systems) -> cons.ConstructedTheory:
    assigned = {pre.atom: pre}
    for s in systems:
        for a in s:
            if a not in assigned:
                assigned[a] = cons.trivial_preleak(a)
    return cons.ConstructedTheory(assigned)


def run_construct(p, tol: Tolerance, applied) -> tuple[bool, dict]:
    if len(p.dom) != 1:
        raise InputError(f"a pre-leak needs a single-atom input, got {p.dom}")
    try:
        pre = cons.make_preleak(p, tol)
    except TypeMismatch as e:
        raise InputError(str(e)) from None
    except (cons.NotCausal, cons.NotIdempotent) as e:
        marg = cons.marginal_idempotent(p)
        return False, {
            "error": type(e).__name__,
            "causal_residual": pm.causal_residual(p),
            "idempotent_residual": (marg @ marg).distance(marg),
        }
    v = {
        "atom": str(pre.atom), "leaked": str(pre.leaked),
        "causal_residual": pre.causal_residual, "idempotent_residual": pre.idempotent_residual,
        "idempotent": pre.induced_idempotent,
        "idempotent_is_identity": pre.induced_idempotent.approx_eq(pm.identity(pre.system), tol),
    }
    v["leak_residual"] = _theory_for(pre, []).leak_residual(pre.system)
    if applied is not None:
        theory = _theory_for(pre, [applied.dom, applied.cod])
        projected = theory.project(applied)
        entry = {"dom": str(applied.dom), "cod": str(applied.cod),
                 "member": theory.member(applied, tol),
                 "projection_distance": projected.distance(applied),
                 "projection": projected}
        if theory.is_dephasing(tol):
            entry["extracted_classical"] = cons.extract_classical(theory, projected, tol)
        v["applied"] = entry
    return True, v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptlab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="absolute and relative tolerance (default: PTLAB_TOL or 1e-9)")
    common.add_argument("--json-only", action="store_true", help="suppress the stderr summary")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="decide a property of main")
    c.add_argument("what", choices=CHECKS)
    c.add_argument("file")
    q = sub.add_parser("quality", parents=[common], help="quality of the leak in main")
    q.add_argument("--restarts", type=int, default=5)
    q.add_argument("file")
    k = sub.add_parser("construct", parents=[common], help="adjoin the pre-leak in main")
    k.add_argument("--apply", metavar="F.ptc", help="project the main process of this file")
    k.add_argument("file")
    p = sub.add_parser("parse", parents=[common], help="type-check and pretty-print")
    p.add_argument("file")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    report = Report(["ptlab", *argv])
    try:
        tol = Tolerance.from_env(args.tol) if args.tol is None else Tolerance(args.tol, args.tol)
        file, f = _load(args.file, report)
        if args.command == "check":
            holds, v = run_check(args.what, f, tol)
        elif args.command == "quality":
            holds, v = run_quality(f, tol, args.restarts, args.seed)
        elif args.command == "construct":
            applied = _load(args.apply)[1] if args.apply else None
            holds, v = run_construct(f, tol, applied)
        else:
            holds, v = True, {"dom": str(f.dom), "cod": str(f.cod), "pretty": pretty_print(file)}
        report.verdicts, report.holds = v, bool(holds)
        code = 0 if holds else 1
    except (InputError, ValueError) as e:
        report.error = {"message": str(e)}
        code = 2
    print(report.to_json())
    if not args.json_only:
        if code == 2:
            print(f"ptlab: error: {report.error['message']}", file=sys.stderr)
        else:
            print(f"ptlab {args.command}: {'holds' if code == 0 else 'fails'}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
