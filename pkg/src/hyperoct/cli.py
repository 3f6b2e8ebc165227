"""Verify hyperoctahedral relation lattices, rewrite relations as certificates, and check Künneth models.

Exit codes: 0 verified, 1 the mathematics disagreed (lattice mismatch or a
failed certificate), 2 bad input.
"""

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import kunneth
from .octagen import verify_zkernel
from .rewriter import Certificate, InvariantViolation, NotARelation, decompose, verify
from .subsets import FormalSum

OK, MISMATCH, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _dump(obj):
    return json.dumps(obj, indent=2)


def _report_line(r):
    verdict = "equal" if r.equal else "DIFFERENT"
    return (f"n={r.n} m={r.m} k={r.k}: kernel rank {r.kernel_rank}, "
            f"G_{r.k + 1} rank {r.g_rank}, {verdict} ({r.elapsed_ms} ms)")


def cmd_verify_ek(args, out):
    n, m, k = args.n, args.m, args.k
    if not 0 <= k <= m <= n:
        raise InputError(f"need 0 <= k <= m <= n, got n={n}, m={m}, k={k}")
    r = verify_zkernel(n, m, k)
    print(_dump(r.to_json()) if args.json else _report_line(r), file=out)
    return OK if r.equal else MISMATCH


def cmd_rewrite(args, out):
    try:
        lam = FormalSum.from_json(_load_json(args.infile))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    try:
        cert = decompose(lam, args.k)
    except NotARelation as exc:
        raise InputError(str(exc)) from exc
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return MISMATCH
    if not verify(lam, cert):
        print("certificate failed self-verification", file=sys.stderr)
        return MISMATCH
    text = _dump(cert.to_json())
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote certificate with {len(cert)} entries to {args.out}", file=out)
    else:
        print(text, file=out)
    return OK


def cmd_check_cert(args, out):
    try:
        lam = FormalSum.from_json(_load_json(args.relation))
        cert = Certificate.from_json(_load_json(args.cert))
        ok = verify(lam, cert)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print("verified" if ok else "FAILED", file=out)
    return OK if ok else MISMATCH


def _load_model(spec):
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in kunneth.BUILTIN_MODELS:
            raise InputError(f"unknown built-in model {name!r}; choose from {sorted(kunneth.BUILTIN_MODELS)}")
        return kunneth.builtin_setup(name)
    obj = _load_json(spec)
    try:
        R = kunneth.Algebra.from_json(obj)
        if "gamma" in obj:
            gamma = kunneth.Tensor(R, 1, {(i,): Fraction(str(x)) for i, x in enumerate(obj["gamma"])})
            star = kunneth.Tensor(R, 1, {(i,): Fraction(str(x)) for i, x in enumerate(obj.get("gamma_star", []))}) \
                if "gamma_star" in obj else R.one()
            return kunneth.ModelSetup(R, gamma, star)
        return kunneth.default_setup(R)
    except kunneth.ModelError as exc:
        raise InputError(f"model validation failed ({exc})") from exc
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"malformed model {spec}: {exc}") from exc


def cmd_chow(args, out):
    setup = _load_model(args.model)
    R = setup.algebra
    if args.alpha == "diagonal":
        if args.m is None or args.m < 1:
            raise InputError("--alpha diagonal needs --m >= 1")
        alpha = kunneth.diagonal(R, args.m)
        label = "diagonal"
    else:
        try:
            alpha = kunneth.Tensor.from_json(R, _load_json(args.alpha))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if args.m is not None and args.m != alpha.factors:
            raise InputError(f"--m {args.m} but the class has {alpha.factors} factors")
        label = str(args.alpha)
    m = alpha.factors
    if args.n < m:
        raise InputError(f"need m <= n, got m={m}, n={args.n}")
    if not kunneth.is_symmetric_tensor(alpha):
        raise InputError("alpha is not symmetric under permuting factors")
    primes = [kunneth.alpha_prime(alpha, setup, k) for k in range(m + 1)]
    r = kunneth.verify_mainthm(alpha, setup, args.n, label=label)
    order = r.context["order"]
    if args.json:
        print(_dump({
            "model": R.name,
            "alpha": label,
            "m": m,
            "n": args.n,
            "order": order,
            "alpha_prime": [p.to_json() for p in primes],
            "report": r.to_json(),
        }), file=out)
    else:
        print(f"model {R.name}, alpha = {label} on {m} factors, n = {args.n}", file=out)
        for k, p in enumerate(primes):
            print(f"  alpha'_{k} = {'0' if not p else p}", file=out)
        print(f"  vanishing order k = {order}; expected kernel G_{order + 1}", file=out)
        print("  " + _report_line(r), file=out)
    return OK if r.equal else MISMATCH


def sweep_cells(max_m, extra):
    for m in range(max_m + 1):
        for k in range(m + 1):
            for n in range(m, m + k + extra + 1):
                yield n, m, k


def cmd_sweep(args, out):
    if args.max_m < 0 or args.extra < 0:
        raise InputError("bounds must be >= 0")
    cells = sorted(sweep_cells(args.max_m, args.extra), key=lambda c: (c[0], c[1], c[2]))
    reports = [verify_zkernel(n, m, k) for n, m, k in cells]
    cols = ["n", "m", "k", "kernel_rank", "g_rank", "equal", "elapsed_ms"]
    fh = open(args.out, "w", newline="") if args.out else out
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in reports:
            d = r.to_json()
            w.writerow([str(d[c]).lower() if c == "equal" else d[c] for c in cols])
    finally:
        if args.out:
            fh.close()
    ok = all(r.equal for r in reports)
    bad = [r for r in reports if not r.equal]
    chow_ok = True
    for name in kunneth.BUILTIN_MODELS:
        setup = kunneth.builtin_setup(name)
        for m in range(1, min(args.max_m, args.chow_max_m) + 1):
            for n in range(m, m + args.extra + 1):
                r = kunneth.verify_mainthm(kunneth.diagonal(setup.algebra, m), setup, n, label="diagonal")
                chow_ok &= r.equal
                if not r.equal:
                    bad.append(r)
    summary = f"sweep: {len(reports)} cells, {'all equal' if ok else f'{len(bad)} mismatches'}"
    print(summary, file=sys.stderr if not args.out else out)
    if not chow_ok:
        print("built-in model check failed", file=sys.stderr)
    return OK if ok and chow_ok else MISMATCH


def build_parser():
    p = argparse.ArgumentParser(prog="hyperoct", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    q = sub.add_parser("verify-ek", help="kernel of A -> e_k(A) vs G_{k+1}")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_verify_ek)

    q = sub.add_parser("rewrite", help="decompose a relation into (k+1)-hyperoctahedral sums")
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--out")
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(func=cmd_rewrite)

    q = sub.add_parser("check-cert", help="independently re-verify a certificate")
    q.add_argument("--relation", required=True)
    q.add_argument("--cert", required=True)
    q.set_defaults(func=cmd_check_cert)

    q = sub.add_parser("chow", help="relations among alpha(A) in a Künneth model")
    q.add_argument("--model", required=True, help="builtin:point|p1|p2|p1xp1 or a model JSON file")
    q.add_argument("--alpha", default="diagonal", help="'diagonal' or a tensor JSON file")
    q.add_argument("--m", type=int)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_chow)

    q = sub.add_parser("sweep", help="run the e_k kernel check over a grid and write CSV")
    q.add_argument("--max-m", type=int, required=True)
    q.add_argument("--extra", type=int, required=True)
    q.add_argument("--out")
    q.add_argument("--chow-max-m", type=int, default=2)
    q.set_defaults(func=cmd_sweep)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
