"""Command-line front end: single queries, batch sweeps, certificate dumps.

Exit codes: 0 success, 2 invalid input, 1 internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report
from .connectivity import SideConditionError, replay_proof
from .cohomology import derive_join_coefficients, splitting_chase
from .ktheory import TruncProjKGroup, adams_matrix, matrix_to_json
from .retract_solver import (
    Impossible,
    RetractProblem,
    decide_retract,
    verdict_to_json,
    verify_certificate,
    verify_witness,
)
from .verdict import (
    FieldDescriptor,
    SectionQuery,
    csv_row,
    CSV_COLUMNS,
    decide_section,
    verify_verdict,
)


def _add_field_flags(sub):
    sub.add_argument("--char", type=int, default=0, help="field characteristic (0 or a prime)")
    sub.add_argument("--alg-closed", action=argparse.BooleanOptionalAction, default=False)
    sub.add_argument("--perfect", action=argparse.BooleanOptionalAction, default=True)
    sub.add_argument("--fin-2-cohdim", action=argparse.BooleanOptionalAction, default=True)


def _field(args) -> FieldDescriptor:
    return FieldDescriptor(
        characteristic=args.char,
        algebraically_closed=args.alg_closed,
        perfect=args.perfect,
        finite_2_etale_cohdim=args.fin_2_cohdim,
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stiefel-sections",
        description="exact obstruction computations for sections of Stiefel varieties")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--verify", action="store_true",
                        help="replay and re-verify every certificate/trace before printing")
    sp = p.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sp.add_parser(name, parents=[common], **kw)

    s = add_parser("verdict", help="decide a single section query")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    _add_field_flags(s)

    s = add_parser("retract", help="decide an equivariant retract problem")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--k", type=int, action="append", required=True,
                   help="Adams index to enforce (repeatable)")

    s = add_parser("adams", help="matrix of an Adams operation")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)

    s = add_parser("join-coeffs", help="intrinsic-join pullback coefficients")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)

    s = add_parser("connectivity", help="replay a recorded connectivity proof")
    s.add_argument("--proof", required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)

    s = add_parser("sweep", help="batch verdicts over ranges; writes CSV + PNG")
    for name in ("r", "l", "n"):
        s.add_argument(f"--{name}-min", type=int, required=True)
        s.add_argument(f"--{name}-max", type=int, required=True)
    s.add_argument("--out", required=True, help="output CSV path; PNG lands alongside")
    _add_field_flags(s)
    return p


def _emit(args, human: str, payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(human)


def _run_verdict(args) -> int:
    q = SectionQuery(r=args.r, l=args.l, n=args.n, field=_field(args))
    v = decide_section(q)
    if args.verify and not verify_verdict(v):
        print("verification failed", file=sys.stderr)
        return 1
    if args.format == "csv":
        print(",".join(CSV_COLUMNS))
        print(",".join(str(x) for x in csv_row(v)))
        return 0
    lines = [f"V_{q.r + q.l}(A^{q.n}) -> V_{q.r}(A^{q.n}) over char {q.field.characteristic}: {v.status}"]
    if v.holds_over_z:
        lines.append("  (nonexistence already holds over Z)")
    for i, step in enumerate(v.reason_chain, 1):
        lines.append(f"  {i}. [{step.kind}] {step.payload}")
        lines.append(f'     "{step.citation}"')
    _emit(args, "\n".join(lines), v.to_json())
    return 0


def _run_retract(args) -> int:
    prob = RetractProblem(n=args.n, s=args.s, t=args.t, ks=frozenset(args.k))
    v = decide_retract(prob)
    if args.verify:
        ok = (verify_certificate(prob, v) if isinstance(v, Impossible)
              else verify_witness(prob, v.witness))
        if not ok:
            print("verification failed", file=sys.stderr)
            return 1
    if isinstance(v, Impossible):
        c = v.certificate
        human = (f"retract(n={prob.n}, s={prob.s}, t={prob.t}, ks={sorted(prob.ks)}): "
                 f"Impossible\n  certificate: y·A = 0, y·b != 0 (mod {c.modulus})\n"
                 f"  y = {list(c.certificate)}")
    else:
        human = (f"retract(n={prob.n}, s={prob.s}, t={prob.t}, ks={sorted(prob.ks)}): "
                 f"Exists\n  witness phi = {v.witness.to_lists()}")
    _emit(args, human, verdict_to_json(prob, v))
    return 0


def _run_adams(args) -> int:
    g = TruncProjKGroup(n=args.n, m=args.m)
    mat = adams_matrix(args.k, g)
    _emit(args, f"psi^{args.k} on K(P^{args.n - 1}_{args.m}):\n"
          + "\n".join("  " + str(row) for row in mat.to_lists()),
          matrix_to_json(g, mat))
    return 0


def _run_join_coeffs(args) -> int:
    jc = derive_join_coefficients(args.r, args.n, args.m)
    chase = splitting_chase(args.r, args.n, args.m) if args.m >= args.r * args.n + 2 * (args.r - args.n) else None
    human = [f"join coefficients (r={args.r}, n={args.n}, m={args.m}): "
             f"{'all units' if jc.all_units() else 'NON-UNIT FOUND'} "
             f"({len(jc.magnitudes)} coefficients)"]
    if chase is not None:
        human.append(f"splitting chase: {'passed' if chase.passed else f'failed at {list(chase.failures)}'}")
    payload = {"r": args.r, "n": args.n, "m": args.m,
               "all_units": jc.all_units(), "trace": jc.trace_json()}
    if chase is not None:
        payload["chase"] = chase.to_json()
    _emit(args, "\n".join(human), payload)
    return 0


def _run_connectivity(args) -> int:
    params = {k: v for k, v in (("r", args.r), ("n", args.n), ("m", args.m))
              if v is not None}
    trace = replay_proof(args.proof, **params)
    human = [f"{trace.name}{trace.params}: {'PASSED' if trace.passed else 'FAILED'}"]
    for st in trace.steps:
        human.append(f"  [{st.rule}] {st.instantiation}"
                     + (f" :: {st.inequality}" if st.inequality else ""))
    human.append(f"  conclusion: {trace.conclusion}")
    if trace.first_failure:
        human.append(f"  first failure: {trace.first_failure}")
    _emit(args, "\n".join(human), trace.to_json())
    return 0


def _run_sweep(args) -> int:
    from .verdict import sweep as run_sweep

    verdicts = run_sweep(range(args.r_min, args.r_max + 1),
                         range(args.l_min, args.l_max + 1),
                         range(args.n_min, args.n_max + 1), _field(args))
    if not verdicts:
        print("empty sweep range", file=sys.stderr)
        return 2
    if args.verify:
        for v in verdicts:
            if not verify_verdict(v):
                print(f"verification failed at {v.query}", file=sys.stderr)
                return 1
    report.write_sweep_csv(verdicts, args.out)
    png = args.out.rsplit(".", 1)[0] + ".png"
    report.render_sweep_png(verdicts, png)
    print(f"{len(verdicts)} verdicts -> {args.out} (+ {png})")
    return 0


_DISPATCH = {
    "verdict": _run_verdict,
    "retract": _run_retract,
    "adams": _run_adams,
    "join-coeffs": _run_join_coeffs,
    "connectivity": _run_connectivity,
    "sweep": _run_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, SideConditionError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # pragma: no cover - defensive
        print(f"internal failure: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
