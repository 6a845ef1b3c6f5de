"""Batch front-end: build gadgets, run counts, compute thresholds.

Subcommands
-----------
gadgets     dump gadget netlists (golden-file stable)
count       exhaustive pair sweep -> JSON report (+ optional CSV matrix)
threshold   derived threshold quantities from a report, checked against
            the embedded reference values
montecarlo  stochastic fault sampling cross-check
verify      fast invariant suite (censuses, combinatorics, formulas)

Exit codes: 0 success, 1 invariant violation / reference mismatch,
2 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from . import baseline, malignancy, threshold
from .circuit import (
    LocationType,
    build_a_state_exrec,
    build_cat_prep,
    build_cnot_exrec,
    build_encoder,
    build_steane_ec,
)


def _gadget_for(exrec: str, storage: bool):
    if exrec == "cnot":
        return build_cnot_exrec(include_storage=storage)
    if exrec == "a-state":
        return build_a_state_exrec()
    raise SystemExit(2)


def cmd_gadgets(args) -> int:
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.exrec == "cnot":
        gadgets = [build_cnot_exrec(include_storage=args.storage)]
    elif args.exrec == "a-state":
        gadgets = [build_a_state_exrec()]
    else:  # the full set
        gadgets = [
            build_encoder("zero"), build_encoder("plus"), build_steane_ec(),
            build_cat_prep(), build_cnot_exrec(True), build_cnot_exrec(False),
            build_a_state_exrec(),
        ]
    for g in gadgets:
        path = outdir / f"{g.name}.netlist"
        path.write_text(g.netlist())
        print(f"wrote {path} ({g.location_count} locations)")
    return 0


def cmd_count(args) -> int:
    gadget = _gadget_for(args.exrec, args.storage)
    t0 = time.time()

    def progress(done, total):
        if args.quiet:
            return
        pct = 100.0 * done / total
        print(f"\r  {done}/{total} pairs ({pct:5.1f}%)", end="", file=sys.stderr)

    report = malignancy.count_matrix(
        gadget, mode=args.noise, pruned=not args.full, workers=args.workers,
        keep_witnesses=not args.no_witnesses, progress=progress)
    if not args.quiet:
        print(file=sys.stderr)
    out = Path(args.output)
    out.write_text(report.to_json())
    print(f"gadget={gadget.name} mode={args.noise} A={float(report.A):.1f} "
          f"B={report.B} elapsed={time.time() - t0:.1f}s")
    print(f"wrote {out}")
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
        print(f"wrote {args.csv}")
    return 0


def _compare(name: str, got: float, want: float, tol: float) -> bool:
    ok = math.isclose(got, want, rel_tol=tol)
    print(f"  {name:32s} {got:>14.6g}  reference {want:>12.6g}  "
          f"{'ok' if ok else 'MISMATCH'}")
    return ok


def cmd_threshold(args) -> int:
    report = malignancy.MalignancyReport.from_json(Path(args.report).read_text())
    storage = report.include_storage
    if report.gadget.startswith("cnot"):
        c_anc = baseline.C_ANC_CNOT if storage else baseline.C_ANC_CNOT_NOSTORAGE
        exponent = baseline.CNOT_ACCEPT_EXPONENT
    else:
        c_anc = baseline.D_ANC_A_STATE
        exponent = baseline.A_STATE_ACCEPT_EXPONENT
    if args.c_anc is not None:
        c_anc = args.c_anc
    result = threshold.threshold_pipeline(threshold.ThresholdInputs(
        A=float(report.A), B=report.B, C_anc=c_anc, acceptance_exponent=exponent))
    print(f"gadget={report.gadget} mode={report.noise_mode}")
    print(f"  A  = {float(report.A):.1f}")
    print(f"  B  = {report.B}")
    print(f"  A' = {result.a_prime:.1f}")
    print(f"  A''= {result.a_double_prime:.1f}")
    print(f"  threshold = {result.eps0:.4g}")
    ok = True
    tol = baseline.DERIVED_TOL
    refs = {
        ("cnot_exrec", "adversarial"): (
            baseline.A_PRIME_CNOT, baseline.A_DOUBLE_PRIME_CNOT, baseline.EPS0_CNOT),
        ("cnot_exrec_nostorage", "adversarial"): (
            baseline.A_PRIME_CNOT_NOSTORAGE, baseline.A_DOUBLE_PRIME_CNOT_NOSTORAGE,
            baseline.EPS0_CNOT_NOSTORAGE),
        ("cnot_exrec", "depolarizing"): (
            baseline.A_PRIME_CNOT_DEPOL, baseline.A_DOUBLE_PRIME_CNOT_DEPOL,
            baseline.EPS0_CNOT_DEPOL),
        ("cnot_exrec_nostorage", "depolarizing"): (
            baseline.A_PRIME_CNOT_DEPOL_NOSTORAGE,
            baseline.A_DOUBLE_PRIME_CNOT_DEPOL_NOSTORAGE,
            baseline.EPS0_CNOT_DEPOL_NOSTORAGE),
        ("a_state_exrec", "adversarial"): (
            baseline.A_PRIME_A_STATE, baseline.A_DOUBLE_PRIME_A_STATE, None),
    }
    key = (report.gadget, report.noise_mode)
    if key in refs:
        ap, app, e0 = refs[key]
        ok &= _compare("A'", result.a_prime, ap, tol)
        ok &= _compare("A''", result.a_double_prime, app, tol)
        if e0 is not None:
            ok &= _compare("threshold", result.eps0, e0, tol)
    if args.json:
        Path(args.json).write_text(json.dumps({
            "schema_version": baseline.SCHEMA_VERSION,
            "gadget": report.gadget,
            "noise_mode": report.noise_mode,
            "A": float(report.A), "B": report.B,
            "a_prime": result.a_prime,
            "a_double_prime": result.a_double_prime,
            "eps0": result.eps0,
        }, indent=1, sort_keys=True))
    return 0 if ok else 1


def cmd_montecarlo(args) -> int:
    gadget = _gadget_for(args.exrec, args.storage)
    result = malignancy.monte_carlo_failure(gadget, args.eps, args.shots, seed=args.seed)
    print(f"shots={result.shots} failures={result.failures} "
          f"estimate={result.estimate:.3g} stderr={result.stderr:.3g}")
    if args.report:
        report = malignancy.MalignancyReport.from_json(Path(args.report).read_text())
        bound = malignancy.pair_bound(report, args.eps)
        limit = bound + 3.0 * result.stderr
        ok = result.estimate <= limit
        print(f"pair bound = {bound:.3g}; estimate within 3 sigma: "
              f"{'yes' if ok else 'NO'}")
        return 0 if ok else 1
    return 0


def cmd_verify(args) -> int:
    failures = []

    def check(name, got, want):
        ok = got == want
        print(f"  {name:44s} {'ok' if ok else f'FAIL (got {got}, want {want})'}")
        if not ok:
            failures.append(name)

    print("census:")
    check("encoder locations", build_encoder("zero").location_count,
          baseline.ENCODER_LOCATIONS)
    check("error-correction locations", build_steane_ec().location_count,
          baseline.EC_LOCATIONS)
    cnot = build_cnot_exrec(True)
    check("cnot exrec locations", cnot.location_count, baseline.CNOT_EXREC_LOCATIONS)
    check("cnot exrec locations (no storage)", build_cnot_exrec(False).location_count,
          baseline.CNOT_EXREC_LOCATIONS_NOSTORAGE)
    check("cat prep locations", build_cat_prep().location_count,
          baseline.CAT_PREP_LOCATIONS)
    astate = build_a_state_exrec()
    check("ancilla exrec locations", astate.location_count,
          baseline.A_STATE_EXREC_LOCATIONS)
    check("rotation locations", astate.census()[LocationType.TGATE], 28)
    print("combinatorics:")
    check("cnot three-subsets", cnot.three_subsets(), baseline.B_CNOT)
    check("cnot three-subsets (no storage)", build_cnot_exrec(False).three_subsets(),
          baseline.B_CNOT_NOSTORAGE)
    check("ancilla three-subsets", astate.three_subsets(), baseline.B_A_STATE)
    print("formula pipeline:")
    pipe = threshold.threshold_pipeline(threshold.ThresholdInputs(
        A=baseline.A_CNOT, B=baseline.B_CNOT, C_anc=baseline.C_ANC_CNOT,
        acceptance_exponent=baseline.CNOT_ACCEPT_EXPONENT))
    ok = math.isclose(pipe.eps0, baseline.EPS0_CNOT, rel_tol=baseline.DERIVED_TOL)
    print(f"  {'threshold from reference counts':44s} {'ok' if ok else 'FAIL'}")
    if not ok:
        failures.append("threshold")
    if failures:
        print(f"{len(failures)} failure(s)")
        return 1
    print("all checks passed")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="steane-ft",
        description="Level-1 gadget analysis for the [[7,1,3]] code")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gadgets", help="dump gadget netlists")
    p.add_argument("--exrec", choices=["cnot", "a-state", "all"], default="all")
    p.add_argument("--storage", dest="storage", action="store_true", default=True)
    p.add_argument("--no-storage", dest="storage", action="store_false")
    p.add_argument("--output", default="gadgets")
    p.set_defaults(func=cmd_gadgets)

    p = sub.add_parser("count", help="exhaustive malignant-pair sweep")
    p.add_argument("--exrec", choices=["cnot", "a-state"], required=True)
    p.add_argument("--noise", choices=["adversarial", "depolarizing"],
                   default="adversarial")
    p.add_argument("--storage", dest="storage", action="store_true", default=True)
    p.add_argument("--no-storage", dest="storage", action="store_false")
    p.add_argument("--full", action="store_true",
                   help="fully quantified sweep (no case-split reductions)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-witnesses", action="store_true")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--output", default="count_report.json")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("threshold", help="derived threshold quantities")
    p.add_argument("--report", required=True)
    p.add_argument("--c-anc", type=float, default=None,
                   help="override the ancilla-circuit location count")
    p.add_argument("--json", help="also write a machine-readable summary")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("montecarlo", help="stochastic fault sampling")
    p.add_argument("--exrec", choices=["cnot", "a-state"], default="cnot")
    p.add_argument("--storage", dest="storage", action="store_true", default=True)
    p.add_argument("--no-storage", dest="storage", action="store_false")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="compare against a count report's bound")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("verify", help="fast invariant suite")
    p.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
