"""Command-line entry point.

Subcommands: ``certify`` (run the decentralized certificate, write
report.json + sweep.csv + eigphase.csv), ``sweep`` (profiles only),
``eig`` (closed-loop spectrum), ``verify`` (randomized property suites).

Exit codes: 0 success / certified, 2 certificate not granted, 1 error or
criterion inapplicable. ``PHASECERT_OUT_DIR`` overrides the output
directory.
"""

from __future__ import annotations

import argparse
import os
import sys

from .criteria import certify, ground_truth
from .errors import OpenLoopUnstableError, PhaseCertError
from .lti import FrequencyGrid
from .properties import run_all_suites
from .reporting import (
    write_eig_csv,
    write_eigphase_csv,
    write_report_json,
    write_sweep_csv,
)
from .scenario import assemble_scenario, builtin_scenario_names, load_scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CERTIFIED = 2


def _add_run_args(p: argparse.ArgumentParser):
    p.add_argument("config", nargs="?", help="scenario file or built-in name")
    p.add_argument("--config", dest="config_flag", help="scenario file (alternative to positional)")
    p.add_argument("--frame", choices=["rectangular", "power-polar", "blended", "naive-blended"],
                   help="override the scenario frame")
    p.add_argument("--wc", type=float, help="blend cutoff in Hz (overrides scenario)")
    p.add_argument("--grid", help="frequency grid as MIN:MAX:POINTS in Hz")
    p.add_argument("--out-dir", default=None, help="output directory (default: current)")
    p.add_argument("--refine", dest="refine", action="store_true", default=True)
    p.add_argument("--no-refine", dest="refine", action="store_false")


def _resolve_out_dir(args) -> str:
    out = os.environ.get("PHASECERT_OUT_DIR") or args.out_dir or "."
    os.makedirs(out, exist_ok=True)
    return out


def _prepare(args):
    source = args.config_flag or args.config
    if not source:
        raise SystemExit("error: missing scenario (positional or --config)")
    scn = load_scenario(source)
    asm = assemble_scenario(scn)
    tset = asm.transform_set(kind=args.frame, wc_hz=args.wc)
    if args.grid:
        try:
            lo, hi, n = args.grid.split(":")
            grid = FrequencyGrid.default(float(lo), float(hi), int(n))
        except ValueError as exc:
            raise SystemExit(f"error: bad --grid '{args.grid}' (want MIN:MAX:POINTS)") from exc
    else:
        grid = asm.grid()
    return asm, tset, grid


def _cmd_certify(args) -> int:
    asm, tset, grid = _prepare(args)
    report = certify(asm.conv_models, asm.buses, asm.network, tset, grid,
                     scenario=asm.name, refine=args.refine)
    out = _resolve_out_dir(args)
    write_report_json(report, os.path.join(out, "report.json"))
    write_sweep_csv(report, os.path.join(out, "sweep.csv"))
    write_eigphase_csv(report, os.path.join(out, "eigphase.csv"))
    n_fail = len(report.failures())
    print(f"scenario {asm.name}: frame={report.frame_kind} "
          f"points={len(report.grid)} failures={n_fail}")
    if report.certified:
        print("certified: stability guaranteed at every grid frequency")
        return EXIT_OK
    worst = min(report.verdicts, key=lambda v: v.margin)
    print(f"not certified ({report.note}); worst margin {worst.margin:.3f} "
          f"at {worst.f_hz:.4g} Hz"
          + (f", limiting converter {worst.limiting_converter}"
             if worst.limiting_converter is not None else ""))
    return EXIT_NOT_CERTIFIED


def _cmd_sweep(args) -> int:
    asm, tset, grid = _prepare(args)
    report = certify(asm.conv_models, asm.buses, asm.network, tset, grid,
                     scenario=asm.name, refine=args.refine)
    out = _resolve_out_dir(args)
    write_sweep_csv(report, os.path.join(out, "sweep.csv"))
    write_eigphase_csv(report, os.path.join(out, "eigphase.csv"))
    print(f"wrote sweep.csv and eigphase.csv for {asm.name} ({len(report.grid)} points)")
    return EXIT_OK


def _cmd_eig(args) -> int:
    asm, _, _ = _prepare(args)
    result = ground_truth(asm.conv_models, asm.network)
    out = _resolve_out_dir(args)
    write_eig_csv(result, os.path.join(out, "eig.csv"), scenario=asm.name)
    kind = "stable" if result.stable else "UNSTABLE"
    dom = f", dominant mode {result.dominant_mode_hz:.3f} Hz" if result.dominant_mode_hz else ""
    print(f"scenario {asm.name}: {kind} (max Re = {result.max_real:.4g}{dom})")
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_all_suites(seed=args.seed, trials=args.trials)
    ok = True
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{status}  {r.name}: {r.trials} trials, {r.failures} failures, "
              f"worst violation {r.worst_violation:.3e}")
        ok &= r.passed
    return EXIT_OK if ok else EXIT_ERROR


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="phasecert",
        description="Decentralized gain/phase stability certification for converter networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="run the certificate and write reports")
    _add_run_args(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("sweep", help="write gain/phase profile CSVs")
    _add_run_args(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("eig", help="closed-loop spectrum of the exact interconnection")
    _add_run_args(p)
    p.set_defaults(func=_cmd_eig)

    p = sub.add_parser("verify", help="randomized property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("list", help="list built-in scenarios")
    p.set_defaults(func=lambda a: (print("\n".join(builtin_scenario_names())), EXIT_OK)[1])

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OpenLoopUnstableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except PhaseCertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
