"""Command-line front end: ``susytfd {verify,spectrum,thermal-sweep,frequencies,goldstino}``.

Every subcommand exits 0 on success, 1 when a check fails (or a sweep row
is flagged) and 2 on bad input or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import canonical_ladders, report, verify_full_algebra
from .bogoliubov import canonical_transform, cross_commutator_deviation, reduce_hamiltonian
from .fock import FockSpaceConfig, InsufficientCutoffError
from .model import (
    ComplexRootError,
    ModelParams,
    build_detuned_model,
    build_interacting_model,
    check_susy_exactness,
    expand_levels,
    is_susy_spectrum,
    solve_frequencies,
    spectrum,
    supercharge_identity_deviation,
    susy_spectrum_deviation,
)
from .sweep import SweepConfig, run_sweep, write_outputs
from .thermal import DoubledModes

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2

VERIFY_NB = 64
DOUBLED_VERIFY_NB = 32  # the doubled space grows as N_b^2


def _nb(value: str):
    if value == "auto":
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {value!r}") from None
    if n < 2:
        raise argparse.ArgumentTypeError("N_b must be >= 2")
    return n


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror or exc}") from exc


def _fixed_nb(args, default: int) -> int:
    return default if args.nb in (None, "auto") else args.nb


def _bundle(args, cfg):
    params = ModelParams(args.omega1, args.alpha2)
    if args.omega2 is None:
        return build_interacting_model(params, cfg)
    return build_detuned_model(params, args.omega2, cfg)


def verify_report(args) -> dict:
    """Run the full invariant suite and return the JSON-ready report."""
    tol = args.tolerance
    cfg = FockSpaceConfig(_fixed_nb(args, VERIFY_NB))
    params = ModelParams(args.omega1, args.alpha2)
    bundle = _bundle(args, cfg)
    modes = canonical_transform(params, cfg)
    checks = []
    algebra_tol = min(tol, 1e-10)
    checks += verify_full_algebra(canonical_ladders(cfg), tol=algebra_tol)
    checks += verify_full_algebra(modes.as_dict(), modes.space, tol=algebra_tol)
    dcfg = FockSpaceConfig(min(cfg.n_b, DOUBLED_VERIFY_NB), doubled=True)
    dmodes = DoubledModes.from_transformed(canonical_transform(params, dcfg.single()))
    checks += verify_full_algebra(dmodes.mode_operators(), dmodes.space, tol=algebra_tol)
    comm, ground = check_susy_exactness(bundle, tol)
    checks += [comm, ground]
    checks.append(report("H = w1 {G_S, G_S^dag}", supercharge_identity_deviation(bundle), bundle.space, tol))
    _, residual = reduce_hamiltonian(bundle, modes)
    checks.append(report("H = w1 (a2^dag a2 + b2^dag b2)", residual, modes.space, tol))
    checks.append(report("[a2, b2] = 0", cross_commutator_deviation(modes), modes.space, tol))
    checks.append(report("unique zero ground level, paired excitations",
                         susy_spectrum_deviation(bundle), bundle.space, tol))
    notes = []
    if params.alpha2 == 0:
        notes.append("alpha2 = 0: the Bogoliubov transformation is the identity")
    if bundle.detuned:
        notes.append(f"detuned omega2 = {bundle.omega2} (supersymmetric value {params.omega2})")
    return {
        "engine_version": __version__,
        "parameters": {"omega1": params.omega1, "alpha2": params.alpha2, "omega2": bundle.omega2,
                       "N_b": cfg.n_b, "guard_band": bundle.space.guard_band, "tolerance": tol},
        "checks": [c.to_dict() for c in checks],
        "passed": all(c.passed for c in checks),
        "notes": notes,
    }


def cmd_verify(args) -> int:
    rep = verify_report(args)
    _emit(json.dumps(rep, indent=2) + "\n", args.out)
    return EXIT_OK if rep["passed"] else EXIT_FAILED


def spectrum_csv(args) -> tuple[str, bool]:
    cfg = FockSpaceConfig(_fixed_nb(args, VERIFY_NB))
    bundle = _bundle(args, cfg)
    levels = spectrum(bundle, args.k)
    buf = io.StringIO()
    buf.write(f"# lowest {args.k} eigenvalues of H (omega1={args.omega1}, alpha2={args.alpha2}, "
              f"omega2={bundle.omega2}, N_b={cfg.n_b}); multiplicity counts the degenerate cluster\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("index", "eigenvalue", "multiplicity"))
    for i, (e, m) in enumerate(expand_levels(levels, args.k)):
        w.writerow((i, f"{e:.17g}", m))
    return buf.getvalue(), is_susy_spectrum(levels, args.omega1, args.tolerance)


def cmd_spectrum(args) -> int:
    text, _ = spectrum_csv(args)
    _emit(text, args.out)
    return EXIT_OK


def _sweep_config(args, out) -> SweepConfig:
    return SweepConfig(
        omega1=args.omega1,
        alpha2=args.alpha2,
        T_min=args.tmin,
        T_max=args.tmax,
        points=args.points,
        N_b="auto" if args.nb is None else args.nb,
        output_path=out,
        format=args.format,
        emit_plot=getattr(args, "plot", False),
    )


def _mismatch(rows, pairs, tol) -> bool:
    for r in rows:
        for num, ref in pairs:
            scale = abs(r[ref]) if r[ref] else 1.0
            if abs(r[num] - r[ref]) > tol * scale:
                return True
    return False


def cmd_thermal_sweep(args) -> int:
    if args.out in (None, "-") and args.plot:
        raise ValueError("--plot needs --out")
    config = _sweep_config(args, None if args.out == "-" else args.out)
    result = run_sweep(config)
    if config.output_path is None:
        _emit(result.to_csv() if config.format == "csv" else result.to_json(), None)
    else:
        write_outputs(result, config)
    pairs = (("E0_over_omega1", "E0_closed_form"), ("E0_over_omega1", "gibbs_oracle"),
             ("witten_numeric", "witten_closed_form"))
    failed = result.flagged or _mismatch(result.rows, pairs, args.tolerance)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_frequencies(args) -> int:
    if args.omega2 is None:
        raise ValueError("frequencies needs --omega2")
    try:
        doc = solve_frequencies(args.omega2, args.alpha2).to_dict()
        code = EXIT_OK
    except ComplexRootError as exc:
        doc = {"error": "complex_roots", "omega2": args.omega2, "alpha2": args.alpha2, "message": str(exc)}
        code = EXIT_FAILED
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return code


GOLDSTINO_COLUMNS = ("beta", "T_over_omega1", "goldstino_norm_numeric", "goldstino_norm_dagger_numeric",
                     "goldstino_norm_closed_form", "N_b_used", "flagged")


def cmd_goldstino(args) -> int:
    config = _sweep_config(args, None)
    result = run_sweep(config)
    rows = [{c: r[c] for c in GOLDSTINO_COLUMNS} for r in result.rows]
    if args.format == "json":
        text = json.dumps({"provenance": result.provenance, "rows": rows}, indent=2) + "\n"
    else:
        text = result.to_csv(GOLDSTINO_COLUMNS)
    _emit(text, args.out)
    pairs = (("goldstino_norm_numeric", "goldstino_norm_closed_form"),
             ("goldstino_norm_dagger_numeric", "goldstino_norm_closed_form"))
    failed = result.flagged or _mismatch(result.rows, pairs, args.tolerance)
    return EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="susytfd", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega1", type=float, default=1.0, help="bosonic frequency (default 1)")
    common.add_argument("--alpha2", type=float, default=0.5, help="coupling (default 0.5)")
    common.add_argument("--omega2", type=float, default=None,
                        help="fermionic frequency; overrides the supersymmetric value (detuned model)")
    common.add_argument("--nb", type=_nb, default=None, help="boson cutoff N_b, integer or 'auto'")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--tmin", type=float, default=0.1, help="lowest T/omega1 (default 0.1)")
    grid.add_argument("--tmax", type=float, default=2.0, help="highest T/omega1 (default 2.0)")
    grid.add_argument("--points", type=int, default=20, help="grid size (default 20)")
    grid.add_argument("--format", choices=("csv", "json"), default="csv")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", parents=[common], help="run the operator-identity suite, JSON report")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("spectrum", parents=[common], help="lowest eigenvalues as CSV")
    p.add_argument("-k", type=int, default=7, help="number of eigenvalues (default 7)")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(func=cmd_spectrum)
    p = sub.add_parser("thermal-sweep", parents=[common, grid], help="E0, Witten index and Goldstino norm vs T")
    p.add_argument("--plot", action="store_true", help="also write <out>.svg and <out>.dat")
    p.add_argument("--tolerance", type=float, default=1e-6, help="relative agreement with closed forms")
    p.set_defaults(func=cmd_thermal_sweep)
    p = sub.add_parser("frequencies", parents=[common], help="bosonic frequencies for given omega2, alpha2")
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.set_defaults(func=cmd_frequencies)
    p = sub.add_parser("goldstino", parents=[common, grid], help="Goldstino norms vs T")
    p.add_argument("--tolerance", type=float, default=1e-6, help="relative agreement with the closed form")
    p.set_defaults(func=cmd_goldstino)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, InsufficientCutoffError, OSError, np.linalg.LinAlgError) as exc:
        print(f"susytfd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
