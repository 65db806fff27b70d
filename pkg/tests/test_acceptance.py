"""Acceptance suite: one PASS/FAIL line per criterion.

Run on its own with ``python3 tests/test_acceptance.py`` (or
``pytest tests/test_acceptance.py -s``) to see the verdict lines.
"""

import math
import sys
import time

import numpy as np
import pytest

from susytfd.algebra import all_passed, verify_full_algebra
from susytfd.bogoliubov import (
    TransformParams,
    canonical_transform,
    cross_commutator_deviation,
    reduce_hamiltonian,
    transform_modes,
)
from susytfd.cli import main
from susytfd.fock import FockSpaceConfig, guarded_norm
from susytfd.model import (
    ComplexRootError,
    ModelParams,
    build_interacting_model,
    check_susy_exactness,
    is_susy_spectrum,
    solve_frequencies,
    spectrum,
    supercharge_identity_deviation,
)
from susytfd.sweep import SweepResult
from susytfd.thermal import (
    goldstino_norm_closed_form,
    thermal_point,
    vacuum_energy_closed_form,
    witten_index,
    witten_index_closed_form,
)

LN2, LN3 = math.log(2), math.log(3)
OMEGAS = (0.5, 1.0, 2.0)
ALPHAS = (0.0, 0.25, 0.5, 1.0)
GRID = [(w, a) for w in OMEGAS for a in ALPHAS]
CFG = FockSpaceConfig(64)


@pytest.fixture
def verdict(capsys):
    def emit(n, title, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n} {title}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def fig_sweep(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig") / "fig.csv"
    start = time.perf_counter()
    code = main(["thermal-sweep", "--omega1", "1", "--alpha2", "0.5", "--tmin", "0.1", "--tmax", "2.0",
                 "--points", "20", "--out", str(out), "--plot"])
    elapsed = time.perf_counter() - start
    return code, SweepResult.from_csv(out.read_text()), elapsed


def test_criterion_1_vacuum_energy(verdict):
    start = time.perf_counter()
    params = ModelParams(1.0, 0.5)
    errs, n_used, values = [], [], {}
    for bw in (LN2, LN3, 1.0, 2.0, 4.0):
        r = thermal_point(params, bw / params.omega1).record()
        ref = vacuum_energy_closed_form(bw, 1.0)
        errs.append(abs(r["E0_over_omega1"] - ref) / ref)
        n_used.append(r["N_b_used"])
        values[bw] = r["E0_over_omega1"]
    elapsed = time.perf_counter() - start
    ok = (max(errs) < 1e-6 and abs(values[LN2] - 4 / 3) < 1e-6 and abs(values[LN3] - 0.75) < 1e-6
          and max(n_used) <= 128 and elapsed < 30)
    verdict(1, "thermal vacuum energy", ok,
            f"max rel err {max(errs):.1e}, E0(ln2)={values[LN2]:.10f}, E0(ln3)={values[LN3]:.10f}, "
            f"N_b<={max(n_used)}, {elapsed:.1f}s")


def test_criterion_2_figure_shape(verdict, fig_sweep):
    code, result, elapsed = fig_sweep
    E = result.column("E0_over_omega1")
    ref = result.column("E0_closed_form")
    rel = np.max(np.abs(E - ref) / ref)
    monotone = bool(np.all(np.diff(E) > 0)) and bool(np.all(np.diff(result.column("T_over_omega1")) > 0))
    ok = code == 0 and monotone and E[0] < 1e-3 and rel < 1e-6 and len(E) == 20
    verdict(2, "sweep curve shape", ok,
            f"exit {code}, monotone={monotone}, E0(T=0.1)={E[0]:.2e}, max rel err {rel:.1e}, {elapsed:.1f}s")


def test_criterion_3_susy_structure(verdict):
    start = time.perf_counter()
    worst = dict(identity=0.0, commutator=0.0, ground=0.0)
    degenerate = True
    for w, a in GRID:
        bundle = build_interacting_model(ModelParams(w, a), CFG)
        worst["identity"] = max(worst["identity"], supercharge_identity_deviation(bundle))
        comm, _ = check_susy_exactness(bundle)
        worst["commutator"] = max(worst["commutator"], comm.max_deviation)
        levels = spectrum(bundle, 9)
        worst["ground"] = max(worst["ground"], abs(levels[0][0]))
        degenerate &= is_susy_spectrum(levels, w)
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) < 1e-9 and degenerate and elapsed < 60
    verdict(3, "supersymmetry at T=0", ok,
            f"|H - w1{{G,G^dag}}| {worst['identity']:.1e}, |[H,G]| {worst['commutator']:.1e}, "
            f"|E0| {worst['ground']:.1e}, paired levels={degenerate}, {elapsed:.1f}s")


def test_criterion_4_reduction(verdict):
    worst, control = 0.0, math.inf
    for w, a in GRID:
        params = ModelParams(w, a)
        bundle = build_interacting_model(params, CFG)
        _, res = reduce_hamiltonian(bundle, canonical_transform(params, CFG))
        worst = max(worst, res)
        if a != 0:
            lam = 0.9 * a / w
            _, bad = reduce_hamiltonian(bundle, transform_modes(TransformParams(lam, lam), CFG))
            control = min(control, bad / w)
    ok = worst < 1e-9 and control > 1e-3
    verdict(4, "quasiparticle reduction", ok,
            f"max residual {worst:.1e}, smallest wrong-shift residual {control:.1e} w1")


def test_criterion_5_algebra_preservation(verdict):
    passed = True
    for w, a in GRID:
        modes = canonical_transform(ModelParams(w, a), CFG)
        passed &= all_passed(verify_full_algebra(modes.as_dict(), modes.space, tol=1e-10))
    beta2 = 0.5
    deltas = np.linspace(0.01, 0.2, 8)
    devs = [cross_commutator_deviation(transform_modes(TransformParams(beta2 - d, beta2), CFG)) for d in deltas]
    slope = np.polyfit(deltas, devs, 1)[0]
    modes = transform_modes(TransformParams(beta2, beta2), CFG)
    coefficient = guarded_norm(modes.b2.matrix, modes.space)  # |D(beta2) b| on the guarded levels
    rel = abs(slope / coefficient - 1)
    ok = passed and rel < 0.05
    verdict(5, "algebra preservation", ok,
            f"matched shifts pass={passed}, slope {slope:.6f} vs coefficient {coefficient:.6f} ({rel:.1e} rel)")


def test_criterion_6_witten_index(verdict):
    n_b = 128
    H = build_interacting_model(ModelParams(1.0, 0.5), FockSpaceConfig(n_b), certify=False).H
    n_f = np.kron(np.eye(n_b + 1), np.diag([0.0, 1.0]))
    errs = {}
    for bw in (0.5, 1.0, LN3, 2.0):
        errs[bw] = abs(witten_index(H, n_f, bw) - witten_index_closed_form(bw, 1.0))
    at_ln3 = witten_index(H, n_f, LN3)
    ok = max(errs.values()) < 1e-6 and abs(at_ln3 - 0.5) < 1e-6
    verdict(6, "Witten index", ok, f"max abs err {max(errs.values()):.1e}, Delta(ln3)={at_ln3:.10f}")


def test_criterion_7_goldstino(verdict):
    params = ModelParams(1.0, 0.5)
    errs, at_ln2 = [], None
    for bw in (LN2, 1.0, 2.0):
        r = thermal_point(params, bw).record()
        ref = goldstino_norm_closed_form(bw, 1.0)
        errs += [abs(r["goldstino_norm_numeric"] - ref), abs(r["goldstino_norm_dagger_numeric"] - ref)]
        if bw == LN2:
            at_ln2 = r["goldstino_norm_numeric"]
    cold = thermal_point(params, math.inf).record()
    cold_norms = (cold["goldstino_norm_numeric"], cold["goldstino_norm_dagger_numeric"])
    ok = max(errs) < 1e-6 and abs(at_ln2 - math.sqrt(2 / 3)) < 1e-6 and max(cold_norms) == 0.0
    verdict(7, "Goldstino norms", ok,
            f"max abs err {max(errs):.1e}, norm(ln2)={at_ln2:.6f}, T=0 norms {cold_norms}")


def test_criterion_8_oracle_equivalence(verdict, fig_sweep):
    _, result, _ = fig_sweep
    E = result.column("E0_over_omega1")
    gibbs = result.column("gibbs_oracle")
    rel = np.max(np.abs(E - gibbs) / np.abs(gibbs))
    paths = np.max(result.column("path_deviation"))
    ok = rel < 1e-6 and paths < 1e-8
    verdict(8, "TFD vs Gibbs and path agreement", ok,
            f"max TFD/Gibbs rel err {rel:.1e} over {len(E)} rows, max path deviation {paths:.1e}")


def test_criterion_9_frequencies(verdict):
    a = solve_frequencies(5.0, 2.0)
    b = solve_frequencies(4.0, 2.0)
    roots_ok = (abs(a.omega1_minus - 1) < 1e-12 and abs(a.omega1_plus - 4) < 1e-12 and not a.degenerate
                and b.degenerate and abs(b.omega1_minus - 2) < 1e-12 and abs(b.omega1_plus - 2) < 1e-12)
    trip = max(abs((w**2 + al**2) / w - w2)
               for sol, w2, al in ((a, 5.0, 2.0), (b, 4.0, 2.0))
               for w in (sol.omega1_minus, sol.omega1_plus))
    try:
        solve_frequencies(3.0, 2.0)
        error_ok = False
    except ComplexRootError:
        error_ok = True
    ok = roots_ok and trip < 1e-10 and error_ok
    verdict(9, "frequency solver", ok,
            f"(5,2)->({a.omega1_minus}, {a.omega1_plus}), (4,2)->({b.omega1_minus}, degenerate={b.degenerate}), "
            f"round trip {trip:.1e}, complex-root error={error_ok}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
