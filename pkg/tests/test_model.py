import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susytfd.fock import FockSpaceConfig, InsufficientCutoffError
from susytfd.model import (
    ComplexRootError,
    ModelParams,
    build_detuned_model,
    build_free_susy_oscillator,
    build_interacting_model,
    check_susy_exactness,
    cluster_levels,
    expand_levels,
    is_susy_spectrum,
    solve_frequencies,
    spectrum,
    supercharge_identity_deviation,
    susy_spectrum_deviation,
)

CFG = FockSpaceConfig(64)


def test_model_params():
    p = ModelParams(1.0, 0.5)
    assert p.omega2 == 1.25 and p.alpha1 == -0.5 and p.displacement == 0.5
    assert ModelParams(1.0, 1.0).omega2 == 2.0
    assert ModelParams(3.0).omega2 == 3.0
    with pytest.raises(ValueError):
        ModelParams(0.0, 0.5)
    with pytest.raises(ValueError):
        ModelParams(1.0, float("nan"))


def test_free_oscillator_spectrum_small_cutoff():
    bundle = build_free_susy_oscillator(1.0, FockSpaceConfig(6))
    levels = spectrum(bundle, 5)
    assert [(round(e, 12), m) for e, m in levels] == [(0.0, 1), (1.0, 2), (2.0, 2)]
    comm, ground = check_susy_exactness(bundle)
    assert comm.passed and ground.passed


def test_free_oscillator_levels_omega2():
    bundle = build_free_susy_oscillator(2.0, FockSpaceConfig(10))
    rows = expand_levels(spectrum(bundle, 5), 5)
    np.testing.assert_allclose([e for e, _ in rows], [0, 2, 2, 4, 4], atol=1e-12)


def test_interacting_reduces_to_free_bit_exactly():
    free = build_free_susy_oscillator(1.5, CFG)
    inter = build_interacting_model(ModelParams(1.5, 0.0), CFG)
    np.testing.assert_array_equal(free.H, inter.H)
    np.testing.assert_array_equal(free.G_S, inter.G_S)


def test_interacting_spectrum():
    bundle = build_interacting_model(ModelParams(1.0, 0.5), CFG)
    levels = spectrum(bundle, 7)
    assert [m for _, m in levels] == [1, 2, 2, 2]
    np.testing.assert_allclose([e for e, _ in levels], [0, 1, 2, 3], atol=1e-9)
    assert is_susy_spectrum(levels, 1.0)
    assert susy_spectrum_deviation(bundle) < 1e-9


def test_h0_alone_breaks_degeneracy():
    bundle = build_interacting_model(ModelParams(1.0, 0.5), CFG)
    rows = expand_levels(spectrum(bundle, 5, H=bundle.H0), 5)
    np.testing.assert_allclose([e for e, _ in rows], [0, 1, 1.25, 2, 2.25], atol=1e-12)
    assert not is_susy_spectrum(spectrum(bundle, 5, H=bundle.H0), 1.0)


@pytest.mark.parametrize("omega1", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("alpha2", [0.0, 0.25, 0.5, 1.0])
def test_susy_identities(omega1, alpha2):
    bundle = build_interacting_model(ModelParams(omega1, alpha2), CFG)
    assert supercharge_identity_deviation(bundle) < 1e-9
    comm, ground = check_susy_exactness(bundle)
    assert comm.passed and ground.passed
    assert not bundle.detuned


def test_detuned_model_breaks_susy():
    bundle = build_detuned_model(ModelParams(1.0, 0.5), 1.3, CFG)
    assert bundle.detuned
    comm, _ = check_susy_exactness(bundle)
    assert not comm.passed and comm.max_deviation > 0.01
    with pytest.raises(ValueError):
        build_detuned_model(ModelParams(1.0, 0.5), -1.0, CFG)


def test_certify_widens_guard_or_raises():
    bundle = build_interacting_model(ModelParams(1.0, 0.5), CFG)
    assert bundle.space.guard_band > CFG.guard_band
    with pytest.raises(InsufficientCutoffError):
        build_interacting_model(ModelParams(1.0, 1.0), FockSpaceConfig(16))
    raw = build_interacting_model(ModelParams(1.0, 1.0), FockSpaceConfig(16), certify=False)
    assert raw.space.guard_band == FockSpaceConfig(16).guard_band


def test_summary_is_serialisable():
    import json

    s = build_interacting_model(ModelParams(1.0, 0.5), CFG).summary(3)
    assert json.loads(json.dumps(s))["omega2"] == 1.25
    assert s["levels"][0][1] == 1


@pytest.mark.parametrize("omega2, alpha2, lo, hi, degenerate", [
    (5.0, 2.0, 1.0, 4.0, False),
    (4.0, 2.0, 2.0, 2.0, True),
    (2.5, 1.0, 0.5, 2.0, False),
])
def test_solve_frequencies(omega2, alpha2, lo, hi, degenerate):
    sol = solve_frequencies(omega2, alpha2)
    assert sol.omega1_minus == pytest.approx(lo, abs=1e-12)
    assert sol.omega1_plus == pytest.approx(hi, abs=1e-12)
    assert sol.degenerate is degenerate
    assert sol.xi == omega2 - 2 * alpha2
    for w in (sol.omega1_minus, sol.omega1_plus):
        assert abs((w**2 + alpha2**2) / w - omega2) < 1e-10


def test_complex_roots():
    with pytest.raises(ComplexRootError):
        solve_frequencies(3.0, 2.0)
    with pytest.raises(ValueError):
        solve_frequencies(-1.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e3), st.floats(-10, 10))
def test_frequency_round_trip(omega1, alpha2):
    omega2 = ModelParams(omega1, alpha2).omega2
    sol = solve_frequencies(omega2, alpha2)
    assert min(abs(sol.omega1_minus - omega1), abs(sol.omega1_plus - omega1)) <= 1e-6 * max(omega1, 1)
    for w in (sol.omega1_minus, sol.omega1_plus):
        if w >= sys.float_info.min:  # subnormal roots keep too few bits to round-trip
            assert abs((w**2 + alpha2**2) / w - omega2) <= 1e-10 * omega2


def test_spectrum_bounds():
    bundle = build_free_susy_oscillator(1.0, FockSpaceConfig(6))
    with pytest.raises(ValueError):
        spectrum(bundle, 0)
    with pytest.raises(ValueError):
        spectrum(bundle, 1000)
    assert spectrum(bundle, 1) == [(pytest.approx(0.0, abs=1e-12), 1)]


def test_cluster_levels():
    assert cluster_levels(np.array([0.0, 1.0, 1.0 + 1e-10, 2.0]), 1e-8) == [
        (0.0, 1), (pytest.approx(1.0), 2), (2.0, 1)]
