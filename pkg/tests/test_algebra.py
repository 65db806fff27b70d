import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susytfd.algebra import (
    AlgebraReport,
    all_passed,
    canonical_ladders,
    check_bullet,
    check_wedge,
    verify_full_algebra,
)
from susytfd.bogoliubov import TransformParams, transform_modes
from susytfd.fock import FockSpaceConfig, build_boson_ladder, build_fermion_ladder


@pytest.fixture(scope="module")
def ladders():
    cfg = FockSpaceConfig(12)
    a, ad = build_boson_ladder(cfg)
    b, bd = build_fermion_ladder(cfg)
    return cfg, a, ad, b, bd


def test_wedge_relations(ladders):
    cfg, a, ad, b, bd = ladders
    I = np.eye(cfg.dim)
    assert check_wedge(ad, a, -0.5 * I).passed
    assert check_wedge(ad, a, -0.5).passed
    assert check_wedge(bd, b, bd.matrix @ b.matrix - 0.5 * I).passed
    assert check_wedge(a, a, 0.0).passed


def test_bullet_relations(ladders):
    cfg, a, ad, b, bd = ladders
    I = np.eye(cfg.dim)
    assert check_bullet(bd, b, 0.5 * I).passed
    assert check_bullet(ad, a, ad.matrix @ a.matrix + 0.5 * I).passed
    assert check_bullet(b, b, 0.0).passed


def test_wrong_expectation_fails(ladders):
    cfg, a, ad, b, bd = ladders
    rep = check_wedge(ad, a, 0.5, name="wrong sign")
    assert not rep.passed
    assert rep.max_deviation == pytest.approx(1.0)
    assert rep.relation_name == "wrong sign"


def test_report_fields(ladders):
    cfg, a, ad, *_ = ladders
    rep = check_wedge(ad, a, -0.5, tol=1e-12, name="x")
    assert isinstance(rep, AlgebraReport)
    assert rep.subspace_dim == len(cfg.guarded_indices())
    assert rep.to_dict() == {"relation_name": "x", "max_deviation": rep.max_deviation, "passed": True,
                             "subspace_dim": rep.subspace_dim, "tolerance": 1e-12}


def test_truncation_artifact_hidden_by_guard():
    cfg = FockSpaceConfig(8, guard_band=1)
    a, ad = build_boson_ladder(cfg)
    assert check_wedge(ad, a, -0.5).passed
    # with no guard band the top level shows the truncated commutator
    bare = FockSpaceConfig(8, guard_band=0)
    a0, ad0 = build_boson_ladder(bare)
    assert not check_wedge(ad0, a0, -0.5).passed


def test_dimension_mismatch_raises():
    a, _ = build_boson_ladder(FockSpaceConfig(4))
    b, _ = build_fermion_ladder(FockSpaceConfig(5))
    with pytest.raises(ValueError):
        check_wedge(a, b, 0.0)


@pytest.mark.parametrize("doubled", [False, True])
@pytest.mark.parametrize("anticommute", [True, False])
def test_free_ladders_pass(doubled, anticommute):
    cfg = FockSpaceConfig(10, doubled=doubled, tilde_anticommute=anticommute)
    reports = verify_full_algebra(canonical_ladders(cfg), tol=1e-10)
    assert all_passed(reports)
    names = [r.relation_name for r in reports]
    assert len(names) == len(set(names))
    if doubled:
        assert ("{b, b~} = 0" in names) == anticommute


def test_missing_operators():
    cfg = FockSpaceConfig(4, doubled=True)
    ops = canonical_ladders(cfg)
    del ops["b_tilde"]
    with pytest.raises(ValueError, match="b_tilde"):
        verify_full_algebra(ops)
    with pytest.raises(ValueError):
        verify_full_algebra({})


def test_transformed_modes_pass_when_shifts_match():
    modes = transform_modes(TransformParams(0.5, 0.5), FockSpaceConfig(64))
    assert all_passed(verify_full_algebra(modes.as_dict(), modes.space, tol=1e-10))


def test_mismatched_shifts_fail_only_cross_relations():
    modes = transform_modes(TransformParams(0.5, 0.7), FockSpaceConfig(64))
    failed = [r.relation_name for r in verify_full_algebra(modes.as_dict(), modes.space) if not r.passed]
    assert failed and all(name.startswith("[a") for name in failed)
    assert "[a, b] = 0" in failed


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.6, 0.6))
def test_matched_shift_preserves_algebra(beta):
    modes = transform_modes(TransformParams(beta, beta), FockSpaceConfig(48))
    assert all_passed(verify_full_algebra(modes.as_dict(), modes.space, tol=1e-10))
