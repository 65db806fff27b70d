"""Wedge/bullet algebra checks on ladder-operator matrices.

``A ^ B`` is read as ``(1/2)[A, B]`` and ``A . B`` as ``(1/2){A, B}``. Under
this reading the four relations

    a^dag ^ a = -1/2        a^dag . a = n_b + 1/2
    b^dag . b = 1/2         b^dag ^ b = n_f - 1/2

are exact operator identities, with ``n_b = a^dag a`` and ``n_f = b^dag b``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .fock import FockSpaceConfig, ModeOperator, build_boson_ladder, build_fermion_ladder, guarded_norm

DEFAULT_TOLERANCE = 1e-10

REQUIRED = ("a", "a_dag", "b", "b_dag")
TILDE = ("a_tilde", "a_tilde_dag", "b_tilde", "b_tilde_dag")


@dataclass(frozen=True)
class AlgebraReport:
    relation_name: str
    max_deviation: float
    passed: bool
    subspace_dim: int
    tolerance: float = DEFAULT_TOLERANCE

    def to_dict(self) -> dict:
        return asdict(self)


def report(name: str, deviation: float, cfg: FockSpaceConfig, tol: float) -> AlgebraReport:
    deviation = float(deviation)
    return AlgebraReport(name, deviation, bool(deviation < tol), len(cfg.guarded_indices()), tol)


def _identity(cfg: FockSpaceConfig):
    return sp.identity(cfg.dim, format="csr") if cfg.use_sparse else np.eye(cfg.dim)


def _expected_matrix(expected, cfg: FockSpaceConfig):
    if np.isscalar(expected):
        return expected * _identity(cfg)
    return expected


def _same_space(opA: ModeOperator, opB: ModeOperator) -> FockSpaceConfig:
    if opA.matrix.shape != opB.matrix.shape:
        raise ValueError(f"dimension mismatch {opA.matrix.shape} vs {opB.matrix.shape}")
    # report on the stricter of the two guard bands
    return opA.space if opA.space.guard_band >= opB.space.guard_band else opB.space


def check_wedge(opA: ModeOperator, opB: ModeOperator, expected, tol: float = DEFAULT_TOLERANCE,
                name: str = "wedge") -> AlgebraReport:
    cfg = _same_space(opA, opB)
    A, B = opA.matrix, opB.matrix
    diff = 0.5 * (A @ B - B @ A) - _expected_matrix(expected, cfg)
    return report(name, guarded_norm(diff, cfg), cfg, tol)


def check_bullet(opA: ModeOperator, opB: ModeOperator, expected, tol: float = DEFAULT_TOLERANCE,
                 name: str = "bullet") -> AlgebraReport:
    cfg = _same_space(opA, opB)
    A, B = opA.matrix, opB.matrix
    diff = 0.5 * (A @ B + B @ A) - _expected_matrix(expected, cfg)
    return report(name, guarded_norm(diff, cfg), cfg, tol)


def canonical_ladders(cfg: FockSpaceConfig) -> dict[str, ModeOperator]:
    """The free ladder set (tilde copies included on a doubled space)."""
    a, a_dag = build_boson_ladder(cfg)
    b, b_dag = build_fermion_ladder(cfg)
    ops = {"a": a, "a_dag": a_dag, "b": b, "b_dag": b_dag}
    if cfg.doubled:
        at, at_dag = build_boson_ladder(cfg, tilde=True)
        bt, bt_dag = build_fermion_ladder(cfg, tilde=True)
        ops.update(a_tilde=at, a_tilde_dag=at_dag, b_tilde=bt, b_tilde_dag=bt_dag)
    return ops


def _mode_relations(ops, a: str, a_dag: str, b: str, b_dag: str, label: str, tol: float):
    A, Ad, B, Bd = ops[a], ops[a_dag], ops[b], ops[b_dag]
    cfg = _same_space(A, B)
    I = _identity(cfg)
    n_b = Ad.matrix @ A.matrix
    n_f = Bd.matrix @ B.matrix
    return [
        check_wedge(Ad, A, -0.5 * I, tol, f"{label}a^dag wedge a = -1/2"),
        check_bullet(Ad, A, n_b + 0.5 * I, tol, f"{label}a^dag bullet a = n_b + 1/2"),
        check_bullet(Bd, B, 0.5 * I, tol, f"{label}b^dag bullet b = 1/2"),
        check_wedge(Bd, B, n_f - 0.5 * I, tol, f"{label}b^dag wedge b = n_f - 1/2"),
        check_bullet(B, B, 0.0, tol, f"{label}b bullet b = 0"),
        check_wedge(A, B, 0.0, tol, f"{label}[a, b] = 0"),
        check_wedge(A, Bd, 0.0, tol, f"{label}[a, b^dag] = 0"),
        check_wedge(Ad, B, 0.0, tol, f"{label}[a^dag, b] = 0"),
        check_wedge(Ad, Bd, 0.0, tol, f"{label}[a^dag, b^dag] = 0"),
    ]


def verify_full_algebra(ops: Mapping[str, ModeOperator], cfg: FockSpaceConfig | None = None,
                        tol: float = DEFAULT_TOLERANCE) -> list[AlgebraReport]:
    """Run every relation on a ladder set and return the reports in a fixed order.

    ``ops`` maps ``a, a_dag, b, b_dag`` (and, on a doubled space, the
    ``*_tilde*`` keys) to operators. ``cfg`` defaults to the space of ``a``.
    """
    missing = [k for k in REQUIRED if k not in ops]
    cfg = cfg if cfg is not None else (ops["a"].space if "a" in ops else None)
    if cfg is not None and cfg.doubled:
        missing += [k for k in TILDE if k not in ops]
    if missing:
        raise ValueError(f"missing operators: {', '.join(missing)}")

    reports = _mode_relations(ops, *REQUIRED, label="", tol=tol)
    if cfg.doubled:
        reports += _mode_relations(ops, *TILDE, label="tilde ", tol=tol)
        a, ad, b, bd = (ops[k] for k in REQUIRED)
        at, atd, bt, btd = (ops[k] for k in TILDE)
        reports += [
            check_wedge(a, at, 0.0, tol, "[a, a~] = 0"),
            check_wedge(a, atd, 0.0, tol, "[a, a~^dag] = 0"),
            check_wedge(a, bt, 0.0, tol, "[a, b~] = 0"),
            check_wedge(at, b, 0.0, tol, "[a~, b] = 0"),
        ]
        if cfg.tilde_anticommute:
            reports += [
                check_bullet(b, bt, 0.0, tol, "{b, b~} = 0"),
                check_bullet(b, btd, 0.0, tol, "{b, b~^dag} = 0"),
            ]
        else:
            reports += [
                check_wedge(b, bt, 0.0, tol, "[b, b~] = 0"),
                check_wedge(b, btd, 0.0, tol, "[b, b~^dag] = 0"),
            ]
    return reports


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)
