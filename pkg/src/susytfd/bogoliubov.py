"""Structure-preserving mode transformation and the reduction it enables.

    a2 = a + beta1 b^dag b            a2^dag = a^dag + beta1 b^dag b
    b2 = exp[beta2 (a^dag - a)] b     b2^dag = b^dag exp[beta2 (a - a^dag)]

For ``beta1 = beta2`` the new modes obey the same (anti)commutation algebra;
otherwise ``[a2, b2] = (beta2 - beta1) exp[beta2 (a^dag - a)] b``. With
``beta1 = beta2 = a2/w1`` the interacting oscillator becomes
``w1 (a2^dag a2 + b2^dag b2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    FockSpaceConfig,
    Mode,
    ModeOperator,
    build_boson_ladder,
    build_fermion_ladder,
    displacement_guard,
    displacement_matrix,
    displacement_operator,
    guarded_norm,
)
from .model import HamiltonianBundle, ModelParams


@dataclass(frozen=True)
class TransformParams:
    beta1: float
    beta2: float

    def __post_init__(self):
        if not (np.isfinite(self.beta1) and np.isfinite(self.beta2)):
            raise ValueError("transformation parameters must be finite")

    @classmethod
    def canonical(cls, params: ModelParams) -> TransformParams:
        lam = params.alpha2 / params.omega1
        return cls(lam, lam)


@dataclass(frozen=True, eq=False)
class TransformedModes:
    a2: ModeOperator
    a2_dagger: ModeOperator
    b2: ModeOperator
    b2_dagger: ModeOperator
    params: TransformParams
    space: FockSpaceConfig

    def as_dict(self) -> dict[str, ModeOperator]:
        """Ladder-set mapping accepted by ``verify_full_algebra``."""
        return {"a": self.a2, "a_dag": self.a2_dagger, "b": self.b2, "b_dag": self.b2_dagger}


def transform_modes(params: TransformParams, cfg: FockSpaceConfig, certify: bool = True) -> TransformedModes:
    """Build ``a2, a2^dag, b2, b2^dag`` as matrices on the single space.

    With ``certify`` the guard band is widened to cover the ``beta2``
    displacement (``InsufficientCutoffError`` if the cutoff cannot).
    """
    cfg = cfg.single()
    if certify:
        cfg = displacement_guard(cfg, params.beta2)
        D = displacement_operator(cfg, params.beta2).dense()
    else:
        D = np.kron(displacement_matrix(cfg.n_b, params.beta2), np.eye(2))
    a, a_dag = (op.dense() for op in build_boson_ladder(cfg))
    b, b_dag = (op.dense() for op in build_fermion_ladder(cfg))
    n_f = b_dag @ b
    Dinv = D.conj().T  # exp[beta2 (a - a^dag)]
    a2 = a + params.beta1 * n_f
    a2_dag = a_dag + params.beta1 * n_f
    b2 = D @ b
    b2_dag = b_dag @ Dinv
    return TransformedModes(
        ModeOperator(a2, Mode.BOSON, False, cfg),
        ModeOperator(a2_dag, Mode.BOSON, True, cfg),
        ModeOperator(b2, Mode.FERMION, False, cfg),
        ModeOperator(b2_dag, Mode.FERMION, True, cfg),
        params,
        cfg,
    )


def canonical_transform(model_params: ModelParams, cfg: FockSpaceConfig, certify: bool = True) -> TransformedModes:
    """``transform_modes`` with ``beta1 = beta2 = a2/w1``."""
    return transform_modes(TransformParams.canonical(model_params), cfg, certify)


def _wider(c1: FockSpaceConfig, c2: FockSpaceConfig) -> FockSpaceConfig:
    if c1.n_b != c2.n_b:
        raise ValueError(f"bundle and modes live on different cutoffs ({c1.n_b} vs {c2.n_b})")
    return c1 if c1.guard_band >= c2.guard_band else c2


def reduce_hamiltonian(bundle: HamiltonianBundle, modes: TransformedModes) -> tuple[np.ndarray, float]:
    """``H_reduced = w1 (a2^dag a2 + b2^dag b2)`` and its guarded distance to ``bundle.H``."""
    cfg = _wider(bundle.space, modes.space)
    w1 = bundle.params.omega1
    H_red = w1 * (modes.a2_dagger.matrix @ modes.a2.matrix + modes.b2_dagger.matrix @ modes.b2.matrix)
    return H_red, guarded_norm(bundle.H - H_red, cfg)


def transformed_supercharges(modes: TransformedModes) -> tuple[np.ndarray, np.ndarray]:
    """``G_2S = a2^dag b2`` and its conjugate transpose."""
    G = modes.a2_dagger.matrix @ modes.b2.matrix
    return G, G.conj().T


def cross_commutator_deviation(modes: TransformedModes) -> float:
    """Guarded norm of ``[a2, b2]``; zero exactly when ``beta1 == beta2``."""
    a2, b2 = modes.a2.matrix, modes.b2.matrix
    return guarded_norm(a2 @ b2 - b2 @ a2, modes.space)
