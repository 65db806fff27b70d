"""Free and interacting SUSY oscillators on the truncated single space.

The interacting model is ``H = F a + G b`` with ``F = w1 a^dag`` and
``G = w2 b^dag + a2 a^dag b^dag + a2 a b^dag``, i.e.

    H = w1 a^dag a + w2 b^dag b + a2 (a^dag + a) b^dag b,

which is supersymmetric when ``w2 = (w1^2 + a2^2) / w1``. Its supercharge is
``G_S = a^dag b exp[(a2/w1)(a^dag - a)]`` and ``H = w1 {G_S, G_S^dag}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraReport, report
from .fock import (
    FockSpaceConfig,
    build_boson_ladder,
    build_fermion_ladder,
    displacement_guard,
    displacement_matrix,
    displacement_operator,
    guarded_norm,
)

SUSY_TOLERANCE = 1e-9
DEGENERACY_RTOL = 1e-8


class ComplexRootError(ValueError):
    """No real bosonic frequency makes the oscillator supersymmetric."""


@dataclass(frozen=True)
class ModelParams:
    omega1: float
    alpha2: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.omega1) and self.omega1 > 0):
            raise ValueError(f"omega1 must be positive, got {self.omega1}")
        if not np.isfinite(self.alpha2):
            raise ValueError("alpha2 must be finite")

    @property
    def omega2(self) -> float:
        # same as (w1^2 + a2^2)/w1, but exactly w1 when a2 == 0
        return self.omega1 + self.alpha2**2 / self.omega1

    @property
    def alpha1(self) -> float:
        return -self.alpha2

    @property
    def displacement(self) -> float:
        return self.alpha2 / self.omega1


@dataclass(frozen=True)
class FrequencySolution:
    omega1_minus: float
    omega1_plus: float
    xi: float
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "omega1_minus": self.omega1_minus,
            "omega1_plus": self.omega1_plus,
            "xi": self.xi,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True, eq=False)
class HamiltonianBundle:
    H: np.ndarray
    H0: np.ndarray
    Hint: np.ndarray
    G_S: np.ndarray
    G_S_dagger: np.ndarray
    params: ModelParams
    space: FockSpaceConfig
    omega2: float

    @property
    def detuned(self) -> bool:
        return self.omega2 != self.params.omega2

    def summary(self, k: int = 7) -> dict:
        levels = spectrum(self, k)
        return {
            "omega1": self.params.omega1,
            "alpha2": self.params.alpha2,
            "omega2": self.omega2,
            "N_b": self.space.n_b,
            "guard_band": self.space.guard_band,
            "ground_energy": levels[0][0],
            "levels": [[e, m] for e, m in levels],
        }


def _ladders(cfg: FockSpaceConfig):
    a, a_dag = build_boson_ladder(cfg)
    b, b_dag = build_fermion_ladder(cfg)
    return a.dense(), a_dag.dense(), b.dense(), b_dag.dense()


def build_free_susy_oscillator(omega1: float, cfg: FockSpaceConfig) -> HamiltonianBundle:
    """``H = w1 (a^dag a + b^dag b)`` with supercharge ``a^dag b``."""
    params = ModelParams(omega1, 0.0)
    cfg = cfg.single()
    a, a_dag, b, b_dag = _ladders(cfg)
    H0 = omega1 * (a_dag @ a) + omega1 * (b_dag @ b)
    Hint = np.zeros_like(H0)
    H = H0 + Hint
    G = a_dag @ b
    return HamiltonianBundle(H, H0, Hint, G, G.conj().T, params, cfg, omega1)


def _interacting(params: ModelParams, omega2: float, cfg: FockSpaceConfig, certify: bool) -> HamiltonianBundle:
    lam = params.displacement
    cfg = cfg.single()
    if certify:
        cfg = displacement_guard(cfg, lam)
        D = displacement_operator(cfg, lam).dense()
    else:
        D = np.kron(displacement_matrix(cfg.n_b, lam), np.eye(2))
    a, a_dag, b, b_dag = _ladders(cfg)
    n_b = a_dag @ a
    n_f = b_dag @ b
    H0 = params.omega1 * n_b + omega2 * n_f
    Hint = params.alpha2 * (a_dag @ n_f) + params.alpha2 * (a @ n_f)
    H = H0 + Hint
    G = a_dag @ b @ D
    return HamiltonianBundle(H, H0, Hint, G, G.conj().T, params, cfg, omega2)


def build_interacting_model(params: ModelParams, cfg: FockSpaceConfig, certify: bool = True) -> HamiltonianBundle:
    """The SUSY-exact interacting oscillator with ``w2`` derived from ``(w1, a2)``.

    With ``certify`` the returned bundle's guard band is widened to cover the
    supercharge's displacement factor, and ``InsufficientCutoffError`` is
    raised if nothing is left to certify.
    """
    return _interacting(params, params.omega2, cfg, certify)


def build_detuned_model(params: ModelParams, omega2: float, cfg: FockSpaceConfig,
                        certify: bool = True) -> HamiltonianBundle:
    """Same operator content with a free ``w2``; used as a negative control."""
    if not omega2 > 0:
        raise ValueError("omega2 must be positive")
    return _interacting(params, omega2, cfg, certify)


def ground_space(bundle: HamiltonianBundle, tol: float = SUSY_TOLERANCE):
    """Lowest eigenvalue and an orthonormal basis of its (numerically) degenerate eigenspace."""
    w, V = np.linalg.eigh(bundle.H)
    mask = w <= w[0] + max(tol, DEGENERACY_RTOL * bundle.params.omega1)
    return float(w[0]), V[:, mask]


def check_susy_exactness(bundle: HamiltonianBundle, tol: float = SUSY_TOLERANCE) -> tuple[AlgebraReport, AlgebraReport]:
    """Certify ``[H, G_S] = 0`` and ``G_S|0_H> = G_S^dag|0_H> = 0``.

    The second report's deviation is the largest supercharge norm over the
    whole lowest eigenspace.
    """
    cfg = bundle.space
    comm = bundle.H @ bundle.G_S - bundle.G_S @ bundle.H
    comm_report = report("[H, G_S] = 0", guarded_norm(comm, cfg), cfg, tol)
    _, V = ground_space(bundle, tol)
    dev = max(
        np.linalg.norm(bundle.G_S @ V, axis=0).max(),
        np.linalg.norm(bundle.G_S_dagger @ V, axis=0).max(),
    )
    ground_report = report("G_S|0> = G_S^dag|0> = 0", dev, cfg, tol)
    return comm_report, ground_report


def supercharge_identity_deviation(bundle: HamiltonianBundle) -> float:
    """Guarded norm of ``H - w1 {G_S, G_S^dag}``."""
    G, Gd = bundle.G_S, bundle.G_S_dagger
    return guarded_norm(bundle.H - bundle.params.omega1 * (G @ Gd + Gd @ G), bundle.space)


def solve_frequencies(omega2: float, alpha2: float) -> FrequencySolution:
    """Bosonic frequencies ``w1`` with ``(w1^2 + a2^2)/w1 = w2``.

    Roots of ``x^2 - w2 x + a2^2``; the smaller root uses Vieta's product to
    avoid cancellation.
    """
    if not (np.isfinite(omega2) and np.isfinite(alpha2)) or omega2 <= 0:
        raise ValueError("omega2 must be positive and finite")
    disc = omega2**2 - 4 * alpha2**2
    if disc < -1e-12 * omega2**2:
        raise ComplexRootError(
            f"omega2={omega2} < 2|alpha2|={2 * abs(alpha2)}: no supersymmetric harmonic oscillator for these parameters"
        )
    degenerate = abs(disc) <= 1e-12 * omega2**2
    if degenerate:
        plus = minus = 0.5 * omega2
    else:
        plus = 0.5 * (omega2 + math.sqrt(disc))
        minus = alpha2**2 / plus
    return FrequencySolution(minus, plus, omega2 - 2 * alpha2, degenerate)


def cluster_levels(eigenvalues: np.ndarray, atol: float) -> list[tuple[float, int]]:
    levels: list[tuple[float, int]] = []
    start = 0
    for i in range(1, len(eigenvalues) + 1):
        if i == len(eigenvalues) or eigenvalues[i] - eigenvalues[start] > atol:
            levels.append((float(np.mean(eigenvalues[start:i])), i - start))
            start = i
    return levels


def spectrum(bundle: HamiltonianBundle, k: int, H: np.ndarray | None = None) -> list[tuple[float, int]]:
    """Lowest ``k`` eigenvalues grouped into ``(level, multiplicity)`` pairs.

    Multiplicities count the whole cluster even when it straddles the
    ``k``-th eigenvalue. ``H`` overrides the bundle Hamiltonian (e.g. ``H0``).
    """
    if k < 1 or k > len(bundle.space.guarded_indices()):
        raise ValueError(f"k={k} outside the guarded subspace")
    w = np.linalg.eigvalsh(bundle.H if H is None else H)
    atol = DEGENERACY_RTOL * bundle.params.omega1
    levels = cluster_levels(w, atol)
    out, seen = [], 0
    for level in levels:
        if seen >= k:
            break
        out.append(level)
        seen += level[1]
    return out


def expand_levels(levels: list[tuple[float, int]], k: int) -> list[tuple[float, int]]:
    """Per-eigenvalue rows ``(eigenvalue, multiplicity)`` for the first ``k`` eigenvalues."""
    rows = [(e, m) for e, m in levels for _ in range(m)]
    return rows[:k]


def is_susy_spectrum(levels: list[tuple[float, int]], omega1: float, tol: float = SUSY_TOLERANCE) -> bool:
    """Unique zero-energy ground level and every positive level doubly degenerate."""
    if not levels or abs(levels[0][0]) > tol or levels[0][1] != 1:
        return False
    return all(m == 2 and e > 0 for e, m in levels[1:])


def susy_spectrum_deviation(bundle: HamiltonianBundle, k: int = 7) -> float:
    """``max(|E_0|, |E_{2j-1} - E_{2j}|)`` over the lowest ``k`` eigenvalues.

    Zero for a supersymmetric spectrum: unique ground level at zero and
    paired excitations.
    """
    w = np.linalg.eigvalsh(bundle.H)[:k]
    splits = np.abs(w[1:-1:2] - w[2::2]) if k > 2 else np.zeros(0)
    return float(max(abs(w[0]), splits.max(initial=0.0)))
