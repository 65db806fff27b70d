"""Truncated boson/fermion Fock spaces.

The single space is ``boson (x) fermion``; the doubled (thermofield) space is
``boson (x) fermion (x) tilde-boson (x) tilde-fermion`` in that fixed order.
Tilde fermions carry a Jordan-Wigner parity string on the system fermion so
that ``{b, b~} = 0``.

Truncated ladder matrices break ``[a, a^dagger] = 1`` at the top level, so
identities are only certified on the *guarded* subspace: boson levels
``0 .. N_b - g`` in every boson factor.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .linalg import ANTI_HERMITIAN, expm_scaling_squaring, matrix_exponential

DENSE_DIM_LIMIT = 4096
LEAK_TOLERANCE = 1e-13


class InsufficientCutoffError(RuntimeError):
    """The boson cutoff is too small for the requested accuracy."""


class Mode(str, Enum):
    BOSON = "boson"
    FERMION = "fermion"
    TILDE_BOSON = "tilde-boson"
    TILDE_FERMION = "tilde-fermion"

    @property
    def is_fermion(self) -> bool:
        return self in (Mode.FERMION, Mode.TILDE_FERMION)


SLOTS = (Mode.BOSON, Mode.FERMION, Mode.TILDE_BOSON, Mode.TILDE_FERMION)


def default_guard(n_b: int) -> int:
    return min(max(4, n_b // 10), n_b - 1)


@dataclass(frozen=True)
class FockSpaceConfig:
    """Truncation settings for a (possibly doubled) boson-fermion space.

    ``guard_band`` defaults to ``max(4, n_b // 10)`` (clipped below ``n_b``).
    ``backend`` is ``"dense"``, ``"sparse"`` or ``"auto"``; auto switches to
    sparse matrices above ``DENSE_DIM_LIMIT`` composite dimensions.
    """

    n_b: int
    guard_band: int | None = None
    doubled: bool = False
    tail_tolerance: float = 1e-8
    backend: str = "auto"
    tilde_anticommute: bool = True

    def __post_init__(self):
        if int(self.n_b) != self.n_b or self.n_b < 1:
            raise ValueError(f"boson cutoff must be a positive integer, got {self.n_b}")
        if self.guard_band is None:
            object.__setattr__(self, "guard_band", default_guard(self.n_b))
        if not 0 <= self.guard_band < self.n_b:
            raise ValueError(f"guard band {self.guard_band} must satisfy 0 <= g < {self.n_b}")
        if not self.tail_tolerance > 0:
            raise ValueError("tail_tolerance must be positive")
        if self.backend not in ("dense", "sparse", "auto"):
            raise ValueError(f"unknown backend {self.backend!r}")

    @property
    def boson_dim(self) -> int:
        return self.n_b + 1

    @property
    def system_dim(self) -> int:
        return 2 * self.boson_dim

    @property
    def dim(self) -> int:
        return self.system_dim**2 if self.doubled else self.system_dim

    @property
    def slots(self) -> tuple[Mode, ...]:
        return SLOTS if self.doubled else SLOTS[:2]

    @property
    def factor_dims(self) -> tuple[int, ...]:
        return tuple(self.boson_dim if not m.is_fermion else 2 for m in self.slots)

    @property
    def guarded_level(self) -> int:
        """Highest boson level inside the guarded subspace."""
        return self.n_b - self.guard_band

    @property
    def use_sparse(self) -> bool:
        if self.backend == "auto":
            return self.dim > DENSE_DIM_LIMIT
        return self.backend == "sparse"

    def single(self) -> FockSpaceConfig:
        return dataclasses.replace(self, doubled=False)

    def double(self) -> FockSpaceConfig:
        return dataclasses.replace(self, doubled=True)

    def with_guard(self, guard_band: int) -> FockSpaceConfig:
        if guard_band >= self.n_b:
            raise InsufficientCutoffError(
                f"guard band {guard_band} leaves no certified levels at N_b={self.n_b}"
            )
        return dataclasses.replace(self, guard_band=guard_band)

    def with_cutoff(self, n_b: int) -> FockSpaceConfig:
        return dataclasses.replace(self, n_b=n_b, guard_band=None)

    def guarded_indices(self) -> np.ndarray:
        """Composite-basis indices whose boson occupations are all guarded."""
        occ = np.indices(self.factor_dims).reshape(len(self.factor_dims), -1)
        keep = np.ones(occ.shape[1], dtype=bool)
        for axis, mode in enumerate(self.slots):
            if not mode.is_fermion:
                keep &= occ[axis] <= self.guarded_level
        return np.flatnonzero(keep)


@dataclass(frozen=True, eq=False)
class ModeOperator:
    """Matrix of a ladder operator (or product) on a composite space."""

    matrix: np.ndarray | sp.sparray
    mode_tag: Mode | None
    dagger: bool
    space: FockSpaceConfig

    def __post_init__(self):
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match composite dimension {self.space.dim}"
            )

    def dag(self) -> ModeOperator:
        return ModeOperator(self.matrix.conj().T, self.mode_tag, not self.dagger, self.space)

    def dense(self) -> np.ndarray:
        return _dense(self.matrix)


def dagger(op: ModeOperator) -> ModeOperator:
    return op.dag()


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    space: FockSpaceConfig

    def __post_init__(self):
        if self.amplitudes.shape != (self.space.dim,):
            raise ValueError("state length does not match composite dimension")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("cannot normalise the zero vector")
        return StateVector(self.amplitudes / n, self.space)


def _dense(M) -> np.ndarray:
    return M.toarray() if sp.issparse(M) else np.asarray(M)


def vacuum(cfg: FockSpaceConfig) -> StateVector:
    v = np.zeros(cfg.dim, dtype=complex)
    v[0] = 1.0
    return StateVector(v, cfg)


# single-factor matrices -----------------------------------------------------

def boson_annihilation(n_b: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_b + 1, dtype=float)), 1)


FERMION_ANNIHILATION = np.array([[0.0, 1.0], [0.0, 0.0]])
FERMION_PARITY = np.diag([1.0, -1.0])


def tensor_embed(op, slot: int | Mode, cfg: FockSpaceConfig) -> ModeOperator:
    """Embed a single-factor matrix into the composite space.

    Identity fills the other factors. The fermion-odd part of an operator on
    the tilde-fermion slot also picks up the parity of the system fermion,
    which keeps the embedding multiplicative: ``embed(A @ B) == embed(A) @ embed(B)``.
    """
    slots = cfg.slots
    if isinstance(slot, Mode):
        if slot not in slots:
            raise ValueError(f"slot {slot.value} not present on this space")
        index = slots.index(slot)
    else:
        index = int(slot)
        if not 0 <= index < len(slots):
            raise ValueError(f"slot {slot} out of range for {len(slots)} factors")
    mode = slots[index]
    op = _dense(op)
    if op.shape != (cfg.factor_dims[index],) * 2:
        raise ValueError(
            f"operator shape {op.shape} does not match {mode.value} factor dimension {cfg.factor_dims[index]}"
        )

    if mode.is_fermion:
        even = np.diag(np.diag(op))
        odd = op - even
        parts = [(even, False), (odd, True)]
    else:
        parts = [(op, False)]

    total = None
    for part, is_odd in parts:
        if not np.any(part):
            continue
        factors = []
        for k, (m, d) in enumerate(zip(slots, cfg.factor_dims)):
            if k == index:
                factors.append(part)
            elif is_odd and cfg.tilde_anticommute and m.is_fermion and k < index:
                factors.append(FERMION_PARITY)
            else:
                factors.append(np.eye(d))
        term = _kron_all(factors, cfg.use_sparse)
        total = term if total is None else total + term
    if total is None:
        total = sp.csr_array((cfg.dim, cfg.dim)) if cfg.use_sparse else np.zeros((cfg.dim, cfg.dim))
    return ModeOperator(total, mode, False, cfg)


def _kron_all(factors, sparse: bool):
    if sparse:
        out = sp.csr_array(factors[0])
        for f in factors[1:]:
            out = sp.kron(out, sp.csr_array(f), format="csr")
        return out
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def build_boson_ladder(cfg: FockSpaceConfig, tilde: bool = False) -> tuple[ModeOperator, ModeOperator]:
    """Return ``(a, a^dagger)`` for the boson (or tilde-boson) factor."""
    if tilde and not cfg.doubled:
        raise ValueError("tilde boson requested on an undoubled space")
    a = tensor_embed(boson_annihilation(cfg.n_b), Mode.TILDE_BOSON if tilde else Mode.BOSON, cfg)
    return a, a.dag()


def build_fermion_ladder(cfg: FockSpaceConfig, tilde: bool = False) -> tuple[ModeOperator, ModeOperator]:
    """Return ``(b, b^dagger)`` for the fermion (or tilde-fermion) factor."""
    if tilde and not cfg.doubled:
        raise ValueError("tilde fermion requested on an undoubled space")
    b = tensor_embed(FERMION_ANNIHILATION, Mode.TILDE_FERMION if tilde else Mode.FERMION, cfg)
    return b, b.dag()


# displacement -----------------------------------------------------------------

def displacement_matrix(n_b: int, lam: float) -> np.ndarray:
    """exp[lam (a^dagger - a)] on a single truncated boson factor."""
    if not np.isfinite(lam):
        raise ValueError("displacement must be finite")
    if lam == 0:
        return np.eye(n_b + 1)
    return _displacement_cached(n_b, float(lam)).copy()


@lru_cache(maxsize=64)
def _displacement_cached(n_b: int, lam: float) -> np.ndarray:
    a = boson_annihilation(n_b)
    return matrix_exponential(lam * (a.T - a), ANTI_HERMITIAN)


@lru_cache(maxsize=64)
def _reference_displacement(n_b: int, lam: float) -> np.ndarray:
    big = 2 * n_b + 16
    a = boson_annihilation(big)
    return expm_scaling_squaring(lam * (a.T - a))


def displacement_leak(n_b: int, lam: float, top: int = 2) -> np.ndarray:
    """Amplitude that the exact ``D(lam)|n>`` puts on levels ``>= n_b - top``.

    One entry per retained level ``n``; computed from a reference exponential
    at a much larger cutoff.
    """
    if lam == 0:
        return np.zeros(n_b + 1)
    ref = _reference_displacement(n_b, float(lam))
    return np.linalg.norm(ref[n_b - top:, : n_b + 1], axis=0)


def displacement_guard(cfg: FockSpaceConfig, lam: float, tol: float = LEAK_TOLERANCE) -> FockSpaceConfig:
    """Widen the guard band so displaced guarded states stay clear of the cutoff."""
    leak = displacement_leak(cfg.n_b, lam)
    bad = np.flatnonzero(leak >= tol)
    highest_ok = int(bad.min()) - 1 if bad.size else cfg.n_b
    guard = max(cfg.guard_band, cfg.n_b - highest_ok)
    return cfg.with_guard(guard) if guard != cfg.guard_band else cfg


def unitarity_deviation(cfg: FockSpaceConfig, lam: float) -> float:
    """How far the exact displacement, kept to the retained levels, is from unitary on guarded levels."""
    if lam == 0:
        return 0.0
    ref = _reference_displacement(cfg.n_b, float(lam))
    k = cfg.guarded_level + 1
    kept = ref[: cfg.n_b + 1, :k]
    return float(np.linalg.norm(kept.T @ kept - np.eye(k), 2))


def displacement_operator(cfg: FockSpaceConfig, lam: float) -> ModeOperator:
    """Displacement ``exp[lam (a^dagger - a)]`` embedded on the boson factor.

    Raises ``InsufficientCutoffError`` when the guarded subspace is not
    closed under the displacement to within ``cfg.tail_tolerance``.
    """
    dev = unitarity_deviation(cfg, lam)
    if dev > cfg.tail_tolerance:
        raise InsufficientCutoffError(
            f"displacement {lam} leaks {dev:.2e} out of N_b={cfg.n_b} (guard {cfg.guard_band})"
        )
    return tensor_embed(displacement_matrix(cfg.n_b, lam), Mode.BOSON, cfg)


# guarded norms and adaptive cutoffs ------------------------------------------

def restrict(M, cfg: FockSpaceConfig) -> np.ndarray:
    idx = cfg.guarded_indices()
    if sp.issparse(M):
        M = sp.csr_array(M)
        return M[idx][:, idx].toarray()
    return np.asarray(M)[np.ix_(idx, idx)]


def guarded_norm(M, cfg: FockSpaceConfig) -> float:
    """Spectral norm of ``M`` restricted to the guarded subspace.

    Large restrictions fall back to the Frobenius norm, an upper bound.
    """
    R = restrict(M, cfg)
    if R.size == 0:
        return 0.0
    if R.shape[0] > 2048:
        return float(np.linalg.norm(R))
    return float(np.linalg.norm(R, 2))


def number_matrix(op: ModeOperator) -> np.ndarray:
    return op.dag().matrix @ op.matrix


def converge_in_cutoff(
    fn: Callable[[int], float], n_b: int, tol: float, cap: int = 512
) -> tuple[float, int]:
    """Double the cutoff until ``fn`` changes by less than ``tol``.

    Returns the value and the cutoff it was accepted at.
    """
    value = fn(n_b)
    while 2 * n_b <= cap:
        refined = fn(2 * n_b)
        if abs(refined - value) < tol:
            return value, n_b
        n_b, value = 2 * n_b, refined
    raise InsufficientCutoffError(f"no convergence within tolerance {tol} up to N_b={cap}")
