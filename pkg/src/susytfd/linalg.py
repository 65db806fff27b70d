"""Matrix exponentials with two independent routes.

The eigendecomposition route is used whenever the generator is Hermitian or
anti-Hermitian (displacements, thermal rotations); general matrices go
through scaling-and-squaring.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

HERMITIAN = "hermitian"
ANTI_HERMITIAN = "anti-hermitian"


def _check_finite(M: np.ndarray) -> None:
    if not np.all(np.isfinite(M)):
        raise FloatingPointError("matrix exponential input contains NaN or Inf")


def expm_eigh(M: np.ndarray, structure: str) -> np.ndarray:
    """exp(M) through the spectral decomposition of a Hermitian matrix.

    For ``structure="anti-hermitian"`` the Hermitian matrix ``K = iM`` is
    diagonalised and ``exp(M) = V exp(-i w) V^dagger``.
    """
    M = np.asarray(M)
    _check_finite(M)
    if structure == HERMITIAN:
        w, V = np.linalg.eigh(M)
        out = (V * np.exp(w)) @ V.conj().T
    elif structure == ANTI_HERMITIAN:
        w, V = np.linalg.eigh(1j * M)
        out = (V * np.exp(-1j * w)) @ V.conj().T
    else:
        raise ValueError(f"unknown structure {structure!r}")
    if np.isrealobj(M):
        out = out.real
    return out


def expm_scaling_squaring(M: np.ndarray) -> np.ndarray:
    """exp(M) by Pade scaling-and-squaring (scipy)."""
    M = np.asarray(M)
    _check_finite(M)
    return scipy.linalg.expm(M)


def matrix_exponential(M: np.ndarray, hermitian_structure: str | None = None) -> np.ndarray:
    """Exponentiate a square matrix.

    Parameters
    ----------
    M : ndarray
        Square matrix with finite entries.
    hermitian_structure : {"hermitian", "anti-hermitian", None}
        Marks a structured generator; those use the eigendecomposition
        route, anything else uses scaling-and-squaring.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if hermitian_structure is None:
        out = expm_scaling_squaring(M)
    else:
        out = expm_eigh(M, hermitian_structure)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("matrix exponential overflowed")
    return out


def spectral_norm(M) -> float:
    M = np.asarray(M.toarray() if hasattr(M, "toarray") else M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))
