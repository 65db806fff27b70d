"""Thermo field dynamics for the reduced SUSY oscillator.

A state on the doubled space ``system (x) tilde`` is stored as a ``d x d``
matrix ``Psi`` (row: system index, column: tilde index), and an operator
``L (x) R`` acts as ``Psi -> L Psi R^T``. Operators built this way are
``KronSum`` objects; they can be materialised into ordinary matrices on
small spaces, which is how the tests cross-check them against
``tensor_embed``.

The thermal vacuum is ``exp(-iG)|0>`` with

    G = -i th_f (b~2 b2 - b2^dag b~2^dag) - i th_b (a~2 a2 - a2^dag a~2^dag),

``tan th_f = tanh th_b = exp(-beta w1 / 2)``, built on the quasiparticle
modes ``a2, b2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, expm_multiply

from .bogoliubov import TransformedModes, canonical_transform, transformed_supercharges
from .fock import (
    FERMION_PARITY,
    FockSpaceConfig,
    InsufficientCutoffError,
    Mode,
    ModeOperator,
    StateVector,
    _dense,
    build_boson_ladder,
    build_fermion_ladder,
    displacement_matrix,
)
from .model import ModelParams, build_interacting_model

MATRIX_EXPONENTIAL = "matrix-exponential"
CLOSED_FORM = "closed-form"
PATHS = (MATRIX_EXPONENTIAL, CLOSED_FORM)

AUTO_START = 32
AUTO_CAP = 512
PATH_TOLERANCE = 1e-8

_TILDE_OF = {
    Mode.BOSON: Mode.TILDE_BOSON,
    Mode.FERMION: Mode.TILDE_FERMION,
    Mode.TILDE_BOSON: Mode.BOSON,
    Mode.TILDE_FERMION: Mode.FERMION,
}


# closed forms ----------------------------------------------------------------

def boltzmann_factor(beta: float, omega1: float) -> float:
    if beta == math.inf:
        return 0.0
    return math.exp(-beta * omega1)


def vacuum_energy_closed_form(beta: float, omega1: float) -> float:
    """Bose plus Fermi occupation energy of the thermal vacuum."""
    x = boltzmann_factor(beta, omega1)
    return omega1 * (x / (1 - x) + x / (1 + x))


def witten_index_closed_form(beta: float, omega1: float) -> float:
    x = boltzmann_factor(beta, omega1)
    return (1 - x) / (1 + x)


def goldstino_norm_closed_form(beta: float, omega1: float) -> float:
    x = boltzmann_factor(beta, omega1)
    return math.sqrt(x) / math.sqrt((1 - x) * (1 + x))


# parameters --------------------------------------------------------------------

@dataclass(frozen=True)
class ThermalParams:
    """Inverse temperature and the rotation angles it fixes.

    ``beta = math.inf`` is accepted and gives the zero-temperature limit.
    """

    beta: float
    omega1: float

    def __post_init__(self):
        if not self.beta > 0 or math.isnan(self.beta):
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.omega1 > 0:
            raise ValueError("omega1 must be positive")

    @property
    def half_factor(self) -> float:
        """exp(-beta w1 / 2)."""
        return 0.0 if self.beta == math.inf else math.exp(-0.5 * self.beta * self.omega1)

    @property
    def theta_f(self) -> float:
        return math.atan(self.half_factor)

    @property
    def theta_b(self) -> float:
        return math.atanh(self.half_factor)

    @property
    def temperature(self) -> float:
        return 0.0 if self.beta == math.inf else 1.0 / self.beta


# Kronecker-pair operators ------------------------------------------------------

def _compact(M):
    """Store mostly-zero factors as CSR so products stay cheap."""
    if sp.issparse(M):
        return M.tocsr()
    M = np.asarray(M)
    if np.count_nonzero(M) < 0.1 * M.size:
        return sp.csr_array(M)
    return M


def _mm(X, Y):
    out = X @ Y
    return _compact(out)


@dataclass(frozen=True, eq=False)
class KronSum:
    """Operator ``sum_k c_k L_k (x) R_k`` on a doubled space of side ``d``."""

    terms: tuple
    d: int

    @classmethod
    def single(cls, L, R, coef=1.0) -> KronSum:
        L, R = _compact(L), _compact(R)
        return cls(((coef, L, R),), L.shape[0])

    def __add__(self, other: KronSum) -> KronSum:
        return KronSum(self.terms + other.terms, self.d)

    def __sub__(self, other: KronSum) -> KronSum:
        return self + other.scale(-1.0)

    def scale(self, c) -> KronSum:
        return KronSum(tuple((c * k, L, R) for k, L, R in self.terms), self.d)

    def __matmul__(self, other: KronSum) -> KronSum:
        terms = tuple(
            (c1 * c2, _mm(L1, L2), _mm(R1, R2))
            for c1, L1, R1 in self.terms
            for c2, L2, R2 in other.terms
        )
        return KronSum(terms, self.d)

    def adjoint(self) -> KronSum:
        return KronSum(tuple((np.conj(c), L.conj().T, R.conj().T) for c, L, R in self.terms), self.d)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.d * self.d, self.d * self.d)

    @property
    def dtype(self):
        return np.result_type(*[np.asarray(c).dtype for c, _, _ in self.terms], *[L.dtype for _, L, _ in self.terms],
                              *[R.dtype for _, _, R in self.terms])

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Act on a thermofield matrix ``psi``."""
        out = np.zeros(psi.shape, dtype=np.result_type(self.dtype, psi.dtype))
        for c, L, R in self.terms:
            left = L @ psi
            out += c * (R @ left.T).T
        return out

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.apply(v.reshape(self.d, self.d)).ravel()

    def trace(self) -> complex:
        return sum(c * L.trace() * R.trace() for c, L, R in self.terms)

    def linear_operator(self) -> LinearOperator:
        adj = self.adjoint()
        return LinearOperator(self.shape, matvec=self.matvec, rmatvec=adj.matvec, dtype=self.dtype)

    def to_matrix(self, sparse: bool = True):
        """Materialise ``sum c L (x) R``; only sensible for small ``d``."""
        if sparse:
            out = sp.csr_array(self.shape, dtype=self.dtype)
            for c, L, R in self.terms:
                out = out + c * sp.kron(sp.csr_array(L), sp.csr_array(R), format="csr")
            return out
        out = np.zeros(self.shape, dtype=self.dtype)
        for c, L, R in self.terms:
            out += c * np.kron(_dense(L), _dense(R))
        return out

    def real_if_possible(self) -> KronSum:
        if all(np.isreal(c) and np.isrealobj(L) and np.isrealobj(R) for c, L, R in self.terms):
            return KronSum(tuple((float(np.real(c)), L, R) for c, L, R in self.terms), self.d)
        return self


def system_parity(cfg: FockSpaceConfig) -> np.ndarray:
    """(-1)^{n_f} on the system factor, or the identity for commuting tilde fermions."""
    if not cfg.tilde_anticommute:
        return np.eye(cfg.system_dim)
    return np.kron(np.eye(cfg.boson_dim), FERMION_PARITY)


def parity_split(X: np.ndarray, P: np.ndarray):
    """Fermion-even and fermion-odd parts of a system-local operator."""
    PXP = P @ X @ P
    return 0.5 * (X + PXP), 0.5 * (X - PXP)


def sys_op(X, cfg: FockSpaceConfig) -> KronSum:
    return KronSum.single(X, np.eye(cfg.system_dim))


def tilde_op(X, cfg: FockSpaceConfig) -> KronSum:
    """Tilde partner ``X~`` of a system-local operator ``X``."""
    X = _dense(X)
    Z = np.kron(np.eye(cfg.boson_dim), FERMION_PARITY)
    even, odd = parity_split(X, Z)
    terms = KronSum((), cfg.system_dim)
    if np.any(even):
        terms = terms + KronSum.single(np.eye(cfg.system_dim), even.conj())
    if np.any(odd):
        terms = terms + KronSum.single(system_parity(cfg), odd.conj())
    return terms


# tilde conjugation and the doubled Hamiltonian ----------------------------------

def _swap_and_sign(cfg: FockSpaceConfig):
    d = cfg.system_dim
    idx = np.arange(d * d)
    i, j = np.divmod(idx, d)
    perm = j * d + i
    if cfg.tilde_anticommute:
        sign = np.where((i % 2) & (j % 2), -1.0, 1.0)
    else:
        sign = np.ones(d * d)
    return perm, sign


def tilde_conjugate(op: ModeOperator) -> ModeOperator:
    """Map system factors to tilde factors (and back), conjugating c-numbers.

    Implemented as swap of the two halves, complex conjugation, and the
    controlled-Z sign ``(-1)^{n_f n~_f}``; with the Jordan-Wigner ordering
    this sends ``b -> b~`` and ``b~ -> b`` and is exactly involutive.
    """
    cfg = op.space
    if not cfg.doubled:
        raise ValueError("tilde conjugation needs a doubled space")
    perm, sign = _swap_and_sign(cfg)
    M = op.matrix
    if sp.issparse(M):
        S = sp.csr_array((sign, (np.arange(len(perm)), perm)), shape=M.shape)
        out = (S @ M.conj() @ S.T).tocsr()
    else:
        out = sign[:, None] * np.asarray(M).conj()[np.ix_(perm, perm)] * sign[None, :]
    tag = _TILDE_OF.get(op.mode_tag) if op.mode_tag is not None else None
    return ModeOperator(out, tag, op.dagger, cfg)


def embed_system(X, cfg: FockSpaceConfig) -> ModeOperator:
    """System-local ``d x d`` operator as a matrix on the doubled space."""
    cfg = cfg.double()
    if cfg.use_sparse:
        M = sp.kron(sp.csr_array(_dense(X)), sp.identity(cfg.system_dim, format="csr"), format="csr")
    else:
        M = np.kron(_dense(X), np.eye(cfg.system_dim))
    return ModeOperator(M, None, False, cfg)


def double_hamiltonian(bundle, cfg: FockSpaceConfig | None = None):
    """``H^ = H - H~`` on the doubled space of the bundle's cutoff."""
    cfg = (cfg or bundle.space).double()
    if cfg.n_b != bundle.space.n_b:
        raise ValueError("doubled space must share the bundle's cutoff")
    H = embed_system(bundle.H, cfg)
    return H.matrix - tilde_conjugate(H).matrix


def doubled_hamiltonian_kron(H: np.ndarray, cfg: FockSpaceConfig) -> KronSum:
    return sys_op(H, cfg) - tilde_op(H, cfg)


# quasiparticle modes on the doubled space ---------------------------------------

@dataclass(frozen=True, eq=False)
class DoubledModes:
    """Quasiparticle modes ``a2, b2`` and their tilde partners."""

    a: np.ndarray
    b: np.ndarray
    space: FockSpaceConfig
    shift: float | None = None  # beta when a2 = U^dag a U, b2 = U^dag b U

    @classmethod
    def from_transformed(cls, modes: TransformedModes, tilde_anticommute: bool = True) -> DoubledModes:
        cfg = modes.space.double()
        if cfg.tilde_anticommute != tilde_anticommute:
            cfg = replace(cfg, tilde_anticommute=tilde_anticommute)
        p = modes.params
        shift = p.beta2 if p.beta1 == p.beta2 else None
        return cls(modes.a2.dense(), modes.b2.dense(), cfg, shift)

    def ops(self) -> dict[str, KronSum]:
        cfg = self.space
        A, B = self.a, self.b
        return {
            "a": sys_op(A, cfg),
            "a_dag": sys_op(A.conj().T, cfg),
            "b": sys_op(B, cfg),
            "b_dag": sys_op(B.conj().T, cfg),
            "a_tilde": tilde_op(A, cfg),
            "a_tilde_dag": tilde_op(A.conj().T, cfg),
            "b_tilde": tilde_op(B, cfg),
            "b_tilde_dag": tilde_op(B.conj().T, cfg),
        }

    def mode_operators(self) -> dict[str, ModeOperator]:
        """Materialised ladder set for ``verify_full_algebra`` (small cutoffs only)."""
        cfg = self.space
        tags = {"a": Mode.BOSON, "b": Mode.FERMION, "a_tilde": Mode.TILDE_BOSON, "b_tilde": Mode.TILDE_FERMION}
        out = {}
        for name, ks in self.ops().items():
            base = name.replace("_dag", "")
            M = ks.to_matrix(sparse=cfg.use_sparse)
            out[name] = ModeOperator(M, tags[base], name.endswith("_dag"), cfg)
        return out


@dataclass(frozen=True, eq=False)
class ThermalRotation:
    """The generator ``G``, split into its commuting fermion-pair and boson-pair parts."""

    fermion: KronSum
    boson: KronSum
    params: ThermalParams

    @property
    def full(self) -> KronSum:
        return self.fermion + self.boson


def build_thermal_rotation(params: ThermalParams, modes: DoubledModes) -> ThermalRotation:
    ops = modes.ops()
    tf, tb = params.theta_f, params.theta_b
    fermion = (ops["b_tilde"] @ ops["b"] - ops["b_dag"] @ ops["b_tilde_dag"]).scale(-1j * tf)
    boson = (ops["a_tilde"] @ ops["a"] - ops["a_dag"] @ ops["a_tilde_dag"]).scale(-1j * tb)
    return ThermalRotation(fermion, boson, params)


def thermal_annihilators(params: ThermalParams, modes: DoubledModes) -> tuple[KronSum, KronSum]:
    """``a2(beta)`` and ``b2(beta)``, which annihilate the thermal vacuum."""
    ops = modes.ops()
    tf, tb = params.theta_f, params.theta_b
    a_beta = ops["a"].scale(math.cosh(tb)) - ops["a_tilde_dag"].scale(math.sinh(tb))
    b_beta = ops["b"].scale(math.cos(tf)) - ops["b_tilde_dag"].scale(math.sin(tf))
    return a_beta, b_beta


# thermal vacuum ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ThermalVacuum:
    state: StateVector
    params: ThermalParams
    construction_path: str
    tail_mass: float

    @property
    def psi(self) -> np.ndarray:
        d = self.state.space.system_dim
        return self.state.amplitudes.reshape(d, d)


def tail_mass(psi: np.ndarray, cfg: FockSpaceConfig) -> float:
    """Largest occupation probability above the guarded boson level (system or tilde)."""
    nb1 = cfg.boson_dim
    prob = np.abs(psi.reshape(nb1, 2, nb1, 2)) ** 2
    k = cfg.guarded_level + 1
    sys_tail = prob[k:].sum()
    tilde_tail = prob[:, :, k:].sum()
    return float(max(sys_tail, tilde_tail))


def _vacuum_psi(d: int) -> np.ndarray:
    psi = np.zeros((d, d))
    psi[0, 0] = 1.0
    return psi


def _exp_action(generator: KronSum, psi: np.ndarray) -> np.ndarray:
    """``exp(-i G) psi`` for a Hermitian generator ``G``."""
    K = generator.scale(-1j).real_if_possible()
    if not K.terms:
        return psi
    v = expm_multiply(K.linear_operator(), psi.ravel(), traceA=K.trace())
    return v.reshape(psi.shape)


def _free_closed_form_psi(params: ThermalParams, cfg: FockSpaceConfig, ops) -> np.ndarray:
    psi = _vacuum_psi(cfg.system_dim)
    pair_f = ops["b_dag"] @ ops["b_tilde_dag"]
    psi = math.cos(params.theta_f) * psi + math.sin(params.theta_f) * pair_f.apply(psi)
    t = params.half_factor  # tanh(theta_b)
    if t == 0.0:
        return psi
    pair_b = ops["a_dag"] @ ops["a_tilde_dag"]
    term = psi
    total = psi.copy()
    coef = 1.0
    for n in range(1, cfg.n_b + 1):
        term = pair_b.apply(term) / n
        coef *= t
        total = total + coef * term
        if coef < 1e-20:
            break
    return total * math.sqrt(1.0 - t * t)  # 1 / cosh(theta_b)


def _closed_form_psi(params: ThermalParams, modes: DoubledModes) -> np.ndarray:
    """Squeezed pair series, dressed by the polaron shift when there is one.

    With ``a2 = U^dag a U`` and ``b2 = U^dag b U`` for
    ``U = P0 + P1 exp[beta (a^dag - a)]`` (``P0, P1`` the fermion
    projectors), the vacuum is ``U^dag U~^dag`` applied to the free one.
    Summing ``(a2^dag a~2^dag)^n / n!`` directly loses all accuracy on large
    cutoffs, because the truncated shifted ladders are not nilpotent.
    """
    cfg = modes.space
    if modes.shift is None:
        return _free_closed_form_psi(params, cfg, modes.ops())
    a, _ = build_boson_ladder(cfg.single())
    b, _ = build_fermion_ladder(cfg.single())
    free = DoubledModes(a.dense(), b.dense(), cfg).ops()
    psi = _free_closed_form_psi(params, cfg, free)
    if modes.shift == 0.0:
        return psi
    Dinv = displacement_matrix(cfg.n_b, modes.shift).conj().T
    Ud = np.kron(np.eye(cfg.boson_dim), np.diag([1.0, 0.0])) + np.kron(Dinv, np.diag([0.0, 1.0]))
    return (sys_op(Ud, cfg) @ tilde_op(Ud, cfg)).apply(psi)


def thermal_vacuum(params: ThermalParams, modes: DoubledModes, path: str = MATRIX_EXPONENTIAL,
                   strict: bool = True) -> ThermalVacuum:
    """Build ``|0(beta)>`` on the doubled space.

    ``path="matrix-exponential"`` applies ``exp(-iG)`` to ``|0>``;
    ``path="closed-form"`` sums the two-mode squeezed boson pair with the
    rotated fermion pair. Raises ``InsufficientCutoffError`` when ``strict``
    and the boson tail mass exceeds the space's ``tail_tolerance``.
    """
    cfg = modes.space
    if path == MATRIX_EXPONENTIAL:
        rot = build_thermal_rotation(params, modes)
        psi = _vacuum_psi(cfg.system_dim)
        if params.beta != math.inf:
            psi = _exp_action(rot.fermion, psi)
            psi = _exp_action(rot.boson, psi)
    elif path == CLOSED_FORM:
        psi = _closed_form_psi(params, modes)
    else:
        raise ValueError(f"unknown construction path {path!r}")
    tail = tail_mass(psi, cfg)
    if strict and tail > cfg.tail_tolerance:
        raise InsufficientCutoffError(
            f"thermal vacuum tail mass {tail:.2e} exceeds {cfg.tail_tolerance:.1e} at N_b={cfg.n_b}"
        )
    return ThermalVacuum(StateVector(psi.ravel().astype(complex), cfg), params, path, tail)


def _as_system_matrix(H, cfg: FockSpaceConfig) -> np.ndarray:
    H = H.matrix if isinstance(H, ModeOperator) else H
    if H.shape == (cfg.system_dim, cfg.system_dim):
        return _dense(H)
    raise ValueError(f"expected a system-local {cfg.system_dim}x{cfg.system_dim} operator, got {H.shape}")


def expectation(vac: ThermalVacuum, op) -> complex:
    """``<0(beta)| op |0(beta)>`` for a system-local matrix, a doubled matrix, or a ``KronSum``."""
    psi = vac.psi
    if isinstance(op, KronSum):
        return complex(np.vdot(psi, op.apply(psi)))
    M = op.matrix if isinstance(op, ModeOperator) else op
    if M.shape == (psi.shape[0],) * 2:
        return complex(np.vdot(psi, _dense(M) @ psi))
    v = vac.state.amplitudes
    return complex(np.vdot(v, M @ v))


def thermal_energy(vac: ThermalVacuum, H) -> float:
    """Thermal vacuum energy ``<0(beta)| H |0(beta)>``."""
    cfg = vac.state.space
    if vac.tail_mass > cfg.tail_tolerance:
        raise InsufficientCutoffError(f"tail mass {vac.tail_mass:.2e} above tolerance at N_b={cfg.n_b}")
    return float(expectation(vac, H).real)


def gibbs_energy_oracle(H: np.ndarray, beta: float) -> float:
    """``Tr(H e^{-beta H}) / Tr(e^{-beta H})`` by exact diagonalisation."""
    w = np.linalg.eigvalsh(_dense(H))
    if beta == math.inf:
        return float(w[0])
    weights = np.exp(-beta * (w - w[0]))
    return float(np.dot(w, weights) / weights.sum())


def _parity_operator(fermion_number: np.ndarray) -> np.ndarray:
    f, V = np.linalg.eigh(_dense(fermion_number))
    signs = np.where(np.rint(f).astype(int) % 2 == 0, 1.0, -1.0)
    return (V * signs) @ V.conj().T


def witten_index(H: np.ndarray, fermion_number: np.ndarray, beta: float) -> float:
    """Graded trace ``Tr((-1)^F e^{-beta H}) / Tr(e^{-beta H})``."""
    w, V = np.linalg.eigh(_dense(H))
    parity = _parity_operator(fermion_number)
    graded = np.real(np.einsum("ik,ij,jk->k", V.conj(), parity, V))
    if beta == math.inf:
        ground = w <= w[0] + 1e-9 * max(1.0, abs(w[0]))
        return float(graded[ground].mean())
    weights = np.exp(-beta * (w - w[0]))
    return float(np.dot(graded, weights) / weights.sum())


@dataclass(frozen=True, eq=False)
class GoldstinoStates:
    """Supercharges applied to the thermal vacuum; states are ``None`` when the norm vanishes."""

    norm1: float
    state1: StateVector | None
    norm2: float
    state2: StateVector | None

    @property
    def defined(self) -> bool:
        return self.state1 is not None and self.state2 is not None


def goldstino_states(vac: ThermalVacuum, G_2S, G_2S_dagger) -> GoldstinoStates:
    """Apply ``G_2S = a2^dag b2`` and ``G_2S^dag`` to ``|0(beta)>``."""
    cfg = vac.state.space
    psi = vac.psi
    out = []
    for G in (G_2S, G_2S_dagger):
        chi = _as_system_matrix(G, cfg) @ psi
        n = float(np.linalg.norm(chi))
        state = StateVector((chi / n).ravel().astype(complex), cfg) if n > 0 else None
        out += [n, state]
    return GoldstinoStates(*out)


# one temperature point -----------------------------------------------------------

@dataclass
class ThermalObservables:
    """Numerical and closed-form observables at one temperature."""

    beta: float
    omega1: float
    E0: float
    witten_index: float
    goldstino_norm: float
    goldstino_norm_dagger: float
    gibbs_energy: float
    n_b: int
    tail_mass: float
    path_deviation: float
    flagged: bool
    notes: list[str] = field(default_factory=list)

    def record(self) -> dict:
        w1 = self.omega1
        b = self.beta
        return {
            "beta": b,
            "T_over_omega1": 1.0 / (b * w1),
            "E0_over_omega1": self.E0 / w1,
            "E0_closed_form": vacuum_energy_closed_form(b, w1) / w1,
            "gibbs_oracle": self.gibbs_energy / w1,
            "witten_numeric": self.witten_index,
            "witten_closed_form": witten_index_closed_form(b, w1),
            "goldstino_norm_numeric": self.goldstino_norm,
            "goldstino_norm_closed_form": goldstino_norm_closed_form(b, w1),
            "goldstino_norm_dagger_numeric": self.goldstino_norm_dagger,
            "N_b_used": self.n_b,
            "tail_mass": self.tail_mass,
            "path_deviation": self.path_deviation,
            "flagged": int(self.flagged),
        }


def _gibbs_and_witten(params: ModelParams, beta: float, n_b: int) -> tuple[float, float]:
    cfg = FockSpaceConfig(n_b)
    H = build_interacting_model(params, cfg, certify=False).H
    n_f = np.kron(np.eye(cfg.boson_dim), np.diag([0.0, 1.0]))
    return gibbs_energy_oracle(H, beta), witten_index(H, n_f, beta)


def _evaluate(params: ModelParams, beta: float, cfg: FockSpaceConfig, path: str) -> ThermalObservables:
    modes = canonical_transform(params, cfg, certify=False)
    dmodes = DoubledModes.from_transformed(modes, cfg.tilde_anticommute)
    tp = ThermalParams(beta, params.omega1)
    vac = thermal_vacuum(tp, dmodes, path, strict=False)
    other = thermal_vacuum(tp, dmodes, CLOSED_FORM if path == MATRIX_EXPONENTIAL else MATRIX_EXPONENTIAL,
                           strict=False)
    H = build_interacting_model(params, cfg, certify=False).H
    G, Gd = transformed_supercharges(modes)
    gold = goldstino_states(vac, G, Gd)
    E0 = float(expectation(vac, H).real)
    gibbs, witten = _gibbs_and_witten(params, beta, cfg.n_b)
    notes = []
    flagged = False
    if vac.tail_mass > cfg.tail_tolerance:
        flagged = True
        notes.append(f"tail mass {vac.tail_mass:.2e} above {cfg.tail_tolerance:.1e}")
    path_deviation = float(np.linalg.norm(vac.psi - other.psi))
    if path_deviation > PATH_TOLERANCE:
        flagged = True
        notes.append(f"construction paths differ by {path_deviation:.2e}")
    if beta != math.inf:
        gibbs2, witten2 = _gibbs_and_witten(params, beta, 2 * cfg.n_b)
        if abs(gibbs2 - gibbs) > cfg.tail_tolerance * max(1.0, abs(gibbs)) or abs(witten2 - witten) > cfg.tail_tolerance:
            flagged = True
            notes.append("single-space traces not converged under cutoff doubling")
    return ThermalObservables(
        beta=beta,
        omega1=params.omega1,
        E0=E0,
        witten_index=witten,
        goldstino_norm=gold.norm1,
        goldstino_norm_dagger=gold.norm2,
        gibbs_energy=gibbs,
        n_b=cfg.n_b,
        tail_mass=vac.tail_mass,
        path_deviation=path_deviation,
        flagged=flagged,
        notes=notes,
    )


def thermal_point(params: ModelParams, beta: float, n_b: int | str = "auto", tail_tolerance: float = 1e-8,
                  path: str = MATRIX_EXPONENTIAL, tilde_anticommute: bool = True) -> ThermalObservables:
    """All thermal observables at one ``beta``.

    With ``n_b="auto"`` the cutoff starts at 32 and doubles until the
    thermal vacuum tail mass drops below ``tail_tolerance`` and the two
    construction paths agree within ``PATH_TOLERANCE`` (capped at 512, after
    which the point is flagged). A fixed ``n_b`` is used as given and
    flagged if too small.
    """
    def cfg_for(n):
        return FockSpaceConfig(n, doubled=True, tail_tolerance=tail_tolerance, tilde_anticommute=tilde_anticommute)

    if n_b != "auto":
        return _evaluate(params, beta, cfg_for(int(n_b)), path)
    n = AUTO_START
    while True:
        obs = _evaluate(params, beta, cfg_for(n), path)
        if not obs.flagged or 2 * n > AUTO_CAP:
            return obs
        n *= 2
