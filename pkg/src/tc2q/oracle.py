"""Brute-force cross-check engine on a truncated Fock space.

Nothing here knows about the closed forms: the full Hamiltonian (including
omega0) is built as a dense matrix on C^4 (x) C^dim, diagonalized once, and
states are propagated exactly in the eigenbasis.  Reduced qubit states then
go through the Wootters spin-flip construction.  Agreement with
:mod:`tc2q.analytic` is therefore a genuine two-route test.

The composite index is qubit-major: basis vector (q, n) sits at q * dim + n
with q running over the eg ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from . import series as _series
from .model import (
    BELL_KINDS,
    Coherent,
    ExplicitDensity,
    Fock,
    ModelParams,
    OscillatorSpec,
    QubitDensity,
    Thermal,
    basis_transform,
    bell_vector,
    change_basis,
    clamp_unit,
    spec_label,
)

#: leakage (population of the top two Fock levels) above which a series row
#: is flagged, and above which the run is aborted
LEAK_FLAG = 1e-8
LEAK_ERROR = 1e-6

_COMPOSITE_TOL = 1e-9

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
_EYE2 = np.eye(2, dtype=complex)
_SIGMA_YY = np.array([
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
])  # sigma_y (x) sigma_y is real in the eg ordering


class TruncationError(RuntimeError):
    """The chosen Fock-space dimension cannot support the requested state."""


def _destroy(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1).astype(complex)


def _check_dim(dim: int) -> int:
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise ValueError(f"dim must be an integer >= 2, got {dim!r}")
    return int(dim)


def choose_dim(spec: OscillatorSpec, params: ModelParams) -> int:
    """Truncation rule sized from the displacement reach of the initial state.

    dim = max(20, ceil(s^2) + 10 ceil(s) + N + 10) with
    s = |alpha0| + 4 beta + q_th, q_th = 4 sqrt(mean_n) for thermal states,
    and N the number-state index.  Convergence tests, not estimates, are the
    actual guarantee; this just has to land above the knee.
    """
    alpha_mag = 0.0
    q_th = 0.0
    n_fock = 0
    if isinstance(spec, Thermal):
        q_th = 4.0 * math.sqrt(spec.mean_n)
    elif isinstance(spec, Coherent):
        alpha_mag = abs(spec.alpha0)
    elif isinstance(spec, Fock):
        n_fock = spec.n_index
    elif isinstance(spec, ExplicitDensity):
        n_fock = spec.matrix.shape[0]
    else:
        raise TypeError(f"not an oscillator spec: {spec!r}")
    s = alpha_mag + 4.0 * params.beta + q_th
    return max(20, math.ceil(s * s) + 10 * math.ceil(s) + n_fock + 10)


def build_hamiltonian(params: ModelParams, dim: int) -> np.ndarray:
    """Dense H = (omega0/2)(sz1+sz2) + omega adag a + lambda (a+adag)(sx1+sx2)."""
    dim = _check_dim(dim)
    a = _destroy(dim)
    number = a.conj().T @ a
    sx_sum = np.kron(_SIGMA_X, _EYE2) + np.kron(_EYE2, _SIGMA_X)
    sz_sum = np.kron(_SIGMA_Z, _EYE2) + np.kron(_EYE2, _SIGMA_Z)
    h = (params.omega * np.kron(np.eye(4, dtype=complex), number)
         + params.lambda_ * np.kron(sx_sum, a + a.conj().T))
    if params.omega0 != 0.0:
        h = h + (0.5 * params.omega0) * np.kron(sz_sum, np.eye(dim, dtype=complex))
    return h


def predicted_spectrum(params: ModelParams, dim: int) -> np.ndarray:
    """Sorted degenerate-model eigenvalues {omega (N - 4 beta_m^2)}.

    Each oscillator level N contributes the pair m = +-1 at
    omega (N - 4 beta^2) and the two m = 0 states at omega N.
    """
    dim = _check_dim(dim)
    if params.omega0 != 0.0:
        raise ValueError("the closed-form spectrum is only known at omega0 = 0")
    n = np.arange(dim, dtype=float)
    shifted = params.omega * (n - 4.0 * params.beta ** 2)
    flat = params.omega * n
    return np.sort(np.concatenate([shifted, shifted, flat, flat]))


def displaced_number_state(n_index: int, m: int, params: ModelParams,
                           dim: int) -> np.ndarray:
    """|N_m> = D(-2 beta_m) |N> via the exact matrix exponential.

    The truncated generator is still anti-Hermitian, so the exponential is
    exactly unitary and norm is useless as a truncation diagnostic; instead
    the population stuck in the top two ladder rungs is checked.
    """
    dim = _check_dim(dim)
    if not isinstance(n_index, (int, np.integer)) or not (0 <= n_index < dim):
        raise ValueError(f"n_index must lie in [0, {dim}), got {n_index!r}")
    bm = params.beta_m(m)
    a = _destroy(dim)
    vec = np.zeros(dim, dtype=complex)
    vec[int(n_index)] = 1.0
    if bm != 0.0:
        vec = expm(-2.0 * bm * (a.conj().T - a)) @ vec
    tail = float((np.abs(vec[-2:]) ** 2).sum())
    if tail > 1e-10:
        raise TruncationError(
            f"displaced |{int(n_index)}_{m:+d}> puts population {tail:.3e} in the "
            f"top rungs at dim={dim}; increase dim")
    return vec


class SpectralPropagator:
    """Diagonalize a Hermitian H once, then evolve states or densities to any t."""

    def __init__(self, hamiltonian: np.ndarray) -> None:
        h = np.asarray(hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"hamiltonian must be square, got shape {h.shape}")
        if np.abs(h - h.conj().T).max() > 1e-10:
            raise ValueError("hamiltonian is not Hermitian within 1e-10")
        self.energies, self.modes = np.linalg.eigh(h)

    def state(self, psi0: np.ndarray, t: float) -> np.ndarray:
        """Evolve one state vector (or a column block of them)."""
        coeff = self.modes.conj().T @ psi0
        phase = np.exp(-1j * self.energies * t)
        return self.modes @ (phase[:, None] * coeff if coeff.ndim == 2 else phase * coeff)

    def density(self, rho0: np.ndarray, t: float) -> np.ndarray:
        """Unitary conjugation exp(-iHt) rho0 exp(+iHt)."""
        rho_e = self.modes.conj().T @ np.asarray(rho0, dtype=complex) @ self.modes
        phase = np.exp(-1j * self.energies * t)
        return self.modes @ (np.outer(phase, phase.conj()) * rho_e) @ self.modes.conj().T


def evolve_density(rho0: np.ndarray, t: float, hamiltonian: np.ndarray) -> np.ndarray:
    """One-shot exp(-iHt) rho0 exp(+iHt); build a SpectralPropagator for grids."""
    return SpectralPropagator(hamiltonian).density(rho0, t)


def partial_trace_oscillator(rho: np.ndarray, dim: int) -> np.ndarray:
    """Trace out the oscillator factor of a (4 dim) x (4 dim) composite matrix."""
    dim = _check_dim(dim)
    rho = np.asarray(rho)
    if rho.shape != (4 * dim, 4 * dim):
        raise ValueError(f"expected shape {(4 * dim, 4 * dim)}, got {rho.shape}")
    return np.trace(rho.reshape(4, dim, 4, dim), axis1=1, axis2=3)


@dataclass(frozen=True)
class CompositeState:
    """Validated qubit (x) oscillator density matrix with qubit-major indexing."""

    rho: np.ndarray
    dim: int
    qubit_basis: str = "eg"

    def __post_init__(self) -> None:
        dim = _check_dim(self.dim)
        m = np.array(self.rho, dtype=complex)
        if m.shape != (4 * dim, 4 * dim):
            raise ValueError(f"expected shape {(4 * dim, 4 * dim)}, got {m.shape}")
        if np.abs(m - m.conj().T).max() > _COMPOSITE_TOL:
            raise ValueError("composite density is not Hermitian within 1e-9")
        if abs(np.trace(m) - 1.0) > _COMPOSITE_TOL:
            raise ValueError(f"composite density trace {np.trace(m)} is not 1 within 1e-9")
        if np.linalg.eigvalsh((m + m.conj().T) / 2.0).min() < -_COMPOSITE_TOL:
            raise ValueError("composite density has an eigenvalue below -1e-9")
        m.flags.writeable = False
        object.__setattr__(self, "rho", m)

    def leakage(self) -> float:
        """Total population in the top two Fock levels."""
        pops = np.diag(self.rho).real.reshape(4, self.dim)
        return float(pops[:, -2:].sum())


def wootters_concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix in the eg ordering.

    The spin-flip eigenvalues are computed as singular values of
    sqrt(rho) (sy (x) sy) sqrt(rho)*, which keeps the near-zero ones at
    machine precision where the textbook eigvals(rho rho~) route floors
    near 1e-8.
    """
    if isinstance(rho, QubitDensity):
        rho = change_basis(rho, "eg").matrix
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > _COMPOSITE_TOL:
        raise ValueError("density matrix is not Hermitian within 1e-9")
    herm = (rho + rho.conj().T) / 2.0
    w, vecs = np.linalg.eigh(herm)
    if w.min() < -_COMPOSITE_TOL:
        raise ValueError(f"density matrix has eigenvalue {w.min():.3e} below -1e-9")
    root = (vecs * np.sqrt(np.clip(w, 0.0, None))) @ vecs.conj().T
    lam = np.linalg.svd(root @ _SIGMA_YY @ root.conj(), compute_uv=False)
    return clamp_unit(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _coherent_vector(alpha0: complex, dim: int) -> np.ndarray:
    n = np.arange(dim)
    if alpha0 == 0:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    log_mag = n * math.log(abs(alpha0)) - 0.5 * gammaln(n + 1.0) - 0.5 * abs(alpha0) ** 2
    vec = np.exp(log_mag) * np.exp(1j * np.angle(alpha0) * n)
    tail = 1.0 - float(np.sum(np.abs(vec) ** 2))
    if tail > 1e-12:
        raise TruncationError(
            f"coherent |alpha0|={abs(alpha0):g} leaves tail population "
            f"{tail:.3e} > 1e-12 at dim={dim}")
    return vec / np.linalg.norm(vec)


def oscillator_initial_state(spec: OscillatorSpec, dim: int) -> np.ndarray:
    """Initial oscillator density matrix, truncated with tail population < 1e-12."""
    dim = _check_dim(dim)
    if isinstance(spec, Thermal):
        if spec.mean_n == 0.0:
            weights = np.zeros(dim)
            weights[0] = 1.0
        else:
            ratio = spec.mean_n / (1.0 + spec.mean_n)
            tail = ratio ** dim
            if tail > 1e-12:
                raise TruncationError(
                    f"thermal mean_n={spec.mean_n:g} leaves tail population "
                    f"{tail:.3e} > 1e-12 at dim={dim}")
            weights = (1.0 - ratio) * ratio ** np.arange(dim)
            weights /= weights.sum()
        return np.diag(weights).astype(complex)
    if isinstance(spec, Coherent):
        vec = _coherent_vector(spec.alpha0, dim)
        return np.outer(vec, vec.conj())
    if isinstance(spec, Fock):
        if spec.n_index >= dim:
            raise TruncationError(f"number state n={spec.n_index} needs dim > {spec.n_index}")
        rho = np.zeros((dim, dim), dtype=complex)
        rho[spec.n_index, spec.n_index] = 1.0
        return rho
    if isinstance(spec, ExplicitDensity):
        d = spec.matrix.shape[0]
        if d > dim:
            raise TruncationError(f"explicit density of dim {d} does not fit in dim={dim}")
        rho = np.zeros((dim, dim), dtype=complex)
        rho[:d, :d] = spec.matrix
        return rho
    raise TypeError(f"not an oscillator spec: {spec!r}")


def composite_initial_state(qubit_init: str, spec: OscillatorSpec,
                            dim: int) -> CompositeState:
    """Bell state (x) oscillator preparation as a validated composite density."""
    v = bell_vector(qubit_init)
    return CompositeState(np.kron(np.outer(v, v.conj()),
                                  oscillator_initial_state(spec, dim)), dim)


def _initial_pure_block(qubit_init: str, spec: OscillatorSpec, dim: int):
    """Decompose bell (x) F into weighted pure columns for fast propagation."""
    bell = bell_vector(qubit_init)
    if isinstance(spec, (Thermal, Fock)):
        rho_osc = oscillator_initial_state(spec, dim)
        weights = np.diag(rho_osc).real
        keep = weights > 0.0
        block = np.kron(bell[:, None], np.eye(dim, dtype=complex)[:, keep])
        return weights[keep], block
    if isinstance(spec, Coherent):
        vec = _coherent_vector(spec.alpha0, dim)
        return np.array([1.0]), np.kron(bell, vec)[:, None]
    if isinstance(spec, ExplicitDensity):
        rho_osc = oscillator_initial_state(spec, dim)
        w, vecs = np.linalg.eigh(rho_osc)
        keep = w > 1e-15
        cols = np.kron(bell[:, None], vecs[:, keep])
        return w[keep], cols
    raise TypeError(f"not an oscillator spec: {spec!r}")


def _coherence_from_reduced(rho_eg: np.ndarray, qubit_init: str) -> complex:
    """Recover the overlap integral I(t) from the (1,1)-(1,-1) jm coherence."""
    t_jm = basis_transform("eg", "jm")
    entry = (t_jm @ rho_eg @ t_jm.T)[0, 3]
    return complex(-2.0 * entry if qubit_init == "psi_plus" else 2.0 * entry)


def oracle_reduced_density(qubit_init: str, spec: OscillatorSpec, t: float,
                           params: ModelParams, dim: int | None = None) -> QubitDensity:
    """Reduced qubit state at a single time, straight through the full model."""
    if dim is None:
        dim = choose_dim(spec, params)
    prop = SpectralPropagator(build_hamiltonian(params, _check_dim(dim)))
    weights, block = _initial_pure_block(qubit_init, spec, dim)
    psi_t = prop.state(block, float(t)).reshape(4, dim, -1)
    rho_q = np.einsum("ank,bnk,k->ab", psi_t, psi_t.conj(), weights)
    return QubitDensity((rho_q + rho_q.conj().T) / 2.0, "eg")


def oracle_concurrence_series(qubit_init: str, spec: OscillatorSpec,
                              times: np.ndarray, params: ModelParams,
                              dim: int | None = None) -> "_series.ConcurrenceSeries":
    """Concurrence on a time grid by exact propagation in the truncated space.

    The initial mixture is split into weighted pure states (exactly: thermal
    and number preparations are Fock-diagonal, coherent ones are pure) and
    each column is evolved in the eigenbasis, which is far cheaper than
    conjugating the full composite density at every grid point.  Leakage into
    the top two Fock levels is recorded per point; beyond 1e-6 it aborts.
    """
    if qubit_init not in BELL_KINDS:
        raise ValueError(f"qubit_init must be one of {BELL_KINDS}, got {qubit_init!r}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a non-empty 1-d array")
    if dim is None:
        dim = choose_dim(spec, params)
    dim = _check_dim(dim)

    composite_initial_state(qubit_init, spec, dim)  # validates the t=0 density
    prop = SpectralPropagator(build_hamiltonian(params, dim))
    weights, block = _initial_pure_block(qubit_init, spec, dim)
    coeff = prop.modes.conj().T @ block

    with_uv = qubit_init in ("psi_plus", "phi_plus")
    conc = np.empty(times.size)
    leak = np.empty(times.size)
    u = np.empty(times.size) if with_uv else None
    v = np.empty(times.size) if with_uv else None
    for idx, t in enumerate(times):
        psi_t = (prop.modes @ (np.exp(-1j * prop.energies * t)[:, None] * coeff))
        psi_t = psi_t.reshape(4, dim, -1)
        leak[idx] = float(np.einsum("ank,k->", np.abs(psi_t[:, -2:, :]) ** 2, weights))
        if leak[idx] > LEAK_ERROR:
            raise TruncationError(
                f"leakage {leak[idx]:.3e} > {LEAK_ERROR:g} at t={t:g} with dim={dim}; "
                "increase dim")
        rho_q = np.einsum("ank,bnk,k->ab", psi_t, psi_t.conj(), weights)
        rho_q = (rho_q + rho_q.conj().T) / 2.0
        conc[idx] = wootters_concurrence(rho_q)
        if with_uv:
            i_t = _coherence_from_reduced(rho_q, qubit_init)
            u[idx], v[idx] = i_t.real, i_t.imag
    return _series.ConcurrenceSeries(
        engine="oracle",
        t=times,
        omega_t=params.omega * times,
        concurrence=conc,
        u=u,
        v=v,
        leakage=leak,
        meta={
            "qubit_init": qubit_init,
            "oscillator": spec_label(spec),
            "dim": dim,
            "params": {"omega": params.omega, "lambda": params.lambda_,
                       "omega0": params.omega0},
            "leakage_flagged": bool(np.any(leak > LEAK_FLAG)),
        },
    )
