"""Parameters, bases and state containers for two qubits coupled to one cavity mode.

The model is a pair of two-level systems coupled to a single harmonic
oscillator through sigma_x, without the rotating-wave approximation:

    H = (omega0/2) (sz1 + sz2) + omega * adag a + lambda (a + adag)(sx1 + sx2)

with hbar = 1 throughout the quantum engines.  The closed-form engine in
:mod:`tc2q.analytic` treats the degenerate case omega0 = 0, where the qubit
part of H is diagonal in the collective sigma_x eigenbasis.

Conventions
-----------
* sigma_z |e> = +|e>, sigma_z |g> = -|g>.
* |+-> = (|e> +- |g>) / sqrt(2), so sigma_x |+-> = +-|+->.
* Three orderings are used for 4x4 two-qubit matrices, and every matrix
  handed across module boundaries carries a basis tag:

  - ``"eg"``: product basis |e,e>, |e,g>, |g,e>, |g,g>
  - ``"xx"``: product basis |+,+>, |+,->, |-,+>, |-,->
  - ``"jm"``: eigenbasis of sx1 + sx2 with eigenvalue 2m, ordered
    |1,1>, |1,0>, |0,0>, |1,-1>

Mixing these orderings silently is the dominant failure mode of the whole
package, which is why plain arrays are wrapped in :class:`QubitDensity`
as soon as they leave a computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

BASES = ("eg", "xx", "jm")
BELL_KINDS = ("psi_plus", "psi_minus", "phi_plus", "phi_minus")

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10

#: slack accepted when clamping a concurrence back into [0, 1]
CLAMP_SLACK = 1e-9


class NondegenerateParamsWarning(UserWarning):
    """Raised when omega0 > 0 reaches an engine that only models omega0 = 0."""


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the coupled system.

    Parameters
    ----------
    omega : float
        Cavity frequency, > 0.
    lambda_ : float
        Qubit-cavity coupling, real and >= 0.
    omega0 : float
        Qubit splitting.  The closed-form engines require the degenerate
        point omega0 = 0 and warn when handed anything else; the
        Fock-space oracle honours omega0 exactly.
    """

    omega: float
    lambda_: float
    omega0: float = 0.0

    def __post_init__(self) -> None:
        for name, value in (("omega", self.omega), ("lambda_", self.lambda_),
                            ("omega0", self.omega0)):
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.lambda_ < 0:
            raise ValueError(f"lambda_ must be >= 0, got {self.lambda_}")
        if self.omega0 < 0:
            raise ValueError(f"omega0 must be >= 0, got {self.omega0}")

    @property
    def beta(self) -> float:
        """Dimensionless coupling lambda/omega."""
        return self.lambda_ / self.omega

    def beta_m(self, m: int) -> float:
        """m * beta for a collective sigma_x quantum number m in {-1, 0, +1}."""
        if m not in (-1, 0, 1):
            raise ValueError(f"m must be -1, 0 or +1, got {m}")
        return m * self.beta


def clamp_unit(value, slack: float = CLAMP_SLACK, label: str = "concurrence"):
    """Clamp values in [-slack, 0) or (1, 1+slack] onto [0, 1].

    Larger excursions and non-finite values raise ``ValueError``; round-off
    is silently repaired.  Accepts scalars or arrays.
    """
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite {label}: {value!r}")
    if np.any(arr < -slack) or np.any(arr > 1.0 + slack):
        raise ValueError(
            f"{label} outside [0, 1] beyond the {slack:g} clamp slack: "
            f"range [{arr.min():.6g}, {arr.max():.6g}]")
    out = np.clip(arr, 0.0, 1.0)
    return float(out) if np.isscalar(value) or arr.ndim == 0 else out


# --- basis bookkeeping -----------------------------------------------------

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
_S = 1.0 / math.sqrt(2.0)

# rows |1,1>, |1,0>, |0,0>, |1,-1> in terms of |++>, |+->, |-+>, |-->
_JM_FROM_XX = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, _S, _S, 0.0],
    [0.0, _S, -_S, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])

# component maps onto the xx ordering; both are symmetric orthogonal, hence
# involutive, which keeps round trips exact
_TO_XX = {
    "xx": np.eye(4),
    "eg": np.kron(_HADAMARD, _HADAMARD),
    "jm": _JM_FROM_XX,
}


def basis_transform(source: str, target: str) -> np.ndarray:
    """Real orthogonal matrix taking state components from one basis to another."""
    if source not in BASES or target not in BASES:
        raise ValueError(f"basis must be one of {BASES}, got {source!r} -> {target!r}")
    return _TO_XX[target].T @ _TO_XX[source]


@dataclass(frozen=True)
class QubitDensity:
    """A validated two-qubit density matrix with an explicit basis tag."""

    matrix: np.ndarray
    basis: str = "eg"

    def __post_init__(self) -> None:
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}, got {self.basis!r}")
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("density matrix has non-finite entries")
        if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise ValueError(f"density matrix trace {np.trace(m)} is not 1 within 1e-12")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
        if w.min() < EIGENVALUE_FLOOR:
            raise ValueError(f"density matrix has eigenvalue {w.min():.3e} < -1e-10")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def in_basis(self, target: str) -> "QubitDensity":
        return change_basis(self, target)


def change_basis(rho: QubitDensity, target: str) -> QubitDensity:
    """Re-express a tagged density matrix in another ordering."""
    if target == rho.basis:
        return rho
    T = basis_transform(rho.basis, target)
    return QubitDensity(T @ rho.matrix @ T.T, target)


# --- Bell states ------------------------------------------------------------

_BELL_EG = {
    "psi_plus": np.array([0.0, 1.0, 1.0, 0.0]) * _S,
    "psi_minus": np.array([0.0, 1.0, -1.0, 0.0]) * _S,
    "phi_plus": np.array([1.0, 0.0, 0.0, 1.0]) * _S,
    "phi_minus": np.array([1.0, 0.0, 0.0, -1.0]) * _S,
}


def bell_vector(kind: str, basis: str = "eg") -> np.ndarray:
    """State vector of a Bell state in the requested basis."""
    if kind not in BELL_KINDS:
        raise ValueError(f"kind must be one of {BELL_KINDS}, got {kind!r}")
    v = _BELL_EG[kind].astype(complex)
    if basis != "eg":
        v = basis_transform("eg", basis) @ v
    return v


def bell_state(kind: str, basis: str = "eg") -> QubitDensity:
    """Density matrix of a Bell state in the requested basis."""
    v = bell_vector(kind, basis)
    return QubitDensity(np.outer(v, v.conj()), basis)


# --- oscillator preparations ------------------------------------------------

@dataclass(frozen=True)
class Thermal:
    """Bose-Einstein mixture with mean photon number ``mean_n`` >= 0."""

    mean_n: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean_n) or self.mean_n < 0:
            raise ValueError(f"mean_n must be finite and >= 0, got {self.mean_n!r}")


@dataclass(frozen=True)
class Coherent:
    """Coherent state |alpha0>."""

    alpha0: complex

    def __post_init__(self) -> None:
        a = complex(self.alpha0)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValueError(f"alpha0 must be finite, got {self.alpha0!r}")
        object.__setattr__(self, "alpha0", a)


@dataclass(frozen=True)
class Fock:
    """Number state |n_index>."""

    n_index: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_index, (int, np.integer)) or self.n_index < 0:
            raise ValueError(f"n_index must be a non-negative integer, got {self.n_index!r}")


@dataclass(frozen=True)
class ExplicitDensity:
    """An arbitrary oscillator density matrix, handled only by the oracle."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"oscillator density must be square, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > 1e-9:
            raise ValueError("oscillator density is not Hermitian within 1e-9")
        if abs(np.trace(m) - 1.0) > 1e-9:
            raise ValueError(f"oscillator density trace {np.trace(m)} is not 1 within 1e-9")
        if np.linalg.eigvalsh((m + m.conj().T) / 2.0).min() < -1e-9:
            raise ValueError("oscillator density has an eigenvalue below -1e-9")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


OscillatorSpec = Union[Thermal, Coherent, Fock, ExplicitDensity]


def spec_label(spec: OscillatorSpec) -> str:
    """Short human-readable tag used in sweep tables and logs."""
    if isinstance(spec, Thermal):
        return f"thermal(mean_n={spec.mean_n:g})"
    if isinstance(spec, Coherent):
        a = spec.alpha0
        return f"coherent(alpha0={a.real:g}{a.imag:+g}j)"
    if isinstance(spec, Fock):
        return f"fock(n={spec.n_index})"
    if isinstance(spec, ExplicitDensity):
        return f"explicit(dim={spec.matrix.shape[0]})"
    raise TypeError(f"not an oscillator spec: {spec!r}")
