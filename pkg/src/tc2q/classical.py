"""Classical-oscillator counterpart of the quantum model.

The cavity mode is replaced by a classical trajectory (q(t), p(t)) of unit
mass, and the qubits evolve under the resulting time-dependent field.  For
the Bell states studied here <sx1 + sx2> vanishes, so the oscillator is not
driven back and runs free; the pair correlator

    <S+1 S+2>(t) = -1/2 exp(8i beta sqrt(2 omega/hbar) q0 sin^2(omega t/2))
                        exp(-4i beta sqrt(2/(hbar omega)) p0 sin(omega t))

stays on the circle of radius 1/2, and 2 |<S+1 S+2>| plays the role of the
concurrence.  Averaging over a phase-space distribution of initial
conditions is what damps it.

hbar appears explicitly because the classical limit is taken per-term; it
defaults to 1 to match the quantum engines.  Gaussian widths follow the
un-doubled convention exp(-(q - q0)^2 / dq^2), i.e. variance dq^2 / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .model import ModelParams, clamp_unit

DEFAULT_HBAR = 1.0


@dataclass(frozen=True)
class DeltaDist:
    """A single classical initial condition (q0, p0)."""

    q0: float
    p0: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.q0) and math.isfinite(self.p0)):
            raise ValueError(f"q0, p0 must be finite, got ({self.q0!r}, {self.p0!r})")


@dataclass(frozen=True)
class GaussianDist:
    """Gaussian phase-space weight exp(-(q-q_bar)^2/dq^2 - (p-p_bar)^2/dp^2)."""

    q_bar: float
    p_bar: float
    delta_q: float
    delta_p: float

    def __post_init__(self) -> None:
        for name in ("q_bar", "p_bar", "delta_q", "delta_p"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.delta_q <= 0 or self.delta_p <= 0:
            raise ValueError("delta_q and delta_p must be positive")


PhaseSpaceDist = Union[DeltaDist, GaussianDist]


@dataclass(frozen=True)
class ClassicalThermal:
    """Classical thermal ensemble at temperature k_T (energy units)."""

    k_T: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.k_T) or self.k_T <= 0:
            raise ValueError(f"k_T must be finite and > 0, got {self.k_T!r}")


def thermal_widths(k_T: float, params: ModelParams) -> tuple:
    """Equipartition widths (dq, dp) = (sqrt(2 k_T)/omega, sqrt(2 k_T))."""
    k_T = ClassicalThermal(k_T).k_T
    return math.sqrt(2.0 * k_T) / params.omega, math.sqrt(2.0 * k_T)


def minimum_uncertainty_widths(params: ModelParams,
                               hbar: float = DEFAULT_HBAR) -> tuple:
    """Widths (sqrt(hbar/omega), sqrt(hbar omega)) mimicking a coherent state."""
    return math.sqrt(hbar / params.omega), math.sqrt(hbar * params.omega)


def classical_thermal_dist(k_T: float, params: ModelParams) -> GaussianDist:
    dq, dp = thermal_widths(k_T, params)
    return GaussianDist(0.0, 0.0, dq, dp)


def classical_trajectory(q0: float, p0: float, t, params: ModelParams):
    """Free evolution (q, p) of the undriven unit-mass oscillator."""
    wt = params.omega * np.asarray(t, dtype=float)
    q = q0 * np.cos(wt) + (p0 / params.omega) * np.sin(wt)
    p = p0 * np.cos(wt) - params.omega * q0 * np.sin(wt)
    if wt.ndim == 0:
        return float(q), float(p)
    return q, p


def _phase_coefficients(t, params: ModelParams, hbar: float):
    """(a, b) such that the correlator phase is a * q0 + b * p0."""
    wt = params.omega * np.asarray(t, dtype=float)
    a = 8.0 * params.beta * math.sqrt(2.0 * params.omega / hbar) * np.sin(wt / 2.0) ** 2
    b = -4.0 * params.beta * math.sqrt(2.0 / (hbar * params.omega)) * np.sin(wt)
    return a, b


def s_plus_correlator(q0: float, p0: float, t, params: ModelParams,
                      hbar: float = DEFAULT_HBAR):
    """<S+1 S+2>(t) for the initial value -1/2 set by (|eg>+|ge>)/sqrt(2).

    The modulus is exactly 1/2 for every trajectory; only the accumulated
    phase -4 lambda sqrt(2/(hbar omega)) * integral of p depends on (q0, p0).
    """
    a, b = _phase_coefficients(t, params, hbar)
    out = -0.5 * np.exp(1j * (a * q0 + b * p0))
    return complex(out) if np.asarray(out).ndim == 0 else out


def classical_concurrence(dist: PhaseSpaceDist, t, params: ModelParams,
                          hbar: float = DEFAULT_HBAR):
    """Ensemble-averaged 2 |<S+1 S+2>(t)| for a delta or Gaussian ensemble.

    A single trajectory keeps modulus 1/2, so a delta distribution gives
    exactly 1.  A Gaussian average damps the off-diagonal phase:

        C(t) = exp(-32 beta^2 sin^4(wt/2) omega dq^2 / hbar)
             * exp(-8 beta^2 sin^2(wt) dp^2 / (hbar omega)),

    independent of the mean (q_bar, p_bar), which only rotates the phase.
    """
    if isinstance(dist, DeltaDist):
        one = np.ones_like(np.asarray(t, dtype=float))
        return float(one) if one.ndim == 0 else one
    if isinstance(dist, GaussianDist):
        a, b = _phase_coefficients(t, params, hbar)
        out = np.exp(-(a ** 2 * dist.delta_q ** 2 + b ** 2 * dist.delta_p ** 2) / 4.0)
        return clamp_unit(out)
    raise TypeError(f"not a phase-space distribution: {dist!r}")


def classical_concurrence_thermal(k_T: float, t, params: ModelParams,
                                  hbar: float = DEFAULT_HBAR):
    """C(t) = exp(-64 beta^2 sin^2(wt/2) k_T / (hbar omega)).

    Equipartition widths make the sin^4 and sin^2 cos^2 exponents of the
    Gaussian form recombine into a single sin^2.
    """
    k_T = ClassicalThermal(k_T).k_T
    s = np.sin(params.omega * np.asarray(t, dtype=float) / 2.0)
    return clamp_unit(np.exp(-64.0 * params.beta ** 2 * s * s * k_T
                             / (hbar * params.omega)))


def monte_carlo_classical_concurrence(dist: PhaseSpaceDist, t: float,
                                      params: ModelParams, n_samples: int,
                                      seed: int, hbar: float = DEFAULT_HBAR) -> tuple:
    """Monte Carlo estimate (value, std_error) of the ensemble concurrence.

    Estimator: 2 |mean of the sampled correlator|, with a jackknife standard
    error.  Taking the modulus after averaging is what the closed form does;
    the estimator is biased only at the O(1/n) noise floor.  Fixed
    (dist, t, n_samples, seed) reproduces bit-identical results.
    """
    if not isinstance(n_samples, (int, np.integer)) or n_samples < 2:
        raise ValueError(f"n_samples must be an integer >= 2, got {n_samples!r}")
    if isinstance(dist, DeltaDist):
        # every sample is the same trajectory: modulus exactly 1/2, variance 0
        return 1.0, 0.0
    if not isinstance(dist, GaussianDist):
        raise TypeError(f"not a phase-space distribution: {dist!r}")
    rng = np.random.default_rng(seed)
    # exp(-(q-q_bar)^2/dq^2) is a normal with standard deviation dq/sqrt(2)
    q0 = rng.normal(dist.q_bar, dist.delta_q / math.sqrt(2.0), int(n_samples))
    p0 = rng.normal(dist.p_bar, dist.delta_p / math.sqrt(2.0), int(n_samples))
    a, b = _phase_coefficients(float(t), params, hbar)
    z = -0.5 * np.exp(1j * (a * q0 + b * p0))
    n = z.size
    total = z.sum()
    estimate = 2.0 * abs(total) / n
    leave_one_out = 2.0 * np.abs(total - z) / (n - 1)
    std_error = math.sqrt((n - 1) / n * float(((leave_one_out - leave_one_out.mean()) ** 2).sum()))
    return float(np.clip(estimate, 0.0, 1.0)), std_error
