"""Closed-form evolution and concurrence for the degenerate (omega0 = 0) model.

With omega0 = 0 the Hamiltonian commutes with the collective sigma_x, so each
|j,m> qubit sector sees a displaced oscillator.  A coherent state stays
coherent inside a sector and only picks up an m-dependent trajectory and
phase; everything below follows from that single fact.

For the Bell state (|e,g> + |g,e>)/sqrt(2) the reduced qubit state depends on
one complex number, the overlap integral

    I(t) = integral d^2alpha P(alpha) exp(-8i beta f(omega t, alpha))
           * exp(-32 beta^2 sin^2(omega t / 2)),

where P is the Glauber-Sudarshan function of the initial oscillator state and
f(omega t, alpha) = sin(omega t/2) (alpha* e^{i omega t/2} + alpha e^{-i omega t/2}).
The concurrence is |I(t)|, which reduces to the modulus of the Fourier
transform of P evaluated on a circle of radius 16 beta sin(omega t / 2).

Scalar ``t`` arguments may also be 1-d arrays; results broadcast.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .model import (
    Coherent,
    ExplicitDensity,
    Fock,
    ModelParams,
    NondegenerateParamsWarning,
    OscillatorSpec,
    QubitDensity,
    Thermal,
    clamp_unit,
)

logger = logging.getLogger(__name__)

_JM_LEVELS = ((1, 1), (1, 0), (0, 0), (1, -1))


def _require_degenerate(params: ModelParams) -> None:
    if params.omega0 != 0.0:
        warnings.warn(
            f"omega0 = {params.omega0:g} ignored: the closed-form engine models the "
            "degenerate point omega0 = 0 (use the oracle engine for omega0 > 0)",
            NondegenerateParamsWarning,
            stacklevel=3,
        )


def f_phase(omega_t, alpha: complex):
    """The real phase kernel sin(wt/2) * (alpha* e^{i wt/2} + alpha e^{-i wt/2}).

    ``omega_t`` is the dimensionless product omega * t.
    """
    omega_t = np.asarray(omega_t, dtype=float)
    alpha = complex(alpha)
    out = np.sin(omega_t / 2.0) * 2.0 * (alpha * np.exp(-0.5j * omega_t)).real
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CoherentBranch:
    """One |j,m> sector of an evolved product state |j,m> (x) |alpha>."""

    jm: tuple
    alpha_t: complex
    phase: complex


def evolve_product_state(jm: tuple, alpha: complex, t: float,
                         params: ModelParams) -> CoherentBranch:
    """Exact evolution of |j,m> (x) |alpha> under the degenerate Hamiltonian.

    The oscillator part stays coherent with amplitude
    (alpha + 2 beta_m) e^{-i omega t} - 2 beta_m and the branch acquires the
    phase exp(-2i beta_m f(omega t, alpha)) exp(4i beta_m^2 (omega t - sin omega t)).
    """
    if tuple(jm) not in _JM_LEVELS:
        raise ValueError(f"jm must be one of {_JM_LEVELS}, got {jm!r}")
    _require_degenerate(params)
    alpha = complex(alpha)
    m = jm[1]
    bm = params.beta_m(m)
    wt = params.omega * t
    alpha_t = (alpha + 2.0 * bm) * np.exp(-1j * wt) - 2.0 * bm
    phase = np.exp(-2j * bm * f_phase(wt, alpha)) * np.exp(4j * bm * bm * (wt - np.sin(wt)))
    return CoherentBranch(tuple(jm), complex(alpha_t), complex(phase))


def _envelope(t, params: ModelParams):
    """Gaussian overlap of the two counter-displaced branches, exp(-32 b^2 sin^2(wt/2))."""
    s = np.sin(params.omega * np.asarray(t, dtype=float) / 2.0)
    return np.exp(-32.0 * params.beta ** 2 * s * s)


def laguerre(n: int, x):
    """Laguerre polynomial L_n(x) by the stable three-term recurrence."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return float(prev) if prev.ndim == 0 else prev
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0)
    return float(cur) if cur.ndim == 0 else cur


def coherence_integral(spec: OscillatorSpec, t, params: ModelParams):
    """The overlap integral I(t) controlling the off-diagonal qubit coherence.

    Closed forms exist for thermal, coherent and number-state preparations;
    an :class:`~tc2q.model.ExplicitDensity` has no closed form here and must
    go through the Fock-space oracle.
    """
    _require_degenerate(params)
    beta = params.beta
    wt = params.omega * np.asarray(t, dtype=float)
    s = np.sin(wt / 2.0)
    env = np.exp(-32.0 * beta ** 2 * s * s)
    if isinstance(spec, Thermal):
        out = env * np.exp(-64.0 * beta ** 2 * spec.mean_n * s * s) + 0j
    elif isinstance(spec, Coherent):
        out = env * np.exp(-8j * beta * f_phase(wt, spec.alpha0))
    elif isinstance(spec, Fock):
        out = laguerre(spec.n_index, (8.0 * beta * s) ** 2) * env + 0j
    elif isinstance(spec, ExplicitDensity):
        raise TypeError("no closed form for an explicit oscillator density; "
                        "use the oracle engine")
    else:
        raise TypeError(f"not an oscillator spec: {spec!r}")
    return complex(out) if out.ndim == 0 else out


def reduced_qubit_density_psi_plus(spec: OscillatorSpec, t: float,
                                   params: ModelParams) -> QubitDensity:
    """Reduced qubit state at time t for the initial Bell state (|eg>+|ge>)/sqrt(2).

    In the eg ordering the matrix is fully determined by u = Re I(t) and
    v = Im I(t):

        (1/4) [[1-u,  iv,   iv,  1-u],
               [-iv,  1+u,  1+u, -iv],
               [-iv,  1+u,  1+u, -iv],
               [1-u,  iv,   iv,  1-u]]
    """
    i_t = coherence_integral(spec, float(t), params)
    u, v = i_t.real, i_t.imag
    top, mid = 1.0 - u, 1.0 + u
    m = np.array([
        [top, 1j * v, 1j * v, top],
        [-1j * v, mid, mid, -1j * v],
        [-1j * v, mid, mid, -1j * v],
        [top, 1j * v, 1j * v, top],
    ]) / 4.0
    return QubitDensity(m, "eg")


def fourier_arguments(t, params: ModelParams):
    """Arguments (k1, k2) at which the transformed P function is evaluated.

    k1 = 8 beta sin(omega t), k2 = 8 beta (cos(omega t) - 1); they satisfy
    k1^2 + k2^2 = (16 beta sin(omega t / 2))^2.
    """
    wt = params.omega * np.asarray(t, dtype=float)
    k1 = 8.0 * params.beta * np.sin(wt)
    k2 = 8.0 * params.beta * (np.cos(wt) - 1.0)
    if wt.ndim == 0:
        return float(k1), float(k2)
    return k1, k2


def concurrence_general(p_tilde: Callable, t, params: ModelParams):
    """Concurrence from the Fourier transform of an arbitrary P function.

    ``p_tilde(k1, k2)`` must implement
    integral dx dy P(x, y) exp(-i (k1 x + k2 y)) with alpha = x + i y.
    """
    _require_degenerate(params)
    k1, k2 = fourier_arguments(t, params)
    val = np.asarray(p_tilde(k1, k2), dtype=complex)
    if not (np.all(np.isfinite(val.real)) and np.all(np.isfinite(val.imag))):
        raise ValueError(f"p_tilde returned a non-finite value at k1={k1!r}, k2={k2!r}")
    return clamp_unit(np.abs(val) * _envelope(t, params))


def concurrence_thermal(mean_n: float, t, params: ModelParams):
    """C(t) = exp(-32 beta^2 sin^2(omega t/2) (1 + 2 mean_n))."""
    if not math.isfinite(mean_n) or mean_n < 0:
        raise ValueError(f"mean_n must be finite and >= 0, got {mean_n!r}")
    _require_degenerate(params)
    s = np.sin(params.omega * np.asarray(t, dtype=float) / 2.0)
    return clamp_unit(np.exp(-32.0 * params.beta ** 2 * s * s * (1.0 + 2.0 * mean_n)))


def concurrence_coherent(alpha0: complex, t, params: ModelParams):
    """C(t) = exp(-32 beta^2 sin^2(omega t/2)), independent of alpha0.

    The coherent amplitude only rotates the phase of I(t); ``alpha0`` is
    accepted (and validated) purely to document that independence.
    """
    Coherent(alpha0)
    _require_degenerate(params)
    return clamp_unit(_envelope(t, params))


def concurrence_fock(n_index: int, t, params: ModelParams):
    """C(t) = |L_n((8 beta sin(wt/2))^2)| exp(-32 beta^2 sin^2(wt/2)) for |n>."""
    _require_degenerate(params)
    s = np.sin(params.omega * np.asarray(t, dtype=float) / 2.0)
    return clamp_unit(np.abs(laguerre(int(n_index), (8.0 * params.beta * s) ** 2))
                      * np.exp(-32.0 * params.beta ** 2 * s * s))


def coherence_integral_fock_sum(n_index: int, t: float, params: ModelParams) -> complex:
    """Brute-force binomial sum for I(t) of a number state, summed exactly.

    Cross-check for :func:`concurrence_fock`: the same quantity written as

        sum_m C(n, m) / (n-m)! * (8i beta sin(wt/2))^{2(n-m)} * envelope.

    Terms alternate in sign and naive float summation loses about seven
    digits by n = 20, so the polynomial part is accumulated in exact
    rational arithmetic and rounded once at the end.
    """
    if not isinstance(n_index, (int, np.integer)) or n_index < 0:
        raise ValueError(f"n_index must be a non-negative integer, got {n_index!r}")
    _require_degenerate(params)
    n = int(n_index)
    wt = params.omega * float(t)
    base = 8.0 * params.beta * math.sin(wt / 2.0)
    y = Fraction(base) ** 2 if base != 0.0 else Fraction(0)
    total = Fraction(0)
    for m in range(n + 1):
        k = n - m
        # (8i beta sin)^2k = (-1)^k y^k
        total += Fraction((-1) ** k * math.comb(n, m), math.factorial(k)) * y ** k
    poly = float(total)
    if not math.isfinite(poly):
        raise OverflowError(f"binomial sum overflows float range at n_index={n}")
    return complex(poly * math.exp(-32.0 * params.beta ** 2 * math.sin(wt / 2.0) ** 2))


def half_period_concurrence(spec: OscillatorSpec, beta: float) -> float:
    """Concurrence at the revival midpoint omega t = pi, as a function of beta."""
    if not math.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and >= 0, got {beta!r}")
    params = ModelParams(omega=1.0, lambda_=beta)
    if isinstance(spec, Thermal):
        return concurrence_thermal(spec.mean_n, math.pi, params)
    if isinstance(spec, Coherent):
        return concurrence_coherent(spec.alpha0, math.pi, params)
    if isinstance(spec, Fock):
        return concurrence_fock(spec.n_index, math.pi, params)
    if isinstance(spec, ExplicitDensity):
        raise TypeError("no closed form for an explicit oscillator density; "
                        "use the oracle engine")
    raise TypeError(f"not an oscillator spec: {spec!r}")


# --- transformed P functions for the three standard preparations ------------

def p_tilde_thermal(mean_n: float) -> Callable:
    """P~(k1, k2) = exp(-mean_n (k1^2 + k2^2) / 4)."""
    if not math.isfinite(mean_n) or mean_n < 0:
        raise ValueError(f"mean_n must be finite and >= 0, got {mean_n!r}")

    def p_tilde(k1, k2):
        return np.exp(-mean_n * (np.asarray(k1) ** 2 + np.asarray(k2) ** 2) / 4.0)

    return p_tilde


def p_tilde_coherent(alpha0: complex) -> Callable:
    """P~(k1, k2) = exp(-i (k1 Re alpha0 + k2 Im alpha0)), a pure phase."""
    a = complex(Coherent(alpha0).alpha0)

    def p_tilde(k1, k2):
        return np.exp(-1j * (np.asarray(k1) * a.real + np.asarray(k2) * a.imag))

    return p_tilde


def p_tilde_fock(n_index: int) -> Callable:
    """P~(k1, k2) = L_n((k1^2 + k2^2) / 4)."""
    n = Fock(n_index).n_index

    def p_tilde(k1, k2):
        return laguerre(n, (np.asarray(k1) ** 2 + np.asarray(k2) ** 2) / 4.0)

    return p_tilde
