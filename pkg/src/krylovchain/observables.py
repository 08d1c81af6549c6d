"""Observables over chain states: complexity, entropy, relaxation function.

Complexity is the mean chain position sum n |phi_n|^2 and entropy the
Shannon entropy of the occupation probabilities, with the 0*ln(0) = 0
convention guarded against underflow.  The relaxation function phi_0(z)
is evaluated from the continued fraction

    phi_0(z) = 1 / (z + b_1^2 / (z + b_2^2 / (z + ...)))

bottom-up.  Truncating a semi-infinite fraction at depth D leaves an
error that alternates in sign between consecutive depths, so the
evaluation averages depths D and D+1; the tail is seeded with the
constant-coefficient fixed point (-z + sqrt(z^2 + 4 b^2)) / (2 b^2),
which also reproduces the 1/z asymptote at large |z|.  Finite chains
terminate exactly at their support and need no seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from .errors import ConvergenceError, OrderingError
from .evolve import WaveState
from .sequences import LanczosSequence

__all__ = [
    "ObservableSeries",
    "complexity",
    "entropy",
    "series_from_trajectory",
    "relaxation_phi0",
    "ImpulseSpectrum",
    "spectral_density_finite",
]

_UNDERFLOW_GUARD = 1e-300


@dataclass(frozen=True)
class ObservableSeries:
    """Sampled trajectory of scalar observables."""

    times: Tuple[float, ...]
    c_k: Tuple[float, ...]
    s_k: Tuple[float, ...]
    phi0: Tuple[float, ...]
    norm_error: Tuple[float, ...]
    active_size: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.times)
        for name in ("c_k", "s_k", "phi0", "norm_error", "active_size"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length does not match times")
        if any(t2 <= t1 for t1, t2 in zip(self.times, self.times[1:])):
            raise OrderingError("sample times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)


def _probabilities(state: WaveState) -> np.ndarray:
    return state.amplitudes ** 2


def complexity(state: WaveState) -> float:
    """Mean position sum n |phi_n|^2 over the active window."""
    p = _probabilities(state)
    return float(np.sum(np.arange(len(p)) * p))


def entropy(state: WaveState) -> float:
    """Shannon entropy -sum p ln p in nats, with 0 ln 0 = 0."""
    return entropy_of_probabilities(_probabilities(state))


def entropy_of_probabilities(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > _UNDERFLOW_GUARD]
    if len(p) == 0:
        return 0.0
    # summed largest-first so small contributions land on a settled total
    p = np.sort(p)[::-1]
    return float(-np.sum(p * np.log(p))) + 0.0


def series_from_trajectory(states: Iterable[WaveState]) -> ObservableSeries:
    """Reduce a (possibly streaming) trajectory to its observable series."""
    times, cks, sks, phi0s, nerrs, sizes = [], [], [], [], [], []
    last_t = None
    for st in states:
        if last_t is not None and st.t <= last_t:
            raise OrderingError(f"samples out of order at t={st.t}")
        last_t = st.t
        times.append(st.t)
        cks.append(complexity(st))
        sks.append(entropy(st))
        phi0s.append(float(st.amplitudes[0]))
        nerrs.append(st.norm_error)
        sizes.append(st.active_size)
    return ObservableSeries(
        times=tuple(times),
        c_k=tuple(cks),
        s_k=tuple(sks),
        phi0=tuple(phi0s),
        norm_error=tuple(nerrs),
        active_size=tuple(sizes),
    )


def _cf_eval(b_sq: list, z: complex, depth: int) -> complex:
    """Bottom-up continued fraction truncated at `depth` with fixed-point seed."""
    b2_tail = b_sq[depth]
    root = (z * z + 4.0 * b2_tail) ** 0.5
    f = (-z + root) / (2.0 * b2_tail)
    for k in range(depth, 0, -1):
        f = 1.0 / (z + b_sq[k - 1] * f)
    return f


def relaxation_phi0(
    seq: LanczosSequence,
    z: complex,
    depth: int = 20000,
    tol: float = 1e-10,
) -> complex:
    """Relaxation function phi_0(z) from the continued fraction.

    Finite chains are evaluated exactly (the fraction terminates at the
    support).  Semi-infinite chains use depth-averaged truncation and
    raise ConvergenceError when halving the depth moves the value by more
    than `tol` relatively.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    z = complex(z)
    if z == 0:
        raise ValueError("phi_0(z) is evaluated off z = 0; use w_number for the limit")
    sup = seq.support
    if sup is not None:
        b_sq = (seq.b_array(sup) ** 2).tolist()
        f = 1.0 / z
        for k in range(sup, 0, -1):
            f = 1.0 / (z + b_sq[k - 1] * f)
        return _as_scalar(f)

    b_sq = (seq.b_array(depth + 2) ** 2).tolist()
    val_hi = 0.5 * (_cf_eval(b_sq, z, depth) + _cf_eval(b_sq, z, depth + 1))
    d_lo = max(depth // 2, 1)
    val_lo = 0.5 * (_cf_eval(b_sq, z, d_lo) + _cf_eval(b_sq, z, d_lo + 1))
    if abs(val_hi - val_lo) > tol * max(abs(val_hi), 1e-300):
        raise ConvergenceError(
            _as_scalar(val_lo), _as_scalar(val_hi), f"depths {d_lo} vs {depth}"
        )
    return _as_scalar(val_hi)


def _as_scalar(v) -> complex:
    v = complex(v)
    return v.real if v.imag == 0.0 else v


@dataclass(frozen=True)
class ImpulseSpectrum:
    """Spectral density of a finite chain: weighted delta impulses.

    impulses holds (omega, weight) pairs over positive and negative
    frequencies plus an optional zero-frequency impulse; weights are the
    delta prefactors, normalized so sum(weights)/(2 pi) = 1.
    """

    impulses: Tuple[Tuple[float, float], ...]

    def broadened(self, omegas: np.ndarray, width: float) -> np.ndarray:
        """Lorentzian-broadened curve for display only."""
        if width <= 0:
            raise ValueError("width must be positive")
        omegas = np.asarray(omegas, dtype=float)
        out = np.zeros_like(omegas)
        for w0, a in self.impulses:
            out += a * (width / math.pi) / ((omegas - w0) ** 2 + width ** 2)
        return out


def spectral_density_finite(modes, width: Optional[float] = None) -> ImpulseSpectrum:
    """Delta-impulse spectrum of a finite-chain mode decomposition.

    Each positive-frequency mode (omega_l, a_l) contributes pi*a_l at
    +/- omega_l; a zero mode contributes 2*pi*a_0 at omega = 0.  `width`
    is accepted for symmetry with plotting helpers but impulses are never
    numerically broadened here.
    """
    impulses = []
    if modes.zero_mode_weight > 0.0:
        impulses.append((0.0, 2.0 * math.pi * modes.zero_mode_weight))
    for omega, a in modes.modes:
        impulses.append((-omega, math.pi * a))
        impulses.append((omega, math.pi * a))
    impulses.sort(key=lambda p: p[0])
    return ImpulseSpectrum(impulses=tuple(impulses))
