"""Exact reference solutions for the solvable chains.

Everything here is evaluated in log space where factorial-type
prefactors appear, so large site indices stay finite.  The finite-chain
mode decomposition diagonalizes the (K+1) x (K+1) tridiagonal operator
and folds the +/- frequency pairs into cosine weights; the model
spectral density family carries closed-form moments, autocorrelation and
density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple

import numpy as np

from .errors import SupportExceededError, UnsupportedFamilyError
from .moments import MomentSequence, moments_to_lanczos
from .observables import ObservableSeries, entropy_of_probabilities
from .sequences import StitchedSequence
from .special import bessel_j_array, log_gamma

__all__ = [
    "syk_wavefunction",
    "coherent_wavefunction",
    "su2_wavefunction",
    "syk_eta1_observables",
    "bessel_chain_wavefunction",
    "ModeDecomposition",
    "finite_chain_modes",
    "SpectralModel",
    "spectral_model_moments",
    "spectral_model_autocorrelation",
    "spectral_model_density",
    "spectral_model_sequence",
    "table1_reference",
    "syk_profile",
    "coherent_profile",
    "su2_profile",
    "bessel_chain_profile",
    "series_from_profile",
]


def syk_wavefunction(alpha: float, eta: float, n: int, t: float) -> float:
    """phi_n(t) = sqrt(Gamma(n+eta)/(n! Gamma(eta))) tanh^n(at)/cosh^eta(at)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    if n < 0:
        raise ValueError("n must be >= 0")
    x = alpha * t
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    pref = 0.5 * (log_gamma(n + eta) - log_gamma(n + 1.0) - log_gamma(eta))
    mag = pref + n * math.log(abs(math.tanh(x))) - eta * math.log(math.cosh(x))
    sign = -1.0 if (x < 0 and n % 2 == 1) else 1.0
    return sign * math.exp(mag)


def coherent_wavefunction(alpha: float, n: int, t: float) -> float:
    """phi_n(t) = exp(-a^2 t^2 / 2) (a t)^n / sqrt(n!)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = alpha * t
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    mag = -0.5 * x * x + n * math.log(abs(x)) - 0.5 * log_gamma(n + 1.0)
    sign = -1.0 if (x < 0 and n % 2 == 1) else 1.0
    return sign * math.exp(mag)


def su2_wavefunction(alpha: float, j: float, n: int, t: float) -> float:
    """phi_n(t) = sqrt(C(2j, n)) sin^n(at) cos^(2j-n)(at) on 0 <= n <= 2j."""
    two_j = int(round(2 * j))
    if two_j < 1 or abs(2 * j - two_j) > 1e-12:
        raise ValueError("j must be a positive integer or half integer")
    if n < 0 or n > two_j:
        raise SupportExceededError(n, two_j)
    x = alpha * t
    binom = math.exp(
        log_gamma(two_j + 1.0) - log_gamma(n + 1.0) - log_gamma(two_j - n + 1.0)
    )
    return math.sqrt(binom) * math.sin(x) ** n * math.cos(x) ** (two_j - n)


def syk_eta1_observables(alpha: float, t: float) -> Tuple[float, float]:
    """(C_K, S_K) = (sinh^2, cosh^2 ln cosh^2 - sinh^2 ln sinh^2) at eta = 1."""
    x = alpha * t
    s2 = math.sinh(x) ** 2
    c2 = 1.0 + s2
    if s2 == 0.0:
        return 0.0, 0.0
    return s2, c2 * math.log(c2) - s2 * math.log(s2)


def bessel_chain_wavefunction(variant: str, omega0: float, n: int, t: float) -> float:
    """Closed forms for the two constant-hopping chains.

    variant "A" (b_n = w0/2):          phi_n = J_n(w0 t) + J_{n+2}(w0 t)
    variant "B" (b_1 = w0/sqrt2, rest): phi_n = c_n J_n(w0 t), c_0 = 1, c_n = sqrt2
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x = omega0 * t
    if variant == "A":
        js = bessel_j_array(n + 2, x)
        return float(js[n] + js[n + 2])
    if variant == "B":
        js = bessel_j_array(n, x)
        c = 1.0 if n == 0 else math.sqrt(2.0)
        return c * float(js[n])
    raise ValueError("variant must be 'A' or 'B'")


# ---------------------------------------------------------------------------
# probability profiles (vectorized over n) and series built from them


def syk_profile(alpha: float, eta: float, t: float, n_sites: int) -> np.ndarray:
    n = np.arange(n_sites, dtype=float)
    x = alpha * t
    if x == 0.0:
        p = np.zeros(n_sites)
        p[0] = 1.0
        return p
    from scipy.special import gammaln

    ln_p = (
        gammaln(n + eta)
        - gammaln(n + 1.0)
        - gammaln(eta)
        + 2.0 * n * math.log(abs(math.tanh(x)))
        - 2.0 * eta * math.log(math.cosh(x))
    )
    return np.exp(ln_p)


def coherent_profile(alpha: float, t: float, n_sites: int) -> np.ndarray:
    n = np.arange(n_sites, dtype=float)
    x = alpha * t
    if x == 0.0:
        p = np.zeros(n_sites)
        p[0] = 1.0
        return p
    from scipy.special import gammaln

    lam = x * x
    return np.exp(-lam + n * math.log(lam) - gammaln(n + 1.0))


def su2_profile(alpha: float, j: float, t: float) -> np.ndarray:
    two_j = int(round(2 * j))
    n = np.arange(two_j + 1)
    return np.array([su2_wavefunction(alpha, j, int(k), t) ** 2 for k in n])


def bessel_chain_profile(variant: str, omega0: float, t: float, n_sites: int) -> np.ndarray:
    x = omega0 * t
    js = bessel_j_array(n_sites + 2, x)
    if variant == "A":
        amps = js[:n_sites] + js[2 : n_sites + 2]
    elif variant == "B":
        amps = js[:n_sites].copy()
        amps[1:] *= math.sqrt(2.0)
    else:
        raise ValueError("variant must be 'A' or 'B'")
    return amps ** 2


def series_from_profile(profile_fn, times: Sequence[float], tail_rel: float = 1e-16) -> ObservableSeries:
    """ObservableSeries from a closed-form probability profile.

    profile_fn(t, n_sites) must return occupation probabilities; the site
    count is grown until the trailing mass is negligible relative to
    tail_rel, so truncation never biases the sums.
    """
    times = [float(t) for t in times]
    cks, sks, phis, nerrs, sizes = [], [], [], [], []
    n_sites = 64
    for t in times:
        while True:
            p = profile_fn(t, n_sites)
            if len(p) < n_sites:
                break  # finite chain: the profile ignores the requested size
            tail = float(np.sum(p[-8:]))
            if tail <= tail_rel or n_sites >= 50_000_000:
                break
            n_sites = int(math.ceil(n_sites * 1.6)) + 8
        total = float(np.sum(p))
        cks.append(float(np.sum(np.arange(len(p)) * p)))
        sks.append(entropy_of_probabilities(p))
        phis.append(math.sqrt(max(p[0], 0.0)))
        nerrs.append(abs(total - 1.0))
        sizes.append(len(p))
    return ObservableSeries(
        times=tuple(times),
        c_k=tuple(cks),
        s_k=tuple(sks),
        phi0=tuple(phis),
        norm_error=tuple(nerrs),
        active_size=tuple(sizes),
    )


# ---------------------------------------------------------------------------
# finite chains


@dataclass(frozen=True)
class ModeDecomposition:
    """Cosine decomposition phi_0(t) = a_0 + sum a_l cos(omega_l t)."""

    zero_mode_weight: float
    modes: Tuple[Tuple[float, float], ...]  # (omega_l > 0, a_l), omega increasing
    provenance: Dict[str, float]

    def __post_init__(self):
        total = self.zero_mode_weight + sum(a for _, a in self.modes)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"mode weights sum to {total}, expected 1")
        omegas = [w for w, _ in self.modes]
        if any(w2 <= w1 for w1, w2 in zip(omegas, omegas[1:])):
            raise ValueError("mode frequencies must be strictly increasing")

    def phi0(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.zero_mode_weight)
        for w, a in self.modes:
            out += a * np.cos(w * t)
        return out


def finite_chain_modes(b: Sequence[float], K: int = None) -> ModeDecomposition:
    """Eigen-decomposition of the finite chain with coefficients b_1..b_K.

    Diagonalizes the (K+1) x (K+1) tridiagonal operator; each +/- pair of
    eigenvalues is folded into one cosine mode with weight
    a_l = 2 |v_l(0)|^2, and a zero eigenvalue contributes a_0 = |v_0(0)|^2.
    """
    b = np.asarray([float(x) for x in b], dtype=float)
    if K is None:
        K = len(b)
    if K != len(b) or K < 1:
        raise ValueError("K must equal the number of coefficients, >= 1")
    if np.any(b <= 0):
        raise ValueError("coefficients must be positive")
    mat = np.zeros((K + 1, K + 1))
    idx = np.arange(K)
    mat[idx, idx + 1] = b
    mat[idx + 1, idx] = b
    evals, evecs = np.linalg.eigh(mat)
    scale = float(np.max(np.abs(evals))) or 1.0
    zero_tol = 1e-9 * scale
    a0 = 0.0
    pos = []
    for lam, v0 in zip(evals, evecs[0, :]):
        if abs(lam) <= zero_tol:
            a0 += float(v0 * v0)
        elif lam > 0:
            pos.append((float(lam), 2.0 * float(v0 * v0)))
    pos.sort(key=lambda p: p[0])
    recon = a0 + sum(a for _, a in pos)
    return ModeDecomposition(
        zero_mode_weight=a0,
        modes=tuple(pos),
        provenance={
            "dimension": float(K + 1),
            "weight_residual": abs(recon - 1.0),
            "zero_tolerance": zero_tol,
        },
    )


# ---------------------------------------------------------------------------
# model spectral density family


@dataclass(frozen=True)
class SpectralModel:
    """Density Phi(w) = pi/(w0 Gamma(nu+1)) |w/w0|^nu exp(-|w/w0|).

    Exponential decay at large frequency corresponds to asymptotically
    linear hopping growth with rate alpha = pi w0 / 2.
    """

    nu: float
    omega0: float

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError("nu must be >= 0")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")

    @classmethod
    def with_rate(cls, nu: float, alpha: float = 1.0) -> "SpectralModel":
        return cls(nu=nu, omega0=2.0 * alpha / math.pi)

    @property
    def alpha(self) -> float:
        return math.pi * self.omega0 / 2.0


def spectral_model_moments(model: SpectralModel, n: int, exact: bool = False):
    """mu_{2n} = w0^(2n) Gamma(1+nu+2n)/Gamma(1+nu).

    With exact=True (integer nu and rational w0) the value is returned as
    an exact Fraction.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if exact:
        nu = model.nu
        if abs(nu - round(nu)) > 0:
            raise ValueError("exact moments need integer nu")
        w0 = Fraction(model.omega0)  # binary floats are exact rationals
        v = Fraction(1)
        for k in range(1, 2 * n + 1):
            v *= int(round(nu)) + k
        return w0 ** (2 * n) * v
    ln = 2 * n * math.log(model.omega0) + log_gamma(1 + model.nu + 2 * n) - log_gamma(1 + model.nu)
    return math.exp(ln)


def spectral_model_autocorrelation(model: SpectralModel, t: float) -> float:
    """C(t) = Re (1 - i w0 t)^(-(1+nu)); real by conjugate symmetry."""
    z = (1.0 - 1j * model.omega0 * t) ** (-(1.0 + model.nu))
    return float(z.real)


def spectral_model_density(model: SpectralModel, omega: float) -> float:
    """Phi(omega); the |w|^nu factor uses the 0^0 = 1 convention at nu = 0."""
    u = abs(omega) / model.omega0
    pref = math.pi / (model.omega0 * math.exp(log_gamma(model.nu + 1.0)))
    power = 1.0 if (u == 0.0 and model.nu == 0.0) else u ** model.nu
    return pref * power * math.exp(-u)


def spectral_model_sequence(
    model: SpectralModel,
    exact_count: int = 96,
    fit_tail: int = 48,
) -> StitchedSequence:
    """Hopping sequence of the model density: exact head, fitted linear tail.

    The first `exact_count` coefficients come from the exact rational
    moment problem in omega0 = 1 units (then scaled); beyond the head the
    sequence continues as alpha*n + gamma_parity + c_parity/n with the
    parity constants fitted on the last `fit_tail` exact coefficients.
    The even/odd split matters: the coefficients of this family approach
    their linear asymptote on two interleaved branches.
    """
    if exact_count < 8:
        raise ValueError("exact_count must be >= 8")
    unit = SpectralModel(nu=model.nu, omega0=1.0)
    mu = MomentSequence.from_values(
        [spectral_model_moments(unit, k, exact=True) for k in range(exact_count + 1)]
    )
    conv = moments_to_lanczos(mu, exact_count)
    b_unit = np.asarray(conv.coefficients, dtype=float)
    alpha_unit = math.pi / 2.0
    n = np.arange(1.0, exact_count + 1)
    resid = b_unit - alpha_unit * n
    gammas = {}
    for parity in (0, 1):
        mask = (np.arange(1, exact_count + 1) % 2 == parity) & (
            np.arange(1, exact_count + 1) > exact_count - fit_tail
        )
        design = np.stack([np.ones(int(mask.sum())), 1.0 / n[mask]], axis=1)
        coef, *_ = np.linalg.lstsq(design, resid[mask], rcond=None)
        gammas[parity] = coef
    w0 = model.omega0
    return StitchedSequence(
        head=tuple(w0 * b_unit),
        alpha=alpha_unit * w0,
        gamma_even=w0 * float(gammas[0][0]),
        gamma_odd=w0 * float(gammas[1][0]),
        c_even=w0 * float(gammas[0][1]),
        c_odd=w0 * float(gammas[1][1]),
    )


# ---------------------------------------------------------------------------
# long-time reference asymptotics (qualitative: overall constants undetermined)

_TABLE1 = {
    "linear": lambda p, t: (math.exp(2.0 * p["alpha"] * t), 2.0 * p["alpha"] * t),
    "log_corrected_linear": lambda p, t: (
        math.exp(math.sqrt(4.0 * p["alpha"] * t)),
        math.sqrt(4.0 * p["alpha"] * t),
    ),
    "power_law": lambda p, t: (
        (2.0 * p["alpha"] * t) ** (1.0 / (1.0 - p["delta"])),
        math.log(2.0 * p["alpha"] * t),
    ),
    "power_log": lambda p, t: (
        (2.0 * p["alpha"] * t) ** (1.0 / (1.0 - p["delta"]))
        * math.log(2.0 * p["alpha"] * t) ** (p["sign"] / (1.0 - p["delta"])),
        math.log(2.0 * p["alpha"] * t),
    ),
    "log_growth": lambda p, t: (
        2.0 * p["alpha"] * t * math.log(2.0 * p["alpha"] * t),
        math.log(2.0 * p["alpha"] * t),
    ),
    "constant": lambda p, t: (2.0 * p["b"] * t, math.log(2.0 * p["b"] * t)),
}


def table1_reference(family: str, params: Dict[str, float], t: float) -> Tuple[float, float]:
    """Leading long-time (C_K, S_K) asymptote for one of the six families.

    Qualitative reference curves: the overall constants are undetermined,
    only the functional time dependence is meaningful.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    try:
        fn = _TABLE1[family]
    except KeyError:
        raise UnsupportedFamilyError(
            f"unknown family {family!r}; known: {sorted(_TABLE1)}"
        ) from None
    return fn(params, t)
