"""Analytical Rician capacity bounds and their asymptotic limits.

All quantities use the normalized channel
``H = sqrt(K/(K+1)) H_los + sqrt(1/(K+1)) H_a`` with unit-modulus LoS entries
and i.i.d. CN(0, 1) scattered entries, and received SNR ``rho = P / sigma2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linkbudget import rician_k_factor


@dataclass(frozen=True)
class BoundInputs:
    n_t: int
    n_r: int
    rho: float
    K: float

    def __post_init__(self):
        if self.n_t < 1 or self.n_r < 1:
            raise ValueError("antenna counts must be >= 1")
        if not self.rho > 0:
            raise ValueError(f"SNR must be > 0, got {self.rho}")
        if not self.K >= 0:
            raise ValueError(f"K-factor must be >= 0, got {self.K}")

    @classmethod
    def from_absorption(cls, n_t: int, n_r: int, rho: float, k: float, d: float) -> "BoundInputs":
        return cls(n_t, n_r, rho, rician_k_factor(k, d))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    z = rng.standard_normal(tuple(shape) + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)


def rician_matrix(n_r: int, n_t: int, K: float, rng: np.random.Generator, los=None) -> np.ndarray:
    """One draw of the normalized Rician channel (all-ones LoS by default)."""
    if los is None:
        los = np.ones((n_r, n_t), dtype=complex)
    scatter = complex_gaussian(rng, (n_r, n_t))
    if math.isinf(K):
        return np.asarray(los, dtype=complex)
    return math.sqrt(K / (K + 1.0)) * los + math.sqrt(1.0 / (K + 1.0)) * scatter


def lower_bound_snr_scale(K: float, scale: str = "power") -> float:
    """SNR multiplier applied to the scattered-only channel.

    ``"power"`` uses the scattered power fraction ``1/(K+1)``;
    ``"amplitude"`` uses ``sqrt(1/(K+1))``, which overstates the bound at
    large K (see README).
    """
    frac = 0.0 if math.isinf(K) else 1.0 / (K + 1.0)
    if scale == "power":
        return frac
    if scale == "amplitude":
        return math.sqrt(frac)
    raise ValueError(f"unknown lower-bound scale {scale!r}")


def lower_bound_estimate(
    inp: BoundInputs,
    trials: int,
    rng: np.random.Generator,
    scale: str = "power",
) -> tuple[float, float]:
    """Monte-Carlo lower bound ``E C(H_a, s * rho)``; returns (estimate, std error)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    snr = lower_bound_snr_scale(inp.K, scale) * inp.rho
    if snr == 0.0:
        return 0.0, 0.0
    caps = np.empty(trials)
    for t in range(trials):
        hw = complex_gaussian(rng, (inp.n_r, inp.n_t))
        s = np.linalg.svd(hw, compute_uv=False)
        caps[t] = np.sum(np.log2(1.0 + snr / inp.n_t * s**2))
    se = float(caps.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return float(caps.mean()), se


def _pos(x: float) -> float:
    return max(x, 0.0)


def upper_bound(inp: BoundInputs) -> float:
    """Water-filling capacity upper bound for a Rician channel (general n_r, n_t)."""
    n_t, n_r, rho, K = inp.n_t, inp.n_r, inp.rho, inp.K
    if math.isinf(K):
        return math.log2(1.0 + n_r * n_t * rho)
    thr = K * (1.0 + K) / (n_r * (1.0 + n_t * K))
    first = math.log2(
        1.0 + n_r * (1.0 + n_t * K) / (K + 1.0)
        * (min(rho / n_t, thr) * n_t + _pos(rho / n_t - thr))
    )
    rest = (n_t - 1) * math.log2(1.0 + n_r / (1.0 + K) * _pos(rho / n_t - thr))
    return first + rest


def upper_bound_square(n: int, rho: float, kd: float) -> float:
    """The n_r = n_t = n form written in terms of ``e^{-kd}``.

    The second bracket is read as ``[rho - T]^+``, matching the general form.
    """
    if kd == 0.0:
        return math.log2(1.0 + n * n * rho)
    e = math.exp(-kd)
    one_minus_e = -math.expm1(-kd)
    gain = 1.0 + (n - 1) * e
    thr = (e / one_minus_e) / gain
    first = math.log2(1.0 + gain * (min(rho, thr) * n + _pos(rho - thr)))
    rest = (n - 1) * math.log2(1.0 + one_minus_e * _pos(rho - thr))
    return first + rest


def limit_capacities(n: int, rho: float) -> tuple[float, float]:
    """(high-absorption, no-absorption) limits: ``n log2(1+rho)`` and ``log2(1+n^2 rho)``."""
    return n * math.log2(1.0 + rho), math.log2(1.0 + n * n * rho)
