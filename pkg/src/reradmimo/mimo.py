"""SVD capacity engine: equal-power and water-filled capacity, the three
precoding schemes, effective rank and condition number.

Precoders are never applied to symbols. Each scheme is scored by the
capacity its precoder/power allocation induces on the eigenchannels.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AllZeroGains, NonPositivePower, NumericalFailure
from .linkbudget import LinkConfig, molecular_noise_power

COND_FLOOR = 1e-15
COND_CAP_DB = 300.0


class Scheme(str, enum.Enum):
    BF = "BF"
    CL_MP = "CL-MP"
    OL_MP = "OL-MP"
    SISO = "SISO-ref"


@dataclass(frozen=True)
class SvdGains:
    singular_values: np.ndarray  # non-increasing, length min(n_r, n_t)
    n_rx: int
    n_tx: int
    right_vectors: np.ndarray | None = None  # n_t x m

    @property
    def m(self) -> int:
        return self.singular_values.size


@dataclass(frozen=True)
class PowerAllocation:
    p: np.ndarray
    total: float
    water_level: float | None = None


@dataclass(frozen=True)
class SchemeResult:
    scheme: Scheme
    capacity: float
    allocation: PowerAllocation | None
    streams: int


def svd_gains(h, vectors: bool = False) -> SvdGains:
    h = np.asarray(h)
    if h.ndim != 2 or not np.all(np.isfinite(h)):
        raise NumericalFailure("channel matrix must be a finite 2-D array")
    n_rx, n_tx = h.shape
    try:
        if vectors:
            _, s, vh = np.linalg.svd(h, full_matrices=False)
            v = vh.conj().T
        else:
            s = np.linalg.svd(h, compute_uv=False)
            v = None
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from None
    return SvdGains(s, n_rx, n_tx, v)


def _as_gains(g) -> SvdGains:
    """Accept SvdGains, a matrix, or a 1-D vector of singular values (square m x m)."""
    if isinstance(g, SvdGains):
        return g
    arr = np.asarray(g)
    if arr.ndim == 1:
        s = np.sort(np.abs(arr.astype(float)))[::-1]
        return SvdGains(s, s.size, s.size)
    return svd_gains(arr)


def _check_power(P, sigma2):
    if not (P > 0 and sigma2 > 0):
        raise NonPositivePower(f"power and noise variance must be > 0, got P={P}, sigma2={sigma2}")


def capacity_equal_power(g, P: float, sigma2: float) -> float:
    """``log2 det(I + P/(n_t sigma2) H H^H)`` via the eigenvalue sum."""
    _check_power(P, sigma2)
    g = _as_gains(g)
    snr = P / (g.n_tx * sigma2)
    return float(np.sum(np.log2(1.0 + snr * g.singular_values**2)))


def capacity_equal_power_det(h, P: float, sigma2: float) -> float:
    """Determinant form of the equal-power capacity (kept as a cross-check)."""
    _check_power(P, sigma2)
    h = np.asarray(h)
    n_rx, n_tx = h.shape
    m = np.eye(n_rx) + (P / (n_tx * sigma2)) * (h @ h.conj().T)
    sign, logdet = np.linalg.slogdet(m)
    if sign.real <= 0:
        raise NumericalFailure("non-positive determinant in capacity")
    return float(logdet / math.log(2.0))


def waterfill(g, P: float, sigma2: float) -> PowerAllocation:
    """Water-filling over eigenchannels: ``P_i = max(mu - sigma2/lambda_i^2, 0)``.

    The active set is found exactly by scanning the sorted noise-to-gain
    levels, so the allocation sums to ``P`` up to rounding.
    """
    _check_power(P, sigma2)
    gains2 = _as_gains(g).singular_values ** 2
    positive = gains2 > 0
    if not np.any(positive):
        raise AllZeroGains("all eigenchannel gains are zero")
    levels = np.full(gains2.shape, np.inf)
    levels[positive] = sigma2 / gains2[positive]
    order = np.argsort(levels, kind="stable")
    sorted_levels = levels[order]
    csum = np.cumsum(sorted_levels[np.isfinite(sorted_levels)])
    n_active = 1
    for j in range(csum.size, 0, -1):
        mu = (P + csum[j - 1]) / j
        if mu > sorted_levels[j - 1]:
            n_active = j
            break
    mu = (P + csum[n_active - 1]) / n_active
    p = np.zeros_like(gains2)
    active = order[:n_active]
    p[active] = mu - levels[active]
    return PowerAllocation(p, float(P), float(mu))


def capacity_allocated(g, alloc, sigma2: float) -> float:
    """``sum log2(1 + P_i lambda_i^2 / sigma2)``."""
    s = _as_gains(g).singular_values
    p = alloc.p if isinstance(alloc, PowerAllocation) else np.asarray(alloc, dtype=float)
    return float(np.sum(np.log2(1.0 + p * s**2 / sigma2)))


def beamforming_capacity(g, P: float, sigma2: float) -> float:
    _check_power(P, sigma2)
    s = _as_gains(g).singular_values
    return float(math.log2(1.0 + P * s[0] ** 2 / sigma2))


def scheme_capacity(h, scheme, P: float, sigma2: float, gains: SvdGains | None = None) -> SchemeResult:
    """Capacity of ``scheme`` on channel ``h``.

    ``gains`` may be passed to reuse an SVD across schemes. SISO-ref uses the
    single antenna pair (0, 0).
    """
    scheme = Scheme(scheme)
    _check_power(P, sigma2)
    if scheme is Scheme.SISO:
        h00 = np.asarray(h)[0, 0]
        p = np.array([P])
        return SchemeResult(scheme, float(math.log2(1.0 + P * abs(h00) ** 2 / sigma2)),
                            PowerAllocation(p, P), 1)
    g = gains if gains is not None else svd_gains(h)
    if scheme is Scheme.BF:
        p = np.zeros(g.m)
        p[0] = P
        alloc = PowerAllocation(p, P)
        return SchemeResult(scheme, capacity_allocated(g, alloc, sigma2), alloc, 1)
    if scheme is Scheme.CL_MP:
        alloc = waterfill(g, P, sigma2)
        return SchemeResult(scheme, capacity_allocated(g, alloc, sigma2), alloc,
                            int(np.count_nonzero(alloc.p)))
    # OL-MP: identity precoder, P/n_t per antenna
    return SchemeResult(scheme, capacity_equal_power(g, P, sigma2), None, min(g.n_rx, g.n_tx))


def effective_rank(g, P: float, sigma2: float, threshold_db: float = 0.0) -> int:
    """Eigenchannels whose SNR under an equal P/m split clears the threshold."""
    _check_power(P, sigma2)
    g = _as_gains(g)
    snr = P * g.singular_values**2 / (g.m * sigma2)
    return int(np.count_nonzero(snr >= 10.0 ** (threshold_db / 10.0)))


def condition_number(g) -> float:
    """``lambda_1 / lambda_m`` with ``lambda_m`` floored at ``1e-15 lambda_1``."""
    s = _as_gains(g).singular_values
    if s[0] == 0:
        raise AllZeroGains("condition number of a zero matrix")
    return float(s[0] / max(s[-1], COND_FLOOR * s[0]))


def condition_number_db(g) -> float:
    """Condition number as the dB power ratio ``10 log10((l1/lm)^2)``; capped at 300 dB."""
    return min(20.0 * math.log10(condition_number(g)), COND_CAP_DB)


def noise_interpretation_sigma2(cfg: LinkConfig) -> float:
    return cfg.noise_floor + molecular_noise_power(cfg)


def capacity_noise_interpretation(h_los, cfg: LinkConfig, schemes=(Scheme.BF, Scheme.CL_MP, Scheme.OL_MP)):
    """Per-scheme capacity when re-radiation only adds noise.

    The channel is the LoS matrix alone and the noise is the non-molecular
    floor plus sky and self-induced molecular noise for ``cfg``.
    """
    sigma2 = noise_interpretation_sigma2(cfg)
    g = svd_gains(h_los)
    return {Scheme(s): scheme_capacity(h_los, s, cfg.p_t, sigma2, gains=g).capacity for s in schemes}
