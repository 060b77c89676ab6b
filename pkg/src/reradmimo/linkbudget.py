"""Scalar link budget: spreading and molecular attenuation, received powers,
molecular noise and the absorption-defined Rician K-factor.

Powers are total band powers in W. The PSD helpers take ``p_t`` as a PSD
(W/Hz); with the default 1 Hz reference bandwidth the two coincide
numerically, which is what lets capacities come out in bps/Hz.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NegativeAbsorption, NonPositiveFrequency, NonPositiveInput


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299_792_458.0  # m/s
    k_B: float = 1.380649e-23  # J/K
    T0: float = 296.0  # K, reference temperature of the sky-noise term


CONST = PhysicalConstants()


def dbm_to_w(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


def w_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w / 1e-3)


def to_db(ratio: float) -> float:
    """10*log10 of a power ratio; ``inf`` maps to ``inf`` and 0 to ``-inf``."""
    if ratio == math.inf:
        return math.inf
    if ratio <= 0:
        return -math.inf
    return 10.0 * math.log10(ratio)


@dataclass(frozen=True)
class LinkConfig:
    f: float
    d: float
    p_t: float
    k: float = 0.0
    noise_floor: float = dbm_to_w(-80.0)
    bandwidth: float = 1.0

    def __post_init__(self):
        for name in ("f", "d", "p_t", "noise_floor", "bandwidth"):
            if not getattr(self, name) > 0:
                raise NonPositiveInput(f"{name} must be > 0, got {getattr(self, name)}")
        if not self.k >= 0:
            raise NegativeAbsorption(f"absorption coefficient must be >= 0, got {self.k}")


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise NonPositiveInput(f"{name} must be > 0, got {value}")


def _check_absorption(k):
    if not k >= 0:
        raise NegativeAbsorption(f"absorption coefficient must be >= 0, got {k}")


def fspl_amplitude(f: float, d: float) -> float:
    """c / (4 pi f d): the free-space amplitude gain."""
    _check_positive(f=f, d=d)
    return CONST.c / (4.0 * math.pi * f * d)


def fspl_attenuation(f: float, d: float) -> float:
    _check_positive(f=f, d=d)
    return (4.0 * math.pi * f * d / CONST.c) ** 2


def molecular_attenuation(k: float, d: float) -> float:
    _check_absorption(k)
    _check_positive(d=d)
    kd = k * d
    return math.inf if kd > 709.0 else math.exp(kd)


def total_attenuation(f: float, d: float, k: float) -> float:
    return fspl_attenuation(f, d) * molecular_attenuation(k, d)


def los_received_power(cfg: LinkConfig) -> float:
    return cfg.p_t * fspl_amplitude(cfg.f, cfg.d) ** 2 * math.exp(-cfg.k * cfg.d)


def reradiated_power(cfg: LinkConfig) -> float:
    # -expm1(-x) == 1 - exp(-x) without cancellation at small kd
    return cfg.p_t * -math.expm1(-cfg.k * cfg.d) * fspl_amplitude(cfg.f, cfg.d) ** 2


def sky_noise_psd(f: float, k: float) -> float:
    """Atmospheric (sky) noise PSD in W/Hz.

    The emissivity factor is taken at its d -> infinity limit, so it is 1 for
    any absorbing medium and 0 for a transparent one.
    """
    if not f > 0:
        raise NonPositiveFrequency(f"frequency must be > 0, got {f}")
    _check_absorption(k)
    emissivity = 1.0 if k > 0 else 0.0
    return CONST.k_B * CONST.T0 * emissivity * (CONST.c / (math.sqrt(4.0 * math.pi) * f)) ** 2


def self_induced_noise_psd(cfg: LinkConfig) -> float:
    """Signal-correlated molecular noise; same expression as the re-radiated power."""
    return reradiated_power(cfg)


def molecular_noise_psd(cfg: LinkConfig) -> float:
    return sky_noise_psd(cfg.f, cfg.k) + self_induced_noise_psd(cfg)


def molecular_noise_power(cfg: LinkConfig) -> float:
    """Molecular noise power (W) over the reference bandwidth.

    ``cfg.p_t`` is a total power here, so the self-induced term is already a
    power; only the sky term scales with bandwidth.
    """
    return sky_noise_psd(cfg.f, cfg.k) * cfg.bandwidth + self_induced_noise_psd(cfg)


def rician_k_factor(k: float, d: float) -> float:
    """LoS-to-re-radiated power ratio ``e^{-kd} / (1 - e^{-kd})``.

    Returns ``math.inf`` for a transparent medium (k == 0).
    """
    _check_absorption(k)
    _check_positive(d=d)
    kd = k * d
    if kd == 0.0:
        return math.inf
    return math.exp(-kd) / -math.expm1(-kd)


def rician_k_factor_db(k: float, d: float) -> float:
    return to_db(rician_k_factor(k, d))
