"""Channel transfer coefficients and MIMO channel matrices.

Each antenna pair sees a deterministic LoS coefficient (spreading loss,
half the molecular attenuation in amplitude, and a propagation phase) plus,
when re-radiation is treated as scattering, an independent random term
carrying the absorbed fraction of the free-space power.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeAbsorption, NonPositiveInput, PureLoS
from .geometry import ArrayGeometry, pairwise_distances
from .linkbudget import CONST, rician_k_factor


class Mode(str, enum.Enum):
    NOISE = "noise"
    SCATTERING = "scattering"


class PhaseModel(str, enum.Enum):
    UNIFORM = "uniform"  # fixed magnitude, uniform phase
    GAUSSIAN = "gaussian"  # circularly-symmetric complex normal, same mean power


@dataclass(frozen=True)
class ChannelMatrix:
    h: np.ndarray
    h_los: np.ndarray
    h_a: np.ndarray
    mode: Mode
    f: float
    k: float
    distance: float  # centre-to-centre
    distances: np.ndarray  # per-pair d_ij
    phase_model: PhaseModel = PhaseModel.UNIFORM
    seed: int | None = None

    @property
    def shape(self):
        return self.h.shape


def _validate(f, d, k):
    if not f > 0:
        raise NonPositiveInput(f"frequency must be > 0, got {f}")
    if not np.all(np.asarray(d) > 0):
        raise NonPositiveInput("distances must be > 0")
    if not k >= 0:
        raise NegativeAbsorption(f"absorption coefficient must be >= 0, got {k}")


def free_space_amplitude(f, d):
    return CONST.c / (4.0 * math.pi * f * np.asarray(d, dtype=float))


def los_coefficient(f: float, d, k: float):
    """LoS transfer coefficient; ``d`` may be a scalar or an array of d_ij."""
    _validate(f, d, k)
    d = np.asarray(d, dtype=float)
    cycles = np.mod(d * f / CONST.c, 1.0)
    out = free_space_amplitude(f, d) * np.exp(-k * d / 2.0) * np.exp(2j * math.pi * cycles)
    return complex(out) if out.ndim == 0 else out


def reradiation_amplitude(f: float, d, k: float):
    """Deterministic magnitude (RMS magnitude for the Gaussian model) of h_a."""
    d = np.asarray(d, dtype=float)
    return np.sqrt(-np.expm1(-k * d)) * free_space_amplitude(f, d)


def reradiation_coefficient(
    f: float,
    d,
    k: float,
    rng: np.random.Generator,
    phase_model: PhaseModel = PhaseModel.UNIFORM,
):
    """Random re-radiated component for each distance in ``d``."""
    _validate(f, d, k)
    d = np.asarray(d, dtype=float)
    amp = reradiation_amplitude(f, d, k)
    if PhaseModel(phase_model) is PhaseModel.UNIFORM:
        beta = rng.random(d.shape)
        out = amp * np.exp(2j * math.pi * beta)
    else:
        z = rng.standard_normal(d.shape + (2,))
        out = amp * (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)
    return complex(out) if out.ndim == 0 else out


def assemble_channel(
    tx: ArrayGeometry,
    rx: ArrayGeometry,
    f: float,
    k: float,
    mode: Mode,
    rng: np.random.Generator | None = None,
    phase_model: PhaseModel = PhaseModel.UNIFORM,
    seed: int | None = None,
) -> ChannelMatrix:
    """Build the n_r x n_t channel from exact element-pair distances."""
    mode = Mode(mode)
    phase_model = PhaseModel(phase_model)
    dist = pairwise_distances(tx, rx)
    distance = float(np.linalg.norm(np.subtract(rx.pose.center, tx.pose.center)))
    h_los = los_coefficient(f, dist, k)
    if mode is Mode.SCATTERING:
        if rng is None:
            raise ValueError("scattering mode needs a random generator")
        h_a = reradiation_coefficient(f, dist, k, rng, phase_model)
    else:
        h_a = np.zeros_like(h_los)
    h = h_los + h_a
    return ChannelMatrix(h, h_los, h_a, mode, f, k, distance, dist, phase_model, seed)


def unit_power_scale(ch: ChannelMatrix) -> float:
    """Factor that brings the mean per-entry received power to one.

    Uses the expected power ``mean((c / 4 pi f d_ij)^2)``, which the LoS and
    re-radiated parts share between them; it is deterministic per geometry.
    """
    return 1.0 / math.sqrt(float(np.mean(free_space_amplitude(ch.f, ch.distances) ** 2)))


def normalized_decomposition(ch: ChannelMatrix):
    """Return ``(K, H_los_hat, H_a_hat)`` with unit-power constituents.

    ``H_los_hat`` has unit-modulus entries and ``H_a_hat`` unit mean power,
    so ``sqrt(K/(K+1)) H_los_hat + sqrt(1/(K+1)) H_a_hat`` times the
    centre-distance free-space amplitude approximates ``H`` in the far field.
    """
    if ch.mode is not Mode.SCATTERING:
        raise ValueError("normalized decomposition needs a scattering-mode channel")
    if ch.k * ch.distance == 0.0:
        raise PureLoS("no re-radiation (k = 0): K is infinite and H_a vanishes")
    K = rician_k_factor(ch.k, ch.distance)
    fs = free_space_amplitude(ch.f, ch.distances)
    h_los_hat = ch.h_los / (fs * np.exp(-ch.k * ch.distances / 2.0))
    h_a_hat = ch.h_a / reradiation_amplitude(ch.f, ch.distances, ch.k)
    return K, h_los_hat, h_a_hat
