"""Monte-Carlo orchestration: per-point statistics, parameter sweeps and the
singular-value histogram.

Every trial draws from its own generator keyed by ``(seed, trial index)``,
so results do not depend on thread count or execution order, and sweep
points share random numbers trial-for-trial.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import bounds as _bounds
from . import mimo
from .channel import Mode, PhaseModel, assemble_channel, unit_power_scale
from .geometry import link_arrays, random_pose
from .linkbudget import CONST, LinkConfig, dbm_to_w, molecular_noise_power, rician_k_factor, sky_noise_psd, to_db
from .mimo import Scheme
from .spectra import bundled_mixture_path, bundled_spectra_dir, load_database, load_mixture, mixture_coefficient

SWEEP_AXES = ("frequency", "distance", "absorption", "power", "snr")
SNR_CONVENTIONS = ("fixed_transmit_power", "fixed_received_snr")


@dataclass(frozen=True)
class LinkParams:
    frequency_hz: float = 60e9
    distance_m: float = 10.0
    tx_power_w: float = 0.15
    noise_floor_dbm: float = -80.0
    bandwidth_hz: float = 1.0


@dataclass(frozen=True)
class MediumParams:
    mixture: str = "high_latitude_winter"  # bundled name or path to a mixture file
    spectra_dir: str = ""  # empty: bundled synthetic spectra
    absorption_per_m: float | None = None  # overrides the mixture when set


@dataclass(frozen=True)
class ArrayParams:
    n_tx: int = 64
    n_rx: int = 64
    spacing_wavelengths: float = 0.5


@dataclass(frozen=True)
class RunParams:
    mode: str = "scattering"
    phase_model: str = "uniform"
    schemes: tuple[str, ...] = ("BF", "CL-MP", "OL-MP")
    trials: int = 5000
    seed: int = 0
    snr_convention: str = "fixed_transmit_power"
    snr_db: float = 15.0
    snr_threshold_db: float = 0.0
    threads: int = 1


@dataclass(frozen=True)
class SweepParams:
    axis: str = "frequency"
    start: float = 30e9
    stop: float = 180e9
    points: int = 10
    spacing: str = "linear"


@dataclass(frozen=True)
class SvdistParams:
    bins: int = 50


@dataclass(frozen=True)
class BoundsParams:
    n: int = 64
    snr_db: float = 5.0
    k_start: float = 1e-3
    k_stop: float = 1e3
    k_points: int = 13
    trials: int = 200
    lower_scale: str = "power"


@dataclass(frozen=True)
class ExperimentConfig:
    link: LinkParams = field(default_factory=LinkParams)
    medium: MediumParams = field(default_factory=MediumParams)
    array: ArrayParams = field(default_factory=ArrayParams)
    run: RunParams = field(default_factory=RunParams)
    sweep: SweepParams = field(default_factory=SweepParams)
    svdist: SvdistParams = field(default_factory=SvdistParams)
    bounds: BoundsParams = field(default_factory=BoundsParams)

    def with_values(self, **dotted) -> "ExperimentConfig":
        """Copy with ``section__key=value`` overrides, e.g. ``link__distance_m=5``."""
        cfg = self
        for name, value in dotted.items():
            section, _, key = name.partition("__")
            cfg = replace(cfg, **{section: replace(getattr(cfg, section), **{key: value})})
        return cfg


@dataclass(frozen=True)
class CapacityStats:
    sweep_value: float
    frequency_hz: float
    distance_m: float
    mode: str
    scheme: str
    capacity_mean: float
    capacity_std: float
    capacity_se: float
    k_factor_db: float
    rank_mean: float
    cond_db: float
    trials: int
    seed: int
    absorption_per_m: float = 0.0


@dataclass(frozen=True)
class SvHistogram:
    edges: np.ndarray
    density: np.ndarray
    ks_distance: float
    samples: np.ndarray


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


@lru_cache(maxsize=8)
def _database(directory: str):
    return load_database(directory or bundled_spectra_dir())


@lru_cache(maxsize=16)
def _mixture(name: str):
    path = Path(name)
    if path.suffix == "" and not path.exists():
        path = bundled_mixture_path(name)
    return load_mixture(path)


def medium_files(cfg: ExperimentConfig) -> list[Path]:
    """Spectrum and mixture files a config reads (empty with explicit absorption)."""
    if cfg.medium.absorption_per_m is not None:
        return []
    db = _database(cfg.medium.spectra_dir)
    mix = _mixture(cfg.medium.mixture)
    files = [Path(db.sources[s]) for s in sorted(mix.entries)]
    path = Path(cfg.medium.mixture)
    files.append(path if path.exists() else bundled_mixture_path(cfg.medium.mixture))
    return files


def absorption(cfg: ExperimentConfig, f: float | None = None) -> float:
    if cfg.medium.absorption_per_m is not None:
        return float(cfg.medium.absorption_per_m)
    f = cfg.link.frequency_hz if f is None else f
    return float(mixture_coefficient(_database(cfg.medium.spectra_dir), _mixture(cfg.medium.mixture), f))


@dataclass(frozen=True)
class _PointSetup:
    f: float
    d: float
    k: float
    n_tx: int
    n_rx: int
    spacing: float
    mode: Mode
    phase_model: PhaseModel
    schemes: tuple[Scheme, ...]
    fixed_snr: bool
    power: float
    sigma2: float
    threshold_db: float


def _setup(cfg: ExperimentConfig) -> _PointSetup:
    link, run = cfg.link, cfg.run
    if run.trials < 1:
        raise ValueError("run.trials must be >= 1")
    if run.snr_convention not in SNR_CONVENTIONS:
        raise ValueError(f"unknown snr_convention {run.snr_convention!r}")
    f, d = link.frequency_hz, link.distance_m
    k = absorption(cfg, f)
    mode = Mode(run.mode)
    noise_floor = dbm_to_w(link.noise_floor_dbm)
    fixed_snr = run.snr_convention == "fixed_received_snr"
    if fixed_snr:
        # P / sigma2 is the received SNR itself; molecular noise is not added
        power = 10.0 ** (run.snr_db / 10.0)
        sigma2 = 1.0
    else:
        power = link.tx_power_w
        sigma2 = noise_floor + sky_noise_psd(f, k) * link.bandwidth_hz
        if mode is Mode.NOISE:
            sigma2 = noise_floor + molecular_noise_power(
                LinkConfig(f, d, power, k, noise_floor, link.bandwidth_hz)
            )
    return _PointSetup(
        f, d, k, cfg.array.n_tx, cfg.array.n_rx,
        cfg.array.spacing_wavelengths * CONST.c / f,
        mode, PhaseModel(run.phase_model), tuple(Scheme(s) for s in run.schemes),
        fixed_snr, power, sigma2, run.snr_threshold_db,
    )


def draw_channel(s: _PointSetup, rng: np.random.Generator) -> np.ndarray:
    """One channel realisation, unit-power normalised under the fixed-SNR convention."""
    tx_pose = random_pose(rng)
    rx_pose = random_pose(rng)
    tx, rx = link_arrays(s.n_tx, s.n_rx, s.spacing, s.d, tx_pose, rx_pose)
    ch = assemble_channel(tx, rx, s.f, s.k, s.mode, rng, s.phase_model)
    if s.fixed_snr:
        return ch.h * unit_power_scale(ch)
    return ch.h


def _run_trials(s: _PointSetup, seed: int, trials: range) -> np.ndarray:
    """Rows: one per trial; columns: schemes..., rank, cond_db."""
    out = np.empty((len(trials), len(s.schemes) + 2))
    for row, t in enumerate(trials):
        h = draw_channel(s, trial_rng(seed, t))
        g = mimo.svd_gains(h)
        for col, scheme in enumerate(s.schemes):
            out[row, col] = mimo.scheme_capacity(h, scheme, s.power, s.sigma2, gains=g).capacity
        out[row, -2] = mimo.effective_rank(g, s.power, s.sigma2, s.threshold_db)
        out[row, -1] = mimo.condition_number_db(g)
    return out


def _chunks(n: int, parts: int) -> list[range]:
    parts = max(1, min(parts, n))
    bounds = np.linspace(0, n, parts + 1).astype(int)
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


def trial_matrix(cfg: ExperimentConfig) -> np.ndarray:
    s = _setup(cfg)
    chunks = _chunks(cfg.run.trials, cfg.run.threads)
    if len(chunks) == 1:
        return _run_trials(s, cfg.run.seed, chunks[0])
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda r: _run_trials(s, cfg.run.seed, r), chunks))
    return np.vstack(parts)


def run_point(cfg: ExperimentConfig, sweep_value: float | None = None) -> list[CapacityStats]:
    """Aggregate ``cfg.run.trials`` channel draws at one operating point."""
    s = _setup(cfg)
    data = trial_matrix(cfg)
    n = data.shape[0]
    if s.mode is Mode.SCATTERING:
        k_db = to_db(rician_k_factor(s.k, s.d))
    else:
        k_db = math.inf
    rank_mean = float(np.mean(data[:, -2]))
    cond_db = float(np.mean(data[:, -1]))
    rows = []
    for col, scheme in enumerate(s.schemes):
        caps = data[:, col]
        std = float(caps.std(ddof=1)) if n > 1 else 0.0
        rows.append(CapacityStats(
            sweep_value=s.f if sweep_value is None else float(sweep_value),
            frequency_hz=s.f,
            distance_m=s.d,
            mode=s.mode.value,
            scheme=scheme.value,
            capacity_mean=float(caps.mean()),
            capacity_std=std,
            capacity_se=std / math.sqrt(n),
            k_factor_db=k_db,
            rank_mean=rank_mean,
            cond_db=cond_db,
            trials=n,
            seed=cfg.run.seed,
            absorption_per_m=s.k,
        ))
    return rows


def sweep_values(sweep: SweepParams) -> np.ndarray:
    if sweep.axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {sweep.axis!r}")
    if sweep.points < 1:
        raise ValueError("sweep.points must be >= 1")
    if sweep.spacing == "log":
        if not (0 < sweep.start <= sweep.stop):
            raise ValueError("log sweep needs 0 < start <= stop")
        return np.geomspace(sweep.start, sweep.stop, sweep.points)
    if sweep.spacing != "linear":
        raise ValueError(f"unknown sweep spacing {sweep.spacing!r}")
    if not sweep.start <= sweep.stop:
        raise ValueError("sweep start must not exceed stop")
    if sweep.axis != "snr" and sweep.start <= 0:
        raise ValueError(f"{sweep.axis} sweep needs a positive range")
    return np.linspace(sweep.start, sweep.stop, sweep.points)


def point_config(cfg: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    key = {
        "frequency": "link__frequency_hz",
        "distance": "link__distance_m",
        "absorption": "medium__absorption_per_m",
        "power": "link__tx_power_w",
        "snr": "run__snr_db",
    }[axis]
    return cfg.with_values(**{key: float(value)})


def run_sweep(cfg: ExperimentConfig) -> list[CapacityStats]:
    """One block of scheme rows per sweep value, in sweep order."""
    rows = []
    for value in sweep_values(cfg.sweep):
        rows.extend(run_point(point_config(cfg, cfg.sweep.axis, value), sweep_value=value))
    return rows


def quarter_circle_density(x):
    x = np.asarray(x, dtype=float)
    out = np.where((x >= 0) & (x <= 2), np.sqrt(np.clip(4.0 - x * x, 0.0, None)) / math.pi, 0.0)
    return float(out) if out.ndim == 0 else out


def quarter_circle_cdf(x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 2.0)
    return (x * np.sqrt(4.0 - x * x) / 2.0 + 2.0 * np.arcsin(x / 2.0)) / math.pi


def ks_distance(samples, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov statistic of ``samples`` against ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    F = cdf(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def singular_value_samples(cfg: ExperimentConfig) -> np.ndarray:
    """Pooled singular values of ``H / sqrt(n_t)`` with unit-power entries."""
    cfg = cfg.with_values(run__snr_convention="fixed_received_snr")
    s = _setup(cfg)
    if s.mode is not Mode.SCATTERING:
        raise ValueError("singular-value histogram needs scattering mode")
    pooled = []
    for t in range(cfg.run.trials):
        h = draw_channel(s, trial_rng(cfg.run.seed, t))
        pooled.append(np.linalg.svd(h / math.sqrt(s.n_tx), compute_uv=False))
    return np.concatenate(pooled)


def singular_value_histogram(cfg: ExperimentConfig, bins: int | None = None) -> SvHistogram:
    samples = singular_value_samples(cfg)
    bins = cfg.svdist.bins if bins is None else bins
    upper = max(2.0, float(samples.max()))
    density, edges = np.histogram(samples, bins=bins, range=(0.0, upper), density=True)
    return SvHistogram(edges, density, ks_distance(samples, quarter_circle_cdf), samples)


@dataclass(frozen=True)
class BoundsRow:
    k_factor: float
    k_factor_db: float
    n: int
    snr_db: float
    upper_bound: float
    lower_bound: float
    lower_bound_se: float
    limit_high_absorption: float
    limit_no_absorption: float
    lower_trials: int
    lower_scale: str
    seed: int


def bounds_k_grid(b: BoundsParams) -> np.ndarray:
    return np.geomspace(b.k_start, b.k_stop, b.k_points)


def run_bounds(cfg: ExperimentConfig) -> list[BoundsRow]:
    """Upper bound, MC lower bound and both limits over a log-spaced K grid.

    Grid point ``i`` draws its lower-bound trials from substream ``i``.
    """
    b = cfg.bounds
    rho = 10.0 ** (b.snr_db / 10.0)
    hi, lo = _bounds.limit_capacities(b.n, rho)
    rows = []
    for i, K in enumerate(bounds_k_grid(b)):
        inp = _bounds.BoundInputs(b.n, b.n, rho, float(K))
        lower, se = _bounds.lower_bound_estimate(inp, b.trials, trial_rng(cfg.run.seed, i), b.lower_scale)
        rows.append(BoundsRow(
            float(K), to_db(float(K)), b.n, b.snr_db, _bounds.upper_bound(inp),
            lower, se, hi, lo, b.trials, b.lower_scale, cfg.run.seed,
        ))
    return rows
