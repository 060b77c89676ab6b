"""Line-oriented ``section.key = value`` config files.

Blank lines and ``#`` comments are ignored. Unknown keys are errors, and
every key missing from the file keeps its default.
"""
from __future__ import annotations

import dataclasses
import math
import typing
from pathlib import Path

from .errors import ParseError, ValidationError
from .experiments import SNR_CONVENTIONS, SWEEP_AXES, ExperimentConfig
from .mimo import Scheme

SECTIONS = {f.name: f.default_factory for f in dataclasses.fields(ExperimentConfig)}


def _field_types(section: str) -> dict[str, object]:
    cls = type(SECTIONS[section]())
    return typing.get_type_hints(cls)


def _coerce(key: str, raw: str, hint):
    raw = raw.strip()
    try:
        if hint is float:
            return float(raw)
        if hint is int:
            try:
                return int(raw)  # exact for large seeds
            except ValueError:
                pass
            value = float(raw)  # accepts "1e3"
            if not value.is_integer():
                raise ValueError
            return int(value)
        if hint == (float | None):
            return None if raw.lower() in ("", "none") else float(raw)
        if hint == tuple[str, ...]:
            return tuple(item.strip() for item in raw.split(",") if item.strip())
        return raw
    except ValueError:
        raise ValidationError(key, f"cannot interpret {raw!r} as {getattr(hint, '__name__', hint)}") from None


def apply_overrides(cfg: ExperimentConfig, pairs) -> ExperimentConfig:
    """Apply ``(dotted key, raw string)`` pairs to ``cfg``."""
    for key, raw in pairs:
        section, dot, name = key.partition(".")
        if not dot or section not in SECTIONS:
            raise ValidationError(key, "unknown section")
        hints = _field_types(section)
        if name not in hints:
            raise ValidationError(key, "unknown key")
        value = _coerce(key, raw, hints[name])
        cfg = cfg.with_values(**{f"{section}__{name}": value})
    return cfg


def read_pairs(path) -> list[tuple[str, str]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path}: not UTF-8 text") from None
    pairs = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, eq, value = stripped.partition("=")
        key = key.strip()
        if not eq or not key:
            raise ParseError(f"{path}:{lineno}: expected 'section.key = value', got {stripped!r}")
        if key in seen:
            raise ParseError(f"{path}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        pairs.append((key, value.split(" #", 1)[0].strip()))
    return pairs


def parse_config(path=None, overrides=()) -> ExperimentConfig:
    """Defaults, then the file (if any), then ``overrides``; validated."""
    cfg = ExperimentConfig()
    if path is not None:
        cfg = apply_overrides(cfg, read_pairs(path))
    cfg = apply_overrides(cfg, overrides)
    validate(cfg)
    return cfg


def _require(cond: bool, key: str, message: str):
    if not cond:
        raise ValidationError(key, message)


def _is_square(n: int) -> bool:
    return n >= 1 and math.isqrt(n) ** 2 == n


def validate(cfg: ExperimentConfig) -> None:
    link, med, arr, run, sw = cfg.link, cfg.medium, cfg.array, cfg.run, cfg.sweep
    _require(link.frequency_hz > 0, "link.frequency_hz", "must be > 0")
    _require(link.distance_m > 0, "link.distance_m", "must be > 0")
    _require(link.tx_power_w > 0, "link.tx_power_w", "must be > 0")
    _require(link.bandwidth_hz > 0, "link.bandwidth_hz", "must be > 0")
    _require(math.isfinite(link.noise_floor_dbm), "link.noise_floor_dbm", "must be finite")
    _require(med.absorption_per_m is None or med.absorption_per_m >= 0,
             "medium.absorption_per_m", "must be >= 0")
    _require(bool(med.mixture) or med.absorption_per_m is not None,
             "medium.mixture", "needed unless medium.absorption_per_m is set")
    _require(_is_square(arr.n_tx), "array.n_tx", "must be a perfect square")
    _require(_is_square(arr.n_rx), "array.n_rx", "must be a perfect square")
    _require(arr.spacing_wavelengths > 0, "array.spacing_wavelengths", "must be > 0")
    _require(run.mode in ("noise", "scattering"), "run.mode", "must be 'noise' or 'scattering'")
    _require(run.phase_model in ("uniform", "gaussian"), "run.phase_model",
             "must be 'uniform' or 'gaussian'")
    _require(len(run.schemes) > 0, "run.schemes", "must list at least one scheme")
    valid = {s.value for s in Scheme}
    for s in run.schemes:
        _require(s in valid, "run.schemes", f"unknown scheme {s!r} (choose from {sorted(valid)})")
    _require(len(set(run.schemes)) == len(run.schemes), "run.schemes", "duplicate scheme")
    _require(run.trials >= 1, "run.trials", "must be >= 1")
    _require(0 <= run.seed < 2**64, "run.seed", "must be an unsigned 64-bit integer")
    _require(run.snr_convention in SNR_CONVENTIONS, "run.snr_convention",
             f"must be one of {SNR_CONVENTIONS}")
    _require(run.threads >= 1, "run.threads", "must be >= 1")
    _require(sw.axis in SWEEP_AXES, "sweep.axis", f"must be one of {SWEEP_AXES}")
    _require(sw.spacing in ("linear", "log"), "sweep.spacing", "must be 'linear' or 'log'")
    _require(sw.points >= 1, "sweep.points", "must be >= 1")
    _require(sw.start <= sw.stop, "sweep.start", "must not exceed sweep.stop")
    _require(sw.axis == "snr" or sw.start > 0, "sweep.start", "must be > 0")
    _require(cfg.svdist.bins >= 1, "svdist.bins", "must be >= 1")
    b = cfg.bounds
    _require(b.n >= 1, "bounds.n", "must be >= 1")
    _require(0 < b.k_start <= b.k_stop, "bounds.k_start", "need 0 < k_start <= k_stop")
    _require(b.k_points >= 1, "bounds.k_points", "must be >= 1")
    _require(b.trials >= 1, "bounds.trials", "must be >= 1")
    _require(b.lower_scale in ("power", "amplitude"), "bounds.lower_scale",
             "must be 'power' or 'amplitude'")


def config_items(cfg: ExperimentConfig) -> dict[str, object]:
    """Flat ``{"section.key": value}`` view, used for the manifest echo."""
    out = {}
    for section in SECTIONS:
        for f in dataclasses.fields(getattr(cfg, section)):
            value = getattr(getattr(cfg, section), f.name)
            out[f"{section}.{f.name}"] = list(value) if isinstance(value, tuple) else value
    return out


def format_config(cfg: ExperimentConfig) -> str:
    lines = []
    for key, value in config_items(cfg).items():
        if isinstance(value, list):
            value = ",".join(value)
        elif value is None:
            value = "none"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
