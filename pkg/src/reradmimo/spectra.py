"""Per-species absorption spectra and the medium absorption coefficient.

Spectra are tabulated ``k_i(f)`` in 1/m on a strictly increasing frequency
grid. A gas mixture weights them by mole fraction; the medium coefficient
at ``f`` is ``sum_i m_i * k_i(f)`` with each ``k_i`` linearly interpolated.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyGrid,
    MalformedFile,
    NegativeCoefficient,
    NonMonotoneGrid,
    OutOfRange,
    UnknownSpecies,
)

SPECTRUM_HEADER = ("frequency_hz", "absorption_per_m")

# (center Hz, peak 1/m per unit mole fraction, half-width Hz)
SYNTHETIC_O2_LINES = (
    (60e9, 0.0145, 2.0e9),
    (120e9, 0.0022, 1.5e9),
)
SYNTHETIC_H2O_LINES = (
    (180e9, 0.368, 3.0e9),
    (325e9, 0.30, 3.0e9),
    (380e9, 2.7, 3.5e9),
    (450e9, 1.8, 3.0e9),
    (550e9, 232.0, 3.0e9),
    (750e9, 97.0, 3.5e9),
)
SYNTHETIC_GRID = np.linspace(10e9, 1000e9, 1981)  # 0.5 GHz step

TABLE_MIXTURES_PERCENT = {
    # H2O, CO2, O3, N2O, CO, CH4, O2, N2
    "mean_latitude_summer": (1.860000, 0.033000, 0.000003, 0.000032, 0.000015, 0.000170, 20.900001, 77.206000),
    "mean_latitude_winter": (0.432000, 0.033000, 0.000003, 0.000032, 0.000015, 0.000170, 20.900001, 78.634779),
    "high_latitude_summer": (1.190000, 0.033000, 0.000002, 0.000031, 0.000015, 0.000170, 20.900001, 77.876781),
    "high_latitude_winter": (0.141000, 0.033000, 0.000002, 0.000032, 0.000015, 0.000170, 20.900001, 78.925780),
    "tropics": (2.590000, 0.033000, 0.000003, 0.000032, 0.000015, 0.000170, 20.900001, 76.476779),
}
TABLE_SPECIES = ("H2O", "CO2", "O3", "N2O", "CO", "CH4", "O2", "N2")


@dataclass(frozen=True)
class SpeciesSpectrum:
    species_id: str
    grid: np.ndarray
    coefficients: np.ndarray
    temperature_k: float | None = None
    pressure_atm: float | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        coeff = np.asarray(self.coefficients, dtype=float)
        if grid.ndim != 1 or grid.shape != coeff.shape:
            raise MalformedFile(
                f"{self.species_id}: grid and coefficients must be 1-D and equal length"
            )
        if grid.size < 2:
            raise MalformedFile(f"{self.species_id}: need at least two samples, got {grid.size}")
        bad = np.flatnonzero(np.diff(grid) <= 0)
        if bad.size:
            raise NonMonotoneGrid(
                f"{self.species_id}: grid not strictly increasing at sample {bad[0] + 1}"
            )
        neg = np.flatnonzero(coeff < 0)
        if neg.size:
            raise NegativeCoefficient(
                f"{self.species_id}: negative coefficient at sample {neg[0]}"
            )
        grid.setflags(write=False)
        coeff.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "coefficients", coeff)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def __call__(self, f):
        """Linearly interpolated coefficient at ``f`` (scalar or array)."""
        f_arr = np.asarray(f, dtype=float)
        lo, hi = self.span
        if np.any(f_arr < lo) or np.any(f_arr > hi):
            raise OutOfRange(
                f"{self.species_id}: frequency outside tabulated span [{lo:g}, {hi:g}] Hz"
            )
        out = np.interp(f_arr, self.grid, self.coefficients)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GasMixture:
    entries: Mapping[str, float]
    label: str = ""

    def __post_init__(self):
        entries = dict(self.entries)
        for species, frac in entries.items():
            if not (0.0 <= frac <= 1.0):
                raise ValueError(f"mole fraction of {species} outside [0, 1]: {frac}")
        total = math.fsum(entries.values())
        if not (0.99 <= total <= 1.01):
            raise ValueError(f"mole fractions sum to {total:.6f}, expected ~1")
        object.__setattr__(self, "entries", MappingProxyType(entries))

    @classmethod
    def from_percent(cls, percents: Mapping[str, float], label: str = "") -> "GasMixture":
        for species, pct in percents.items():
            if not (0.0 <= pct <= 100.0):
                raise ValueError(f"percent of {species} outside [0, 100]: {pct}")
        return cls({s: p / 100.0 for s, p in percents.items()}, label)


@dataclass(frozen=True)
class AbsorptionDatabase:
    spectra: Mapping[str, SpeciesSpectrum]
    temperature_k: float | None = None
    pressure_atm: float | None = None
    sources: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "spectra", MappingProxyType(dict(self.spectra)))
        object.__setattr__(self, "sources", MappingProxyType(dict(self.sources)))

    def __getitem__(self, species_id: str) -> SpeciesSpectrum:
        try:
            return self.spectra[species_id]
        except KeyError:
            raise UnknownSpecies(f"species {species_id!r} not in absorption database") from None


def synth_line_spectrum(
    lines: Iterable[tuple[float, float, float]],
    grid: Sequence[float],
    species_id: str = "synthetic",
    temperature_k: float | None = None,
    pressure_atm: float | None = None,
) -> SpeciesSpectrum:
    """Sum of Lorentzian lines ``peak * hw**2 / ((f - center)**2 + hw**2)`` on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise EmptyGrid("synthetic spectrum needs a non-empty grid")
    coeff = np.zeros_like(grid)
    for center, peak, hw in lines:
        if peak < 0:
            raise ValueError(f"line at {center:g} Hz has negative peak {peak}")
        if hw <= 0:
            raise ValueError(f"line at {center:g} Hz has non-positive half-width {hw}")
        coeff += peak * hw**2 / ((grid - center) ** 2 + hw**2)
    return SpeciesSpectrum(species_id, grid, coeff, temperature_k, pressure_atm)


def _data_lines(path: Path):
    """Yield (line number, stripped text) skipping blanks; comments are kept."""
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if text:
                yield lineno, text


def _parse_meta(comment: str, meta: dict):
    body = comment.lstrip("#").strip()
    if ":" in body:
        key, _, value = body.partition(":")
        meta[key.strip().lower()] = value.strip()


def load_species_spectrum(path) -> SpeciesSpectrum:
    """Read a ``frequency_hz,absorption_per_m`` CSV table.

    Comment lines start with ``#``; ``# species: X``, ``# temperature_k: T`` and
    ``# pressure_atm: P`` comments set the metadata. Without a species comment
    the file stem is used.
    """
    path = Path(path)
    meta: dict[str, str] = {}
    header_seen = False
    freqs: list[float] = []
    coeffs: list[float] = []
    prev_line = None
    try:
        lines = list(_data_lines(path))
    except UnicodeDecodeError as exc:
        raise MalformedFile(f"{path}: not UTF-8 text ({exc})") from None
    for lineno, text in lines:
        if text.startswith("#"):
            _parse_meta(text, meta)
            continue
        cells = [c.strip() for c in text.split(",")]
        if not header_seen:
            if tuple(cells) != SPECTRUM_HEADER:
                raise MalformedFile(
                    f"{path}:{lineno}: expected header {','.join(SPECTRUM_HEADER)!r}, got {text!r}"
                )
            header_seen = True
            continue
        if len(cells) != 2:
            raise MalformedFile(f"{path}:{lineno}: expected 2 columns, got {len(cells)}")
        try:
            f, k = float(cells[0]), float(cells[1])
        except ValueError:
            raise MalformedFile(f"{path}:{lineno}: non-numeric value in {text!r}") from None
        if not (math.isfinite(f) and math.isfinite(k)):
            raise MalformedFile(f"{path}:{lineno}: non-finite value in {text!r}")
        if freqs and f <= freqs[-1]:
            raise NonMonotoneGrid(
                f"{path}:{lineno}: frequency {f:g} not above previous {freqs[-1]:g} (line {prev_line})"
            )
        if k < 0:
            raise NegativeCoefficient(f"{path}:{lineno}: negative absorption coefficient {k:g}")
        freqs.append(f)
        coeffs.append(k)
        prev_line = lineno
    if not header_seen:
        raise MalformedFile(f"{path}: missing header line")
    if len(freqs) < 2:
        raise MalformedFile(f"{path}: need at least two data rows, got {len(freqs)}")

    def _meta_float(key):
        if key not in meta:
            return None
        try:
            return float(meta[key])
        except ValueError:
            raise MalformedFile(f"{path}: bad {key} value {meta[key]!r}") from None

    return SpeciesSpectrum(
        meta.get("species", path.stem),
        np.array(freqs),
        np.array(coeffs),
        _meta_float("temperature_k"),
        _meta_float("pressure_atm"),
    )


def write_species_spectrum(spectrum: SpeciesSpectrum, path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# species: {spectrum.species_id}\n")
        if spectrum.temperature_k is not None:
            fh.write(f"# temperature_k: {spectrum.temperature_k:g}\n")
        if spectrum.pressure_atm is not None:
            fh.write(f"# pressure_atm: {spectrum.pressure_atm:g}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SPECTRUM_HEADER)
        for f, k in zip(spectrum.grid, spectrum.coefficients):
            writer.writerow((repr(float(f)), repr(float(k))))


def load_mixture(path) -> GasMixture:
    """Read ``species_id,percent`` lines; ``# label: name`` sets the label."""
    path = Path(path)
    meta: dict[str, str] = {}
    percents: dict[str, float] = {}
    for lineno, text in _data_lines(path):
        if text.startswith("#"):
            _parse_meta(text, meta)
            continue
        cells = [c.strip() for c in text.split(",")]
        if len(cells) != 2 or not cells[0]:
            raise MalformedFile(f"{path}:{lineno}: expected 'species_id,percent', got {text!r}")
        if cells[1] == "percent":  # optional header
            continue
        try:
            pct = float(cells[1])
        except ValueError:
            raise MalformedFile(f"{path}:{lineno}: non-numeric percent {cells[1]!r}") from None
        if not (0.0 <= pct <= 100.0):
            raise MalformedFile(f"{path}:{lineno}: percent {pct:g} outside [0, 100]")
        if cells[0] in percents:
            raise MalformedFile(f"{path}:{lineno}: duplicate species {cells[0]!r}")
        percents[cells[0]] = pct
    try:
        return GasMixture.from_percent(percents, meta.get("label", path.stem))
    except ValueError as exc:
        raise MalformedFile(f"{path}: {exc}") from None


def load_database(directory) -> AbsorptionDatabase:
    """Load every ``*.csv`` spectrum in ``directory``.

    The database temperature/pressure tag is set only when all spectra agree.
    """
    directory = Path(directory)
    spectra = {}
    sources = {}
    for path in sorted(directory.glob("*.csv")):
        spec = load_species_spectrum(path)
        if spec.species_id in spectra:
            raise MalformedFile(f"{path}: duplicate species {spec.species_id!r}")
        spectra[spec.species_id] = spec
        sources[spec.species_id] = str(path)
    if not spectra:
        raise MalformedFile(f"{directory}: no spectrum files found")
    temps = {s.temperature_k for s in spectra.values()}
    pressures = {s.pressure_atm for s in spectra.values()}
    return AbsorptionDatabase(
        spectra,
        temps.pop() if len(temps) == 1 else None,
        pressures.pop() if len(pressures) == 1 else None,
        sources,
    )


def bundled_spectra_dir() -> Path:
    return Path(str(resources.files("reradmimo") / "data" / "spectra"))


def bundled_mixture_path(name: str) -> Path:
    return Path(str(resources.files("reradmimo") / "data" / "mixtures" / f"{name}.csv"))


def default_database() -> AbsorptionDatabase:
    return load_database(bundled_spectra_dir())


def mixture_coefficient(db: AbsorptionDatabase, mix: GasMixture, f):
    """Medium absorption coefficient (1/m) at ``f``; scalar in, scalar out."""
    f_arr = np.asarray(f, dtype=float)
    total = np.zeros_like(f_arr)
    for species, frac in mix.entries.items():
        total = total + frac * np.asarray(db[species](f_arr))
    return float(total) if total.ndim == 0 else total
