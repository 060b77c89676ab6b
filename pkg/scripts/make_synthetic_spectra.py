"""Regenerate the bundled synthetic spectra and standard-atmosphere mixtures.

    python scripts/make_synthetic_spectra.py [output_data_dir]
"""
import sys
from pathlib import Path

import numpy as np

from reradmimo.spectra import (
    SYNTHETIC_GRID,
    SYNTHETIC_H2O_LINES,
    SYNTHETIC_O2_LINES,
    TABLE_MIXTURES_PERCENT,
    TABLE_SPECIES,
    SpeciesSpectrum,
    synth_line_spectrum,
    write_species_spectrum,
)

TEMPERATURE_K = 273.0
PRESSURE_ATM = 1.0


def main(out_dir: Path):
    spectra_dir = out_dir / "spectra"
    mix_dir = out_dir / "mixtures"
    spectra_dir.mkdir(parents=True, exist_ok=True)
    mix_dir.mkdir(parents=True, exist_ok=True)

    for species, lines in (("O2", SYNTHETIC_O2_LINES), ("H2O", SYNTHETIC_H2O_LINES)):
        spec = synth_line_spectrum(lines, SYNTHETIC_GRID, species, TEMPERATURE_K, PRESSURE_ATM)
        write_species_spectrum(spec, spectra_dir / f"{species}.csv")
    # remaining constituents are transparent at mmWave/THz in this model
    for species in TABLE_SPECIES:
        if species in ("O2", "H2O"):
            continue
        grid = np.array([SYNTHETIC_GRID[0], SYNTHETIC_GRID[-1]])
        spec = SpeciesSpectrum(species, grid, np.zeros(2), TEMPERATURE_K, PRESSURE_ATM)
        write_species_spectrum(spec, spectra_dir / f"{species}.csv")

    for label, row in TABLE_MIXTURES_PERCENT.items():
        with open(mix_dir / f"{label}.csv", "w", encoding="utf-8") as fh:
            fh.write(f"# label: {label}\n")
            for species, pct in zip(TABLE_SPECIES, row):
                fh.write(f"{species},{pct:.6f}\n")


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src" / "reradmimo" / "data"
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else default)
