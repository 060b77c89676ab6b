"""CSV emission, parsing and run manifests.

Files are written to a temporary sibling and renamed into place, so a
failed run never leaves a partial CSV behind.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from pathlib import Path

from .experiments import CapacityStats

RESULTS_HEADER = (
    "sweep_value", "frequency_hz", "distance_m", "mode", "scheme",
    "capacity_mean_bpshz", "capacity_std", "capacity_se", "k_factor_db",
    "rank_mean", "cond_db", "trials", "seed",
)
HISTOGRAM_HEADER = ("bin_left", "bin_right", "density", "quarter_circle_density")
BOUNDS_HEADER = (
    "k_factor", "k_factor_db", "n", "snr_db", "upper_bound_bpshz",
    "lower_bound_bpshz", "lower_bound_se", "limit_high_absorption_bpshz",
    "limit_no_absorption_bpshz", "lower_trials", "lower_scale", "seed",
)


def fmt(value) -> str:
    """Shortest round-trip text for floats (``inf``/``nan`` included)."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def stats_row(s: CapacityStats) -> tuple:
    return (
        s.sweep_value, s.frequency_hz, s.distance_m, s.mode, s.scheme,
        s.capacity_mean, s.capacity_std, s.capacity_se, s.k_factor_db,
        s.rank_mean, s.cond_db, s.trials, s.seed,
    )


def results_csv(stats) -> str:
    return render_csv(RESULTS_HEADER, (stats_row(s) for s in stats))


def read_results_csv(path) -> list[CapacityStats]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != RESULTS_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        out = []
        for row in reader:
            out.append(CapacityStats(
                sweep_value=float(row[0]), frequency_hz=float(row[1]), distance_m=float(row[2]),
                mode=row[3], scheme=row[4], capacity_mean=float(row[5]), capacity_std=float(row[6]),
                capacity_se=float(row[7]), k_factor_db=float(row[8]), rank_mean=float(row[9]),
                cond_db=float(row[10]), trials=int(row[11]), seed=int(row[12]),
            ))
    return out


def read_table(path) -> tuple[tuple[str, ...], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return tuple(rows[0]), rows[1:]


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest_path(output) -> Path:
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def write_manifest(output, manifest: dict) -> Path:
    path = manifest_path(output)
    atomic_write_text(path, json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return path
