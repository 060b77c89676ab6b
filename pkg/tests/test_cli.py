import csv
import json
import math

import pytest

from reradmimo import cli
from reradmimo.output import (
    BOUNDS_HEADER,
    HISTOGRAM_HEADER,
    RESULTS_HEADER,
    manifest_path,
    read_results_csv,
    read_table,
    results_csv,
    sha256_file,
)

SMALL = ["--set", "array.n_tx=4", "--set", "array.n_rx=4", "--trials", "5"]


def run(args, env=None):
    return cli.run(args, environ=env or {})


@pytest.mark.example
def test_point_two_by_two_transparent(tmp_path):
    out = tmp_path / "p.csv"
    args = ["point", "--output", str(out), "--schemes", "BF", "--set", "medium.absorption_per_m=0", *SMALL]
    assert run(args) == 0
    first = out.read_bytes()
    rows = read_results_csv(out)
    assert len(rows) == 1 and rows[0].scheme == "BF" and rows[0].k_factor_db == math.inf
    assert run(args) == 0
    assert out.read_bytes() == first


@pytest.mark.example
def test_sweep_has_one_block_per_point(tmp_path):
    out = tmp_path / "s.csv"
    args = ["sweep", "--output", str(out), "--set", "sweep.points=10", "--set", "sweep.start=40e9",
            "--set", "sweep.stop=80e9", *SMALL, "--trials", "2"]
    assert run(args) == 0
    rows = read_results_csv(out)
    assert len(rows) == 10 * 3
    freqs = [r.frequency_hz for r in rows]
    assert freqs == sorted(freqs)
    assert len(set(freqs)) == 10


@pytest.mark.example
def test_bounds_rows_carry_limits(tmp_path):
    out = tmp_path / "b.csv"
    assert run(["bounds", "--output", str(out), "--set", "bounds.trials=3", "--set", "bounds.k_points=5"]) == 0
    header, rows = read_table(out)
    assert header == BOUNDS_HEADER and len(rows) == 5
    for row in rows:
        rec = dict(zip(header, row))
        assert float(rec["limit_high_absorption_bpshz"]) == pytest.approx(131.6, abs=0.1)
        assert float(rec["limit_no_absorption_bpshz"]) == pytest.approx(13.66, abs=0.01)


def test_svdist_writes_histogram_and_ks(tmp_path):
    out = tmp_path / "h.csv"
    args = ["svdist", "--output", str(out), "--set", "medium.absorption_per_m=1", "--set", "svdist.bins=10",
            "--set", "array.n_tx=16", "--set", "array.n_rx=16", "--trials", "3"]
    assert run(args) == 0
    header, rows = read_table(out)
    assert header == HISTOGRAM_HEADER and len(rows) == 10
    manifest = json.loads(manifest_path(out).read_text())
    assert 0 <= manifest["results"]["ks_distance"] <= 1


def test_header_and_round_trip(tmp_path):
    out = tmp_path / "p.csv"
    assert run(["point", "--output", str(out), "--mode", "noise", *SMALL]) == 0
    with open(out, newline="") as fh:
        assert tuple(next(csv.reader(fh))) == RESULTS_HEADER
    assert results_csv(read_results_csv(out)) == out.read_text()
    assert "inf" in out.read_text()


def test_manifest_contents(tmp_path):
    out = tmp_path / "p.csv"
    assert run(["point", "--output", str(out), "--seed", "42", "--config", "mmwave_winter", *SMALL]) == 0
    m = json.loads(manifest_path(out).read_text())
    assert m["seed"] == 42 and m["config"]["run.seed"] == 42
    assert m["subcommand"] == "point" and m["version"]
    assert m["started_utc"] <= m["stopped_utc"]
    assert m["output_sha256"] == sha256_file(out)
    digested = set(m["input_digests"])
    for species in ("H2O", "O2", "N2", "CO2", "O3", "N2O", "CO", "CH4"):
        assert any(p.endswith(f"{species}.csv") for p in digested)
    assert any(p.endswith("high_latitude_winter.csv") for p in digested)
    assert any(p.endswith("mmwave_winter.cfg") for p in digested)


def test_manifest_reproduces_csv(tmp_path):
    out = tmp_path / "a.csv"
    assert run(["point", "--output", str(out), "--seed", "7", *SMALL]) == 0
    m = json.loads(manifest_path(out).read_text())
    sets = []
    for key, value in m["config"].items():
        if isinstance(value, list):
            value = ",".join(value)
        elif value is None:
            value = "none"
        sets += ["--set", f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}"]
    again = tmp_path / "b.csv"
    assert run(["point", "--output", str(again), *sets]) == 0
    assert again.read_bytes() == out.read_bytes()


def test_environment_overrides(tmp_path):
    out = tmp_path / "e.csv"
    env = {"RERADMIMO_SEED": "11", "RERADMIMO_TRIALS": "3", "RERADMIMO_OUTPUT": str(out),
           "RERADMIMO_SCHEMES": "OL-MP"}
    assert run(["point", "--set", "array.n_tx=4", "--set", "array.n_rx=4"], env) == 0
    rows = read_results_csv(out)
    assert [(r.seed, r.trials, r.scheme) for r in rows] == [(11, 3, "OL-MP")]
    # flags win over the environment
    assert run(["point", "--set", "array.n_tx=4", "--set", "array.n_rx=4", "--seed", "12"], env) == 0
    assert read_results_csv(out)[0].seed == 12


def test_threads_do_not_change_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["point", "--output", str(a), *SMALL, "--trials", "9"]) == 0
    assert run(["point", "--output", str(b), *SMALL, "--trials", "9", "--threads", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "args, code",
    [
        (["point", "--set", "array.spacing_wavelengths=-1"], 2),
        (["point", "--config", "/missing/file.cfg"], 2),
        (["point", "--set", "nope"], 2),
        (["point", "--set", "medium.spectra_dir=/definitely/missing"], 3),
        (["point", "--set", "link.frequency_hz=5e9"], 3),  # outside bundled spectra
        (["svdist", "--mode", "noise"], 2),
    ],
)
def test_exit_codes(tmp_path, capsys, args, code):
    out = tmp_path / "x.csv"
    assert run([*args, "--output", str(out)]) == code
    assert "reradmimo:" in capsys.readouterr().err
    assert not out.exists()


def test_numerical_failure_exit_code(tmp_path, monkeypatch):
    from reradmimo import errors, experiments

    def boom(cfg, sweep_value=None):
        raise errors.NumericalFailure("SVD did not converge")

    monkeypatch.setattr(experiments, "run_point", boom)
    assert run(["point", "--output", str(tmp_path / "x.csv")]) == 4


def test_failed_write_leaves_no_partial_file(tmp_path, monkeypatch):
    out = tmp_path / "p.csv"
    out.write_text("previous\n")
    import os

    def fail(src, dst):
        raise OSError(28, "No space left on device", str(dst))

    monkeypatch.setattr(os, "replace", fail)
    assert run(["point", "--output", str(out), *SMALL]) == 1
    assert out.read_text() == "previous\n"
    assert [p.name for p in tmp_path.iterdir()] == ["p.csv"]


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        run(["plot"])
