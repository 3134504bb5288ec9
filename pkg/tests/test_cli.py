"""End-to-end command-line tests driving main() in process."""

import csv
import json

import numpy as np
import pytest

from spinring.cli import main


def read_csv(path):
    meta, rows = {}, []
    with open(path, newline="") as handle:
        data_lines = []
        for line in handle:
            if line.startswith("# "):
                key, _, value = line[2:].partition(" = ")
                meta[key.strip()] = value.strip()
            else:
                data_lines.append(line)
    reader = csv.reader(data_lines)
    header = next(reader)
    for record in reader:
        rows.append(dict(zip(header, record)))
    return meta, rows


def test_spectrum_contains_named_levels(tmp_path):
    out = tmp_path / "levels.csv"
    code = main(["spectrum", "--model", "xxz", "--n", "3", "--j", "-1",
                 "--delta", "1", "--b", "1", "--out", str(out)])
    assert code == 0
    meta, rows = read_csv(out)
    energies = [float(r["energy_ed"]) for r in rows]
    assert any(abs(e + 5) <= 1e-10 for e in energies)  # W ground
    assert any(abs(e + 3) <= 1e-10 for e in energies)  # all-up
    assert meta["n_sites"] == "3"
    exact = [float(r["energy_exact"]) for r in rows]
    assert np.allclose(energies, exact, atol=1e-9)


def test_sector_spectrum_columns(tmp_path):
    out = tmp_path / "sector.csv"
    assert main(["spectrum", "--model", "xx", "--n", "4", "--j", "-1",
                 "--m", "2", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    refs = sorted(float(r["energy_reference"]) for r in rows)
    exacts = sorted(float(r["energy_exact"]) for r in rows)
    assert refs[0] == pytest.approx(-4.0, abs=1e-12)
    assert exacts[0] == pytest.approx(-4 * np.sqrt(2), abs=1e-12)


def test_crossing_first_field(tmp_path):
    out = tmp_path / "crossing.csv"
    assert main(["crossing", "--model", "xx", "--n", "7", "--j", "-1",
                 "--m", "0", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    assert float(rows[0]["b_cross"]) == pytest.approx(2.0, abs=1e-8)


def test_scan_is_byte_identical_across_threads(tmp_path):
    args = ["scan", "--model", "xx", "--n", "4", "--j", "-1",
            "--b-from", "3", "--b-to", "1", "--steps", "17"]
    first = tmp_path / "scan1.csv"
    second = tmp_path / "scan8.csv"
    third = tmp_path / "scan8b.csv"
    assert main(args + ["--threads", "1", "--out", str(first)]) == 0
    assert main(args + ["--threads", "8", "--out", str(second)]) == 0
    assert main(args + ["--threads", "8", "--out", str(third)]) == 0
    assert first.read_bytes() == second.read_bytes() == third.read_bytes()


def test_scan_plot_written(tmp_path):
    out = tmp_path / "scan.csv"
    fig = tmp_path / "scan.png"
    assert main(["scan", "--model", "xxz", "--n", "3", "--j", "-1",
                 "--delta", "1", "--b-from", "3", "--b-to", "0",
                 "--steps", "7", "--out", str(out), "--plot", str(fig)]) == 0
    assert fig.exists() and fig.stat().st_size > 0


def test_json_round_trip(tmp_path):
    out = tmp_path / "gap.json"
    assert main(["gap", "--model", "xx", "--n", "4", "--j", "-1",
                 "--bperp", "0.01", "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    row = payload["rows"][0]
    assert row["gap_first_order"] == pytest.approx(2 * 0.01 * np.sqrt(4), rel=1e-12)
    assert abs(row["gap"] - row["gap_first_order"]) / row["gap_first_order"] < 0.05


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("model = xx\nn = 5\nj = -1\nb_from = 3\nb_to = 1\nsteps = 5\n")
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert main(["scan", "--config", str(cfg), "--out", str(out_a)]) == 0
    meta_a, rows_a = read_csv(out_a)
    assert meta_a["n_sites"] == "5"
    assert len(rows_a) == 5
    # flags override the file
    assert main(["scan", "--config", str(cfg), "--steps", "3",
                 "--out", str(out_b)]) == 0
    _, rows_b = read_csv(out_b)
    assert len(rows_b) == 3


def test_sweep_summary_and_series(tmp_path):
    summary = tmp_path / "sweep.csv"
    assert main(["sweep", "--model", "xx", "--n", "4", "--j", "-1",
                 "--bperp", "0.05", "--b-from", "3", "--b-to", "1",
                 "--ramp-time", "40", "--dt", "0.02",
                 "--out", str(summary)]) == 0
    meta, rows = read_csv(summary)
    assert len(rows) == 1
    assert float(rows[0]["max_norm_drift"]) <= 1e-8
    assert "lz_note" in meta

    series = tmp_path / "series.csv"
    assert main(["sweep", "--model", "xx", "--n", "4", "--j", "-1",
                 "--bperp", "0.05", "--b-from", "3", "--b-to", "1",
                 "--ramp-time", "4", "--dt", "0.02", "--series",
                 "--out", str(series)]) == 0
    _, rows = read_csv(series)
    assert len(rows) > 5
    assert all(0.0 <= float(r["w_fidelity"]) <= 1.0 for r in rows)


def test_thermal_table(tmp_path):
    out = tmp_path / "thermal.csv"
    assert main(["thermal", "--model", "xxz", "--n", "3", "--j", "-1",
                 "--delta", "1", "--beta", "5", "--b-list", "1.8", "2.0",
                 "--out", str(out)]) == 0
    _, rows = read_csv(out)
    by_field = {float(r["b_field"]): r for r in rows}
    assert float(by_field[2.0]["p_two_level"]) == pytest.approx(0.5, abs=1e-12)
    assert float(by_field[1.8]["trace_distance_to_model"]) <= 1e-6
    assert float(by_field[1.8]["witness_thermal"]) < 0


def test_entangle_tables(tmp_path):
    pairs = tmp_path / "pairs.csv"
    assert main(["entangle", "--model", "xx", "--n", "5", "--j", "-1",
                 "--what", "pairs", "--state", "w", "--out", str(pairs)]) == 0
    _, rows = read_csv(pairs)
    assert len(rows) == 10
    assert all(float(r["concurrence"]) == pytest.approx(0.4, abs=1e-9)
               for r in rows)

    bisep = tmp_path / "bisep.csv"
    assert main(["entangle", "--model", "xx", "--n", "4", "--j", "-1",
                 "--what", "bisep", "--alpha-steps", "5",
                 "--out", str(bisep)]) == 0
    _, rows = read_csv(bisep)
    assert len(rows) == 5
    assert all(float(r["min_bound_margin"]) >= -1e-9 for r in rows)


def test_usage_errors_exit_2(tmp_path):
    assert main(["scan", "--model", "nonsense"]) == 2
    assert main(["thermal", "--model", "xxz", "--n", "4", "--j", "-1",
                 "--delta", "0.5"]) == 2
    assert main(["spectrum", "--model", "xxz", "--n", "4", "--j", "-1"]) == 2
    assert main(["gap", "--model", "xx", "--n", "4", "--j", "-1"]) == 2  # bperp 0


def test_budget_errors_exit_3():
    assert main(["spectrum", "--model", "xx", "--n", "15", "--j", "-1"]) == 3


def test_verify_csv_and_exit(tmp_path):
    out = tmp_path / "verify.csv"
    code = main(["verify", "--n-max", "4", "--cascade-n", "24",
                 "--out", str(out)])
    assert code == 0
    _, rows = read_csv(out)
    ids = [r["claim_id"] for r in rows]
    assert len(ids) == len(set(ids)) == 16
    verdicts = {r["claim_id"]: r["verdict"] for r in rows}
    assert verdicts["three-site-degenerate-levels"] == "erratum"
    assert verdicts["cascade-crossing-formula"] == "asymptotic"
    assert all(r["status"] == "ok" for r in rows)
