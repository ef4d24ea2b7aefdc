"""Command-line interface: exit codes, CSV contract, deterministic outputs."""
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from shamirleak import cli
from shamirleak.cli import SweepRow, main
from shamirleak.infotheory import binary_entropy, star_iter

REPO = Path(__file__).resolve().parent.parent
NSWEEP = str(REPO / "configs" / "nsweep.json")
MARKOV = str(REPO / "configs" / "markov.json")
COLLUSION = str(REPO / "configs" / "collusion.json")

HEADER = "axis,bound,exact,margin"


def run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.strip().splitlines()
    assert lines[0] == HEADER
    return [tuple(float(x) for x in line.split(",")) for line in lines[1:]]


def test_share_writes_expected_file(tmp_path, capsys):
    out = tmp_path / "shares.json"
    code, _, _ = run(
        ["share", "--secret", "5", "--n", "2", "--t", "2",
         "--field", "l=3,poly=0b1011", "--coeffs", "2", "-o", str(out)],
        capsys,
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["shares"] == [7, 1]
    assert payload["gammas"] == [1, 2]


def test_share_stdout_and_seed_determinism(capsys):
    args = ["share", "--secret", "3", "--n", "3", "--t", "2",
            "--field", "l=3,poly=0b1011", "--seed", "42"]
    code, out1, _ = run(args, capsys)
    assert code == 0
    code, out2, _ = run(args, capsys)
    assert out1 == out2
    assert json.loads(out1)["N"] == 3


def test_share_rejects_bad_field(capsys):
    code, _, err = run(
        ["share", "--secret", "1", "--n", "2", "--t", "2",
         "--field", "l=3,poly=0b111"],
        capsys,
    )
    assert code == 2
    assert "error" in err


def test_reconstruct_round_trip(tmp_path, capsys):
    out = tmp_path / "shares.json"
    run(["share", "--secret", "6", "--n", "3", "--t", "2",
         "--field", "l=3,poly=0b1011", "--seed", "9", "-o", str(out)], capsys)
    code, stdout, _ = run(["reconstruct", str(out)], capsys)
    assert code == 0 and stdout.strip() == "6"
    code, stdout, _ = run(["reconstruct", str(out), "--use", "1,3"], capsys)
    assert code == 0 and stdout.strip() == "6"


def test_reconstruct_below_threshold_is_an_error(tmp_path, capsys):
    out = tmp_path / "shares.json"
    run(["share", "--secret", "6", "--n", "2", "--t", "2",
         "--field", "l=3,poly=0b1011", "--seed", "1", "-o", str(out)], capsys)
    code, _, err = run(["reconstruct", str(out), "--use", "1"], capsys)
    assert code == 2
    assert "threshold" in err


def test_verify_nsweep_config(capsys):
    code, out, err = run(["verify", "--config", NSWEEP], capsys)
    assert code == 0
    assert "PASS" in err
    rows = parse_csv(out)
    assert len(rows) == 6
    for n, (axis, bound, exact, margin) in enumerate(rows, start=1):
        assert axis == n
        closed = 1.0 - binary_entropy(star_iter(0.1, n))
        assert abs(exact - closed) < 1e-9
        assert abs(bound - 0.8 ** (2 * n)) < 1e-9
        assert margin >= 0.0


def test_verify_markov_config(capsys):
    code, out, _ = run(["verify", "--config", MARKOV], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 36
    for _, bound, exact, margin in rows:
        assert bound == 0.0
        assert exact <= 1e-9
        assert margin >= -1e-9


def test_verify_collusion_config(capsys):
    code, out, _ = run(["verify", "--config", COLLUSION], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert [r[0] for r in rows] == [0.0, 1.0]
    assert all(r[3] >= 0 for r in rows)


def test_verify_writes_csv_file(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    code, stdout, _ = run(["verify", "--config", NSWEEP, "-o", str(out)], capsys)
    assert code == 0
    assert stdout == ""
    assert out.read_text().splitlines()[0] == HEADER


def test_verify_output_is_deterministic(capsys):
    args = ["verify", "--config", NSWEEP,
            "--set", "secret.mode=dirichlet",
            "--set", "secret.seed=5", "--set", "secret.trials=5"]
    code, out1, _ = run(args, capsys)
    assert code == 0
    _, out2, _ = run(args, capsys)
    assert out1 == out2


def test_verify_flag_overrides_win(capsys):
    code, out, _ = run(
        ["verify", "--config", NSWEEP, "--set", "channel.q=0.2",
         "--set", "sweep.values=[1]"],
        capsys,
    )
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 1
    assert abs(rows[0][2] - (1.0 - binary_entropy(0.2))) < 1e-9


def test_verify_q_half_everything_vanishes(capsys):
    code, out, _ = run(
        ["verify", "--config", NSWEEP, "--set", "channel.q=0.5"], capsys
    )
    assert code == 0
    for _, bound, exact, _ in parse_csv(out):
        assert abs(bound) < 1e-12
        assert abs(exact) < 1e-12


def test_verify_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(
        cli, "_verify_rows", lambda cfg: ([SweepRow(1.0, 0.0, 0.5)], [])
    )
    code, out, err = run(["verify", "--config", NSWEEP], capsys)
    assert code == 1
    assert "FAIL" in err
    assert parse_csv(out)[0][3] == -0.5


def test_verify_all_rows_capped_exit_code(monkeypatch, capsys):
    monkeypatch.setenv("SHAMIRLEAK_ENUM_CAP", "1")
    code, out, err = run(["verify", "--config", NSWEEP], capsys)
    assert code == 3
    assert "skipped" in err
    assert out.strip() == HEADER  # header still emitted, no data rows


def test_verify_config_error_messages(tmp_path, capsys):
    code, _, err = run(["verify", "--config", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and "cannot read" in err

    bad = tmp_path / "bad.json"
    bad.write_text('{"mode": "bitwise",\n  broken\n}')
    code, _, err = run(["verify", "--config", str(bad)], capsys)
    assert code == 2 and "line 2" in err

    code, _, err = run(["verify", "--config", NSWEEP, "--set", "mode=banana"], capsys)
    assert code == 2 and "banana" in err

    code, _, err = run(
        ["verify", "--config", NSWEEP, "--set", "sweep.axis=volume"], capsys
    )
    assert code == 2 and "volume" in err

    code, _, err = run(["verify", "--config", NSWEEP, "--set", "noequals"], capsys)
    assert code == 2


def test_analyze_collusion_report(capsys):
    code, out, _ = run(["analyze", "--config", COLLUSION], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["N"] == 3 and data["t"] == 2 and data["t_prime"] == 0
    assert data["n_tilde"] >= 1
    assert abs(data["eta_ds_bound"] - math.sqrt(2 * data["eta_mis_bound"])) < 1e-9


def test_analyze_matrix_channel_nonuniform_secret_has_no_bitwise_bound(tmp_path, capsys):
    # neither per-bit proposition applies: channel is not a BSC and the
    # secret is not uniform
    cfg = {
        "scheme": {"kind": "all_ones", "N": 2, "field": {"l": 1}},
        "channel": {"kind": "matrix", "rows": [[0.8, 0.2], [0.3, 0.7]]},
        "secret": {"mode": "point", "value": 0},
    }
    path = tmp_path / "m.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(["analyze", "--config", str(path)], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["per_bit_bound"] is None
    assert data["bitwise_note"] != ""

    cfg["secret"] = {"mode": "uniform"}
    path.write_text(json.dumps(cfg))
    _, out, _ = run(["analyze", "--config", str(path)], capsys)
    assert json.loads(out)["per_bit_bound"] is not None


def test_verify_renders_svg_alongside_csv(tmp_path, capsys):
    csv_path = tmp_path / "rows.csv"
    svg_path = tmp_path / "rows.svg"
    code, _, _ = run(
        ["verify", "--config", NSWEEP, "-o", str(csv_path), "--svg", str(svg_path)],
        capsys,
    )
    assert code == 0
    # the combined path and the standalone plot command agree byte for byte
    replot = tmp_path / "replot.svg"
    assert main(["plot", str(csv_path), "-o", str(replot)]) == 0
    assert svg_path.read_bytes() == replot.read_bytes()


def test_plot_is_byte_identical(tmp_path, capsys):
    csv_path = tmp_path / "rows.csv"
    run(["verify", "--config", NSWEEP, "-o", str(csv_path)], capsys)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["plot", str(csv_path), "-o", str(a)]) == 0
    assert main(["plot", str(csv_path), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    svg = a.read_text()
    assert svg.lstrip().startswith("<?xml")
    assert "<dc:date>" not in svg
    assert "bound" in svg and "exact" in svg


def test_plot_clamps_zero_rows_with_footnote(tmp_path, capsys):
    csv_path = tmp_path / "markov.csv"
    run(["verify", "--config", MARKOV, "-o", str(csv_path)], capsys)
    out = tmp_path / "m.svg"
    assert main(["plot", str(csv_path), "-o", str(out)]) == 0
    assert "values below 1e-12" in out.read_text()


def test_plot_rejects_malformed_csv(tmp_path, capsys):
    bad_header = tmp_path / "h.csv"
    bad_header.write_text("axis,bound\n1,2\n")
    code, _, err = run(["plot", str(bad_header), "-o", str(tmp_path / "x.svg")], capsys)
    assert code == 2 and "header" in err

    bad_row = tmp_path / "r.csv"
    bad_row.write_text(HEADER + "\n1,0.5,0.25,0.25\n2,oops,0,0\n")
    code, _, err = run(["plot", str(bad_row), "-o", str(tmp_path / "x.svg")], capsys)
    assert code == 2 and "row 3" in err

    empty = tmp_path / "e.csv"
    empty.write_text(HEADER + "\n")
    code, _, err = run(["plot", str(empty), "-o", str(tmp_path / "x.svg")], capsys)
    assert code == 2 and "no data rows" in err


def test_console_entry_point_end_to_end(tmp_path):
    csv_path = tmp_path / "rows.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "shamirleak.cli", "verify",
         "--config", NSWEEP, "-o", str(csv_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert csv_path.read_text().startswith(HEADER)
    proc = subprocess.run(
        [sys.executable, "-m", "shamirleak.cli", "plot", str(csv_path),
         "-o", str(tmp_path / "out.svg")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out.svg").stat().st_size > 0
