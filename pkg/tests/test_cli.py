"""CLI contract: formats, exit codes, determinism, round-trips."""

import json

import pytest

from qsquare.cli import main
from qsquare.ir import from_json, to_json


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_synth_grid_row_t1_starts_with_a0a1(capsys):
    code, out, _ = run(["synth", "6", "--format", "grid"], capsys)
    assert code == 0
    rows = out.splitlines()
    assert rows[1].startswith("a0a1")
    assert rows[0].split(",")[0] == "a1"


def test_synth_expanded_json_has_no_macros(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, _, _ = run(["synth", "5", "--format", "json", "--expanded",
                      "--out", str(path)], capsys)
    assert code == 0
    data = json.loads(path.read_text())
    assert all(not g["kind"].startswith("macro") for g in data["gates"])
    assert data["wires"] > 0


def test_synth_macro_json_round_trips(tmp_path, capsys):
    path = tmp_path / "c.json"
    run(["synth", "6", "--out", str(path)], capsys)
    text = path.read_text()
    netlist = from_json(text)
    assert to_json(netlist) == text


def test_synth_rejects_small_width(capsys):
    code, _, err = run(["synth", "4"], capsys)
    assert code == 2
    assert "n > 4" in err


def test_synth_qasm_is_fully_primitive(capsys):
    code, out, _ = run(["synth", "5", "--format", "qasm"], capsys)
    assert code == 0
    assert "macro" not in out
    assert "cx q[" in out


def test_synth_deterministic_byte_identical(tmp_path, capsys):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    run(["synth", "8", "--format", "json", "--out", str(p1)], capsys)
    run(["synth", "8", "--format", "json", "--out", str(p2)], capsys)
    assert p1.read_bytes() == p2.read_bytes()


def test_verify_range_clean(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out, _ = run(["verify", "5..6", "--report", str(report)], capsys)
    assert code == 0
    assert "n=5" in out and "n=6" in out
    data = json.loads(report.read_text())
    assert data == {"inputs_checked": 96, "mismatches": []}


def test_verify_statevector_blocks(capsys):
    code, out, _ = run(["verify", "6", "--mode", "statevector-blocks"], capsys)
    assert code == 0
    assert "logical-and" in out and "adder-m3-carry" in out


def test_verify_mutated_netlist_fails(capsys):
    # gate 0 is the first partial-product AND; dropping it breaks squaring
    code, _, err = run(["verify", "5", "--mutate", "drop-gate:0"], capsys)
    assert code == 3
    assert "first failure" in err


def test_verify_range_outside_basis_window(capsys):
    code, _, err = run(["verify", "5..17"], capsys)
    assert code == 2
    assert "5..16" in err


def test_verify_bad_mutate_spec(capsys):
    code, _, _ = run(["verify", "5", "--mutate", "zap:1"], capsys)
    assert code == 2


def test_compare_t_counts_at_n6(tmp_path, capsys):
    csv_path = tmp_path / "t.csv"
    code, out, _ = run(["compare", "6..6", "--designs", "proposed,thapliyal",
                        "--csv", str(csv_path)], capsys)
    assert code == 0
    assert "152" in out and "440" in out
    text = csv_path.read_text()
    assert "6,proposed,t_count,152,," in text
    assert "6,thapliyal,t_count,440,," in text


def test_compare_ratios_table(capsys):
    code, out, _ = run(["compare", "--ratios"], capsys)
    assert code == 0
    assert "50.00%" in out and "66.67%" in out and "6.25%" in out


def test_compare_odd_width_uses_odd_polynomials(capsys):
    code, out, _ = run(["compare", "5..5", "--designs", "proposed"], capsys)
    assert code == 0
    assert "92" in out and "(n=5)" in out


def test_compare_measured_reports_delta_formula(capsys):
    code, out, _ = run(["compare", "6..6", "--designs", "proposed", "--measured"],
                       capsys)
    assert code == 0
    assert "T-count delta -8 (formula -8)" in out


def test_compare_unknown_design(capsys):
    code, _, err = run(["compare", "6", "--designs", "banerjee"], capsys)
    assert code == 2
    assert "unknown design" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
