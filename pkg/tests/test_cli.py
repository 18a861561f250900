"""Command-line interface: exit codes, formats, config handling, determinism."""
import csv
import io
import json

import pytest

from hushkit import ValidationError
from hushkit.cli import emit_report, main


def run(argv, tmp_path, name="out"):
    """Run the CLI in-process, returning (exit code, payload bytes)."""
    out = tmp_path / f"{name}.bin"
    code = main([*argv, "--output", str(out)])
    payload = out.read_bytes() if out.exists() else b""
    return code, payload


def run_json(argv, tmp_path, name="out"):
    code, payload = run([*argv, "--format", "json"], tmp_path, name)
    return code, json.loads(payload) if payload else None


# -------------------------------------------------------------------- econ

def test_econ_npv_json_goldens(configs_dir, tmp_path):
    code, doc = run_json(
        ["econ", "npv", "--config", str(configs_dir / "econ_base.json")],
        tmp_path)
    assert code == 0
    assert doc["npv"] == pytest.approx(4_050_145.63, abs=0.005)
    assert doc["irr"] == pytest.approx(0.513559, abs=1e-6)
    assert doc["break_even_period"] == 5
    assert doc["discount_rate"] == 0.025
    assert len(doc["cash_flows"]) == 24
    assert doc["cash_flows"][0] == -70_000.0


def test_econ_csv_shape(configs_dir, tmp_path):
    code, payload = run(
        ["econ", "npv", "--config", str(configs_dir / "econ_base.json"),
         "--format", "csv"], tmp_path)
    assert code == 0
    rows = list(csv.reader(io.StringIO(payload.decode())))
    assert rows[0] == ["period", "cash_flow", "discounted", "cumulative"]
    assert len(rows) == 25
    period1 = rows[1]
    assert float(period1[1]) == -70_000.0
    assert float(period1[2]) == pytest.approx(-70_000.0 / 1.025, abs=0.005)
    assert float(period1[3]) == -70_000.0


def test_discounted_breakeven_flag(configs_dir, tmp_path):
    code, doc = run_json(
        ["econ", "npv", "--config", str(configs_dir / "econ_base.json"),
         "--discounted-breakeven"], tmp_path)
    assert code == 0
    assert doc["break_even_period"] == 6


def test_require_irr_failure_still_writes_report(configs_dir, tmp_path):
    code, doc = run_json(
        ["econ", "npv", "--config", str(configs_dir / "econ_worst_case.json"),
         "--require-irr"], tmp_path)
    assert code == 2
    assert doc["irr"] is None
    assert doc["npv"] == pytest.approx(-542_295.19, abs=0.005)
    assert doc["break_even_period"] is None


def test_bare_and_wrapped_model_files_are_equivalent(configs_dir, tmp_path):
    bare = configs_dir / "econ_base.json"
    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps(
        {"model": json.loads(bare.read_text()), "adjustments": []}))
    _, payload_bare = run(
        ["econ", "npv", "--config", str(bare), "--format", "json"],
        tmp_path, "bare")
    _, payload_wrapped = run(
        ["econ", "npv", "--config", str(wrapped), "--format", "json"],
        tmp_path, "wrapped")
    assert payload_bare == payload_wrapped


def test_npv_and_scenario_commands_accept_the_same_config(configs_dir, tmp_path):
    config = str(configs_dir / "econ_best_case.json")
    _, via_npv = run(["econ", "npv", "--config", config, "--format", "json"],
                     tmp_path, "npv")
    _, via_scenario = run(
        ["econ", "scenario", "--config", config, "--format", "json"],
        tmp_path, "scenario")
    assert via_npv == via_scenario
    doc = json.loads(via_npv)
    assert doc["npv"] == pytest.approx(10_031_183.31, abs=0.005)


def test_scenario_reports_line_deltas(configs_dir, tmp_path):
    code, doc = run_json(
        ["econ", "scenario",
         "--config", str(configs_dir / "econ_best_case.json")], tmp_path)
    assert code == 0
    deltas = {d["name"]: d for d in doc["line_deltas"]}
    assert deltas["Development"]["pct"] == pytest.approx(-0.30, abs=1e-9)
    assert deltas["UNITS"]["adjusted"] == pytest.approx(2550.0, abs=1e-9)


def test_sensitivity_windows_and_row_count(configs_dir, tmp_path):
    code, doc = run_json(
        ["econ", "sensitivity",
         "--config", str(configs_dir / "econ_sensitivity_grid.json")],
        tmp_path)
    assert code == 0
    assert doc["base_npv"] == pytest.approx(4_050_145.63, abs=0.005)
    assert len(doc["rows"]) == 24
    units_rows = [r for r in doc["rows"] if r["parameter"] == "UNITS"]
    assert all((r["first"], r["last"]) == (5, 24) for r in units_rows)
    dev_rows = [r for r in doc["rows"] if r["parameter"] == "Development"]
    assert all((r["first"], r["last"]) == (1, 3) for r in dev_rows)
    dev_minus_30 = next(r for r in dev_rows
                        if r["pct"] == pytest.approx(-0.30, abs=1e-12))
    assert dev_minus_30["delta_npv"] == pytest.approx(42_840.35, abs=0.005)


# --------------------------------------------------------------------- anc

def test_anc_simulate_json(configs_dir, tmp_path):
    code, doc = run_json(
        ["anc", "simulate",
         "--config", str(configs_dir / "anc_tone_2tap.json")], tmp_path)
    assert code == 0
    assert doc["diverged"] is False
    assert doc["n_samples"] == 40_000
    assert doc["steady_state_attenuation_db"] == 120.0
    assert len(doc["attenuation_trace_db"]) == 20


def test_anc_divergence_exits_2_with_report(configs_dir, tmp_path):
    config = json.loads((configs_dir / "anc_tone_2tap.json").read_text())
    config["step_size"] = 10.0
    bad = tmp_path / "diverging.json"
    bad.write_text(json.dumps(config))
    code, doc = run_json(["anc", "simulate", "--config", str(bad)], tmp_path)
    assert code == 2
    assert doc["diverged"] is True


# -------------------------------------------------------------------- cost

def test_cost_bom_json_goldens(configs_dir, tmp_path):
    code, doc = run_json(
        ["cost", "bom", "--config", str(configs_dir / "cost_initial.json")],
        tmp_path)
    assert code == 0
    assert doc["direct_total"] == 107.16
    assert doc["total_manufacturing"] == 121.02
    assert doc["assembly_seconds"] == 1840.0
    assert doc["assembly_cost"] == 5.11
    assert doc["dfa_index"] == pytest.approx(0.091304, abs=1e-6)
    labels = {d["label"] for d in doc["discrepancies"]}
    assert "assembly_cost" in labels


def test_cost_bom_missing_csv_exits_3(configs_dir, tmp_path, capsys):
    config = json.loads((configs_dir / "cost_initial.json").read_text())
    config["bom_csv"] = "no_such_file.csv"
    broken = tmp_path / "cost.json"
    broken.write_text(json.dumps(config))
    code = main(["cost", "bom", "--config", str(broken)])
    assert code == 3
    assert "no_such_file.csv" in capsys.readouterr().err


# -------------------------------------------------------------------- plan

def test_plan_concept_csv_order_and_ranks(configs_dir, tmp_path):
    code, payload = run(
        ["plan", "concept",
         "--config", str(configs_dir / "plan_concept.json"),
         "--format", "csv"], tmp_path)
    assert code == 0
    rows = list(csv.reader(io.StringIO(payload.decode())))
    assert rows[0] == ["concept", "total", "rank"]
    assert [(r[0], r[2]) for r in rows[1:]] == [("A", "1"), ("B", "3"),
                                                ("C", "2")]
    assert rows[1][1] == "2.6800"


def test_plan_risk_json_quadrant_counts(configs_dir, tmp_path):
    code, doc = run_json(
        ["plan", "risk", "--config", str(configs_dir / "plan_risk.json")],
        tmp_path)
    assert code == 0
    assert doc["threshold"] == 5
    assert len(doc["items"]) == 54
    counts = {}
    for item in doc["items"]:
        counts[item["quadrant"]] = counts.get(item["quadrant"], 0) + 1
        assert item["score"] == item["probability"] * item["impact"]
    assert counts == {"MONITOR": 19, "CRITICAL": 14, "URGENT": 11, "LOW": 10}


def test_plan_market_json(configs_dir, tmp_path):
    code, doc = run_json(
        ["plan", "market", "--config", str(configs_dir / "plan_market.json")],
        tmp_path)
    assert code == 0
    assert doc["affected_population"] == 2_107_243.65
    assert doc["rounded_basis"] == 2_100_000.0
    assert doc["profit_exact_basis"] == 173_847_601.13
    assert doc["profit_rounded_basis"] == 173_250_000.0


# -------------------------------------------------------- errors and formats

def test_emit_report_rejects_unknown_format():
    with pytest.raises(ValidationError, match="--format"):
        emit_report(object(), "xml")


def test_unsupported_format_exits_1(configs_dir, capsys):
    code = main(["econ", "npv", "--config", str(configs_dir / "econ_base.json"),
                 "--format", "xml"])
    assert code == 1
    assert "--format" in capsys.readouterr().err


def test_missing_config_exits_3(tmp_path, capsys):
    code = main(["econ", "npv", "--config", str(tmp_path / "absent.json")])
    assert code == 3
    assert "absent.json" in capsys.readouterr().err


def test_invalid_json_exits_1_naming_file(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text("{")
    code = main(["econ", "npv", "--config", str(bad)])
    assert code == 1
    assert "broken.json" in capsys.readouterr().err


def test_unknown_config_field_exits_1(configs_dir, tmp_path, capsys):
    config = json.loads((configs_dir / "anc_tone_2tap.json").read_text())
    config["bogus_knob"] = 1
    bad = tmp_path / "anc.json"
    bad.write_text(json.dumps(config))
    code = main(["anc", "simulate", "--config", str(bad)])
    assert code == 1
    assert "bogus_knob" in capsys.readouterr().err


def test_missing_required_field_exits_1(configs_dir, tmp_path, capsys):
    config = json.loads((configs_dir / "anc_tone_2tap.json").read_text())
    del config["rng_seed"]
    bad = tmp_path / "anc.json"
    bad.write_text(json.dumps(config))
    code = main(["anc", "simulate", "--config", str(bad)])
    assert code == 1
    assert "rng_seed" in capsys.readouterr().err


def test_bad_weights_exit_1(tmp_path, capsys):
    matrix = tmp_path / "matrix.csv"
    matrix.write_text("Criterion,Weight,A\nFit,0.5,3\nCost,0.48,1\n")
    config = tmp_path / "concept.json"
    config.write_text(json.dumps({"matrix_csv": "matrix.csv"}))
    code = main(["plan", "concept", "--config", str(config)])
    assert code == 1
    assert "weights" in capsys.readouterr().err


def test_output_file_matches_stdout(configs_dir, tmp_path, capsysbinary):
    argv = ["plan", "market", "--config",
            str(configs_dir / "plan_market.json"), "--format", "json"]
    assert main(argv) == 0
    streamed = capsysbinary.readouterr().out
    _, filed = run(argv, tmp_path)
    assert streamed == filed


def test_table_format_is_default(configs_dir, capsysbinary):
    assert main(["plan", "market",
                 "--config", str(configs_dir / "plan_market.json")]) == 0
    text = capsysbinary.readouterr().out.decode()
    assert text.startswith("market sizing")
    assert "173,250,000.00" in text
