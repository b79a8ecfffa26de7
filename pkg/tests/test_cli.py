import pytest

from hybrid_search.cli import COMPARE_HEADER, main
from hybrid_search.config import load_config, parse_grid, read_csv_report
from hybrid_search.schedule import build_schedule


def run(tmp_path, name, *args):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out.read_text(encoding="utf-8")


def test_schedule_empty_table(tmp_path):
    code, text = run(tmp_path, "s.csv", "schedule", "--l", "0", "--delta", "0.5", "--seed", "1")
    header, rows = read_csv_report(text)
    assert code == 0
    assert header == ["j", "phi", "varphi"] and rows == []


def test_schedule_round_trip_bit_exact(tmp_path):
    _, text = run(tmp_path, "s.csv", "schedule", "--l", "6", "--delta", "0.5659", "--seed", "1")
    _, rows = read_csv_report(text)
    ref = build_schedule(6, 0.5659)
    assert [float(r["phi"]) for r in rows] == list(ref.phi)
    assert [float(r["varphi"]) for r in rows] == list(ref.varphi)
    _, single = run(tmp_path, "one.csv", "schedule", "--l", "1", "--seed", "1")
    assert float(read_csv_report(single)[1][0]["phi"]) == build_schedule(1, 0.5659).phi[0]


def test_report_embeds_version_config_and_seed(tmp_path):
    _, text = run(tmp_path, "s.csv", "simulate", "--lambda", "0.1", "--l", "3", "--seed", "17")
    assert text.startswith("# hybrid-search 0.1.0 simulate\n")
    cfg = load_config(tmp_path / "s.csv")
    assert cfg == {"delta": "0.5659", "l": "3", "lambda": "0.1", "seed": "17"}
    _, rows = read_csv_report(text)
    row = rows[0]
    assert float(row["p_simulated"]) == pytest.approx(float(row["p_closed_form"]), abs=1e-10)
    assert float(row["p_lower_bound"]) <= float(row["p_closed_form"])


def test_missing_seed_is_generated(tmp_path, capsys):
    run(tmp_path, "s.csv", "schedule", "--l", "2")
    err = capsys.readouterr().err
    assert err.startswith("seed = ")
    seed = err.split("=")[1].strip()
    assert load_config(tmp_path / "s.csv")["seed"] == seed


def test_compare_is_deterministic(tmp_path):
    args = ["compare", "--algorithms", "hybrid,boyer,okamoto,yoder,pi3", "--lambda-grid", "0.01,0.04",
            "--trials", "3000", "--seed", "5"]
    _, a = run(tmp_path, "a.csv", *args)
    _, b = run(tmp_path, "b.csv", *args)
    assert a == b
    _, c = run(tmp_path, "c.csv", "compare", "--config", str(tmp_path / "a.csv"))
    assert c == a
    header, rows = read_csv_report(a)
    assert header == COMPARE_HEADER
    assert len(rows) == 10


def test_compare_hybrid_small_bound(tmp_path):
    _, text = run(tmp_path, "h.csv", "compare", "--algorithms", "hybrid", "--lambda", "0.04",
                  "--trials", "100000", "--seed", "2024")
    row = read_csv_report(text)[1][0]
    assert float(row["mean_total_queries"]) <= 5.643 / 0.2
    assert float(row["table1_bound"]) == pytest.approx(28.215)


def test_compare_merged_halves_iteration_charge(tmp_path):
    base = ["compare", "--algorithms", "hybrid", "--lambda", "0.01", "--trials", "20000", "--seed", "8"]
    _, std = run(tmp_path, "std.csv", *base, "--accounting", "standard")
    _, mer = run(tmp_path, "mer.csv", *base, "--accounting", "merged")
    s, m = read_csv_report(std)[1][0], read_csv_report(mer)[1][0]
    assert float(m["mean_oracle_queries"]) == pytest.approx(float(s["mean_oracle_queries"]) / 2, rel=1e-15)
    assert float(m["mean_iterations"]) == float(s["mean_iterations"])


def test_compare_rejects_unknown_algorithm(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["compare", "--algorithms", "hybrid,grover9", "--seed", "1", "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 2


def test_compare_rejects_bad_lambda(tmp_path):
    with pytest.raises(SystemExit):
        main(["compare", "--lambda-grid", "0.5,1.5", "--seed", "1", "--out", str(tmp_path / "x.csv")])


def test_montecarlo_against_expectation(tmp_path):
    _, text = run(tmp_path, "mc.csv", "montecarlo", "--lambda-grid", "0.001,0.05", "--trials", "50000",
                  "--seed", "3", "--model", "paper")
    for row in read_csv_report(text)[1]:
        assert abs(float(row["z_score"])) < 4
        assert float(row["mean_total_queries"]) <= float(row["bound_total_queries"])


def test_montecarlo_step3_regime_has_no_expectation(tmp_path):
    _, text = run(tmp_path, "mc.csv", "montecarlo", "--lambda", "0.9", "--trials", "1000", "--seed", "3")
    assert read_csv_report(text)[1][0]["expected_total_queries"] == ""


def test_optimize_record(tmp_path):
    _, text = run(tmp_path, "o.csv", "optimize", "--grid-density", "60", "--seed", "1")
    vals = {r["quantity"]: r["value"] for r in read_csv_report(text)[1]}
    assert float(vals["g"]) == pytest.approx(5.643, abs=0.005)
    assert vals["interior_minimum"] == "true"
    assert int(vals["refine_path_length"]) > 0


def test_validate_passes(tmp_path):
    code, text = run(tmp_path, "v.csv", "validate", "--seed", "1", "--sv-cases", "40",
                     "--l-grid", "lin:0:200:9", "--lambda-grid", "log:1e-4:0.99:8")
    assert code == 0
    assert {r["status"] for r in read_csv_report(text)[1]} == {"pass"}


def test_validate_detects_perturbation(tmp_path):
    code, text = run(tmp_path, "v.csv", "validate", "--seed", "1", "--sv-cases", "20", "--perturb", "1e-3",
                     "--l-grid", "lin:0:100:5", "--lambda-grid", "log:1e-3:0.5:5")
    status = {r["suite"]: r["status"] for r in read_csv_report(text)[1]}
    assert code == 1
    assert status["closed-form"] == "FAIL" and status["statevector"] == "FAIL"


def test_validate_empty_grid_is_vacuous(tmp_path, capsys):
    code, text = run(tmp_path, "v.csv", "validate", "--seed", "1", "--lambda-grid", "", "--sv-cases", "0",
                     "--bound-lambda-grid", "")
    assert code == 0
    assert "vacuously" in capsys.readouterr().err


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# a comment\nl = 4\ndelta = 0.3\nseed = 12\n", encoding="utf-8")
    _, text = run(tmp_path, "s.csv", "schedule", "--config", str(cfg))
    assert len(read_csv_report(text)[1]) == 4
    # explicit flags win over the file
    _, text = run(tmp_path, "s2.csv", "schedule", "--config", str(cfg), "--l", "2")
    assert len(read_csv_report(text)[1]) == 2


def test_config_rejects_malformed(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("l 4\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(cfg)


def test_grid_specs():
    assert parse_grid("") == []
    assert parse_grid("0.1, 0.2") == [0.1, 0.2]
    assert parse_grid("lin:0:500:20", integer=True)[:3] == [0, 26, 52]
    g = parse_grid("log:1e-4:0.99:30")
    assert len(g) == 30 and g[0] == pytest.approx(1e-4) and g[-1] == pytest.approx(0.99)


def test_stdout_output(capsys):
    assert main(["simulate", "--lambda", "0.5", "--l", "1", "--seed", "3"]) == 0
    assert "p_closed_form" in capsys.readouterr().out
