import json

from quenchlab.cli import main


def run(tmp_path, *argv):
    return main([*argv, "--output-dir", str(tmp_path)])


def test_bounds_table_and_determinism(tmp_path):
    assert run(tmp_path / "a", "bounds-table", "--t-max", "6") == 0
    assert run(tmp_path / "b", "bounds-table", "--t-max", "6") == 0
    csv_a = (tmp_path / "a" / "bounds_table.csv").read_text()
    csv_b = (tmp_path / "b" / "bounds_table.csv").read_text()
    assert csv_a == csv_b
    assert csv_a.splitlines()[0] == (
        "t,epsilon,growth_bound_bits,approx_unoptimized_bits,approx_optimized_bits,"
        "log2_bond_dim,min_bond_dim"
    )
    manifest = json.loads((tmp_path / "a" / "bounds_table_manifest.json").read_text())
    assert manifest["command"] == "bounds-table"
    assert manifest["summary"]["epsilon_threshold"] > 0.5
    assert {"config", "versions", "wall_clock_s", "outputs"} <= set(manifest)


def test_entropy_curve(tmp_path):
    assert run(tmp_path, "entropy-curve", "--n", "41", "--block", "8", "--t-max", "3", "--t-step", "0.5") == 0
    lines = (tmp_path / "entropy_curve.csv").read_text().splitlines()
    assert lines[0] == "t,s_block_bits"
    first = lines[1].split(",")
    last = lines[-1].split(",")
    assert abs(float(first[1])) < 1e-9  # t = 0 starts at zero entropy
    assert float(last[1]) > 1.0
    # fan-out across threads must keep the CSV byte-identical
    assert run(tmp_path / "mt", "entropy-curve", "--n", "41", "--block", "8",
               "--t-max", "3", "--t-step", "0.5", "--threads", "3") == 0
    assert (tmp_path / "mt" / "entropy_curve.csv").read_text() == "\n".join(lines) + "\n"


def test_verify_theorem(tmp_path):
    assert run(tmp_path, "verify-theorem", "--n", "21", "--block", "10", "--t-grid", "3.9,4.0") == 0
    manifest = json.loads((tmp_path / "verify_theorem_manifest.json").read_text())
    assert manifest["summary"]["points"] == 2
    assert manifest["summary"]["applicable"] == 1
    assert manifest["summary"]["violations"] == 0
    assert manifest["summary"]["min_growth_margin_bits"] >= 0.0
    rows = (tmp_path / "verify_theorem.csv").read_text().splitlines()
    assert len(rows) == 3


def test_bessel_check_small_grids(tmp_path):
    code = run(
        tmp_path, "bessel-check",
        "--z-step", "1.0", "--lower-z-max", "5", "--pair-z-max", "5", "--tail-k-max", "4",
    )
    assert code == 0
    manifest = json.loads((tmp_path / "bessel_check_manifest.json").read_text())
    assert manifest["summary"]["violations"] == 0


def test_oracle_compare_and_violation_exit(tmp_path):
    assert run(tmp_path / "ok", "oracle-compare", "--n-list", "5", "--t-list", "0,1") == 0
    manifest = json.loads((tmp_path / "ok" / "oracle_compare_manifest.json").read_text())
    assert manifest["summary"]["violations"] == 0
    assert manifest["summary"]["max_entropy_dev"] <= 1e-8
    # an impossible tolerance must flip the exit code to 2, keeping the rows
    assert run(tmp_path / "bad", "oracle-compare", "--n-list", "5", "--t-list", "1", "--tolerance", "0") == 2
    rows = (tmp_path / "bad" / "oracle_compare.csv").read_text().splitlines()
    assert len(rows) >= 2


def test_tebd_run(tmp_path):
    code = run(
        tmp_path, "tebd-run",
        "--n", "8", "--t-final", "0.5", "--dt", "0.05", "--discard-tol", "1e-12", "--sample-every", "5",
    )
    assert code == 0
    lines = (tmp_path / "tebd_run.csv").read_text().splitlines()
    assert lines[0] == "t,max_bond,s_half_bits,eps_hat,fidelity"
    last = lines[-1].split(",")
    assert float(last[4]) > 0.999  # fidelity attached at small N


def test_invalid_configuration_paths(tmp_path):
    assert run(tmp_path, "entropy-curve", "--n", "-3") == 1
    assert run(tmp_path, "verify-theorem", "--block", "200") == 1
    assert run(tmp_path, "tebd-run", "--dt", "-0.1") == 1
    missing = main(["bounds-table", "--config", str(tmp_path / "nope.json"), "--output-dir", str(tmp_path)])
    assert missing == 1
    bad_key = tmp_path / "bad.json"
    bad_key.write_text(json.dumps({"unknown_knob": 1}))
    assert main(["bounds-table", "--config", str(bad_key), "--output-dir", str(tmp_path)]) == 1


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 31, "block": 6, "t_max": 2.0, "t_step": 1.0}))
    code = main([
        "entropy-curve", "--config", str(cfg), "--t-max", "1.0",
        "--output-dir", str(tmp_path),
    ])
    assert code == 0
    manifest = json.loads((tmp_path / "entropy_curve_manifest.json").read_text())
    assert manifest["config"]["n"] == 31          # taken from the file
    assert manifest["config"]["t_max"] == 1.0     # overridden by the flag
