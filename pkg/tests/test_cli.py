import subprocess
import sys

import pytest

from quadmaps.cli import main


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "quadmaps.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_count():
    code, out, _ = run_cli("count", "--m", "1", "--p", "4")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run_cli("count", "--m", "0", "--p", "2")
    assert code == 0 and out.strip() == "1"


def test_count_log_and_table(tmp_path):
    code, out, _ = run_cli("count", "--m", "2", "--p", "4", "--log")
    assert code == 0
    assert abs(float(out) - 2.302585092994046) < 1e-10
    path = tmp_path / "table.csv"
    code, _, _ = run_cli("count", "--m", "2", "--p", "4", "--table", "--out", str(path))
    assert code == 0
    lines = path.read_text().strip().split("\n")
    assert lines[1] == "m,ell,count"
    assert "1,1,2" in lines  # q(1,2) = 2


def test_validate_exit_codes():
    code, out, _ = run_cli("validate", "--n", "2", "--p", "4",
                           "--replicates", "200", "--seed", "7")
    assert code == 0
    assert ",0" in out.strip().split("\n")[-1]


def test_config_errors():
    code, _, err = run_cli("core-stats", "--n", "0")
    assert code == 2
    code, _, err = run_cli("restrict-stats", "--n", "10", "--eps", "0.5",
                           "--delta", "0.1")
    assert code == 2
    code, _, err = run_cli("tv", "--n", "5")
    assert code == 2


def test_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run_cli("core-stats", "--n", "100", "--replicates", "10",
                             "--seed", "42", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_mirrors_csv(tmp_path):
    import json

    code, out, _ = run_cli("core-stats", "--n", "50", "--replicates", "5",
                           "--seed", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"][0]["n"] == "50"
    assert set(payload["rows"][0]) == {
        "n", "alpha", "seed", "replicates", "frac_cemetery", "mean_area_ratio",
        "se_area_ratio", "mean_perim_ratio", "se_perim_ratio",
    }


def test_sample_emits_parseable_maps(tmp_path):
    from quadmaps.planemap import PlaneMap

    path = tmp_path / "maps.txt"
    code, _, _ = run_cli("sample", "--n", "5", "--replicates", "3",
                         "--seed", "9", "--out", str(path))
    assert code == 0
    blocks = path.read_text().strip().split("\n\n")
    assert len(blocks) == 4  # header + 3 maps
    for block in blocks[1:]:
        m = PlaneMap.parse(block)
        assert m.euler_characteristic() == 2


def test_gw_check_runs():
    code, out, _ = run_cli("gw-check", "--gap", "1", "--replicates", "4000",
                           "--seed", "7")
    assert code == 0


def test_in_process_main():
    assert main(["count", "--m", "1", "--p", "2"]) == 0
