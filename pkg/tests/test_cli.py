"""Command-line client: exit codes, JSON payloads, output redirection."""

import json
from pathlib import Path

import pytest

from dychan.cli import main

GOLDEN = Path(__file__).parent / "golden" / "region_432.json"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_region_matches_golden_file(capsys):
    code, out, err = run(capsys, "region", "4", "3", "2")
    assert code == 0 and err == ""
    assert json.loads(out) == json.loads(GOLDEN.read_text())


def test_region_vertices_include_fractional_entries(capsys):
    code, out, _ = run(capsys, "region", "1", "1", "1", "--vertices")
    assert code == 0
    body = json.loads(out)
    flattened = [x for v in body["vertices"] for x in v["point"]]
    assert "1/2" in flattened


def test_region_rejects_unordered_gains(capsys):
    code, out, err = run(capsys, "region", "3", "4", "2")
    assert code == 2 and out == "" and "n1 >= n2 >= n3" in err


def test_check_member_exit_zero(capsys):
    code, out, _ = run(capsys, "check", "4", "3", "2", "1", "1", "1", "1", "1", "1")
    assert code == 0
    assert json.loads(out)["member"] is True


def test_check_non_member_exit_one_with_labels(capsys):
    code, out, _ = run(capsys, "check", "4", "3", "2", "0", "3", "0", "0", "0", "0")
    assert code == 1
    body = json.loads(out)
    assert body["member"] is False and body["violated"] == ["CS3b"]


def test_check_parse_failure_exit_two(capsys):
    code, _, err = run(capsys, "check", "4", "3", "2", "1", "x", "0", "0", "0", "0")
    assert code == 2 and "x" in err


def test_plan_simulate_exhaustive(capsys):
    code, out, _ = run(capsys, "plan", "4", "3", "2", "1", "1", "1", "1", "1", "1",
                       "--simulate", "--exhaustive")
    assert code == 0
    body = json.loads(out)
    assert body["simulation"]["passed"] is True
    assert body["simulation"]["trials"] == 64


def test_plan_fractional_echoes_extension_factor(capsys):
    code, out, _ = run(capsys, "plan", "2", "2", "2", *(["2/3"] * 6))
    assert code == 0
    body = json.loads(out)
    assert body["extension"]["q_factor"] == 3
    assert body["config"] == {"n1": 6, "n2": 6, "n3": 6}


def test_plan_out_of_region_exit_one(capsys):
    code, out, err = run(capsys, "plan", "4", "3", "2", "4", "0", "0", "0", "0", "0")
    assert code == 1
    body = json.loads(out)
    assert body["error"] == "NOT_IN_REGION" and "TRB1" in body["violated"]
    assert "outside the capacity region" in err


def test_plan_uni_directional_simulates_clean(capsys):
    code, out, _ = run(capsys, "plan", "4", "3", "2", "3", "0", "0", "0", "0", "0",
                       "--simulate")
    body = json.loads(out)
    assert code == 0
    assert [a["kind"] for a in body["assignments"]] == ["uni"]
    assert body["simulation"]["passed"] is True


def test_scan_small_instance(capsys):
    code, out, _ = run(capsys, "scan", "--max-n1", "2", "--seed", "3")
    assert code == 0
    body = json.loads(out)
    assert body["passed"] is True and len(body["configs"]) == 10


def test_scan_limit_requires_force(capsys):
    code, _, err = run(capsys, "scan", "--max-n1", "9")
    assert code == 2 and "safety limit" in err


def test_output_redirects_payload(tmp_path, capsys):
    target = tmp_path / "region.json"
    code, out, _ = run(capsys, "region", "4", "3", "2", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text()) == json.loads(GOLDEN.read_text())


def test_rationals_round_trip_through_strings(capsys):
    code, out, _ = run(capsys, "check", "2", "2", "2", "2/3", "2/3", "2/3",
                       "2/3", "2/3", "2/3")
    assert code == 0
    assert json.loads(out)["rates"] == ["2/3"] * 6


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["region", "4", "3"])
    assert exc.value.code == 2
