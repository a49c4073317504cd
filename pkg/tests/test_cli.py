import csv
import io
import json
import subprocess
import sys

import pytest

from rprim import cli


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(cli.parse_config(list(argv)), out, err)
    return code, out.getvalue(), err.getvalue()


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line]


def test_verify_41_line_fails():
    code, out, err = invoke("verify", "--q", "41", "--n", "2", "--r", "2", "--mode", "line")
    assert code == 1
    (report,) = json_lines(out)
    assert report["pass"] is False and report["exception_count"] > 0
    assert report["field"]["p"] == 41
    assert json_lines(err)[0]["summary"] == "verify"


def test_verify_43_line_passes():
    code, out, _ = invoke("verify", "--q", "43", "--n", "2", "--r", "2")
    assert code == 0 and json_lines(out)[0]["pass"] is True


def test_gamma_selftest_7_2_2():
    code, out, _ = invoke("gamma-selftest", "--q", "7", "--n", "2", "--r", "2")
    assert code == 0
    (result,) = json_lines(out)
    assert result["elements"] == 48
    assert result["max_dev_expanded"] < 1e-9 and result["max_dev_product"] < 1e-9
    assert result["expected_count"] == 8


def test_structure_5_2_4():
    code, out, _ = invoke("structure", "--q", "5", "--n", "2", "--r", "4")
    assert code == 0
    data = json_lines(out)[0]
    assert (data["s"], data["u"], data["pairs"], data["a_r"]) == (1, 3, [[2, 4, 8]], 8)
    assert data["bound_holds"] is False


def test_bound_table_and_summary():
    code, out, err = invoke("bound", "--n", "2", "--r", "1", "--q-max", "20")
    assert code == 0
    rows = json_lines(out)
    assert [row["q"] for row in rows][:3] == [2, 3, 4]
    assert json_lines(err)[0]["first_q_holding"] == 17


def test_scan_summary():
    code, out, err = invoke("scan", "--n", "2", "--r", "2", "--q-lo", "3", "--q-hi", "50")
    assert code == 1
    reports = json_lines(out)
    assert all(rep["q"] % 2 for rep in reports)
    summary = json_lines(err)[0]
    assert summary["largest_failing_q"] == 41
    assert summary["bound_conflicts"] == []


def test_katz_report():
    code, out, _ = invoke("katz", "--q", "7", "--n", "2")
    assert code == 0
    data = json_lines(out)[0]
    assert set(data) == {"q", "n", "bound", "max_abs_sum", "ratio", "argmax"}
    assert data["ratio"] <= 1 + 1e-9


def test_csv_output():
    code, out, _ = invoke("scan", "--n", "2", "--r", "1", "--q-lo", "2", "--q-hi", "9", "--csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == cli.REPORT_COLUMNS
    assert [int(row["q"]) for row in rows] == [2, 3, 4, 5, 7, 8, 9]
    assert {row["pass"] for row in rows} == {"true"}


def test_output_is_byte_identical_across_threads():
    base = ("verify", "--q", "37", "--n", "3", "--r", "1", "--max-exceptions", "50")
    _, one, _ = invoke(*base, "--threads", "1")
    _, many, _ = invoke(*base, "--threads", "3")
    assert one == many


def test_report_json_is_exact():
    _, out, _ = invoke("verify", "--q", "9", "--n", "2", "--r", "5", "--full-counts")

    def walk(value):
        if isinstance(value, dict):
            for v in value.values():
                walk(v)
        elif isinstance(value, list):
            for v in value:
                walk(v)
        else:
            assert not isinstance(value, float)

    walk(json_lines(out)[0])


@pytest.mark.parametrize(
    "argv",
    [
        ("structure", "--q", "7", "--n", "2", "--r", "5"),
        ("structure", "--q", "6", "--n", "2"),
        ("verify", "--q", "7", "--n", "1"),
        ("scan", "--n", "2", "--q-lo", "10", "--q-hi", "3"),
        ("verify", "--q", "7", "--n", "2", "--max-exceptions", "-1"),
        ("katz", "--q", "2", "--n", "17"),
    ],
)
def test_precondition_errors(argv):
    code, out, err = invoke(*argv)
    assert code == 2 and out == ""
    (reason,) = json_lines(err)
    assert reason["error"] == "precondition" and reason["reason"]


@pytest.mark.parametrize(
    "argv",
    [
        ("structure", "--q", "7"),
        ("katz", "--q", "7", "--n", "2", "--csv"),
        ("verify", "--q", "7", "--n", "2", "--mode", "plane"),
        ("frobnicate",),
        ("verify", "--q", "0", "--n", "2"),
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        cli.parse_config(list(argv))
    assert info.value.code == 2


def test_env_cap_lowers_limit(monkeypatch):
    monkeypatch.setenv("RPRIM_MAX_FIELD", "1000")
    code, _, err = invoke("verify", "--q", "41", "--n", "2", "--r", "2")
    assert code == 2 and "exceeds" in json_lines(err)[0]["reason"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rprim", "structure", "--q", "7", "--n", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["u"] == 6
    bad = subprocess.run(
        [sys.executable, "-m", "rprim", "structure", "--q", "7"],
        capture_output=True, text=True, check=False,
    )
    assert bad.returncode == 2
