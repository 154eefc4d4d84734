import csv
import io
import json

import pytest

from semiorbit import __version__
from semiorbit.cli import config_from_args, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compositions_csv(capsys):
    code, out, _ = run(capsys, "compositions", "--parts", "1,2", "--max-n", "10", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and list(rows[0]) == ["n", "exact", "asymptotic", "ratio"]
    assert rows[-1]["n"] == "10" and rows[-1]["exact"] == "89"


def test_census_report(capsys):
    code, out, _ = run(capsys, "census", "--degrees", "3,7", "--constant", "1", "--point", "5",
                       "--bound", "1e6")
    doc = json.loads(out)
    assert code == 0 and doc["version"] == __version__
    assert doc["result"]["censuses"][0]["point_count"] == 3
    assert doc["config"]["bounds"] == ["1000000"]


def test_reports_are_byte_identical(capsys, tmp_path):
    args = ["exponents", "--degrees", "2,3", "--delta", "1e-3"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_mersenne_alias_and_file(tmp_path):
    cfg = config_from_args(["exponents", "--degrees", "mersenne"])
    assert cfg.degrees[-1] == 2**61 - 1 and cfg.tail_bound == 10**26
    assert config_from_args(["exponents", "--degrees", "mersenne", "--no-tail"]).tail_bound is None
    set_file = tmp_path / "set.json"
    set_file.write_text('{"constant": "1", "degrees": [3, 7, 31], "tail_bound": "1e26"}')
    cfg = config_from_args(["exponents", "--degrees", str(set_file)])
    assert cfg.degrees == [3, 7, 31] and cfg.tail_bound == 10**26


def test_env_precision(monkeypatch):
    monkeypatch.setenv("SEMIORBIT_DPS", "75")
    assert config_from_args(["exponents", "--degrees", "2,3"]).precision == 75
    assert config_from_args(["exponents", "--degrees", "2,3", "--precision", "90"]).precision == 90


@pytest.mark.parametrize("argv", [
    ["census", "--degrees", "3,7", "--bound", "1e6,1e3"],
    ["exponents", "--degrees", "2,3", "--delta", "-1"],
    ["exponents", "--degrees", "6,7", "--delta", "0.2"],
    ["nonsense"],
])
def test_invalid_config_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert json.loads(err)["exit_code"] == 2


def test_resource_exit_4(capsys):
    code, _, err = run(capsys, "census", "--degrees", "2,3", "--bound", "1e300", "--max-entries", "3")
    assert code == 4 and json.loads(err)["kind"] == "resource"


def test_freeness(capsys):
    _, out, _ = run(capsys, "freeness", "--degrees", "2,3,5", "--max-length", "3")
    assert json.loads(out)["result"]["free_up_to_length"] is True
    _, out, _ = run(capsys, "freeness", "--diagnostic-pair", "--max-length", "2")
    assert "[0, 0] = [0, 1]" in json.loads(out)["result"]["relations"]


def test_approx_and_output_file(capsys, tmp_path):
    target = tmp_path / "e.json"
    code, out, _ = run(capsys, "approx", "--degrees", "2,3", "--delta", "0.01", "-o", str(target))
    doc = json.loads(target.read_text())
    assert code == 0 and out == ""
    assert doc["result"]["exponent_set"]["lower"] == ["139", "220"]
    assert doc["result"]["verification"]["ok"]


def test_report_with_cache(capsys, tmp_path):
    cache = tmp_path / "c.jsonl"
    code, out, _ = run(capsys, "report", "--degrees", "2,3", "--delta", "1e-3", "--cache", str(cache),
                       "--bound", "1e16,1e32,1e64,1e128")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["bracket"]["b_lower"] <= res["oracle"]["b"] <= res["bracket"]["b_upper"]
    assert "growth_fit" in res and res["explicit_constants"]["C_lower"] > 0
    assert cache.read_text().startswith('{"meta"')
