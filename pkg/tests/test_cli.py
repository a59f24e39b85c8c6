import io
import json
import subprocess
import sys

import pytest

from conftest import GOLDEN
from hardmap import cli


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), buf)
    return code, buf.getvalue()


def test_series_plain_matches_golden():
    code, text = run("series", "--order", "10")
    assert code == 0
    assert text == (GOLDEN / "series_order10.txt").read_text()


def test_series_json_matches_golden():
    code, text = run("series", "--order", "10", "--format", "json")
    ref = json.loads((GOLDEN / "series_order10.json").read_text())
    assert code == 0 and json.loads(text) == ref


def test_series_at_a_fugacity():
    assert run("series", "--order", "4", "--z", "1") == (0, "g^2: 2\ng^4: 15\n")


def test_formula():
    assert run("formula", "--n", "1") == (0, "1 + z\n")
    assert run("formula", "--n", "2", "--z", "1/3")[1] == "1/3 19/3\n"
    code, text = run("formula", "--n", "3", "--scan", "0:3:3", "--format", "csv")
    assert text.splitlines() == ["z,value", "0,12", "1,150", "2,492", "3,1110"]


def test_census_outputs():
    code, text = run("census", "--vertices", "6", "--mode", "good")
    assert (code, text) == (0, "6 vertices, good: 12 + 60z + 66z^2 + 12z^3 [12, 60, 66, 12]\n")
    code, text = run("census", "--vertices", "4", "--mode", "maps", "--format", "json")
    assert json.loads(text) == {"schema": "hardmap-census/1", "vertices": 4, "mode": "maps",
                                "coefficients": [3, 9, 3]}


def test_threads_give_identical_bytes():
    base = run("census", "--vertices", "8", "--mode", "maps", "--format", "json")
    assert run("census", "--vertices", "8", "--mode", "maps", "--format", "json",
               "--threads", "3") == base
    assert run("sumrule", "--vertices", "6", "--threads", "2") == run("sumrule", "--vertices", "6")


def test_usage_errors_exit_2():
    assert run("census", "--vertices", "12")[0] == 2
    assert run("census", "--vertices", "5")[0] == 2
    assert run("census", "--vertices", "4", "--threads", "0")[0] == 2
    assert run("series", "--order", "3")[0] == 2
    assert run("critical", "--z", "-1")[0] == 2
    assert run("critical", "--scan", "0:1:2", "--n", "50")[0] == 2
    assert run("formula", "--n", "1", "--scan", "0:1")[0] == 2
    assert run("verify-all", "--max-vertices", "10")[0] == 2
    assert run("nonsense")[0] == 2


def test_allow_large_lifts_the_cap():
    code, text = run("census", "--vertices", "10", "--max-vertices", "6", "--allow-large",
                     "--threads", "2")
    assert code == 0 and text.endswith("[288, 2592, 7584, 8400, 3168, 288]\n")


def test_check_commands():
    code, text = run("sumrule", "--vertices", "4")
    assert code == 0 and text.splitlines()[-1] == "ALL PASS (1/1)"
    code, text = run("roundtrip", "--vertices", "6", "--format", "json")
    doc = json.loads(text)
    assert code == 0 and doc["ok"] and len(doc["checks"]) == 5
    assert {c["name"].split(",")[0] for c in doc["checks"]} == {
        "acceptable", "prop_c1", "prop_c3", "roundtrip_map", "roundtrip_tree"}


def test_failed_check_exits_1(monkeypatch):
    monkeypatch.setattr(cli, "conjugation_checks", lambda order: False)
    code, text = run("verify-all", "--max-vertices", "2")
    assert code == 1
    assert "FAIL conjugation relations" in text


def test_ising():
    code, text = run("ising", "--order", "4")
    assert code == 0
    assert text.splitlines() == ["g^2: z", "g^3: 2z", "g^4: 6z",
                                 "PASS quartic relation for P through g^4", "ALL PASS (1/1)"]


def test_critical():
    assert run("critical")[1] == "z_- -512/3125 g_-^2 234375/1048576\nz_+ 32 g_+^2 15/4096\n"
    code, text = run("critical", "--scan=-512/3125:32:2", "--format", "csv")
    rows = text.splitlines()
    assert rows[0] == "z,g_c_squared,branch,u"
    assert rows[1].startswith("-512/3125,") and rows[-1] == "32,0.003662109375,high-z,"
    code, text = run("critical", "--z", "0", "--n", "200")
    last = text.splitlines()[-1].split()
    assert last[0] == "gamma" and abs(float(last[1]) - 2.5) < 1e-3


def test_verify_all_default():
    code, text = run("verify-all", "--max-vertices", "8", "--threads", "2")
    assert code == 0, text
    assert text.splitlines()[-1].startswith("ALL PASS")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hardmap.cli", "formula", "--n", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "1 + z\n"


@pytest.mark.parametrize("fmt", ["plain", "json", "csv"])
def test_every_format_is_deterministic(fmt):
    a = run("critical", "--scan", "0:4:4", "--format", fmt)
    assert a == run("critical", "--scan", "0:4:4", "--format", fmt)
    assert a[0] == 0 and a[1]
