import io
import json
import os
import re
import subprocess
import sys

import pytest

from pseudobound.cli import run
from pseudobound.geometry import bipermutation_of_patch, load_patch
from pseudobound.verify import data_path

PATCHES = data_path("patches")
TABLES = data_path("tables")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_count_patch_biperm():
    code, out, _ = call("count-patch", "--biperm", "1 2 3 1 2 3")
    assert code == 0
    assert out.splitlines()[0] == "2"
    assert "log2 >= 1.00" in out and "memo: entries=" in out


def test_count_patch_sources_agree():
    assert call("count-patch", "--complete", "5")[1].splitlines()[0] == "62"
    assert call("count-patch", "--grid3", "2")[1].splitlines()[0] == "20"
    assert call("count-patch", "--grid3", "3", "--threads", "4", "--memo-cap", "5")[1].splitlines()[0] == "1320"


@pytest.mark.parametrize("name", ["fig5.patch", "p4.patch", "p6.patch"])
def test_file_and_biperm_roundtrip(name):
    path = os.path.join(PATCHES, name)
    bip = bipermutation_of_patch(load_patch(path))
    if bip.segment_count > 24:
        # both routes must at least agree on the refusal
        assert call("count-patch", "--file", path)[0] == 1
        assert call("count-patch", "--biperm", str(bip))[0] == 1
        return
    a = call("count-patch", "--file", path)[1].splitlines()[0]
    b = call("count-patch", "--biperm", str(bip))[1].splitlines()[0]
    assert a == b


def test_json_summary():
    code, out, _ = call("count-patch", "--complete", "4", "--json", "--show-biperm")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == "8" and data["subcommand"] == "count-patch"
    assert data["inputs"]["bipermutation"] == "1 2 3 4 1 2 3 4"


def test_lgv():
    code, out, _ = call("lgv", "--side", "2")
    assert code == 0 and out.splitlines()[0] == "20"
    code, out, _ = call("lgv", "--table", "10,20")
    assert "130.523" in out and "539.561" in out
    code, out, _ = call("lgv", "--side", "10", "--log2-places", "1")
    assert "log2 >= 130.5" in out


def test_bound_summary_line():
    code, out, _ = call("bound", "--config", os.path.join(TABLES, "k4.cfg"))
    assert code == 0
    last = out.strip().splitlines()[-1]
    fields = dict(kv.split("=") for kv in last.split()[1:])
    assert last.startswith("SUMMARY ")
    assert set(fields) == {"c", "k", "c_final"}
    assert fields["k"] == "4" and fields["c_final"] == "0.21830"
    assert abs(float(fields["c"]) - 0.16373) <= 1e-5 + 1e-12


def test_oracle():
    code, out, _ = call("oracle", "bn", "--n", "5")
    assert code == 0 and out.splitlines()[0] == "62"
    code, out, _ = call("oracle", "crosscheck", "--lmax", "2", "--nmax", "4")
    assert code == 0 and out.count("PASS") == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["count-patch", "--biperm", "1 2 1"],
        ["count-patch", "--file", "/nonexistent.patch"],
        ["count-patch", "--complete", "3", "--threads", "0"],
        ["count-patch", "--bogus"],
        ["count-patch"],
        ["lgv", "--side", "0"],
        ["lgv", "--table", "3,x"],
        ["lgv", "--side", "500"],
        ["bound", "--config", "/nonexistent.cfg"],
        ["oracle", "bn", "--n", "9"],
        ["frobnicate"],
    ],
)
def test_invalid_input_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1
    assert err.startswith("error:")


def test_malformed_patch_reports_position(tmp_path):
    bad = tmp_path / "bad.patch"
    bad.write_text("line 1 0 1/2\nboundary 0 0 1 0 oops 1\n")
    code, _, err = call("count-patch", "--file", str(bad))
    assert code == 1 and "line 2" in err


def test_mismatch_exit_2(monkeypatch):
    import pseudobound.cli as cli
    from pseudobound.oracle import CrosscheckCase, CrosscheckReport

    monkeypatch.setattr(cli, "crosscheck", lambda l, n: CrosscheckReport([CrosscheckCase("x", 1, 2)]))
    code, out, _ = call("oracle", "crosscheck")
    assert code == 2 and "FAIL" in out


def test_reports_are_deterministic():
    strip = lambda s: re.sub(r"elapsed: \S+", "", s)
    a = call("count-patch", "--grid3", "3")[1]
    b = call("count-patch", "--grid3", "3")[1]
    assert strip(a) == strip(b)
    c = call("bound", "--config", os.path.join(TABLES, "k12.cfg"))[1]
    d = call("bound", "--config", os.path.join(TABLES, "k12.cfg"))[1]
    assert c == d


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pseudobound", "lgv", "--side", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "20"
