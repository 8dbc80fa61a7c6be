import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from avtest import EfficiencyReport, TestResult
from avtest.cli import main, read_values
from avtest.montecarlo import CriticalValueTable, PowerEstimate


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def datafile(tmp_path):
    def make(values, name="data.txt"):
        p = tmp_path / name
        p.write_text("\n".join(str(v) for v in values) + "\n")
        return str(p)
    return make


# ── test ─────────────────────────────────────────────────────────────────────

def test_two_point_file(datafile):
    code, out, _ = run("test", datafile([1, 2]), "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["value"] == 0.0
    assert rec["p_value"] == 0.5
    assert rec["decisions"] == {"0.05": False}


def test_json_round_trip(datafile):
    x = np.random.default_rng(4).exponential(size=40)
    _, out, _ = run("test", datafile(x), "--kind", "kolmogorov", "--k", "3", "--reps", "200",
                    "--format", "json")
    rec = json.loads(out)
    rec.pop("decisions")
    res = TestResult.from_dict(rec)
    assert res.p_method == "montecarlo" and res.n == 40 and 0 < res.p_value <= 1


def test_negative_value_names_line(datafile):
    code, _, err = run("test", datafile([1.0, -2.0, 3.0]))
    assert code == 1
    assert "line 2" in err and "negative" in err


def test_unparseable_and_empty(datafile, tmp_path):
    code, _, err = run("test", datafile(["1.0", "2.0", "abc"]))
    assert code == 1 and "line 3" in err
    empty = tmp_path / "empty.txt"
    empty.write_text("\n\n")
    code, _, err = run("test", str(empty))
    assert code == 1 and "no data" in err
    code, _, err = run("test", str(tmp_path / "missing.txt"))
    assert code == 1


def test_blank_lines_and_comments_skipped(datafile):
    p = datafile(["# header comment", "1.5", "", "0.25", "3"])
    assert read_values(p).tolist() == [1.5, 0.25, 3.0]


def test_csv_column_selection(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("id,time\n1,0.5\n2,1.5\n3,2.5\n")
    assert read_values(str(p), "time").tolist() == [0.5, 1.5, 2.5]
    assert read_values(str(p), "1").tolist() == [0.5, 1.5, 2.5]
    q = tmp_path / "plain.csv"
    q.write_text("7,0.5\n8,1.5\n")
    assert read_values(str(q), "1").tolist() == [0.5, 1.5]
    code, _, err = run("test", str(p), "--column", "weight")
    assert code == 1 and "weight" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("id,time\n1,0.5\n2,-1\n")
    code, _, err = run("test", str(bad), "--column", "time")
    assert code == 1 and "line 3" in err


def test_rejection_exit_code(datafile):
    # near-constant lifetimes are far from exponential: I is strongly positive
    x = 5.0 + np.random.default_rng(0).uniform(size=100)
    code, out, _ = run("test", datafile(x), "--format", "json", "--alpha", "0.05,0.01")
    rec = json.loads(out)
    assert code == 2
    assert rec["decisions"] == {"0.05": True, "0.01": True}


def test_size_over_seeds(datafile):
    reject = 0
    seeds = 200
    for seed in range(seeds):
        x = np.random.default_rng(seed).exponential(size=100)
        code, _, _ = run("test", datafile(x), "--format", "csv")
        reject += code == 2
    se = math.sqrt(0.05 * 0.95 / seeds)
    assert abs(reject / seeds - 0.05) < 3 * se


def test_asymptotic_kolmogorov_is_an_error(datafile):
    code, _, err = run("test", datafile([1, 2, 3]), "--kind", "kolmogorov", "--method",
                       "asymptotic")
    assert code == 1 and "montecarlo" in err


def test_usage_errors_exit_one(datafile):
    assert run("test")[0] == 1
    assert run("bogus")[0] == 1
    assert run("test", datafile([1, 2]), "--alpha", "1.5")[0] == 1
    assert run("test", datafile([1, 2]), "--k", "1")[0] == 1
    assert run("critvals", "--reps", "0")[0] == 1


def test_text_output_lists_each_alpha(datafile):
    _, out, _ = run("test", datafile([0.3, 1.2, 2.0, 0.7]), "--alpha", "0.1,0.05")
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert "fail-to-reject" in lines[2]


# ── simulation subcommands ───────────────────────────────────────────────────

def test_critvals_json_and_reproducible():
    args = ("critvals", "--k", "2", "--n", "30", "--reps", "300", "--seed", "7", "--format", "json")
    code, out, _ = run(*args)
    assert code == 0
    table = CriticalValueTable.from_dict(json.loads(out))
    assert sorted(table.entries) == [0.005, 0.01, 0.05, 0.1]
    assert run(*args)[1] == out
    assert run(*args, "--threads", "4")[1] == out


def test_power_json_and_reproducible():
    args = ("power", "--family", "makeham", "--theta", "0.5", "--n", "30", "--reps", "200",
            "--seed", "3", "--format", "json")
    code, out, _ = run(*args)
    assert code == 0
    rec = json.loads(out)
    ests = [PowerEstimate.from_dict(e) for e in rec["estimates"]]
    assert [e.alpha for e in ests] == [0.05, 0.025, 0.01]
    assert run(*args)[1] == out


def test_power_rejects_bad_theta():
    code, _, err = run("power", "--family", "emnw", "--theta", "0.9", "--reps", "10")
    assert code == 1 and "theta" in err.lower()


# ── efficiency ───────────────────────────────────────────────────────────────

def test_efficiency_json_round_trip():
    code, out, _ = run("efficiency", "--kind", "kolmogorov", "--k", "2", "--family", "gamma",
                       "--format", "json")
    assert code == 0
    rep = EfficiencyReport.from_dict(json.loads(out)["reports"][0])
    assert rep.efficiency == pytest.approx(0.093, abs=0.005)


def test_efficiency_best_k():
    _, out, _ = run("efficiency", "--family", "emnw", "--best-k", "--format", "json")
    assert json.loads(out)["best_k"]["emnw"]["k"] == 6


def test_efficiency_unsupported_order():
    code, _, err = run("efficiency", "--kind", "kolmogorov", "--k", "4")
    assert code == 1 and "k = 4" in err


# ── lao ──────────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("kind,k", [("integral", 2), ("kolmogorov", 2), ("kolmogorov", 3)])
def test_lao_curve_integrates_to_one(kind, k):
    code, out, _ = run("lao", "--kind", kind, "--k", str(k), "--theta", "0.1")
    assert code == 0
    data = np.loadtxt(io.StringIO(out), delimiter=",", skiprows=1)
    x, g = data[:, 0], data[:, 1]
    assert np.all(np.diff(x) > 0) and np.all(g >= 0)
    area = np.sum(np.diff(x) * (g[1:] + g[:-1]) / 2) + math.exp(-x[-1])
    assert area == pytest.approx(1.0, abs=1e-6)


def test_lao_over_threshold():
    code, _, err = run("lao", "--theta", "1000")
    assert code == 1


# ── tables ───────────────────────────────────────────────────────────────────

def test_tables_efficiency_integral():
    code, out, _ = run("tables", "--which", "efficiency-integral", "--format", "json")
    assert code == 0
    (table,) = json.loads(out)["tables"]
    assert len(table["rows"]) == 12
    assert table["max_abs_delta"] <= 0.005


def test_tables_smoke_mode_text():
    code, out, _ = run("tables", "--which", "critical-values", "--reps", "200", "--n", "20")
    assert code == 0
    assert "== critical-values ==" in out and "max |delta|" in out


def test_module_entry_point(tmp_path):
    p = tmp_path / "x.txt"
    p.write_text("1\n2\n")
    proc = subprocess.run([sys.executable, "-m", "avtest", "test", str(p)], capture_output=True,
                          text=True)
    assert proc.returncode == 0
    assert "fail-to-reject" in proc.stdout
