import json

import pytest

from tracechar import __version__
from tracechar.cli import main, parse_range, run_to_text


def run(tmp_path, *argv):
    out, js = tmp_path / "out.csv", tmp_path / "summary.json"
    code = main([*argv, "--out", str(out), "--json", str(js)])
    return code, out.read_text(), json.loads(js.read_text())


def body(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_parse_range():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("2,5,7..8") == [2, 5, 7, 8]


def test_header_and_summary(tmp_path):
    code, text, js = run(tmp_path, "lfunc", "--q", "2", "--k", "1")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == f"# tracechar {__version__} lfunc"
    assert lines[1].startswith("# config: {")
    assert "# seed: 0" in lines and "# workers: 1" in lines
    assert "# coefficients: 1,-1" in lines
    assert body(text)[1:] == ["0,1.0,0.0", "1,-1.0,0.0"]
    assert js["schema"] == "tracechar.summary/1"
    assert js["pass"] is True and js["extra"]["degree"] == 1


def test_charsum_table(tmp_path):
    code, text, js = run(tmp_path, "charsum", "--q", "2", "--k", "12345678901234567", "--n", "1..8",
                         "--no-timing")
    assert code == 0
    rows = body(text)
    assert rows[0].split(",")[:11] == ["q", "n", "k", "weight", "psi", "re", "im", "abs",
                                       "bound_weil", "bound_cor", "elapsed_ms"]
    assert "prop_rhs" in rows[0] and len(rows) == 9


def test_symcheck_all_pass(tmp_path):
    code, text, js = run(tmp_path, "symcheck", "--q", "2", "--n", "10", "--trials", "50", "--seed", "7")
    assert code == 0
    assert js["extra"]["passed"] == "50/50"


def test_tracedist_point_mass(tmp_path):
    code, text, js = run(tmp_path, "tracedist", "--q", "2", "--n", "2", "--k", "6", "--mode", "exact")
    assert code == 0
    rows = [r.split(",") for r in body(text)[1:]]
    assert [(r[3], r[5]) for r in rows] == [("0", "1"), ("1", "0")]


def test_sieve_prints_both_counts(tmp_path):
    code, text, js = run(tmp_path, "sieve", "--q", "2", "--n", "8", "--S", "1,2")
    assert code == 0
    row = body(text)[1].split(",")
    assert row[3] == row[4]


@pytest.mark.parametrize("argv", [
    ["primesum", "--q", "3", "--k", "2^40+1", "--n", "1..5"],
    ["weilcheck", "--q", "3", "--k", "1..3", "--n", "1..6"],
    ["mvcheck", "--q", "2", "--n", "8", "--k", "3", "--S", "4,5,6,7,8"],
    ["gcdsum", "--q", "2", "--k", "prod(q^i-1,i=1..2*L-1)", "--L", "3"],
    ["critset", "--q", "2", "--k", "3", "--n", "16"],
    ["lincomb", "--q", "2", "--n", "1..3", "--product-of-irreducibles"],
    ["appendix", "--q", "3", "--k", "4..6"],
    ["charsum", "--q", "3", "--k", "5", "--n", "1..5", "--weight", "pgl"],
])
def test_subcommands_pass(tmp_path, argv):
    code, text, js = run(tmp_path, *argv)
    assert code == 0, js
    assert js["checks"] is not None and all(c["pass"] for c in js["checks"])


def test_gcdsum_family_rows(tmp_path):
    code, text, js = run(tmp_path, "gcdsum", "--q", "2", "--k", "prod(q^i-1,i=1..2*L-1)", "--L", "3")
    rows = [r.split(",") for r in body(text)[1:]]
    assert [int(r[1]) for r in rows] == [7, 15, 31]


def test_budget_error_names_q_and_n(capsys):
    code = main(["charsum", "--q", "2", "--k", "3", "--n", "40"])
    assert code == 3
    err = json.loads(capsys.readouterr().err)
    assert (err["q"], err["n"]) == (2, 40)


def test_bad_expression_is_usage_error(capsys):
    assert main(["lfunc", "--q", "2", "--k", "2^"]) == 2
    assert main(["lfunc", "--q", "6", "--k", "1"]) == 2
    assert main(["lfunc", "--q", "3", "--k", "1", "--psi", "0"]) == 2


def test_failed_check_sets_exit_code(tmp_path):
    # an empty golden directory cannot verify
    code, text, js = run(tmp_path, "goldens", "--verify", "--dir", str(tmp_path / "empty"),
                         "--only", "prodirr_q2")
    assert code == 1
    assert js["checks"][0]["witness"]["status"] == "missing"


def test_goldens_verify_subset(tmp_path):
    code, text, js = run(tmp_path, "goldens", "--verify", "--only", "prodirr_q2,lemma_sweep")
    assert code == 0


def test_repeat_runs_identical():
    argv = ["tracedist", "--q", "3", "--n", "1..4", "--k", "5", "--mode", "empirical",
            "--samples", "300", "--seed", "4", "--workers", "1"]
    assert run_to_text(argv)[0] == run_to_text(argv)[0]
