"""CLI contract: exit codes, output formats, caching, determinism."""

import json
from fractions import Fraction

import pytest

from arccount.cli import UsageError, main, parse_rational


def lines_of(text: str) -> list[str]:
    return [line for line in text.splitlines() if line]


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(" 2 ") == 2
    for bad in ("0.5", "1e-2", "1E2", "1/0", "abc", "1/2/3"):
        with pytest.raises(UsageError):
            parse_rational(bad)


def test_plane_info_exit_zero(capsys):
    assert main(["plane", "info", "--q", "5"]) == 0
    captured = capsys.readouterr()
    rows = [json.loads(line) for line in lines_of(captured.out)]
    assert len(rows) == 1
    assert rows[0]["q"] == 5
    assert rows[0]["axioms_ok"] is True
    assert "incidence axioms ok" in captured.err


def test_stdout_is_pure_jsonl(capsys):
    assert main(["census", "--q", "3"]) == 0
    captured = capsys.readouterr()
    for line in lines_of(captured.out):
        json.loads(line)
    assert captured.err.strip()


def test_float_epsilon_rejected(capsys):
    assert main(["density-check", "--q", "7", "--epsilon", "0.5"]) == 1
    assert main(["density-check", "--q", "7", "--epsilon", "1e-2"]) == 1
    assert "exact rational" in capsys.readouterr().err


def test_non_prime_power_order_rejected(capsys):
    assert main(["census", "--q", "6"]) == 1
    assert main(["supersat-check", "--q", "12"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_bad_invocations():
    assert main(["frobnicate"]) == 1
    assert main([]) == 1
    assert main(["census"]) == 1  # --q is required
    assert main(["supersat-check", "--q", "3", "--seed", "-1"]) == 1
    assert main(["supersat-check", "--q", "3", "--seed", str(1 << 64)]) == 1
    assert main(["census", "--q", "3", "--format", "xml"]) == 1


def test_density_check_small_q_fails_as_expected(capsys):
    assert main(["density-check", "--q", "2", "--epsilon", "1/2", "--trials", "25"]) == 2
    captured = capsys.readouterr()
    row = json.loads(lines_of(captured.out)[0])
    assert row["violations"] > 0
    assert row["min_q_clean"] is None


def test_density_check_q5_passes(capsys):
    code = main(["density-check", "--q", "5", "--epsilon", "1/2", "--trials", "25"])
    assert code == 0
    row = json.loads(lines_of(capsys.readouterr().out)[0])
    assert row["violations"] == 0
    assert row["min_q_clean"] is not None and 3 <= row["min_q_clean"] <= 5
    assert row["min_ratio"] >= 1.0


def test_supersat_check_exhaustive_at_q3(capsys):
    assert main(["supersat-check", "--q", "3", "--trials", "40"]) == 0
    row = json.loads(lines_of(capsys.readouterr().out)[0])
    assert row == {"violations": 0, "min_slack": 0, "trials": 511}


def test_census_out_file_thread_invariant(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    assert main(["census", "--q", "4", "--out", str(a), "--threads", "1"]) == 0
    assert main(["census", "--q", "4", "--out", str(b), "--threads", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_census_csv_format(tmp_path):
    out = tmp_path / "census.csv"
    assert main(["census", "--q", "2", "--format", "csv", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "q,m,count,method,trials,seed,fraction,ci_low,ci_high"
    assert rows[1] == "2,0,1,exhaustive,,,,,"
    assert len(rows) == 6


def test_census_cache_round_trip(tmp_path, capsys):
    args = ["census", "--q", "3", "--cache-dir", str(tmp_path)]
    assert main(args) == 0
    first = capsys.readouterr()
    cached = tmp_path / "census-q3-mall.jsonl"
    assert cached.exists()
    assert main(args) == 0
    second = capsys.readouterr()
    assert second.out == first.out
    assert "served from cache" in second.err


def test_cache_dir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ARC_CACHE_DIR", str(tmp_path))
    assert main(["census", "--q", "3", "--m-max", "4"]) == 0
    capsys.readouterr()
    assert (tmp_path / "census-q3-m4.jsonl").exists()


def test_threads_env(capsys, monkeypatch):
    assert main(["census", "--q", "3"]) == 0
    serial = capsys.readouterr().out
    monkeypatch.setenv("ARC_THREADS", "2")
    assert main(["census", "--q", "3"]) == 0
    assert capsys.readouterr().out == serial


def test_kw_verify_row_shape(capsys):
    assert main(["kw-verify", "--n", "10", "--instances", "5", "--seed", "3"]) == 0
    rows = [json.loads(line) for line in lines_of(capsys.readouterr().out)]
    assert len(rows) == 5
    for row in rows:
        assert list(row) == ["instance", "assumptions_met", "bound_lhs", "bound_rhs", "violations"]


def test_kw_verify_partial_override_rejected(capsys):
    code = main(["kw-verify", "--n", "10", "--instances", "2", "--beta", "1/10"])
    assert code == 1
    assert "together" in capsys.readouterr().err


def test_bound_table_green(capsys):
    code = main(["bound-table", "--q", "256", "--epsilon", "1", "--m-list", "214,230"])
    assert code == 0
    captured = capsys.readouterr()
    rows = [json.loads(line) for line in lines_of(captured.out)]
    assert [row["chain_ok"] for row in rows] == [True, True]
    assert "2/2 rows chain-verified" in captured.err


def test_bound_table_out_of_scope_m_reports_null(capsys):
    code = main(["bound-table", "--q", "7", "--epsilon", "1/2", "--m-list", "3"])
    assert code == 0
    captured = capsys.readouterr()
    assert json.loads(lines_of(captured.out)[0])["chain_ok"] is None
    assert "0/1 rows chain-verified" in captured.err


def test_bound_table_bad_m_list():
    assert main(["bound-table", "--q", "7", "--epsilon", "1/2", "--m-list", ","]) == 1
    assert main(["bound-table", "--q", "7", "--epsilon", "1/2", "--m-list", "2,abc"]) == 1


def test_sample_lower_deterministic(capsys):
    args = ["sample-lower", "--q", "5", "--m", "3", "--trials", "3000", "--seed", "9"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    row = json.loads(lines_of(first)[0])
    assert row["method"] == "sampled"
    assert abs(row["fraction"] - 2000 / 2300) < 0.03
