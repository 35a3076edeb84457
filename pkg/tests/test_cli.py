import csv
import json

import pytest

from arithindex import __main__ as cli_main
from arithindex.__main__ import main
from arithindex.config import ExperimentConfig, SearchSettings


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    @pytest.mark.parametrize(
        "q,length,expected",
        [("3", "27", "012120201120201012201012120"), ("2", "16", "0110100110010110"), ("2", "1", "0")],
    )
    def test_prefix(self, capsys, q, length, expected):
        code, out, _ = run(capsys, "gen", "--q", q, "--len", length)
        assert code == 0
        assert out.strip() == expected

    def test_non_prime_rejected(self, capsys):
        code, out, err = run(capsys, "gen", "--q", "6", "--len", "4")
        assert code == 2
        assert out == ""
        assert "Invalid input" in err

    def test_config_file_supplies_q(self, capsys, tmp_path):
        path = tmp_path / "experiment.yaml"
        ExperimentConfig(q=3).save(path)
        code, out, _ = run(capsys, "gen", "--config", str(path), "--len", "3")
        assert code == 0
        assert out.strip() == "012"

    def test_missing_q(self, capsys):
        code, _, _ = run(capsys, "gen", "--len", "3")
        assert code == 2


class TestRuns:
    def test_binary(self, capsys):
        code, out, _ = run(capsys, "runs", "--q", "2", "--n", "2")
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[-1] == "expected=8 observed=8 argmax=[3] PASS"
        assert lines[0].startswith("witness c=")
        assert lines[0].endswith("d=3 L=8")

    def test_ternary(self, capsys):
        code, out, _ = run(capsys, "runs", "--q", "3", "--n", "1")
        assert code == 0
        assert out.strip().splitlines()[-1] == "expected=3 observed=3 argmax=[2] PASS"

    def test_invalid_base_writes_nothing(self, capsys, tmp_path):
        target = tmp_path / "runs.csv"
        assert run(capsys, "runs", "--q", "4", "--n", "1")[0] == 2
        assert run(capsys, "runs", "--q", "4", "--n", "2", "--out", str(target))[0] == 2
        assert not target.exists()

    def test_writes_csv(self, capsys, tmp_path):
        target = tmp_path / "runs.csv"
        code, _, _ = run(capsys, "runs", "--q", "2", "--n", "2", "--out", str(target))
        assert code == 0
        lines = target.read_text().splitlines()
        assert lines[0] == "q,n,d,L,witness_c"
        assert lines[-1].startswith("# expected=8")

    def test_writes_json(self, capsys, tmp_path):
        target = tmp_path / "runs.json"
        code, _, _ = run(
            capsys, "runs", "--q", "2", "--n", "2", "--out", str(target), "--format", "json"
        )
        assert code == 0
        data = json.loads(target.read_text())
        assert data["expected"] == 8
        assert data["passed"] is True


class TestIndex:
    @pytest.mark.parametrize(
        "q,word,expected",
        [
            ("2", "000", "d_min=3 c=0 index=2"),
            ("2", "0", "d_min=1 c=0 index=1"),
            ("3", "012", "d_min=1 c=0 index=1"),
        ],
    )
    def test_examples(self, capsys, q, word, expected):
        code, out, _ = run(capsys, "index", "--q", q, "--word", word)
        assert code == 0
        assert out.strip() == expected

    def test_symbol_outside_alphabet(self, capsys):
        code, out, _ = run(capsys, "index", "--q", "2", "--word", "012")
        assert code == 2
        assert out == ""

    def test_word_required(self, capsys):
        assert run(capsys, "index", "--q", "2")[0] == 2

    def test_csv_word(self, capsys):
        code, out, _ = run(capsys, "index", "--q", "3", "--word-csv", "0,1,2")
        assert code == 0
        assert out.strip() == "d_min=1 c=0 index=1"

    def test_prefix_cross_check(self, capsys):
        code, out, _ = run(capsys, "index", "--q", "2", "--word", "000", "--c-budget", "1000")
        assert code == 0
        assert out.strip() == "d_min=3 c=0 index=2"

    def test_config_scan_limit_sets_oracle_budget(self, capsys, tmp_path, monkeypatch):
        budgets = []
        genuine = cli_main.occurs_prefix_oracle

        def recording(seq, u, d, scan_limit):
            budgets.append(scan_limit)
            return genuine(seq, u, d, scan_limit)

        monkeypatch.setattr(cli_main, "occurs_prefix_oracle", recording)
        path = tmp_path / "experiment.yaml"
        ExperimentConfig(q=2, search=SearchSettings(scan_limit=500)).save(path)

        assert run(capsys, "index", "--config", str(path), "--word", "000")[0] == 0
        assert run(capsys, "index", "--config", str(path), "--word", "000", "--c-budget", "40")[0] == 0
        assert run(capsys, "index", "--q", "2", "--word", "000")[0] == 0
        assert budgets == [500, 40]

    def test_cache_file_is_written(self, capsys, tmp_path):
        cache = tmp_path / "cache.tsv"
        run(capsys, "index", "--q", "2", "--word", "000", "--cache", str(cache))
        assert cache.read_text() == "2\t000\t3\t0\n"
        code, out, _ = run(capsys, "index", "--q", "2", "--word", "000", "--cache", str(cache))
        assert code == 0
        assert out.strip() == "d_min=3 c=0 index=2"


class TestEmbed:
    @pytest.mark.parametrize("word", ["11", "00", "1011"])
    def test_verified(self, capsys, word):
        code, out, _ = run(capsys, "embed", "--q", "2", "--word", word, "--verify")
        assert code == 0
        assert "✅ verified" in out
        assert " OK" in out

    def test_reports_expansions(self, capsys):
        code, out, _ = run(capsys, "embed", "--q", "3", "--word", "012")
        lines = out.strip().splitlines()
        assert code == 0
        assert [line.split("=")[0] for line in lines[:4]] == ["c_u", "c_u[q]", "d_u", "d_u[q]"]
        assert lines[4].startswith("index=")


class TestIndexTable:
    def test_writes_csv(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        code, _, _ = run(capsys, "index-table", "--q", "2", "--n-max", "6", "--out", str(target))
        assert code == 0
        rows = list(csv.reader(target.read_text().splitlines()))
        assert len(rows) == 7
        assert rows[0][:3] == ["q", "n", "I"]
        for row in rows[1:]:
            I, lower, upper = int(row[2]), int(row[3]), int(row[4])
            assert max(0, lower) <= I <= upper

    def test_output_independent_of_workers(self, capsys, tmp_path):
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        run(capsys, "index-table", "--q", "2", "--n-max", "5", "--workers", "1", "--out", str(serial))
        run(capsys, "index-table", "--q", "2", "--n-max", "5", "--workers", "3", "--out", str(parallel))
        assert serial.read_bytes() == parallel.read_bytes()

    def test_rejects_zero_workers(self, capsys):
        assert run(capsys, "index-table", "--q", "2", "--n-max", "2", "--workers", "0")[0] == 2


class TestConjectureAndBounds:
    def test_conjecture(self, capsys):
        code, out, _ = run(capsys, "conjecture", "--q", "2", "--n", "4")
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[0].startswith("word=0101 ")
        assert lines[-1] in ("alternating_is_extremal=true", "alternating_is_extremal=false")

    def test_bounds(self, capsys):
        code, out, _ = run(capsys, "bounds", "--q", "2", "--n", "4")
        assert code == 0
        assert "upper" in out


def test_no_command_prints_help(capsys):
    code, out, _ = run(capsys)
    assert code == 1
    assert "usage" in out.lower()
