import io
import json
from fractions import Fraction

import pytest

from payback.cli import run
from payback.models.project import INFINITY, ExtendedTime
from payback.schemas.report import AnalysisReport, PortfolioReport

DEMO = "0,-100\n1,150\n2,-100\n3,60\n"


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def metric_lines(text):
    values = {}
    for line in text.splitlines():
        parts = line.split()
        if parts and parts[0].isupper():
            values[parts[0]] = parts[1]
    return values


@pytest.fixture
def demo_csv(write_file):
    return write_file("demo.csv", DEMO)


@pytest.fixture
def acons_files(write_file):
    x = write_file("x.csv", "0,-1\n1,2\n2,-3\n4,2\n")
    y = write_file("y.csv", "0,-2\n3,3\n")
    return x, y


class TestAnalyze:
    def test_text(self, demo_csv):
        code, out = invoke("analyze", demo_csv, "--metric", "all")
        assert code == 0
        values = metric_lines(out)
        assert values["LAST_BREAKEVEN"] == "3"
        assert values["FIRST_BREAKEVEN"] == "1"
        assert values["MODIFIED"] == "3"

    def test_json(self, demo_csv):
        code, out = invoke("analyze", demo_csv, "--metric", "all", "--json")
        assert code == 0
        payload = json.loads(out)
        values = {r["kind"]: r["value"] for r in payload["reports"]}
        assert values == {
            "LAST_BREAKEVEN": {"finite": True, "value": "3"},
            "FIRST_BREAKEVEN": {"finite": True, "value": "1"},
            "MODIFIED": {"finite": True, "value": "3"},
        }

    def test_json_round_trips_exactly(self, write_file):
        path = write_file("thirds.csv", "0,-1/3\n2/7,1/3\n")
        _, out = invoke("analyze", path, "--mapp", "1/2", "--json")
        report = AnalysisReport.model_validate_json(out)
        assert report.events.pairs() == [(0, Fraction(-1, 3)), (Fraction(2, 7), Fraction(1, 3))]
        assert report.reports[0].value == ExtendedTime(Fraction(2, 7))
        assert report.reports[0].mapp == Fraction(1, 2)
        assert report.reports[0].acceptable is True
        assert AnalysisReport.model_validate_json(report.model_dump_json()).model_dump_json() == report.model_dump_json()

    def test_sunk_cost(self, write_file):
        path = write_file("sunk.csv", "0,-1\n")
        code, out = invoke("analyze", path, "--mapp", "1000000", "--json")
        assert code == 0
        report = AnalysisReport.model_validate_json(out).reports[0]
        assert report.value == INFINITY
        assert report.acceptable is False
        _, text = invoke("analyze", path)
        assert metric_lines(text)["LAST_BREAKEVEN"] == "inf"

    def test_discounted(self, demo_csv, write_file):
        table = write_file("t.csv", "0,1\n1,1\n2,1\n3,2\n")
        _, out = invoke("analyze", demo_csv, "--metric", "discounted", "--discount-table", table)
        assert metric_lines(out)["DISCOUNTED_LAST"] == "3"
        _, out = invoke("analyze", demo_csv, "--metric", "discounted", "--rate", "0")
        assert metric_lines(out)["DISCOUNTED_LAST"] == "3"

    def test_discounted_without_alpha(self, demo_csv):
        code, _ = invoke("analyze", demo_csv, "--metric", "discounted")
        assert code == 2

    def test_table_miss_exit_code(self, demo_csv, write_file):
        table = write_file("t.csv", "0,1\n1,1/2\n")
        code, _ = invoke("analyze", demo_csv, "--metric", "discounted", "--discount-table", table)
        assert code == 3

    def test_parse_failure_exit_code(self, write_file):
        code, _ = invoke("analyze", write_file("bad.csv", "0,-1\nx,y\n"))
        assert code == 2

    def test_spreadsheet_export_with_byte_order_mark(self, write_file):
        code, out = invoke("analyze", write_file("excel.csv", "\ufeff0,-100\n1,150\n"))
        assert code == 0
        assert metric_lines(out)["LAST_BREAKEVEN"] == "1"

    def test_typo_on_first_line_exit_code(self, write_file):
        assert invoke("analyze", write_file("typo.csv", "0,-1OO\n1,150\n"))[0] == 2

    def test_invalid_flags(self, demo_csv):
        assert invoke("analyze", demo_csv, "--metric", "npv")[0] == 2
        assert invoke("analyze", demo_csv, "--rate", "1", "--discount-table", "t.csv")[0] == 2
        assert invoke("frobnicate")[0] == 2


class TestPortfolio:
    def test_first_breakeven_breaks_max_rule(self, acons_files, capsys):
        code, out = invoke("portfolio", *acons_files, "--metric", "first", "--json")
        assert code == 0
        report = PortfolioReport.model_validate_json(out)
        assert report.pool.value == ExtendedTime(Fraction(4))
        assert report.max_rule_bound == ExtendedTime(Fraction(3))
        assert report.max_rule_holds is False
        assert "warning" in capsys.readouterr().err

    def test_last_breakeven_keeps_max_rule(self, acons_files):
        code, out = invoke("portfolio", *acons_files, "--metric", "last", "--json")
        assert code == 0
        report = PortfolioReport.model_validate_json(out)
        assert report.max_rule_holds is True
        assert [r.project for r in report.projects] == ["x", "y"]

    def test_text(self, acons_files):
        _, out = invoke("portfolio", *acons_files)
        assert "holds" in out


class TestCompare:
    def test_agrees_with_library(self, demo_csv, demo_project):
        from payback.services.metrics import first_breakeven, modified_payback, payback

        code, out = invoke("compare", demo_csv, "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["classification"] == "GENERAL"
        assert payload["breakeven_points"] == ["1", "3"]
        assert payload["last_breakeven"] == {"finite": True, "value": str(payback(demo_project))}
        assert payload["first_breakeven"] == {"finite": True, "value": str(first_breakeven(demo_project))}
        assert payload["modified"] == {"finite": True, "value": str(modified_payback(demo_project))}
        assert payload["terminal_value"] == "10"
        assert payload["discounted_last"] is None

    def test_text(self, demo_csv):
        code, out = invoke("compare", demo_csv)
        assert code == 0
        assert "class: GENERAL" in out


class TestAxioms:
    def test_last_breakeven_passes(self):
        code, out = invoke("axioms", "LAST_BE", "--axiom", "comp", "--trials", "200", "--seed", "1")
        assert code == 0
        assert "pass" in out

    def test_rival_expected_violation_exits_zero(self):
        code, out = invoke("axioms", "CONST_ZERO", "--axiom", "comp", "--trials", "20", "--json")
        assert code == 0
        (report,) = json.loads(out)
        assert report["violation_count"] > 0

    def test_all_axioms_for_last_breakeven(self):
        code, out = invoke("axioms", "LAST_BE", "--trials", "100", "--seed", "5", "--json")
        assert code == 0
        reports = {r["axiom"]: r for r in json.loads(out)}
        assert set(reports) == {"COMP", "ACONS", "MON", "LSC", "ALPHA_COMP", "ALPHA_MON"}
        assert reports["ALPHA_MON"]["violation_count"] > 0

    def test_exponential_rate_runs_every_suite(self):
        code, out = invoke("axioms", "LAST_BE", "--rate", "1/10", "--trials", "20", "--json")
        assert code == 0
        assert len(json.loads(out)) == 6

    def test_discounted_with_exponential_rate(self):
        code, out = invoke("axioms", "DISCOUNTED_LAST_BE", "--rate", "1/10", "--trials", "20", "--json")
        assert code == 0
        reports = {r["axiom"]: r for r in json.loads(out)}
        assert len(reports) == 6
        assert reports["ALPHA_COMP"]["violation_count"] == 0
        assert reports["ALPHA_COMP"]["trials"] == 20

    def test_first_breakeven_lsc_is_not_a_regression(self):
        code, out = invoke("axioms", "FIRST_BE", "--axiom", "lsc", "--trials", "100", "--seed", "3", "--json")
        assert code == 0
        (report,) = json.loads(out)
        assert report["violation_count"] == 0

    def test_seed_is_64_bit(self):
        assert invoke("axioms", "LAST_BE", "--axiom", "comp", "--trials", "5", "--seed", str(2 ** 64 - 1))[0] == 0
        assert invoke("axioms", "LAST_BE", "--seed", str(2 ** 64))[0] == 2

    def test_deterministic(self):
        args = ("axioms", "FIRST_BE", "--axiom", "acons", "--trials", "100", "--seed", "77", "--json")
        assert invoke(*args) == invoke(*args)

    def test_unknown_functional(self):
        assert invoke("axioms", "NPV", "--trials", "5")[0] == 2


class TestPlotData:
    def test_step_series(self, demo_csv):
        code, out = invoke("plot-data", demo_csv)
        assert code == 0
        assert out.splitlines() == [
            "t,balance_before,balance_at",
            "0,0,-100",
            "1,-100,50",
            "2,50,-50",
            "3,-50,10",
            "4,10,10",
        ]

    def test_float_and_discount(self, write_file):
        path = write_file("p.csv", "0,-1\n1,3\n")
        _, out = invoke("plot-data", path, "--rate", "1", "--float")
        assert out.splitlines()[1:] == ["0.0,0.0,-1.0", "1.0,-1.0,0.5", "2.0,0.5,0.5"]
