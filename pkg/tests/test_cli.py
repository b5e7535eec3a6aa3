import json

import pytest

from src import cli
from src.cli import RunConfig, diff_tables, main, parse_config
from src.errors import FamilyError, RegularityError, ToolkitError


def test_expand_csv(capsys):
    assert main(["expand", "--family", "SP", "--order", "2", "--format", "csv", "-q"]) == 0
    assert capsys.readouterr().out == "w,h,count\n1,1,1\n"


def test_expand_below_minimum_order(capsys):
    assert main(["expand", "--family", "two_convex", "--order", "3", "--format", "csv", "-q"]) == 0
    assert capsys.readouterr().out == "w,h,count\n"


def test_expand_to_file(tmp_path, capsys):
    out = tmp_path / "up.json"
    assert main(["expand", "--family", "UP", "--order", "4", "--format", "json", "--output", str(out), "-q"]) == 0
    assert capsys.readouterr().out == ""
    data = json.loads(out.read_text(encoding="utf-8"))
    assert {"w": 2, "h": 2, "count": 4} in data["entries"]


def test_unknown_family():
    assert main(["expand", "--family", "three_convex", "-q"]) == 2


def test_compare_with_oracle(capsys):
    assert main(["compare", "--family", "convex", "--order", "6", "-q"]) == 0
    assert "hasta el orden 6" in capsys.readouterr().out


def test_compare_printed_bimodal_form(capsys):
    code = main(["compare", "--family", "bimodal_sum_2", "--against", "bimodal_closed_2", "--order", "6", "-q"])
    assert code == 1
    assert "[x^2 y^3]" in capsys.readouterr().out


def test_compare_without_oracle_class():
    assert main(["compare", "--family", "P", "--order", "4", "-q"]) == 2


def test_oracle_command(capsys):
    assert main(["oracle", "--max-perimeter", "8", "--format", "csv", "-q"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "w,h,m,flags,count"
    assert sum(int(line.split(",")[-1]) for line in lines[1:]) == 10


def test_oracle_safety_cap():
    assert main(["oracle", "--max-perimeter", "28", "-q"]) == 2


def test_list(capsys):
    assert main(["list", "-q"]) == 0
    assert "two_convex" in capsys.readouterr().out


def test_seed_cache_reuse(tmp_path, capsys):
    args = ["expand", "--family", "UP", "--order", "5", "--format", "csv", "--seed-cache", str(tmp_path), "-q"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert len(list(tmp_path.glob("*.json"))) == 1
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_config_validation():
    with pytest.raises(ToolkitError):
        RunConfig(command="expand")
    with pytest.raises(ToolkitError):
        RunConfig(command="oracle")
    with pytest.raises(ToolkitError):
        RunConfig(command="list", order=0)
    with pytest.raises(ToolkitError):
        RunConfig(command="list", threads=0)


def test_verbosity_flags():
    assert parse_config(["list", "-v"]).log_level == 10
    assert parse_config(["list", "-q"]).log_level == 30


def test_diff_tables():
    assert diff_tables({(1, 1): 1, (2, 1): 2}, {(1, 1): 1, (1, 2): 5}) == [(1, 2, 0, 5), (2, 1, 2, 0)]


ERRATA_STEPS = ("_errata_corrections", "_errata_bimodal", "_errata_oracle", "_errata_cases",
                "_errata_appendix", "_errata_denominator")


def _quiet_errata(monkeypatch):
    for name in ERRATA_STEPS:
        monkeypatch.setattr(cli, name, lambda *args: ([], 0))


def test_errata_clean_report_exits_zero(monkeypatch, capsys):
    _quiet_errata(monkeypatch)
    assert main(["errata", "--order", "5", "-q"]) == 0
    assert "Total: 0 discrepancias" in capsys.readouterr().out


def test_errata_discrepancies_exit_one(monkeypatch, capsys):
    _quiet_errata(monkeypatch)
    monkeypatch.setattr(cli, "_errata_cases", lambda order: (["interweaved: coeficientes negativos"], 1))
    assert main(["errata", "--order", "5", "-q"]) == 1
    out = capsys.readouterr().out
    assert "interweaved: coeficientes negativos" in out
    assert "Total: 1 discrepancias" in out


def test_errata_failed_section_counts(monkeypatch, capsys):
    _quiet_errata(monkeypatch)

    def broken(order):
        raise FamilyError("sin datos")

    monkeypatch.setattr(cli, "_errata_denominator", broken)
    assert main(["errata", "--order", "5", "-q"]) == 1
    assert "error: sin datos" in capsys.readouterr().out


def test_errata_corrections_are_not_discrepancies():
    lines, found = cli._errata_corrections()
    assert found == 0
    assert all("->" in line for line in lines)


@pytest.mark.slow
def test_errata_oracle_lists_regularity_monomials(monkeypatch, oracle_16):
    real = cli.build_family

    def build(key, order):
        if key == "two_convex":
            raise RegularityError("el prefactor no se cancela", [(0, 1), (1, 0)])
        return real(key, order)

    monkeypatch.setattr(cli, "build_family", build)
    lines, found = cli._errata_oracle(RunConfig(command="errata", order=5))
    assert found >= 1
    assert any(line.startswith("two_convex: no se pudo construir") for line in lines)
    assert "  monomio (0, 1)" in lines and "  monomio (1, 0)" in lines
    assert "two_staircase: 0 diferencias con el oráculo hasta W + H = 5" in lines
    assert "bimodales m = 1 con R = C: 0 diferencias con el oráculo" in lines


@pytest.mark.slow
def test_errata_bimodal_reports_every_sign_variant():
    lines, found = cli._errata_bimodal(5)
    assert found > 0
    assert sum(line.startswith("forma cerrada") for line in lines) == 4
    assert any(line.startswith("variantes que coinciden") for line in lines)


@pytest.mark.slow
def test_errata_appendix_reports_both_kinds():
    lines, found = cli._errata_appendix(6)
    assert "unimodal, m = 2: grados A (7, 8), B (6, 7); cotas (7, 6), no se cumplen" in lines
    assert "staircase, m = 2: A y B no son polinomios" in lines
    assert found >= 2
