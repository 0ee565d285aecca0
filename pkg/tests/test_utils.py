"""Report emission, input parsing and configuration"""

import json
from fractions import Fraction

import pytest

from src.config import THREADS_ENV, ToolkitConfig, default_threads
from src.utils.export_data import Report, format_value, report_to_csv, report_to_json
from src.utils.import_data import parse_dyadic, parse_integer, parse_rational


@pytest.mark.parametrize("value, text", [
    (Fraction(1, 3), "1/3"),
    (Fraction(4, 2), "2"),
    (True, "true"),
    (False, "false"),
    (7, "7"),
    (0.1, "0.1"),
    (1 / 3, "0.333333333333"),
])
def test_format_value(value, text):
    assert format_value(value).startswith(text)


def test_csv_and_json_bodies():
    report = Report("demo", {"n": 2}, wall_time=1.5)
    report.add_row(x=Fraction(1, 4), weight=Fraction(1, 3))
    report.flags = {"ok": True}

    assert report_to_csv(report) == "x,weight\n1/4,1/3\n"
    body = json.loads(report_to_json(report))
    assert body == {
        "command": "demo",
        "parameters": {"n": 2},
        "rows": [{"x": "1/4", "weight": "1/3"}],
        "flags": {"ok": True},
    }
    assert json.loads(report_to_json(report, timing=True))["wall_time"] == "1.5"


def test_flags_only_report():
    report = Report("demo", flags={"a": True, "b": False})
    assert report_to_csv(report) == "a,b\ntrue,false\n"
    assert not report.passed()


@pytest.mark.parametrize("text, expected", [
    ("3/8", Fraction(3, 8)),
    ("3/2^3", Fraction(3, 8)),
    ("5", Fraction(5)),
    ("0.375", Fraction(3, 8)),
])
def test_parse_exact_forms(text, expected):
    assert parse_dyadic(text, 24) == expected


def test_parse_snaps_non_dyadic():
    assert parse_dyadic("1/3", 4) == Fraction(5, 16)


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_rational("one half")
    with pytest.raises(ValueError):
        parse_integer("2.5")


def test_config_validation():
    with pytest.raises(ValueError):
        ToolkitConfig(fmt="xml")
    with pytest.raises(ValueError):
        ToolkitConfig(threads=0)
    with pytest.raises(ValueError):
        ToolkitConfig(depth=4)
    assert ToolkitConfig().fourier_settings().min_depth == 24
    assert ToolkitConfig(depth=30).figure_level == 12


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_threads() == 3
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ValueError):
        default_threads()
    monkeypatch.delenv(THREADS_ENV)
    assert default_threads() >= 1
