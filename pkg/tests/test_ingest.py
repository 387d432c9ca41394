from fractions import Fraction

import pytest

from payback.exceptions import IngestError
from payback.utils.ingest import parse_discount_table, parse_events


def test_csv_without_header(write_file):
    name, raw = parse_events(write_file("demo.csv", "0,-100\n1,150\n"))
    assert name == "demo"
    assert raw == [(0, -100), (1, 150)]


def test_csv_with_header_and_comments(write_file):
    path = write_file("flows.csv", "time,amount\n# initial outlay\n0,-1\n\n1,1/3\n")
    _, raw = parse_events(path)
    assert raw == [(0, -1), (1, Fraction(1, 3))]


def test_decimals_are_exact(write_file):
    _, raw = parse_events(write_file("d.csv", "0.1,-0.3\n"))
    assert raw == [(Fraction(1, 10), Fraction(-3, 10))]


def test_malformed_line_reports_line_number(write_file):
    path = write_file("bad.csv", "0,-1\n1,abc\n")
    with pytest.raises(IngestError) as exc_info:
        parse_events(path)
    assert exc_info.value.line == 2
    assert ":2:" in str(exc_info.value)


def test_wrong_field_count(write_file):
    with pytest.raises(IngestError):
        parse_events(write_file("bad.csv", "0,-1,5\n"))


def test_negative_time(write_file):
    with pytest.raises(IngestError):
        parse_events(write_file("neg.csv", "-1,5\n"))


def test_missing_file(tmp_path):
    with pytest.raises(IngestError):
        parse_events(tmp_path / "missing.csv")


def test_json(write_file):
    path = write_file("p.json", '{"name": "plant", "events": [{"t": "2", "c": "-1"}, {"t": 3, "c": 0.5}]}')
    name, raw = parse_events(path)
    assert name == "plant"
    assert raw == [(2, -1), (3, Fraction(1, 2))]


def test_json_name_defaults_to_stem(write_file):
    name, raw = parse_events(write_file("unnamed.json", '{"events": [{"t": "2", "c": "-1"}]}'))
    assert name == "unnamed"
    assert raw == [(2, -1)]


def test_invalid_json(write_file):
    with pytest.raises(IngestError):
        parse_events(write_file("broken.json", '{"events": [}'))
    with pytest.raises(IngestError):
        parse_events(write_file("shape.json", '{"events": [{"t": "x", "c": "1"}]}'))


def test_discount_table(write_file):
    pairs = parse_discount_table(write_file("table.csv", "time,factor\n0,1\n1,1/2\n2,0.25\n"))
    assert pairs == [(0, 1), (1, Fraction(1, 2)), (2, Fraction(1, 4))]


def test_byte_order_mark_is_dropped(write_file):
    _, raw = parse_events(write_file("excel.csv", "\ufeff0,-100\n1,150\n"))
    assert raw == [(0, -100), (1, 150)]


def test_byte_order_mark_before_header(write_file):
    _, raw = parse_events(write_file("excel.csv", "\ufefftime,amount\n0,-100\n1,150\n"))
    assert raw == [(0, -100), (1, 150)]


def test_typo_on_first_line_is_not_a_header(write_file):
    with pytest.raises(IngestError) as exc_info:
        parse_events(write_file("typo.csv", "0,-1OO\n1,150\n"))
    assert exc_info.value.line == 1


def test_typo_in_first_time_cell_is_not_a_header(write_file):
    with pytest.raises(IngestError) as exc_info:
        parse_events(write_file("typo.csv", "O,-100\n1,150\n"))
    assert exc_info.value.line == 1


def test_line_numbers_count_comments_and_blanks(write_file):
    path = write_file("bad.csv", "time,amount\n# outlay\n\n0,-1\n1,x\n")
    with pytest.raises(IngestError) as exc_info:
        parse_events(path)
    assert exc_info.value.line == 5


def test_trailing_comment_on_data_line(write_file):
    _, raw = parse_events(write_file("c.csv", "0,-1 # outlay\n1,2\n"))
    assert raw == [(0, -1), (1, 2)]


def test_too_many_fields_later_in_file(write_file):
    with pytest.raises(IngestError):
        parse_events(write_file("bad.csv", "0,-1\n1,2,3,4\n"))


def test_single_field_line(write_file):
    with pytest.raises(IngestError) as exc_info:
        parse_events(write_file("bad.csv", "0,-1\n7\n"))
    assert exc_info.value.line == 2


def test_empty_csv(write_file):
    _, raw = parse_events(write_file("empty.csv", ""))
    assert raw == []
