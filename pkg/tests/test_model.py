"""Instance model: parsing, serialization, validation, derived lists."""

import json

import pytest

from critmatch import Instance, ParseError, make_instance, parse_instance, serialize_instance, validate
from critmatch.model import Side, derive_pref_s, derive_pref_sc

from conftest import read_fixture


@pytest.fixture
def tied_3x4() -> Instance:
    return parse_instance(read_fixture("tied_3x4.inst"))


def test_parse_text_basics(tied_3x4):
    assert tied_3x4.n_a == 3 and tied_3x4.n_b == 4
    assert tied_3x4.critical_a == {1} and tied_3x4.critical_b == {1}
    assert tied_3x4.s == 1 and tied_3x4.t == 1
    assert len(tied_3x4.edges) == 6
    assert tied_3x4.rank_at_a(1, 0) == 2
    assert tied_3x4.rank_at_b(1, 0) == 2
    assert tied_3x4.has_edge(2, 2) and not tied_3x4.has_edge(2, 0)
    assert tied_3x4.adj_a == ((0, 1), (0, 2, 3), (2,))
    assert tied_3x4.adj_b == ((0, 1), (0,), (1, 2), (1,))


def test_parse_ignores_comments_and_blanks():
    inst = parse_instance("# heading\n\ninstance 1 1\n  # indented comment\nedge 0 0 1 1  # trailing\n")
    assert inst.n_a == 1 and len(inst.edges) == 1


def test_critical_lines_are_optional():
    inst = parse_instance("instance 2 2\nedge 0 0 1 1\n")
    assert inst.critical_a == frozenset() and inst.critical_b == frozenset()


def test_parse_json_matches_text(tied_3x4):
    doc = {
        "n_a": 3,
        "n_b": 4,
        "critical_a": [1],
        "critical_b": [1],
        "edges": [[0, 0, 1, 1], [0, 1, 2, 1], [1, 0, 2, 2], [1, 2, 1, 1], [1, 3, 1, 1], [2, 2, 1, 1]],
    }
    assert parse_instance(json.dumps(doc)) == tied_3x4


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_serialize_roundtrip(tied_3x4, fmt):
    assert parse_instance(serialize_instance(tied_3x4, fmt=fmt)) == tied_3x4


def test_serialize_unknown_format(tied_3x4):
    with pytest.raises(ValueError):
        serialize_instance(tied_3x4, fmt="yaml")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "instance 2",
        "instance 2 two",
        "instance -1 2",
        "instance 2 2\nedge 0 0 1",  # one rank missing
        "instance 2 2\nedge 0 0 1 1 9",
        "instance 2 2\nedge 0 0 0 1",  # rank below 1
        "instance 2 2\nedge 0 5 1 1",
        "instance 2 2\nedge 5 0 1 1",
        "instance 2 2\nedge 0 0 1 1\nedge 0 0 2 2",
        "instance 2 2\ncritical_a 5",
        "instance 2 2\ncritical_a 0\ncritical_a 1",
        "instance 2 2\nbogus 1 2",
    ],
)
def test_parse_text_errors(text):
    with pytest.raises(ParseError):
        parse_instance(text)


def test_asymmetric_edge_message():
    with pytest.raises(ParseError, match="asymmetric"):
        parse_instance("instance 2 2\nedge 0 0 1")
    with pytest.raises(ParseError, match="asymmetric"):
        parse_instance('{"n_a": 1, "n_b": 1, "critical_a": [], "critical_b": [], "edges": [[0, 0, 1]]}')


@pytest.mark.parametrize(
    "doc",
    [
        "[1, 2]",
        '{"n_a": 1, "n_b": 1}',
        '{"n_a": 1, "n_b": 1, "critical_a": [], "critical_b": [], "edges": [[0, 0, 1, "x"]]}',
        '{"n_a": 1, "n_b": 1, "critical_a": [9], "critical_b": [], "edges": []}',
        '{"n_a": -1, "n_b": 1, "critical_a": [], "critical_b": [], "edges": []}',
        "{ not json",
    ],
)
def test_parse_json_errors(doc):
    with pytest.raises(ParseError):
        parse_instance(doc)


def test_validate_reports_instead_of_raising():
    bad = make_instance(2, 2, [(0, 0, 0, 1), (0, 9, 1, 1)], critical_a=[7])
    res = validate(bad)
    assert not res.ok
    assert len(res.violations) == 3


def test_validate_ok(tied_3x4):
    assert validate(tied_3x4).ok


def test_noncontiguous_ranks_are_legal():
    inst = parse_instance("instance 1 3\nedge 0 0 1 1\nedge 0 1 3 1\nedge 0 2 7 1\n")
    assert validate(inst).ok
    lst = inst.pref_list(Side.A, 0)
    assert lst.ranks == (1, 3, 7)
    assert lst.groups == ((0,), (1,), (2,))


def test_pref_list_grouping(tied_3x4):
    lst = tied_3x4.pref_list(Side.A, 1)
    assert lst.ranks == (1, 2)
    assert lst.groups == ((2, 3), (0,))
    blst = tied_3x4.pref_list(Side.B, 0)
    assert blst.groups == ((0,), (1,))


def test_pref_list_range_errors(tied_3x4):
    with pytest.raises(IndexError):
        tied_3x4.pref_list(Side.A, 3)
    with pytest.raises(IndexError):
        tied_3x4.pref_list(Side.B, 4)


def test_strict_list_derivations(tied_3x4):
    # full list, ties broken by index
    assert derive_pref_s(tied_3x4, 1).order == (2, 3, 0)
    # only critical B neighbours survive
    assert derive_pref_sc(tied_3x4, 0).order == (1,)
    assert derive_pref_sc(tied_3x4, 1).order == ()
    assert derive_pref_sc(tied_3x4, 2).order == ()


def test_rank_lookup_missing_edge(tied_3x4):
    with pytest.raises(KeyError):
        tied_3x4.rank_at_a(2, 0)
