import pytest

from qds import InputError, build_qds, dfa_to_qds, prune_unreachable, trim_qds
from qds.formats import (
    nfa_to_dot,
    parse_automaton,
    parse_nfa,
    parse_qds,
    parse_word,
    path_dfa_to_dot,
    path_dfa_to_nfa,
    qds_to_dot,
    serialize_nfa,
    serialize_qds,
)
from qds.trim import build_path_dfa
from tests.conftest import mk_nfa


def test_nfa_round_trip(window4_nfa, suffix_marker_nfa, three_state_dfa):
    for a in (window4_nfa, suffix_marker_nfa, three_state_dfa):
        text = serialize_nfa(a)
        back = parse_nfa(text)
        assert back.alphabet == a.alphabet
        assert back.states == a.states
        assert back.initials == a.initials
        assert back.finals == a.finals
        assert back.transitions == a.transitions


def test_qds_round_trip(two_lane_qds, trim_demo_qds, suffix_marker_nfa, three_state_dfa):
    built = build_qds(suffix_marker_nfa, 3, 3)
    structures = [
        two_lane_qds,
        trim_demo_qds,
        trim_qds(trim_demo_qds),
        built,
        prune_unreachable(built),
        dfa_to_qds(three_state_dfa),
    ]
    for s in structures:
        assert parse_qds(serialize_qds(s)) == s


def test_parse_nfa_basics():
    text = """
# a comment
@type nfa
@alphabet a b
@states 0 1
@initial 0
@final 1
0 a 1   # trailing comment
1 b 1
"""
    a = parse_nfa(text)
    assert a.states == ("0", "1")
    assert a.transitions == (("0", "a", "1"), ("1", "b", "1"))


def test_parse_detects_type():
    assert parse_automaton("@type nfa\n@alphabet a\n@states 0\n@initial 0\n").states == ("0",)
    qds_text = (
        "@type qds\n@alphabet a\n@layers 2\n@layer 1 p\n@layer 2 q\n"
        "@initial p\n@final q\np a q\n@gamma q _ 1\n"
    )
    s = parse_automaton(qds_text)
    assert s.gamma == {"q": (None, 1)}
    with pytest.raises(InputError):
        parse_automaton("@type widget\n")
    with pytest.raises(InputError):
        parse_automaton("0 a 1\n")


def test_parse_errors():
    with pytest.raises(InputError):
        parse_nfa("@type nfa\n@alphabet a\n@states 0\n@initial 0\n@wat x\n")
    with pytest.raises(InputError):
        parse_nfa("@type nfa\n@alphabet a\n@states 0\n@initial 0\n0 a\n")
    with pytest.raises(InputError):
        parse_nfa("@type nfa\n@alphabet a\n@states 0 _\n@initial 0\n")
    base = "@type qds\n@alphabet a\n@layers 2\n@layer 1 p\n@layer 2 q\n@initial p\n"
    with pytest.raises(InputError):
        parse_qds(base + "@gamma q _ 1\n@gamma q _ 1\n")
    with pytest.raises(InputError):
        parse_qds(base + "@gamma q p 9\n")
    with pytest.raises(InputError):
        parse_qds(base)  # gamma missing entirely
    with pytest.raises(InputError):
        parse_qds(
            "@type qds\n@alphabet a\n@layers 2\n@layer 1 p\n@layer 3 q\n"
            "@initial p\n@gamma q _ 1\n"
        )


def test_parse_word_modes():
    assert parse_word("abba", ("a", "b")) == ("a", "b", "b", "a")
    assert parse_word("", ("a",)) == ()
    assert parse_word("_", ("a",)) == ()
    assert parse_word("aa bb", ("aa", "bb")) == ("aa", "bb")
    assert parse_word("aa", ("aa", "bb")) == ("aa",)
    with pytest.raises(InputError):
        parse_word("ax", ("a", "b"))


def test_nfa_dot(suffix_marker_nfa):
    dot = nfa_to_dot(suffix_marker_nfa)
    assert "doublecircle" in dot
    assert '"1" -> "1" [label="a,b"]' in dot


def test_qds_dot(two_lane_qds):
    dot = qds_to_dot(two_lane_qds)
    assert "style=dashed" in dot
    assert 'label="2"' in dot  # the shift label rides the dashed edge


def test_path_dfa_export(trim_demo_qds):
    pdfa = build_path_dfa(trim_demo_qds)
    a = path_dfa_to_nfa(pdfa)
    assert "#1" in a.alphabet  # namespaced shift tokens
    assert a.is_deterministic
    assert len(a.states) == len(pdfa.states)
    dot = path_dfa_to_dot(pdfa)
    assert dot.startswith("digraph")


def test_serialized_sets_follow_declared_order():
    a = mk_nfa("ab", ["z", "y", "x"], ["z"], ["x", "y"], [("z", "a", "y")])
    text = serialize_nfa(a)
    assert "@states z y x" in text
    assert "@final y x" in text  # declared order, not sorted
