import pytest

from qds import (
    InputError,
    PreconditionError,
    Qds,
    QdsEdge,
    analyze_path,
    build_qds,
    dfa_to_qds,
    extended_delta,
    lint_qds,
    prune_unreachable,
    qds_membership,
    qds_stats,
)
from qds.structure import format_trace
from qds.words import words_up_to
from tests.conftest import mk_nfa


def all_shiftable_path_ends(s: Qds, q1: str, w, cap=None):
    """Brute enumeration oracle: endpoints of shiftable paths from q1 whose
    label is w. DFS over raw edge sequences, pruning on the committed label
    prefix; every candidate is re-validated through analyze_path."""
    w = tuple(w)
    if cap is None:
        cap = (len(w) + 2) * s.m
    out_edges: dict[str, list[QdsEdge]] = {}
    for (p, x), q in s.delta.items():
        out_edges.setdefault(p, []).append(QdsEdge(p, x, q))
    for p, (target, shift) in s.gamma.items():
        if target is not None:
            out_edges.setdefault(p, []).append(QdsEdge(p, shift, target))
    ends = set()

    def committed_label(path):
        # symbols not masked by any shift window seen so far
        mask_until = 0
        label = []
        for pos, e in enumerate(path, start=1):
            if e.is_shift:
                mask_until = max(mask_until, pos + s.m - 1 - e.label)
            elif pos > mask_until:
                label.append(e.label)
        return tuple(label)

    def rec(path, node):
        label = committed_label(path)
        if label == w:
            result = analyze_path(s, path, start=q1)
            if result.shiftable and result.label == w:
                ends.add(node)
        if len(path) >= cap or label[: len(w)] != w[: len(label)]:
            return
        if len(label) > len(w):
            return
        for e in out_edges.get(node, ()):
            rec(path + [e], e.dst)

    rec([], q1)
    return ends


# --- extended transition function ----------------------------------------


def test_extended_delta_worked_example(two_lane_qds):
    assert extended_delta(two_lane_qds, "1", "bbbaabab") == "7"
    assert extended_delta(two_lane_qds, "1", "") == "1"
    assert extended_delta(two_lane_qds, "1", "a") == "2"


def test_extended_delta_bottom_cases(two_lane_qds):
    # too-long word whose first window image is undefined
    s = two_lane_qds
    assert extended_delta(s, "6", "abab") is None  # delta(7,b) is bottom
    with pytest.raises(PreconditionError):
        extended_delta(s, "2", "ab")  # not a layer-1 state
    with pytest.raises(InputError):
        extended_delta(s, "1", "ax")


def test_membership_matches_extended_delta_everywhere(two_lane_qds, three_state_dfa):
    structures = [two_lane_qds, dfa_to_qds(three_state_dfa)]
    sm = mk_nfa(
        "ab",
        ["1", "2", "3"],
        ["1"],
        ["3"],
        [("1", "a", "1"), ("1", "b", "1"), ("1", "a", "2"), ("2", "a", "3"), ("2", "b", "3")],
    )
    structures.append(prune_unreachable(build_qds(sm, 3, 3)))
    for s in structures:
        for w in words_up_to(s.alphabet, 12 if len(s.alphabet) < 3 else 7):
            r = qds_membership(s, w)
            assert r.terminal == extended_delta(s, s.initial, w)
            assert r.accepted == (r.terminal in s.finals if r.terminal else False)


def test_membership_worked_example(two_lane_qds):
    r = qds_membership(two_lane_qds, "bbbaabab", want_trace=True)
    assert r.accepted and r.terminal == "7" and r.shifts == 4
    assert [st.state for st in r.trace.steps] == ["1", "1", "1", "6", "6"]
    assert not qds_membership(two_lane_qds, "").accepted
    b = qds_membership(two_lane_qds, "b")
    assert not b.accepted and b.terminal == "3"


def test_reads_bound(two_lane_qds, three_state_dfa):
    import random

    rng = random.Random(5)
    for s in (two_lane_qds, dfa_to_qds(three_state_dfa)):
        min_shift = qds_stats(s).min_shift
        for trial in range(200):
            n = rng.randrange(0, 40)
            w = tuple(rng.choice(s.alphabet) for _ in range(n))
            r = qds_membership(s, w)
            bound = s.window * (-(-len(w) // min_shift)) + s.window
            assert r.reads <= bound


def test_trace_renders(two_lane_qds):
    r = qds_membership(two_lane_qds, "bbbaabab", want_trace=True)
    text = format_trace(r, "bbbaabab")
    assert "offset\tstate\twindow\tshift" in text
    assert "terminal\t7" in text


# --- paths ----------------------------------------------------------------


def test_analyze_path_worked_example(two_lane_qds):
    p = [
        QdsEdge("1", "a", "2"),
        QdsEdge("2", "b", "4"),
        QdsEdge("4", 1, "6"),
        QdsEdge("6", "b", "7"),
        QdsEdge("7", "a", "8"),
        QdsEdge("8", 2, "6"),
        QdsEdge("6", "b", "7"),
    ]
    r = analyze_path(two_lane_qds, p)
    assert r.shiftable and r.successful and r.label == ("a", "b", "a", "b")


def test_analyze_path_truncated_shift_fails(two_lane_qds):
    p = [QdsEdge("1", "a", "2"), QdsEdge("2", "b", "4"), QdsEdge("4", 1, "6")]
    r = analyze_path(two_lane_qds, p)
    assert not r.shiftable and not r.successful and r.label is None


def test_analyze_path_empty(two_lane_qds):
    r = analyze_path(two_lane_qds, [], start="1")
    assert r.shiftable and not r.successful and r.label == ()
    with pytest.raises(InputError):
        analyze_path(two_lane_qds, [])


def test_analyze_path_rejects_foreign_edges(two_lane_qds):
    with pytest.raises(InputError):
        analyze_path(two_lane_qds, [QdsEdge("1", "a", "3")])
    with pytest.raises(InputError):
        analyze_path(
            two_lane_qds, [QdsEdge("1", "a", "2"), QdsEdge("3", "a", "5")]
        )


def test_overlap_mismatch_is_not_shiftable(two_lane_qds):
    # gamma(4) shifts 1 and owes a matching overlap symbol: after (2,b,4) the
    # re-read must be b, so continuing with (6,a,7) breaks the overlap
    p = [
        QdsEdge("1", "a", "2"),
        QdsEdge("2", "b", "4"),
        QdsEdge("4", 1, "6"),
        QdsEdge("6", "a", "7"),
        QdsEdge("7", "a", "8"),
    ]
    assert not analyze_path(two_lane_qds, p).shiftable


def test_extended_delta_equals_shiftable_path_labels(two_lane_qds, three_state_dfa):
    structures = [two_lane_qds, dfa_to_qds(three_state_dfa)]
    for s in structures:
        for q1 in s.layers[0]:
            for w in words_up_to(s.alphabet, 5):
                ends = all_shiftable_path_ends(s, q1, w)
                got = extended_delta(s, q1, w)
                if got is None:
                    assert ends == set()
                else:
                    assert ends == {got}


# --- stats and lint -------------------------------------------------------


def test_stats_values(two_lane_qds, three_state_dfa):
    st = qds_stats(two_lane_qds)
    assert (st.total_states, st.m, st.min_shift) == (8, 3, 1)
    emb = qds_stats(dfa_to_qds(three_state_dfa))
    assert (emb.total_states, emb.min_shift) == (6, 1)
    from qds import gen_sk_qds

    assert qds_stats(gen_sk_qds(0)).total_states == 5


def test_lint_flags_full_window_shift():
    s = Qds(
        alphabet=("a",),
        layers=(("p",), ("q",)),
        initial="p",
        finals=frozenset({"p"}),
        delta={("p", "a"): "q"},
        gamma={"q": ("p", 2)},
    )
    assert lint_qds(s)
    ok = Qds(
        alphabet=("a",),
        layers=(("p",), ("q",)),
        initial="p",
        finals=frozenset({"p"}),
        delta={("p", "a"): "q"},
        gamma={"q": ("p", 1)},
    )
    assert not lint_qds(ok)


def test_qds_validation_errors():
    with pytest.raises(InputError):
        Qds(("a",), (("p",),), "p", frozenset(), {}, {})  # one layer
    with pytest.raises(InputError):
        Qds(("a",), (("p",), ("p",)), "p", frozenset(), {}, {"p": ("p", 1)})
    with pytest.raises(InputError):
        Qds(("a",), (("p",), ("q",)), "q", frozenset(), {}, {"q": ("p", 1)})
    with pytest.raises(InputError):  # delta must advance one layer
        Qds(
            ("a",),
            (("p",), ("q",), ("r",)),
            "p",
            frozenset(),
            {("p", "a"): "r"},
            {"r": ("p", 1)},
        )
    with pytest.raises(InputError):  # gamma not total on the top layer
        Qds(("a",), (("p",), ("q",)), "p", frozenset(), {}, {})
    with pytest.raises(InputError):  # shift out of range
        Qds(("a",), (("p",), ("q",)), "p", frozenset(), {}, {"q": ("p", 3)})
