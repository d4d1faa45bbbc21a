import pytest

from qds import (
    InputError,
    PreconditionError,
    Qds,
    accessible_part,
    build_qds,
    dfa_to_qds,
    equiv_fixpoint,
    find_minimal_kl,
    identity_partition,
    minimize_dfa,
    prune_unreachable,
    qds_membership,
    quotient,
    random_nfa,
    verify_right_invariant,
)
from qds.reduction import LayeredPartition
from qds.words import words_up_to


def built_corpus(n_structures, kcap=3):
    made = 0
    seed = 0
    while made < n_structures and seed < 50 * n_structures:
        a = accessible_part(random_nfa(seed, 1 + seed % 4, 1 + seed % 2, 0.3, 0.45))
        seed += 1
        if not a.states:
            continue
        pair = find_minimal_kl(a, kcap)
        if pair is None:
            continue
        made += 1
        yield prune_unreachable(build_qds(a, *pair))


# --- the fixpoint -----------------------------------------------------------


def test_rigid_pair_not_reducible(rigid_pair_qds):
    assert equiv_fixpoint(rigid_pair_qds).is_identity


def test_slack_pair_classes(slack_pair_qds):
    p = equiv_fixpoint(slack_pair_qds)
    got = [set(map(frozenset, layer)) for layer in p.layers]
    assert got == [
        {frozenset({"1"})},
        {frozenset({"2", "4"})},
        {frozenset({"3", "5"})},
    ]


def test_fixpoint_on_minimal_dfa_embedding(three_state_dfa):
    d = minimize_dfa(three_state_dfa)
    s = prune_unreachable(dfa_to_qds(d))
    assert equiv_fixpoint(s).is_identity


def test_refinement_chain_properties():
    from qds.reduction import _refine

    for s in built_corpus(25):
        min_layer = min(len(layer) for layer in s.layers)
        partition = equiv_fixpoint(s)
        assert partition.steps <= min_layer
        # monotone: each step refines the previous one
        prev = _refine(s, None)
        for _ in range(partition.steps + 1):
            nxt = _refine(s, prev)
            prev_class = {q: cls for layer in prev for cls in layer for q in cls}
            nxt_class = {q: cls for layer in nxt for cls in layer for q in cls}
            for q, cls in nxt_class.items():
                assert cls <= prev_class[q]
            prev = nxt
        assert verify_right_invariant(s, partition)
        # finality never mixes outside layer 1
        for layer in partition.layers[1:]:
            for cls in layer:
                assert len({q in s.finals for q in cls}) == 1


# --- right invariance -------------------------------------------------------


def test_identity_is_right_invariant(two_lane_qds, slack_pair_qds):
    for s in (two_lane_qds, slack_pair_qds):
        assert verify_right_invariant(s, identity_partition(s))


def test_mixed_shift_merge_rejected(rigid_pair_qds):
    bad = LayeredPartition(
        layers=(
            (frozenset({"1"}),),
            (frozenset({"2"}), frozenset({"4"})),
            (frozenset({"3", "5"}),),  # shifts differ: 1 vs 2
        ),
        steps=0,
    )
    check = verify_right_invariant(rigid_pair_qds, bad)
    assert not check.ok
    q, q2, tag = check.counterexample
    assert {q, q2} == {"3", "5"}


def test_delta_violation_reported(two_lane_qds):
    bad = LayeredPartition(
        layers=(
            (frozenset({"1", "6"}),),  # delta(1,a)=2 vs delta(6,a)=7
            (frozenset({"2"}), frozenset({"3"}), frozenset({"7"})),
            (frozenset({"4"}), frozenset({"5"}), frozenset({"8"})),
        ),
        steps=0,
    )
    check = verify_right_invariant(two_lane_qds, bad)
    assert not check.ok and check.counterexample[2] in two_lane_qds.alphabet


def test_partition_must_cover_layers(two_lane_qds):
    short = LayeredPartition(layers=((frozenset({"1"}),),), steps=0)
    with pytest.raises(InputError):
        verify_right_invariant(two_lane_qds, short)


# --- quotient ----------------------------------------------------------------


def test_quotient_of_slack_pair(slack_pair_qds):
    q = quotient(slack_pair_qds, equiv_fixpoint(slack_pair_qds))
    assert q.states == ("{1}", "{2,4}", "{3,5}")
    assert [len(layer) for layer in q.layers] == [1, 1, 1]
    assert q.finals == {"{1}", "{2,4}", "{3,5}"}
    assert q.gamma == {"{3,5}": ("{1}", 2)}
    assert q.delta == {
        ("{1}", "a"): "{2,4}",
        ("{1}", "b"): "{2,4}",
        ("{2,4}", "a"): "{3,5}",
        ("{2,4}", "b"): "{3,5}",
    }


def test_quotient_by_identity_is_isomorphic(two_lane_qds):
    q = quotient(two_lane_qds, identity_partition(two_lane_qds))
    assert len(q.states) == len(two_lane_qds.states)
    for w in words_up_to("ab", 8):
        assert (
            qds_membership(q, w).accepted == qds_membership(two_lane_qds, w).accepted
        )


def test_quotient_of_rigid_pair_is_isomorphic(rigid_pair_qds):
    q = quotient(rigid_pair_qds, equiv_fixpoint(rigid_pair_qds))
    assert len(q.states) == len(rigid_pair_qds.states)


def test_quotient_rejects_non_invariant_partition(rigid_pair_qds):
    bad = LayeredPartition(
        layers=(
            (frozenset({"1"}),),
            (frozenset({"2", "4"}),),
            (frozenset({"3", "5"}),),
        ),
        steps=0,
    )
    with pytest.raises(PreconditionError):
        quotient(rigid_pair_qds, bad)


def test_quotient_rejects_mixed_finality():
    s = Qds(
        alphabet=("a",),
        layers=(("p",), ("q", "r")),
        initial="p",
        finals=frozenset({"q"}),
        delta={("p", "a"): "q"},
        gamma={"q": ("p", 1), "r": ("p", 1)},
    )
    mixed = LayeredPartition(
        layers=((frozenset({"p"}),), (frozenset({"q", "r"}),)), steps=0
    )
    with pytest.raises(PreconditionError):
        quotient(s, mixed)


def test_quotient_preserves_membership_on_corpus():
    for s in built_corpus(20):
        p = equiv_fixpoint(s)
        q = quotient(s, p)
        limit = 10 if len(s.alphabet) < 2 else 8
        for w in words_up_to(s.alphabet, limit):
            assert qds_membership(q, w).accepted == qds_membership(s, w).accepted
        # reduction is exhaustive: re-running it finds nothing to merge
        assert equiv_fixpoint(q).is_identity


def test_quotient_layer_valid_on_corpus():
    for s in built_corpus(10):
        q = quotient(s, equiv_fixpoint(s))
        for (p_, a), t in q.delta.items():
            assert q.layer_of[t] == q.layer_of[p_] + 1
        assert set(q.gamma) == set(q.layers[-1])
