"""Window-lookahead unambiguity of NFAs and quasi-deterministic structures:
deciding (k,l)-unambiguity, compiling unambiguous automata into layered
sliding-window recognizers, trimming and reducing them, and measuring the
size gap against minimal DFAs."""

from .build import build_qds, dfa_to_qds, prune_unreachable
from .errors import InputError, PreconditionError, QdsError
from .family import FamilyInstance, GapReport, gap_report, gen_lk_nfa, gen_sk_qds
from .kl import (
    KlReport,
    PairState,
    SquareAutomaton,
    StepEntry,
    StepTable,
    default_kmax,
    exists_kl,
    find_minimal_kl,
    is_k_lookahead_deterministic,
    is_kl_unambiguous,
    kl_witness,
    square_automaton,
    step,
    step_table,
)
from .nfa import (
    Dfa,
    Nfa,
    accessible_part,
    delta_word,
    determinize,
    minimize_dfa,
    nfa_membership,
    random_nfa,
    trim_nfa,
)
from .reduction import (
    LayeredPartition,
    equiv_fixpoint,
    identity_partition,
    quotient,
    verify_right_invariant,
)
from .structure import (
    MembershipResult,
    PathAnalysis,
    Qds,
    QdsEdge,
    RunTrace,
    analyze_path,
    extended_delta,
    lint_qds,
    qds_membership,
    qds_stats,
)
from .trim import PathDfa, UsefulReport, build_path_dfa, compute_useful, trim_qds

import types as _types

__all__ = [
    name
    for name, value in list(globals().items())
    if not name.startswith("_") and not isinstance(value, _types.ModuleType)
]
