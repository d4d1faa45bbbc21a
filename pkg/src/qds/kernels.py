"""Bitmask kernels for the window-ambiguity search.

Deciding whether some length-k window leaves more than one live successor
means scanning all |Q| x |alphabet|^k (state, window) rows: the one hot loop
in the package. States are packed into machine-word bitmasks and the scan
runs as a compiled numba kernel, with a vectorized pure-numpy fallback and a
plain-Python reference.

Backend selection: the QDS_KERNEL environment variable may be set to
``numba``, ``numpy`` or ``python``; the default (``auto``) uses numba when it
imports, numpy otherwise. Automata with more than MAX_TABLE_STATES states
always take the python path (the mask tables grow as 2^|Q|).

A bad row is a pair (q, w) such that for every split 1 <= i <= l more than
one state reached from q by w[1..i] can still read w[i+1..k]. All three
backends return the first bad row they find in (state, lexicographic word)
scan order, or None; an automaton is (k,l)-unambiguous iff no bad row exists.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import InputError
from .nfa import Nfa
from .words import Word

MAX_TABLE_STATES = 16
MAX_ENUMERATION = 1 << 26  # refuse |alphabet|^k scans beyond this

_numba_witness = None
_numba_failed = False


def _load_numba():
    global _numba_witness, _numba_failed
    if _numba_witness is not None or _numba_failed:
        return _numba_witness
    try:
        from numba import njit
    except ImportError:
        _numba_failed = True
        return None

    @njit(cache=True)
    def witness(set_succ, pre_live, popcount, n, nsym, k, l):  # pragma: no cover
        full = np.int64((1 << n) - 1)
        syms = np.empty(k, dtype=np.int64)
        fronts = np.empty(k + 1, dtype=np.int64)
        out = np.empty(k + 1, dtype=np.int64)
        for q in range(n):
            fronts[0] = 1 << q
            pos = 0
            syms[0] = -1
            while pos >= 0:
                syms[pos] += 1
                if syms[pos] == nsym:
                    pos -= 1
                    continue
                front = set_succ[syms[pos], fronts[pos]]
                if front == 0:
                    continue  # dead window: row is good, skip subtree
                depth = pos + 1
                if depth <= l and popcount[front] <= 1:
                    continue  # split at depth disambiguates every extension
                fronts[depth] = front
                if depth == k:
                    viable = full
                    bad = True
                    for i in range(k, 0, -1):
                        if i <= l and popcount[fronts[i] & viable] < 2:
                            bad = False
                            break
                        viable = pre_live[syms[i - 1], viable]
                    if bad:
                        out[0] = q
                        for i in range(k):
                            out[i + 1] = syms[i]
                        return out
                    continue
                pos += 1
                syms[pos] = -1
        out[0] = -1
        return out

    _numba_witness = witness
    return _numba_witness


def encode_nfa(a: Nfa) -> tuple[np.ndarray, dict[str, int], dict[str, int]]:
    """Per-symbol successor masks plus the state/symbol index maps."""
    state_ix = {q: i for i, q in enumerate(a.states)}
    sym_ix = {s: i for i, s in enumerate(a.alphabet)}
    succ = np.zeros((len(a.alphabet), len(a.states)), dtype=np.int64)
    for p, x, q in a.transitions:
        succ[sym_ix[x], state_ix[p]] |= 1 << state_ix[q]
    return succ, state_ix, sym_ix


def _mask_tables(succ: np.ndarray, n: int):
    """set_succ[a][mask] = image of the state set `mask` under symbol a;
    pre_live[a][mask] = states with at least one a-successor inside `mask`."""
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    set_succ = np.zeros((succ.shape[0], size), dtype=np.int64)
    pre_live = np.zeros((succ.shape[0], size), dtype=np.int64)
    for a in range(succ.shape[0]):
        for q in range(n):
            hit = (masks >> q) & 1 == 1
            set_succ[a, hit] |= succ[a, q]
            if succ[a, q]:
                pre_live[a, (masks & succ[a, q]) != 0] |= 1 << q
    popcount = np.zeros(size, dtype=np.int64)
    for q in range(n):
        popcount[(masks >> q) & 1 == 1] += 1
    return set_succ, pre_live, popcount


def _numpy_witness(set_succ, pre_live, popcount, n, nsym, k, l):
    """Level-synchronous scan: forward fronts of every prefix, backward
    viability of every suffix, one boolean array of surviving bad rows."""
    full = (1 << n) - 1
    viable = [np.array([full], dtype=np.int64)]
    for _ in range(k):
        viable.append(pre_live[:, viable[-1]].reshape(-1))
    viable.reverse()  # viable[i] indexed by the suffix w[i+1..k]
    for q in range(n):
        fronts = np.array([1 << q], dtype=np.int64)
        bad = np.ones(nsym**k, dtype=bool)
        for i in range(1, l + 1):  # splits beyond l never constrain a row
            fronts = np.ascontiguousarray(set_succ[:, fronts].T).reshape(-1)
            cnt = popcount[fronts[:, None] & viable[i][None, :]]
            bad &= (cnt >= 2).reshape(-1)
            if not bad.any():
                break
        if bad.any():
            w = int(np.argmax(bad))
            syms = []
            for _ in range(k):
                syms.append(w % nsym)
                w //= nsym
            return (q, tuple(reversed(syms)))
    return None


def _python_witness(a: Nfa, k: int, l: int) -> tuple[str, Word] | None:
    """Reference implementation straight off the definition; used for big
    state sets and for cross-checking the packed kernels."""
    from .nfa import delta_word
    from .words import words_of_length

    for q in a.states:
        for w in words_of_length(a.alphabet, k):
            if all(
                len(
                    {
                        r
                        for r in delta_word(a, {q}, w[:i])
                        if delta_word(a, {r}, w[i:])
                    }
                )
                >= 2
                for i in range(1, l + 1)
            ):
                return q, w
    return None


def backend_name() -> str:
    """The backend the next call will use, honouring QDS_KERNEL."""
    mode = os.environ.get("QDS_KERNEL", "auto").lower()
    if mode not in ("auto", "numba", "numpy", "python"):
        raise InputError(f"QDS_KERNEL must be auto/numba/numpy/python, not {mode!r}")
    if mode == "auto":
        return "numba" if _load_numba() is not None else "numpy"
    if mode == "numba" and _load_numba() is None:
        raise InputError("QDS_KERNEL=numba but numba is not importable")
    return mode


def find_bad_row(a: Nfa, k: int, l: int) -> tuple[str, Word] | None:
    """First (state, window) pair violating the (k,l) condition, or None."""
    if len(a.alphabet) ** k > MAX_ENUMERATION:
        raise InputError(
            f"window scan |alphabet|^k = {len(a.alphabet)}^{k} is over the "
            f"enumeration limit {MAX_ENUMERATION}"
        )
    mode = backend_name()
    if mode == "python" or len(a.states) > MAX_TABLE_STATES:
        return _python_witness(a, k, l)
    succ, state_ix, _ = encode_nfa(a)
    n, nsym = len(a.states), len(a.alphabet)
    set_succ, pre_live, popcount = _mask_tables(succ, n)
    if mode == "numba":
        out = _load_numba()(set_succ, pre_live, popcount, n, nsym, k, l)
        if out[0] < 0:
            return None
        q = a.states[int(out[0])]
        return q, tuple(a.alphabet[int(s)] for s in out[1:])
    hit = _numpy_witness(set_succ, pre_live, popcount, n, nsym, k, l)
    if hit is None:
        return None
    q_ix, sym_ixs = hit
    return a.states[q_ix], tuple(a.alphabet[s] for s in sym_ixs)
