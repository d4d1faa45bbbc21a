"""Quasi-deterministic structures: a layered deterministic graph whose last
layer shifts a fixed-width reading window back to layer one.

The structure has m layers; the window width is m-1. A delta edge advances
exactly one layer; gamma maps every top-layer state to a layer-one target
(or bottom) together with a shift length in 1..m. Recognition slides the
window along the input, re-reading the overlap after each shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InputError, PreconditionError
from .words import Word, as_word, word_str

GammaEntry = tuple[str | None, int]  # (target or bottom, shift)


@dataclass(frozen=True)
class Qds:
    alphabet: tuple[str, ...]
    layers: tuple[tuple[str, ...], ...]
    initial: str
    finals: frozenset[str]
    delta: Mapping[tuple[str, str], str]
    gamma: Mapping[str, GammaEntry]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "layers", tuple(tuple(l) for l in self.layers))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "delta", dict(self.delta))
        object.__setattr__(self, "gamma", dict(self.gamma))
        if len(self.layers) < 2:
            raise InputError("a QDS needs at least two layers")
        for tok in self.alphabet:
            if not tok or any(c.isspace() for c in tok) or tok == "_":
                raise InputError(f"bad symbol token {tok!r}")
        seen: set[str] = set()
        for layer in self.layers:
            for q in layer:
                if q in seen:
                    raise InputError(f"state {q!r} appears in two layers")
                if not q or any(c.isspace() for c in q) or q == "_":
                    raise InputError(f"bad state id {q!r}")
                seen.add(q)
        if self.initial not in set(self.layers[0]):
            raise InputError("initial state must sit in layer 1")
        if not self.finals <= seen:
            raise InputError("final states not all declared")
        layer_of = {q: j for j, layer in enumerate(self.layers) for q in layer}
        alpha = set(self.alphabet)
        for (p, a), q in self.delta.items():
            if a not in alpha:
                raise InputError(f"delta symbol {a!r} not in alphabet")
            if p not in layer_of or q not in layer_of:
                raise InputError(f"delta endpoint not declared: ({p},{a},{q})")
            if layer_of[q] != layer_of[p] + 1:
                raise InputError(
                    f"delta edge ({p},{a},{q}) must advance exactly one layer"
                )
        top = set(self.layers[-1])
        if set(self.gamma) != top:
            raise InputError("gamma must be defined on exactly the last layer")
        for p, (target, shift) in self.gamma.items():
            if not (1 <= shift <= self.m):
                raise InputError(f"gamma shift at {p!r} out of range 1..{self.m}")
            if target is not None and target not in set(self.layers[0]):
                raise InputError(f"gamma target of {p!r} must sit in layer 1")

    @property
    def m(self) -> int:
        return len(self.layers)

    @property
    def window(self) -> int:
        return self.m - 1

    @cached_property
    def states(self) -> tuple[str, ...]:
        return tuple(q for layer in self.layers for q in layer)

    @cached_property
    def layer_of(self) -> dict[str, int]:
        """State -> 1-based layer index."""
        return {q: j + 1 for j, layer in enumerate(self.layers) for q in layer}

    def step(self, state: str | None, symbol: str) -> str | None:
        """Bottom-absorbing one-symbol delta (bottom on top-layer states)."""
        if symbol not in self.alphabet:
            raise InputError(f"unknown symbol {symbol!r}")
        if state is None:
            return None
        return self.delta.get((state, symbol))

    def chain(self, state: str | None, w: Iterable[str]) -> str | None:
        """Bottom-absorbing delta over a word of length <= window."""
        for sym in as_word(w):
            state = self.step(state, sym)
        return state


@dataclass(frozen=True)
class QdsEdge:
    """One edge of a QDS: the label is a symbol for delta edges and the
    shift length (an int) for gamma edges."""

    src: str
    label: str | int
    dst: str

    @property
    def is_shift(self) -> bool:
        return isinstance(self.label, int)


@dataclass(frozen=True)
class PathAnalysis:
    shiftable: bool
    successful: bool
    label: Word | None  # defined only when shiftable


@dataclass(frozen=True)
class TraceStep:
    offset: int          # window start in the original input
    state: str           # layer-1 state the window is read from
    consumed: Word       # symbols fed to delta in this step
    shift: int | None    # None for the final partial window


@dataclass(frozen=True)
class RunTrace:
    steps: tuple[TraceStep, ...]
    terminal: str | None


@dataclass(frozen=True)
class MembershipResult:
    accepted: bool
    terminal: str | None
    shifts: int
    reads: int
    trace: RunTrace | None = field(default=None, compare=False)


def extended_delta(s: Qds, q: str, w: Iterable[str]) -> str | None:
    """The recursive extended transition function.

    Reads at most one window: shorter words run through delta alone, longer
    ones consult gamma on the window image and recurse on the shifted rest.
    `qds_membership` is the iterative counterpart; the two must agree.
    """
    if q not in set(s.layers[0]):
        raise PreconditionError(f"state {q!r} is not a layer-1 state")
    w = as_word(w)
    if len(w) <= s.window:
        return s.chain(q, w)
    top = s.chain(q, w[: s.window])
    target, shift = s.gamma[top] if top is not None else (None, 1)
    if target is None:
        return None
    return extended_delta(s, target, w[shift:])


def qds_membership(s: Qds, w: Iterable[str], want_trace: bool = False) -> MembershipResult:
    """Iterative windowed membership test.

    Runs in constant working space beyond the input; `reads` counts every
    symbol handed to delta, for checking the k*ceil(|w|/s) time bound.
    """
    w = as_word(w)
    for sym in w:
        if sym not in s.alphabet:
            raise InputError(f"unknown symbol {sym!r}")
    k = s.window
    steps: list[TraceStep] = []
    reads = 0
    shifts = 0

    def chain_counted(state: str | None, part: Word) -> str | None:
        nonlocal reads
        for sym in part:
            if state is None:
                return None
            reads += 1
            state = s.delta.get((state, sym))
        return state

    if len(w) <= k:
        terminal = chain_counted(s.initial, w)
        if want_trace:
            steps.append(TraceStep(0, s.initial, w, None))
        return MembershipResult(
            accepted=terminal in s.finals if terminal is not None else False,
            terminal=terminal,
            shifts=0,
            reads=reads,
            trace=RunTrace(tuple(steps), terminal) if want_trace else None,
        )

    current: str | None = s.initial
    offset = 0
    rest = w
    while len(rest) > k and current is not None:
        top = chain_counted(current, rest[:k])
        target, shift = s.gamma[top] if top is not None else (None, 1)
        if want_trace:
            steps.append(TraceStep(offset, current, rest[:k], shift if target is not None else None))
        current = target
        if target is not None:
            shifts += 1
        rest = rest[shift:]
        offset += shift
    terminal = chain_counted(current, rest) if current is not None else None
    if want_trace and current is not None:
        steps.append(TraceStep(offset, current, rest, None))
    return MembershipResult(
        accepted=terminal in s.finals if terminal is not None else False,
        terminal=terminal,
        shifts=shifts,
        reads=reads,
        trace=RunTrace(tuple(steps), terminal) if want_trace else None,
    )


def _validate_edges(s: Qds, edges: tuple[QdsEdge, ...]) -> None:
    for i, e in enumerate(edges):
        if e.is_shift:
            entry = s.gamma.get(e.src)
            if entry is None or entry != (e.dst, e.label):
                raise InputError(f"not a gamma edge of this structure: {e}")
        else:
            if s.delta.get((e.src, e.label)) != e.dst:
                raise InputError(f"not a delta edge of this structure: {e}")
        if i > 0 and edges[i - 1].dst != e.src:
            raise InputError(
                f"edges {i-1} and {i} do not connect ({edges[i-1].dst} vs {e.src})"
            )


def analyze_path(s: Qds, edges: Iterable[QdsEdge], start: str | None = None) -> PathAnalysis:
    """Classify an edge sequence as shiftable / successful and compute its
    label (the input word the path consumes, overlap symbols counted once).

    Every shift edge must have enough preceding symbols, enough following
    edges, and a matching overlap. The empty path (anchored by `start`) is
    shiftable by convention.
    """
    edges = tuple(edges)
    if not edges:
        if start is None:
            raise InputError("empty path needs an anchor state")
        if start not in s.layer_of:
            raise InputError(f"unknown state {start!r}")
        return PathAnalysis(
            shiftable=True,
            successful=start == s.initial and start in s.finals,
            label=(),
        )
    _validate_edges(s, edges)
    n = len(edges)
    m = s.m
    labels = [e.label for e in edges]
    shiftable = True
    for j in range(1, n + 1):  # 1-based edge positions, as in the definitions
        e = edges[j - 1]
        if not e.is_shift:
            continue
        l = e.label
        if not (m - 1 - l < j and j + m - l <= n):
            shiftable = False
            break
        before = labels[j - m + l: j - 1]      # x_{j-m+l+1} .. x_{j-1}
        after = labels[j: j + m - l - 1]       # x_{j+1} .. x_{j+m-l-1}
        if before != after:
            shiftable = False
            break
    label: Word | None = None
    if shiftable:
        masked = [False] * (n + 1)
        for j in range(1, n + 1):
            e = edges[j - 1]
            if e.is_shift:
                masked[j] = True  # shift tokens never reach the label
                for t in range(j, min(j + m - 1 - e.label, n) + 1):
                    masked[t] = True
        label = tuple(
            labels[t - 1] for t in range(1, n + 1) if not masked[t]
        )
    successful = (
        shiftable and edges[0].src == s.initial and edges[-1].dst in s.finals
    )
    return PathAnalysis(shiftable=shiftable, successful=successful, label=label)


@dataclass(frozen=True)
class QdsStats:
    m: int
    window: int
    layer_sizes: tuple[int, ...]
    total_states: int
    delta_edges: int
    min_shift: int | None  # smallest shift with a real target; None if all bottom
    bottom_gammas: int
    finals: int


def qds_stats(s: Qds) -> QdsStats:
    live_shifts = [shift for tgt, shift in s.gamma.values() if tgt is not None]
    return QdsStats(
        m=s.m,
        window=s.window,
        layer_sizes=tuple(len(l) for l in s.layers),
        total_states=len(s.states),
        delta_edges=len(s.delta),
        min_shift=min(live_shifts) if live_shifts else None,
        bottom_gammas=sum(1 for tgt, _ in s.gamma.values() if tgt is None),
        finals=len(s.finals),
    )


def lint_qds(s: Qds) -> list[str]:
    """Non-fatal oddities: hand-written structures may carry full-window
    shifts, which the trim machinery cannot track."""
    warnings = []
    for p, (target, shift) in sorted(s.gamma.items()):
        if shift == s.m and target is not None:
            warnings.append(
                f"gamma at {p!r} shifts by the full window+1 ({s.m}); "
                "paths ending in this shift escape the path-DFA analysis"
            )
    return warnings


def format_trace(result: MembershipResult, w: Iterable[str]) -> str:
    """Render a run as the sliding-window table: one row per window, the
    current layer-1 state, the consumed symbols, and the shift taken."""
    w = as_word(w)
    if result.trace is None:
        raise InputError("run the membership test with want_trace=True")
    header = "offset\tstate\twindow\tshift"
    rows = [header]
    for step in result.trace.steps:
        shift = "-" if step.shift is None else str(step.shift)
        rows.append(
            f"{step.offset}\t{step.state}\t{word_str(step.consumed)}\t{shift}"
        )
    terminal = result.trace.terminal
    rows.append(f"terminal\t{'_' if terminal is None else terminal}")
    return "\n".join(rows)
