"""Single command-line entry point.

Exit codes: 0 for success / a positive answer, 1 for a mathematically
negative answer (REJECT, "ambiguous", "no pair"), 2 for malformed input or a
violated precondition (always with a one-line diagnostic on stderr). Scripts
can branch on negative-vs-error without parsing text.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import build, family, formats, kl, reduction, structure, trim
from .errors import InputError, QdsError
from .nfa import Dfa, Nfa, determinize, minimize_dfa
from .structure import Qds
from .words import word_str


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _load_nfa(path: str) -> Nfa:
    obj = formats.parse_automaton(_read_text(path))
    if not isinstance(obj, Nfa):
        raise InputError(f"{path}: expected an automaton, found a QDS")
    return obj


def _load_qds(path: str) -> Qds:
    obj = formats.parse_automaton(_read_text(path))
    if not isinstance(obj, Qds):
        raise InputError(f"{path}: expected a QDS, found an automaton")
    for warning in structure.lint_qds(obj):
        print(f"warning: {warning}", file=sys.stderr)
    return obj


def _cmd_check(args) -> int:
    a = _load_nfa(args.file)
    witness = kl.kl_witness(a, args.k, args.l)
    if witness is None:
        print(f"UNAMBIGUOUS({args.k},{args.l})")
        return 0
    q, w = witness
    print(f"AMBIGUOUS({args.k},{args.l}) witness state={q} word={word_str(w)}")
    return 1


def _cmd_exists(args) -> int:
    a = _load_nfa(args.file)
    report = kl.exists_kl(a)
    if report.exists:
        print("EXISTS")
        return 0
    cycle = "->".join(repr(p) for p in report.certificate)
    print(f"NONE certificate={cycle}")
    return 1


def _cmd_minimal(args) -> int:
    a = _load_nfa(args.file)
    if not kl.exists_kl(a).exists:
        print("NONE no pair exists for any (k,l)")
        return 1
    kmax = args.kmax if args.kmax is not None else kl.default_kmax(a)
    found = kl.find_minimal_kl(a, kmax)
    if found is None:
        print(f"NONE search exhausted at kmax={kmax}; a pair exists beyond the cap")
        return 1
    print(f"MINIMAL k={found[0]} l={found[1]}")
    return 0


def _cmd_steptable(args) -> int:
    a = _load_nfa(args.file)
    table = kl.step_table(a, args.k, args.l)
    lines = ["state\tword\tindex\tsuccessor"]
    for (q, w), entry in table.entries.items():
        succ = "_" if entry.successor is None else entry.successor
        lines.append(f"{q}\t{word_str(w)}\t{entry.index}\t{succ}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_lookahead(args) -> int:
    a = _load_nfa(args.file)
    if kl.is_k_lookahead_deterministic(a, args.k):
        print(f"LOOKAHEAD({args.k})=true")
        return 0
    print(f"LOOKAHEAD({args.k})=false")
    return 1


def _cmd_build_qds(args) -> int:
    a = _load_nfa(args.file)
    s = build.build_qds(a, args.k, args.l)
    if args.prune:
        s = build.prune_unreachable(s)
    _write_text(args.out, formats.serialize_qds(s))
    return 0


def _cmd_member(args) -> int:
    s = _load_qds(args.file)
    w = formats.parse_word(args.word, s.alphabet)
    result = structure.qds_membership(s, w, want_trace=args.trace)
    if args.trace:
        print(structure.format_trace(result, w))
    verdict = "ACCEPT" if result.accepted else "REJECT"
    terminal = "_" if result.terminal is None else result.terminal
    print(f"{verdict} state={terminal} shifts={result.shifts} reads={result.reads}")
    return 0 if result.accepted else 1


def _cmd_trim(args) -> int:
    s = _load_qds(args.file)
    trimmed = trim.trim_qds(s)
    _write_text(args.out, formats.serialize_qds(trimmed))
    if args.report:
        report = trim.compute_useful(s)
        gone_states = [q for q in s.states if q not in report.useful_states]
        gone_delta = [
            (p, x, q)
            for (p, x), q in sorted(s.delta.items())
            if (p, x, q) not in report.useful_delta
        ]
        gone_gamma = [
            (p, shift, target)
            for p, (target, shift) in sorted(s.gamma.items())
            if target is not None and (p, shift, target) not in report.useful_gamma
        ]
        gone_final = [
            q for q in s.states
            if q in s.finals and q not in report.useful_finalities
        ]
        lines = ["kind\tdetail"]
        lines += [f"state\t{q}" for q in gone_states]
        lines += [f"delta\t{p} {x} {q}" for p, x, q in gone_delta]
        lines += [f"gamma\t{p} {t} {l}" for p, l, t in gone_gamma]
        lines += [f"finality\t{q}" for q in gone_final]
        stream = sys.stdout if args.out not in (None, "-") else sys.stderr
        print("\n".join(lines), file=stream)
    return 0


def _cmd_pathdfa(args) -> int:
    s = _load_qds(args.file)
    pdfa = trim.build_path_dfa(s)
    if args.dot:
        _write_text(args.out, formats.path_dfa_to_dot(pdfa))
    else:
        _write_text(args.out, formats.serialize_nfa(formats.path_dfa_to_nfa(pdfa)))
    return 0


def _cmd_reduce(args) -> int:
    s = _load_qds(args.file)
    partition = reduction.equiv_fixpoint(s)
    quotiented = reduction.quotient(s, partition)
    _write_text(args.out, formats.serialize_qds(quotiented))
    if args.classes:
        lines = ["class_id\tlayer\tmembers"]
        for j, classes in enumerate(partition.layers, start=1):
            for cls in classes:
                lines.append(
                    f"{reduction.class_name(cls)}\t{j}\t{' '.join(sorted(cls))}"
                )
        stream = sys.stdout if args.out not in (None, "-") else sys.stderr
        print("\n".join(lines), file=stream)
    return 0


def _cmd_dfa2qds(args) -> int:
    a = _load_nfa(args.file)
    _write_text(args.out, formats.serialize_qds(build.dfa_to_qds(a)))
    return 0


def _cmd_determinize(args) -> int:
    a = _load_nfa(args.file)
    _write_text(args.out, formats.serialize_nfa(determinize(a)))
    return 0


def _cmd_minimize(args) -> int:
    a = _load_nfa(args.file)
    if not a.is_deterministic:
        raise InputError("minimize needs a deterministic automaton; determinize first")
    d = Dfa(a.alphabet, a.states, a.initials, a.finals, a.transitions)
    _write_text(args.out, formats.serialize_nfa(minimize_dfa(d)))
    return 0


def _cmd_family(args) -> int:
    if args.emit is not None:
        inst = family.family_instance(args.emit)
        prefix = args.prefix or f"lk{args.emit}"
        _write_text(f"{prefix}.nfa", formats.serialize_nfa(inst.nfa))
        _write_text(f"{prefix}.qds", formats.serialize_qds(inst.sk))
        dfa = minimize_dfa(determinize(inst.nfa))
        _write_text(f"{prefix}.dfa", formats.serialize_nfa(dfa))
        if not args.porcelain:
            print(f"wrote {prefix}.nfa {prefix}.qds {prefix}.dfa", file=sys.stderr)
        return 0
    report = family.gap_report(args.kmax, seed=args.seed)
    _write_text(args.csv, report.as_csv() + "\n")
    if not args.porcelain:
        if report.crossover_k is not None:
            print(
                f"layered structure smaller than the minimal DFA from k={report.crossover_k}",
                file=sys.stderr,
            )
        else:
            print("no size crossover up to this kmax", file=sys.stderr)
    return 0


def _cmd_stats(args) -> int:
    s = _load_qds(args.file)
    stats = structure.qds_stats(s)
    lines = [
        f"layers\t{stats.m}",
        f"window\t{stats.window}",
        f"layer_sizes\t{' '.join(str(n) for n in stats.layer_sizes)}",
        f"total_states\t{stats.total_states}",
        f"delta_edges\t{stats.delta_edges}",
        f"min_shift\t{'_' if stats.min_shift is None else stats.min_shift}",
        f"bottom_gammas\t{stats.bottom_gammas}",
        f"finals\t{stats.finals}",
    ]
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_dot(args) -> int:
    obj = formats.parse_automaton(_read_text(args.file))
    if isinstance(obj, Qds):
        _write_text(args.out, formats.qds_to_dot(obj))
    else:
        _write_text(args.out, formats.nfa_to_dot(obj))
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qds",
        description="decide window-lookahead unambiguity of NFAs and run "
        "quasi-deterministic sliding-window recognizers",
    )
    default_seed = int(os.environ.get("QDS_SEED", "0"))
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--seed", type=int, default=default_seed)
        p.add_argument("--porcelain", action="store_true",
                       help="machine mode: no human summary lines")
        return p

    p = add("check", _cmd_check, help="is the automaton (k,l)-unambiguous?")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("file")

    p = add("exists", _cmd_exists, help="does any (k,l) pair work?")
    p.add_argument("file")

    p = add("minimal", _cmd_minimal, help="smallest working (k,l) pair")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("file")

    p = add("steptable", _cmd_steptable, help="step index/successor table as TSV")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("lookahead", _cmd_lookahead, help="is it k-lookahead deterministic?")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("file")

    p = add("build-qds", _cmd_build_qds, help="compile a (k,l)-unambiguous NFA")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--prune", action="store_true",
                   help="drop unreachable states after building")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("member", _cmd_member, help="windowed membership test")
    p.add_argument("--word", required=True,
                   help="symbols; one char each, or whitespace-separated; _ is empty")
    p.add_argument("--trace", action="store_true")
    p.add_argument("file")

    p = add("trim", _cmd_trim, help="drop useless states/edges/finalities")
    p.add_argument("--report", action="store_true",
                   help="also emit a TSV of removed components")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("pathdfa", _cmd_pathdfa, help="accessible path-DFA of a QDS")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("reduce", _cmd_reduce, help="quotient by the refinement fixpoint")
    p.add_argument("--classes", action="store_true",
                   help="also emit a TSV of the equivalence classes")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("dfa2qds", _cmd_dfa2qds, help="embed a DFA as a window-1 QDS")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("determinize", _cmd_determinize, help="subset construction")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("minimize", _cmd_minimize, help="minimal DFA (input must be deterministic)")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("family", _cmd_family, help="size/throughput report for the witness family")
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--csv", default=None, help="write the report CSV here")
    p.add_argument("--emit", type=int, default=None, metavar="K",
                   help="write the NFA, QDS and minimal DFA for one k")
    p.add_argument("--prefix", default=None, help="file prefix for --emit")

    p = add("stats", _cmd_stats, help="layer/shift statistics of a QDS")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    p = add("dot", _cmd_dot, help="DOT export (type auto-detected)")
    p.add_argument("--out", default=None)
    p.add_argument("file")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, matching the input-error contract
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except QdsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
