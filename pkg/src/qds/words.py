"""Words are tuples of symbol tokens; a plain ``str`` is accepted anywhere a
word is expected and is read as one single-character symbol per character."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

Word = tuple[str, ...]


def as_word(w: Iterable[str]) -> Word:
    return tuple(w)


def words_of_length(alphabet: Iterable[str], length: int) -> Iterator[Word]:
    """All words of exactly `length` symbols, lexicographic in alphabet order."""
    return itertools.product(tuple(alphabet), repeat=length)


def words_up_to(alphabet: Iterable[str], max_length: int) -> Iterator[Word]:
    """All words of length 0..max_length, shortest first, lexicographic within
    a length."""
    alpha = tuple(alphabet)
    for n in range(max_length + 1):
        yield from itertools.product(alpha, repeat=n)


def word_str(w: Iterable[str]) -> str:
    """Printable form: symbols joined bare when single-char, dot-joined
    otherwise; the empty word prints as ``_``."""
    w = tuple(w)
    if not w:
        return "_"
    if all(len(sym) == 1 for sym in w):
        return "".join(w)
    return ".".join(w)
