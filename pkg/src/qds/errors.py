"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: malformed input and violated
preconditions are both exit 2, while mathematically negative answers
(REJECT, "no such pair") are exit 1 and never raise.
"""


class QdsError(Exception):
    """Base class for all errors raised by this package."""


class InputError(QdsError):
    """Malformed input: unknown symbol, bad file, inconsistent structure."""


class PreconditionError(QdsError):
    """An operation was called outside its contract (e.g. a (k,l) operation
    on a multi-initial or non-(k,l)-unambiguous automaton)."""
