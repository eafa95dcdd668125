"""Turnstile stream updates.

An update is a plain int (hot-loop friendly): 0 is the blank update, +(e+1)
inserts element e, -(e+1) deletes element e. Element ids are nonnegative.
"""

from __future__ import annotations

BLANK = 0


def ins(element: int) -> int:
    return element + 1


def dele(element: int) -> int:
    return -(element + 1)


def is_blank(u: int) -> bool:
    return u == 0


def element_of(u: int) -> int:
    """Element id of a non-blank update."""
    return (u if u > 0 else -u) - 1


def sign_of(u: int) -> int:
    """+1 for an insertion, -1 for a deletion."""
    return 1 if u > 0 else -1


class StreamValidityError(ValueError):
    """A deletion drove some element's running count below zero."""
