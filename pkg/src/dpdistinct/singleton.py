"""One-sparse bucket detector.

Three counters identify whether a bucket holds zero, one, or more than one
distinct element, exactly: m = sum of frequencies, U = sum of freq*id,
V = sum of freq*id^2. With nonnegative per-element frequencies, U^2 = m*V
holds iff exactly one element carries all the mass (Cauchy-Schwarz), and
then the element is U/m with frequency m.

Python integers are arbitrary precision, so the counters cannot overflow;
the supported envelope (universe_size^2 * T < 2^127) is enforced at
configuration time instead.
"""

from __future__ import annotations

from typing import NamedTuple

EMPTY = "empty"
SINGLETON = "singleton"
COLLISION = "collision"


class Verdict(NamedTuple):
    kind: str
    element: int | None
    count: int | None


class TestSingleton:
    __test__ = False  # not a pytest class, despite the domain name

    __slots__ = ("m", "U", "V")

    def __init__(self, m: int = 0, U: int = 0, V: int = 0):
        self.m = m
        self.U = U
        self.V = V

    def insert(self, element: int) -> None:
        self.m += 1
        self.U += element
        self.V += element * element

    def delete(self, element: int) -> None:
        self.m -= 1
        self.U -= element
        self.V -= element * element

    def card(self) -> Verdict:
        return _verdict(self.m, self.U, self.V)

    def is_empty(self) -> bool:
        return self.m == 0 and self.U == 0 and self.V == 0


def _verdict(m: int, U: int, V: int) -> Verdict:
    if m == 0:
        return Verdict(EMPTY, None, None)
    if U * U == m * V:
        element, rem = divmod(U, m)
        if rem == 0:
            return Verdict(SINGLETON, element, m)
    return Verdict(COLLISION, None, None)


def decode(m: int, U: int, V: int) -> tuple[int, int] | None:
    """(element, frequency) when the counters describe a singleton, else None.

    Shared by the grid scan and the incremental recovery bookkeeping so both
    paths agree bit for bit.
    """
    if m == 0:
        return None
    if U * U == m * V:
        element, rem = divmod(U, m)
        if rem == 0:
            return (element, m)
    return None
