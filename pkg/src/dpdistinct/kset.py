"""Bounded distinct-set dictionary (k-set).

An R x B grid of one-sparse cells, R = ceil(log2(k / beta_fail)) rows of
B = 2k buckets, each row addressed by its own pairwise-independent hash.
Recovery collects every singleton cell, deduplicates repeated recoveries of
the same element across rows, and succeeds only when the recovered frequency
mass equals the global counter AND at most k elements were recovered; any
other outcome is NIL. With more than k distinct live elements the answer is
NIL with certainty; with at most k it is the exact live set except with
probability beta_fail.

Cells are stored sparsely (dict per row); the space accounting reports the
logical R*B cell count. Recovery state is also maintained incrementally so
the per-update cost is O(R) and a recovery query is O(1); ``return_set``
performs an honest full scan and is cross-checked against the incremental
answer in the tests.
"""

from __future__ import annotations

import math

import numpy as np

from .hashing import MERSENNE_P, PolyHash
from .singleton import decode


class KSet:
    def __init__(
        self,
        k: int,
        beta_fail: float,
        rng: np.random.Generator | None = None,
        row_hashes: list[PolyHash] | None = None,
    ):
        if k < 1:
            raise ValueError("capacity k must be >= 1")
        if not (0.0 < beta_fail < 1.0):
            raise ValueError("beta_fail must lie in (0, 1)")
        self.k = k
        self.beta_fail = beta_fail
        self.R = max(1, math.ceil(math.log2(k / beta_fail)))
        self.B = 2 * k
        if row_hashes is not None:
            if len(row_hashes) != self.R:
                raise ValueError(f"expected {self.R} row hashes, got {len(row_hashes)}")
            self.row_hashes = list(row_hashes)
        else:
            if rng is None:
                raise ValueError("provide an rng or explicit row hashes")
            self.row_hashes = [PolyHash(2, self.B, rng) for _ in range(self.R)]
        # Sparse cell storage: one dict per row, bucket -> [m, U, V].
        self.rows: list[dict[int, list[int]]] = [{} for _ in range(self.R)]
        self.m_total = 0
        # Incremental recovery aggregates.
        self._rec_count: dict[int, int] = {}  # element -> #cells decoding it
        self._rec_freq: dict[int, int] = {}  # element -> decoded frequency
        self._rec_mass = 0  # sum of deduplicated decoded frequencies
        self._rec_distinct = 0

    def update(self, element: int, delta: int) -> None:
        """Apply one insertion (delta=+1) or deletion (delta=-1) of ``element``."""
        if delta not in (1, -1):
            raise ValueError("delta must be +1 or -1")
        if not (0 <= element < MERSENNE_P):
            raise ValueError("element outside the hashable range")
        self.m_total += delta
        e2 = element * element
        for r, h in enumerate(self.row_hashes):
            row = self.rows[r]
            b = h(element)
            cell = row.get(b)
            if cell is None:
                cell = [0, 0, 0]
                row[b] = cell
            before = decode(cell[0], cell[1], cell[2])
            cell[0] += delta
            cell[1] += delta * element
            cell[2] += delta * e2
            after = decode(cell[0], cell[1], cell[2])
            if cell[0] == 0 and cell[1] == 0 and cell[2] == 0:
                del row[b]
            if before != after:
                if before is not None:
                    self._drop_decode(before)
                if after is not None:
                    self._add_decode(after)

    def _drop_decode(self, dec: tuple[int, int]) -> None:
        e = dec[0]
        n = self._rec_count[e] - 1
        if n == 0:
            del self._rec_count[e]
            self._rec_mass -= self._rec_freq.pop(e)
            self._rec_distinct -= 1
        else:
            self._rec_count[e] = n

    def _add_decode(self, dec: tuple[int, int]) -> None:
        e, f = dec
        n = self._rec_count.get(e, 0)
        self._rec_count[e] = n + 1
        if n == 0:
            self._rec_freq[e] = f
            self._rec_mass += f
            self._rec_distinct += 1
        elif self._rec_freq[e] != f:
            self._rec_mass += f - self._rec_freq[e]
            self._rec_freq[e] = f

    def recovered_size(self) -> int | None:
        """Number of recovered elements, or None for NIL. O(1)."""
        if self._rec_mass == self.m_total and self._rec_distinct <= self.k:
            return self._rec_distinct
        return None

    def return_set(self) -> dict[int, int] | None:
        """Full recovery scan: {element: frequency}, or None for NIL."""
        recovered: dict[int, int] = {}
        mass = 0
        for row in self.rows:
            for cell in row.values():
                dec = decode(cell[0], cell[1], cell[2])
                if dec is not None and dec[0] not in recovered:
                    recovered[dec[0]] = dec[1]
                    mass += dec[1]
        if mass == self.m_total and len(recovered) <= self.k:
            return recovered
        return None

    def size_in_cells(self) -> int:
        """Logical grid size R*B, the unit of the space accounting."""
        return self.R * self.B
