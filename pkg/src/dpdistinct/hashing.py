"""k-wise independent polynomial hashing over the Mersenne field 2^61 - 1.

A degree-(k-1) polynomial with uniform coefficients gives a k-wise
independent family (Carter-Wegman). The geometric level hash maps a
lam-wise polynomial output u in [0, 2^L) onto levels so that
Pr[level = i] = 2^-i for i in 1..L and Pr[no level] = 2^-L.
"""

from __future__ import annotations

import numpy as np

MERSENNE_P = (1 << 61) - 1

_MASK61 = MERSENNE_P
_MASK29 = (1 << 29) - 1


class PolyHash:
    """Immutable polynomial hash; shareable across threads once seeded."""

    __slots__ = ("coeffs", "prime", "out_range")

    def __init__(self, independence: int, out_range: int, rng: np.random.Generator):
        if independence < 1:
            raise ValueError("independence degree must be >= 1")
        if not (1 <= out_range <= MERSENNE_P):
            raise ValueError("out_range must lie in [1, 2^61 - 1]")
        # Uniform coefficients over the field; a zero leading coefficient is
        # allowed (standard construction).
        draws = rng.integers(0, MERSENNE_P, size=independence, dtype=np.uint64)
        self.coeffs = tuple(int(c) for c in draws)
        self.prime = MERSENNE_P
        self.out_range = out_range

    @classmethod
    def from_coeffs(cls, coeffs, out_range: int, prime: int = MERSENNE_P) -> "PolyHash":
        h = cls.__new__(cls)
        h.coeffs = tuple(int(c) for c in coeffs)
        h.prime = prime
        h.out_range = out_range
        return h

    def __call__(self, x: int) -> int:
        if not (0 <= x < self.prime):
            raise ValueError(f"key {x} outside the field [0, {self.prime})")
        acc = 0
        p = self.prime
        for c in reversed(self.coeffs):  # Horner, highest degree first
            acc = (acc * x + c) % p
        return acc % self.out_range


def mulmod_p61(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorized a*b mod (2^61 - 1) on uint64 arrays with values < 2^61.

    Splits operands into 32/29-bit limbs so every intermediate fits uint64.
    """
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    a_hi, a_lo = a >> np.uint64(32), a & np.uint64(0xFFFFFFFF)
    b_hi, b_lo = b >> np.uint64(32), b & np.uint64(0xFFFFFFFF)

    hi = a_hi * b_hi  # < 2^58, times 2^64 ≡ times 8
    cross = a_hi * b_lo + a_lo * b_hi  # < 2^62, times 2^32
    lo = a_lo * b_lo  # < 2^64

    cross_folded = ((cross & np.uint64(_MASK29)) << np.uint64(32)) + (cross >> np.uint64(29))
    lo_folded = (lo & np.uint64(_MASK61)) + (lo >> np.uint64(61))

    total = hi * np.uint64(8) + cross_folded + lo_folded  # < 3 * 2^61
    total = (total & np.uint64(_MASK61)) + (total >> np.uint64(61))
    total = (total & np.uint64(_MASK61)) + (total >> np.uint64(61))
    return np.where(total == np.uint64(_MASK61), np.uint64(0), total)


def poly_eval_many(coeff_matrix: np.ndarray, x: int) -> np.ndarray:
    """Evaluate many polynomials (rows of coeff_matrix) at one key.

    Used by the statistical tests, which need millions of fresh seedings.
    """
    coeff_matrix = np.asarray(coeff_matrix, dtype=np.uint64)
    xv = np.uint64(x % MERSENNE_P)
    acc = np.zeros(coeff_matrix.shape[0], dtype=np.uint64)
    for j in range(coeff_matrix.shape[1] - 1, -1, -1):
        acc = mulmod_p61(acc, np.full_like(acc, xv))
        acc = acc + coeff_matrix[:, j]
        acc = np.where(acc >= np.uint64(_MASK61), acc - np.uint64(_MASK61), acc)
    return acc


class GeometricLevelHash:
    """Level assignment with geometrically decaying probabilities.

    The lam-wise polynomial maps keys to u in [0, 2^L); level i owns the band
    [2^L (1 - 2^-(i-1)), 2^L (1 - 2^-i)), and the final single-point band
    u = 2^L - 1 maps to no level (None).
    """

    __slots__ = ("base", "L")

    def __init__(self, independence: int, L: int, rng: np.random.Generator):
        if L < 1:
            raise ValueError("L must be >= 1")
        self.base = PolyHash(independence, 1 << L, rng)
        self.L = L

    def level_of(self, x: int) -> int | None:
        u = self.base(x)
        return self.level_of_value(u)

    def level_of_value(self, u: int) -> int | None:
        v = (1 << self.L) - u
        if v == 1:
            return None
        return self.L - ((v - 1).bit_length() - 1)
