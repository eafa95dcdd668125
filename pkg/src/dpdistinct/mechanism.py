"""Continual-release prefix sums of a {-1, 0, 1} stream (tree mechanism).

Register j holds the clean sum of a dyadic block of 2^j consecutive inputs;
on the t-th update the least-significant set bit of t absorbs the lower
registers plus the new input, the lower registers reset, and a fresh
Gaussian perturbation of the written register is stored. The released value
is the sum of the perturbed registers addressed by the set bits of t, i.e.
the true prefix sum plus popcount(t) independent N(0, 1/rho_node) terms.

Noise is drawn one variate per update from the instance's generator, in
update order, so two instances seeded identically consume identical noise
streams; ``noise_enabled=False`` (test hook only) releases exact sums.
"""

from __future__ import annotations

import math

import numpy as np


class MechanismExhausted(RuntimeError):
    """More updates than the declared stream length."""


class BinaryMechanism:
    _BUF = 512

    def __init__(
        self,
        T: int,
        rho_node: float,
        rng: np.random.Generator | None = None,
        noise_enabled: bool = True,
    ):
        if T < 1:
            raise ValueError("T must be >= 1")
        if rho_node <= 0.0:
            raise ValueError("rho_node must be positive")
        self.T = T
        self.sigma = math.sqrt(1.0 / rho_node)
        self.noise_enabled = noise_enabled
        if noise_enabled and rng is None:
            raise ValueError("noise requires a generator")
        self._rng = rng
        n_reg = math.ceil(math.log2(T)) + 1
        self.alpha = [0] * n_reg
        self.alpha_hat = [0.0] * n_reg
        self.t = 0
        self._noise_buf: np.ndarray | None = None
        self._noise_pos = 0

    def _noise(self) -> float:
        if self._noise_buf is None or self._noise_pos >= len(self._noise_buf):
            self._noise_buf = self._rng.standard_normal(self._BUF)
            self._noise_pos = 0
        v = self._noise_buf[self._noise_pos]
        self._noise_pos += 1
        return float(v) * self.sigma

    def update(self, y: int) -> float:
        """Consume y in {-1, 0, 1}; return the released prefix sum."""
        if y not in (-1, 0, 1):
            raise ValueError("inputs must lie in {-1, 0, 1}")
        if self.t >= self.T:
            raise MechanismExhausted(f"mechanism sized for T={self.T} updates")
        t = self.t + 1
        self.t = t
        i = (t & -t).bit_length() - 1
        alpha = self.alpha
        s = y
        for j in range(i):
            s += alpha[j]
            alpha[j] = 0
            self.alpha_hat[j] = 0.0
        alpha[i] = s
        self.alpha_hat[i] = s + self._noise() if self.noise_enabled else float(s)
        released = 0.0
        tt = t
        hat = self.alpha_hat
        while tt:
            released += hat[(tt & -tt).bit_length() - 1]
            tt &= tt - 1
        return released

    def register_count(self) -> int:
        """Live registers (clean + perturbed), for the space accounting."""
        return len(self.alpha) + len(self.alpha_hat)
