"""Run configuration and derived constants.

All algorithmic formulas use the base-2 logarithm; the zCDP -> (eps, delta)
conversions use the natural logarithm, following the usual DP convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ConfigError(ValueError):
    """Raised for configurations outside the supported envelope."""


def _log2(x: float) -> float:
    return math.log2(x)


@dataclass(frozen=True)
class RunConfig:
    """Inputs of a run: stream length, privacy/accuracy targets, occurrency promise.

    ``ob=True`` promises that no element appears (with either sign) more than
    ``W`` times; with ``ob=False`` the algorithm imposes a T^(2/3) cap itself
    via blocklisting and ``W`` is ignored.
    """

    T: int
    rho: float
    beta: float
    eta: float
    ob: bool
    W: int = 0
    universe_size: int = 2**16

    def __post_init__(self) -> None:
        if self.T < 8:
            raise ConfigError(f"T must be >= 8, got {self.T}")
        if not (0.0 < self.eta < 0.5):
            raise ConfigError(f"eta must lie in (0, 0.5), got {self.eta}")
        if not (0.0 < self.beta < 1.0):
            raise ConfigError(f"beta must lie in (0, 1), got {self.beta}")
        if self.rho <= 0.0:
            raise ConfigError(f"rho must be positive, got {self.rho}")
        if self.ob and self.W < 1:
            raise ConfigError("ob=True requires a positive occurrency bound W")
        if self.universe_size < 1:
            raise ConfigError("universe_size must be positive")
        # Exactness of the one-sparse test is load-bearing: reject configs
        # whose counters could not be tracked in 128 signed bits.
        if self.universe_size**2 * self.T >= 2**127:
            raise ConfigError("universe_size^2 * T must stay below 2**127")


@dataclass(frozen=True)
class DerivedParams:
    """All formula-derived constants for one run.

    ``rho_node`` is the per-node noise parameter of the tree mechanism after
    splitting the budget across the L substreams; the per-node variance is
    ``1 / rho_node``.
    """

    L: int
    lam: float
    lam_degree: int
    gamma: float
    tau: float
    k_capacity: int
    p_blocklist: float
    rho_node: float
    W_eff: int

    def __post_init__(self) -> None:
        if not self.tau < self.k_capacity:
            raise ConfigError("internal: tau must stay below the k capacity")


def threshold_base(cfg: RunConfig, params: DerivedParams) -> float:
    """max{gamma/eta, 32*lam/eta^2}: the selection threshold and tau/k base."""
    return max(params.gamma / cfg.eta, 32.0 * params.lam / cfg.eta**2)


def kset_failure_budget(cfg: RunConfig, params: DerivedParams) -> float:
    """Per-instance failure probability handed to each k-set dictionary."""
    return cfg.beta / (2.0 * cfg.T * params.L)


def derive_params(cfg: RunConfig) -> DerivedParams:
    """Evaluate every derived constant for ``cfg``.

    Deterministic and pure: equal configs give identical outputs.
    """
    T, beta, rho = cfg.T, cfg.beta, cfg.rho
    L = math.ceil(_log2(T))
    lam = 2.0 * _log2(40.0 * L / beta)
    # Independence degree of the level hash: even integer, at least 4.
    lam_degree = max(4, math.ceil(lam))
    if lam_degree % 2:
        lam_degree += 1

    log_t1 = _log2(T) + 1.0
    if cfg.ob:
        W_eff = cfg.W
        gamma = math.sqrt(4.0 * (W_eff + 1) * log_t1**3 * _log2(10.0 * log_t1 / beta) / rho)
    else:
        t23 = T ** (2.0 / 3.0)
        W_eff = math.ceil(t23)
        blocklist_term = 3.0 * T ** (1.0 / 3.0) * _log2(T ** (1.0 / 3.0) * math.ceil(_log2(T)) / beta)
        gamma = (
            math.sqrt(4.0 * (t23 + 1.0) * log_t1**3 * _log2(10.0 * log_t1 / beta) / rho)
            + blocklist_term
        )

    base = max(gamma / cfg.eta, 32.0 * lam / cfg.eta**2)
    slack = math.sqrt(W_eff * _log2(20.0 * T * math.ceil(_log2(T)) / beta)) * log_t1**1.5 / math.sqrt(rho)
    tau = 16.0 * base + 2.0 * math.sqrt(2.0) * slack
    k_capacity = math.ceil(16.0 * base + 4.0 * math.sqrt(2.0) * slack)

    if T ** (1.0 / 3.0) * L / beta < 1.0:
        raise ConfigError("beta too large: blocklist probability formula is negative")
    p_blocklist = min(1.0, _log2(T ** (1.0 / 3.0) * L / beta) / T ** (2.0 / 3.0))

    rho_node = (rho / L) / (2.0 * (W_eff + 1) * log_t1)

    return DerivedParams(
        L=L,
        lam=lam,
        lam_degree=lam_degree,
        gamma=gamma,
        tau=tau,
        k_capacity=k_capacity,
        p_blocklist=p_blocklist,
        rho_node=rho_node,
        W_eff=W_eff,
    )


def zcdp_to_dp(rho: float, delta: float) -> float:
    """(eps, delta)-DP guarantee of a rho-zCDP mechanism.

    Returns eps = rho + 2*sqrt(rho * ln(1/delta)).
    """
    if rho < 0.0:
        raise ValueError("rho must be nonnegative")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    return rho + 2.0 * math.sqrt(rho * math.log(1.0 / delta))


def approx_zcdp_to_dp(rho: float, delta_zcdp: float, epsilon: float) -> float:
    """delta of the (epsilon, delta)-DP guarantee of a delta'-approximate rho-zCDP mechanism.

    Returns delta_zcdp + (1 - delta_zcdp) * d where d multiplies
    exp(-(eps-rho)^2 / 4rho) by the smallest of four correction terms.
    """
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    if epsilon < rho:
        raise ValueError("epsilon must be at least rho")
    if not (0.0 <= delta_zcdp <= 1.0):
        raise ValueError("delta_zcdp must lie in [0, 1]")
    u = (epsilon - rho) / (2.0 * rho)
    correction = min(
        1.0,
        math.sqrt(math.pi * rho),
        1.0 / (1.0 + u),
        2.0 / (1.0 + u + math.sqrt((1.0 + u) + 4.0 / (math.pi * rho))),
    )
    d = math.exp(-((epsilon - rho) ** 2) / (4.0 * rho)) * correction
    return delta_zcdp + (1.0 - delta_zcdp) * d
