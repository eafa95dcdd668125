"""Per-substream counting pipelines.

Both pipelines release, per timestep, either a noisy distinct count or the
TOO-HIGH sentinel (encoded as None). The sketch-backed pipeline tracks the
substream through a k-set dictionary and feeds count differences into the
tree mechanism, catching up after recovery gaps; the dictionary pipeline
keeps exact per-element counts and is the space-unbounded oracle used for
coupling and accuracy checks.

A report is ``None`` for TOO-HIGH or a float (the latest mechanism release).
"""

from __future__ import annotations

import numpy as np

from .kset import KSet
from .mechanism import BinaryMechanism
from .params import DerivedParams, RunConfig, kset_failure_budget
from .seeding import as_seed_sequence
from .stream import element_of, is_blank, sign_of

Report = float | None

TOO_HIGH: Report = None


class CountingKset:
    """Sketch-backed pipeline: k-set dictionary + tree mechanism."""

    def __init__(
        self,
        cfg: RunConfig,
        params: DerivedParams,
        kset_rng: np.random.Generator,
        noise_rng: np.random.Generator | None,
        noise_enabled: bool = True,
        k_override: int | None = None,
    ):
        k = params.k_capacity if k_override is None else k_override
        self.kset = KSet(k, kset_failure_budget(cfg, params), rng=kset_rng)
        self.bm = BinaryMechanism(cfg.T, params.rho_node, noise_rng, noise_enabled)
        self.tau = params.tau
        self.F_last = 0
        self.t_last = 0
        self.s_hat = 0.0
        self.t = 0

    def update(self, u: int, blocklist: set[int] | frozenset[int]) -> Report:
        self.t += 1
        if not is_blank(u):
            e = element_of(u)
            if e not in blocklist:
                self.kset.update(e, sign_of(u))
        size = self.kset.recovered_size()
        if size is None:
            return TOO_HIGH
        t_diff = self.t - self.t_last
        diff = size - self.F_last
        if abs(diff) > t_diff:
            raise AssertionError("recovered count moved faster than the stream")
        step = 1 if diff > 0 else -1
        for _ in range(abs(diff)):
            self.s_hat = self.bm.update(step)
        for _ in range(t_diff - abs(diff)):
            self.s_hat = self.bm.update(0)
        self.F_last = size
        self.t_last = self.t
        if self.s_hat > self.tau:
            return TOO_HIGH
        return self.s_hat


class CountingDict:
    """Exact-count pipeline: per-element counts + tree mechanism."""

    def __init__(
        self,
        cfg: RunConfig,
        params: DerivedParams,
        noise_rng: np.random.Generator | None,
        noise_enabled: bool = True,
    ):
        self.counts: dict[int, int] = {}
        self.live = 0
        self.bm = BinaryMechanism(cfg.T, params.rho_node, noise_rng, noise_enabled)
        self.tau = params.tau
        self.F_last = 0
        self.s_hat = 0.0

    def update(self, u: int, blocklist: set[int] | frozenset[int]) -> Report:
        if not is_blank(u) and element_of(u) not in blocklist:
            e = element_of(u)
            prev = self.counts.get(e, 0)
            c = prev + sign_of(u)
            if c:
                self.counts[e] = c
            else:
                del self.counts[e]
            self.live += (c > 0) - (prev > 0)
            self.s_hat = self.bm.update(self.live - self.F_last)
            self.F_last = self.live
        else:
            self.s_hat = self.bm.update(0)
        if self.s_hat > self.tau:
            return TOO_HIGH
        return self.s_hat


def coupling_run(
    stream,
    cfg: RunConfig,
    params: DerivedParams,
    seed,
    noise_enabled: bool = True,
    k_override: int | None = None,
    blocklist: frozenset[int] = frozenset(),
):
    """Run both pipelines on one stream under shared randomness.

    The two mechanisms are seeded from the same entropy, so they consume
    byte-identical noise streams; the k-set hash seeds affect only the
    sketch-backed side. Returns (reports_kset, reports_dict, agree).
    """
    ss = as_seed_sequence(seed)
    kset_ss, noise_ss = ss.spawn(2)
    ck = CountingKset(
        cfg,
        params,
        kset_rng=np.random.default_rng(kset_ss),
        noise_rng=np.random.default_rng(noise_ss) if noise_enabled else None,
        noise_enabled=noise_enabled,
        k_override=k_override,
    )
    cd = CountingDict(
        cfg,
        params,
        noise_rng=np.random.default_rng(noise_ss) if noise_enabled else None,
        noise_enabled=noise_enabled,
    )
    reports_kset: list[Report] = []
    reports_dict: list[Report] = []
    for u in stream:
        reports_kset.append(ck.update(u, blocklist))
        reports_dict.append(cd.update(u, blocklist))
    return reports_kset, reports_dict, reports_kset == reports_dict
