"""Top-level distinct-count estimator.

Each non-blank update is routed by the geometric level hash to exactly one
of L subsampled pipelines (the others receive a blank that step), so level i
sees each element with probability 2^-i. The released estimate at step t is
v * 2^i for the deepest level i whose report is a numeric v at or above the
output threshold; if no level qualifies the estimate is 0.

Without an occurrency promise, every appearance of a not-yet-blocked element
that matched a level is sampled into a grow-only blocklist with probability
p; pipelines ignore blocked elements from the following step on (membership
is evaluated against the start-of-step snapshot, which the update order
realizes for free since sampling happens after the pipelines ran).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .counting import CountingDict, CountingKset, Report
from .hashing import GeometricLevelHash
from .params import DerivedParams, RunConfig, derive_params, threshold_base
from .seeding import as_seed_sequence
from .stream import StreamValidityError, element_of, is_blank, sign_of


class OccurrencyError(ValueError):
    """The stream violated the promised occurrency bound (ob=True)."""


@dataclass(frozen=True)
class EstimateRecord:
    t: int
    estimate: float
    chosen_level: int | None
    reports: tuple[Report, ...]

    @property
    def n_too_high(self) -> int:
        return sum(1 for r in self.reports if r is None)


def select_output(reports: tuple[Report, ...], threshold: float) -> tuple[float, int | None]:
    """Deepest qualifying level and its rescaled value; (0.0, None) if none."""
    for i in range(len(reports), 0, -1):
        r = reports[i - 1]
        if r is not None and r >= threshold:
            return r * float(2**i), i
    return 0.0, None


class CountDistinct:
    """Mutable run state; drive it with step(), once per timestep."""

    def __init__(
        self,
        cfg: RunConfig,
        seed,
        mode: str = "kset",
        noise_enabled: bool = True,
        k_override: int | None = None,
        on_occ_violation: str = "error",
    ):
        if mode not in ("kset", "dict"):
            raise ValueError(f"unknown mode {mode!r}")
        if on_occ_violation not in ("error", "warn"):
            raise ValueError("on_occ_violation must be 'error' or 'warn'")
        self.cfg = cfg
        self.params = derive_params(cfg)
        self.mode = mode
        self.threshold = threshold_base(cfg, self.params)
        L = self.params.L
        root = as_seed_sequence(seed)
        g_ss, bl_ss, *level_ss = root.spawn(2 + L)
        self.g = GeometricLevelHash(self.params.lam_degree, L, np.random.default_rng(g_ss))
        self._bl_rng = np.random.default_rng(bl_ss)
        self.pipelines: list[CountingKset | CountingDict] = []
        for ss in level_ss:
            kset_ss, noise_ss = ss.spawn(2)
            noise_rng = np.random.default_rng(noise_ss) if noise_enabled else None
            if mode == "kset":
                self.pipelines.append(
                    CountingKset(
                        cfg,
                        self.params,
                        kset_rng=np.random.default_rng(kset_ss),
                        noise_rng=noise_rng,
                        noise_enabled=noise_enabled,
                        k_override=k_override,
                    )
                )
            else:
                self.pipelines.append(
                    CountingDict(cfg, self.params, noise_rng=noise_rng, noise_enabled=noise_enabled)
                )
        self.blocklist: set[int] = set()
        self.t = 0
        self._counts: dict[int, int] = {}
        self._occ: dict[int, int] = {}
        self._on_occ_violation = on_occ_violation
        self._level_cache: dict[int, int | None] = {}
        # Per-step traces consumed by the blocklist scoring and the CLI.
        self.blocked_bits: list[int] = []
        self.entry_bits: list[int] = []
        self.blocklist_sizes: list[int] = []

    def _validate(self, u: int) -> int:
        e = element_of(u)
        if not (0 <= e < self.cfg.universe_size):
            raise StreamValidityError(f"element {e} outside universe of size {self.cfg.universe_size}")
        c = self._counts.get(e, 0) + sign_of(u)
        if c < 0:
            raise StreamValidityError(f"t={self.t}: deletion of absent element {e}")
        self._counts[e] = c
        occ = self._occ.get(e, 0) + 1
        self._occ[e] = occ
        if self.cfg.ob and occ > self.cfg.W:
            msg = f"t={self.t}: element {e} exceeded the promised occurrency bound {self.cfg.W}"
            if self._on_occ_violation == "error":
                raise OccurrencyError(msg)
            warnings.warn(msg, stacklevel=3)
        return e

    def step(self, u: int) -> EstimateRecord:
        if self.t >= self.cfg.T:
            raise ValueError(f"stream longer than T={self.cfg.T}")
        self.t += 1
        blank = is_blank(u)
        level = None
        e = None
        if not blank:
            e = self._validate(u)
            level = self._level_cache.get(e, -1)
            if level == -1:
                level = self.g.level_of(e)
                self._level_cache[e] = level
        blocked = (e in self.blocklist) if e is not None else False
        reports = tuple(
            pipe.update(u if level == i else 0, self.blocklist)
            for i, pipe in enumerate(self.pipelines, start=1)
        )
        entered = False
        if level is not None and not blocked and not self.cfg.ob:
            if self._bl_rng.random() < self.params.p_blocklist:
                self.blocklist.add(e)
                entered = True
        self.blocked_bits.append(int(blocked))
        self.entry_bits.append(int(entered))
        self.blocklist_sizes.append(len(self.blocklist))
        estimate, chosen = select_output(reports, self.threshold)
        return EstimateRecord(self.t, estimate, chosen, reports)

    def space_report(self) -> dict[str, int]:
        cells = sum(p.kset.size_in_cells() for p in self.pipelines if isinstance(p, CountingKset))
        registers = sum(p.bm.register_count() for p in self.pipelines)
        return {
            "kset_cells": cells,
            "bm_registers": registers,
            "blocklist_size": len(self.blocklist),
        }


@dataclass
class RunResult:
    cfg: RunConfig
    params: DerivedParams
    records: list[EstimateRecord]
    blocked_bits: list[int]
    entry_bits: list[int]
    blocklist_sizes: list[int]
    space: dict[str, int]
    blocklist: set[int] = field(default_factory=set)

    def estimates(self) -> list[float]:
        return [r.estimate for r in self.records]


def run(
    stream,
    cfg: RunConfig,
    seed,
    mode: str = "kset",
    noise_enabled: bool = True,
    k_override: int | None = None,
    on_occ_violation: str = "error",
) -> RunResult:
    """Process a full stream of exactly T updates; deterministic given seed."""
    stream = list(stream)
    if len(stream) != cfg.T:
        raise ValueError(f"stream has {len(stream)} updates, expected T={cfg.T}")
    cd = CountDistinct(
        cfg,
        seed,
        mode=mode,
        noise_enabled=noise_enabled,
        k_override=k_override,
        on_occ_violation=on_occ_violation,
    )
    records = [cd.step(u) for u in stream]
    return RunResult(
        cfg=cfg,
        params=cd.params,
        records=records,
        blocked_bits=cd.blocked_bits,
        entry_bits=cd.entry_bits,
        blocklist_sizes=cd.blocklist_sizes,
        space=cd.space_report(),
        blocklist=set(cd.blocklist),
    )
