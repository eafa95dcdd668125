"""Ground truth, stream generators, and the statistical scoring utilities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seeding import as_seed_sequence
from .stream import BLANK, StreamValidityError, dele, element_of, ins, is_blank, sign_of


@dataclass
class GroundTruth:
    """Exact per-timestep facts about one stream."""

    F: list[int]  # distinct count after each step
    occ: dict[int, int]  # final occurrency per element
    max_occ: int
    prefix_occ: list[int]  # occurrency of the step's element over the strict prefix; 0 at blanks
    blanks: list[bool]

    def o_star(self, w_threshold: int) -> list[int]:
        """Reference blocklisting bits: 1 iff the step's element already
        appeared >= w_threshold times before this step."""
        return [
            0 if blank or pocc < w_threshold else 1
            for blank, pocc in zip(self.blanks, self.prefix_occ)
        ]


def ground_truth(stream) -> GroundTruth:
    """Single exact pass; rejects invalid (negative-count) streams."""
    counts: dict[int, int] = {}
    occ: dict[int, int] = {}
    F: list[int] = []
    prefix_occ: list[int] = []
    blanks: list[bool] = []
    live = 0
    for t, u in enumerate(stream, start=1):
        if is_blank(u):
            blanks.append(True)
            prefix_occ.append(0)
        else:
            e = element_of(u)
            blanks.append(False)
            prefix_occ.append(occ.get(e, 0))
            occ[e] = occ.get(e, 0) + 1
            prev = counts.get(e, 0)
            c = prev + sign_of(u)
            if c < 0:
                raise StreamValidityError(f"t={t}: deletion of absent element {e}")
            counts[e] = c
            live += (c > 0) - (prev > 0)
        F.append(live)
    return GroundTruth(
        F=F,
        occ=occ,
        max_occ=max(occ.values()) if occ else 0,
        prefix_occ=prefix_occ,
        blanks=blanks,
    )


@dataclass(frozen=True)
class ApproxVerdict:
    alpha: float
    beta_add: float
    holds: bool


def check_approx(v: float, F: int, alpha: float, beta_add: float) -> ApproxVerdict:
    """Two-sided (alpha, beta)-approximation test: F/alpha - beta <= v <= alpha*F + beta."""
    if alpha < 1.0:
        raise ValueError("alpha must be >= 1")
    if beta_add < 0.0:
        raise ValueError("beta_add must be >= 0")
    holds = (F / alpha - beta_add) <= v <= (alpha * F + beta_add)
    return ApproxVerdict(alpha, beta_add, holds)


@dataclass(frozen=True)
class BlocklistScore:
    false_negatives: int
    false_positives: int  # membership convention, counted per timestep
    fp_entries: int  # blocklist entries at steps whose reference bit is 0


def score_blocklist(
    o_algo: list[int],
    gt: GroundTruth,
    w_threshold: int,
    entry_bits: list[int] | None = None,
) -> BlocklistScore:
    """Compare the run's blocklisting bits against the reference bits.

    ``o_algo[t]`` is 1 iff the step's element was blocked at the start of
    step t. ``fp_entries`` counts, instead of per-step membership, the steps
    where an element was sampled into the blocklist while its reference bit
    was still 0; entries are what the false-positive space/accuracy bound
    controls, since membership recurs on every later appearance.
    """
    o_star = gt.o_star(w_threshold)
    if len(o_algo) != len(o_star):
        raise ValueError("bit sequences must have equal length")
    fn = sum(1 for o, s in zip(o_algo, o_star) if o == 0 and s == 1)
    # Blank steps carry no element and cannot be false positives.
    fp = sum(
        1 for o, s, blank in zip(o_algo, o_star, gt.blanks) if o == 1 and s == 0 and not blank
    )
    fp_entries = 0
    if entry_bits is not None:
        if len(entry_bits) != len(o_star):
            raise ValueError("bit sequences must have equal length")
        fp_entries = sum(1 for b, s in zip(entry_bits, o_star) if b == 1 and s == 0)
    return BlocklistScore(fn, fp, fp_entries)


def gen_hard_instance(T: int, W: int, seed) -> tuple[list[int], set[int]]:
    """Worst-case blocklisting stream over universe [T/2].

    A random set X of T/(2W) elements each alternates insertion/deletion W/2
    times in the first half (occurrency exactly W for X at halftime); the
    second half inserts every universe element once, ascending.
    """
    if W <= 0 or W % 2:
        raise ValueError("W must be a positive even integer")
    if T % (2 * W):
        raise ValueError("T must be divisible by 2W")
    n = T // 2
    m = T // (2 * W)
    rng = np.random.default_rng(as_seed_sequence(seed))
    members = sorted(int(v) for v in rng.choice(n, size=m, replace=False))
    stream: list[int] = []
    for u in members:
        for _ in range(W // 2):
            stream.append(ins(u))
            stream.append(dele(u))
    for u in range(n):
        stream.append(ins(u))
    return stream, set(members)


def gen_random_stream(
    T: int,
    universe: int,
    max_occ: int,
    insert_bias: float = 0.7,
    seed=None,
    blank_prob: float = 0.05,
) -> list[int]:
    """Random valid turnstile stream: counts never go negative and every
    element appears at most max_occ times. Reproducible from the seed."""
    if T < 0 or universe < 0 or max_occ < 0:
        raise ValueError("sizes must be nonnegative")
    if not (0.0 <= insert_bias <= 1.0):
        raise ValueError("insert_bias must lie in [0, 1]")
    rng = np.random.default_rng(as_seed_sequence(seed))
    budget: dict[int, int] = {}
    live: list[int] = []  # elements with positive count, duplicates avoided
    live_pos: dict[int, int] = {}
    counts: dict[int, int] = {}
    stream: list[int] = []

    def _drop_live(e: int) -> None:
        i = live_pos.pop(e)
        last = live.pop()
        if last != e:
            live[i] = last
            live_pos[last] = i

    for _ in range(T):
        if universe == 0 or max_occ == 0 or rng.random() < blank_prob:
            stream.append(BLANK)
            continue
        want_delete = live and rng.random() > insert_bias
        u = BLANK
        if want_delete:
            for _ in range(8):
                e = live[int(rng.integers(len(live)))]
                if budget.get(e, max_occ) > 0:
                    u = dele(e)
                    break
        if u == BLANK:
            for _ in range(32):
                e = int(rng.integers(universe))
                if budget.get(e, max_occ) > 0:
                    u = ins(e)
                    break
        if u == BLANK:
            stream.append(BLANK)
            continue
        e = element_of(u)
        budget[e] = budget.get(e, max_occ) - 1
        c = counts.get(e, 0) + sign_of(u)
        counts[e] = c
        if c == 1 and sign_of(u) == 1 and e not in live_pos:
            live_pos[e] = len(live)
            live.append(e)
        elif c == 0:
            _drop_live(e)
        stream.append(u)
    return stream


def neighbor_stream(stream: list[int], seed) -> tuple[list[int], int]:
    """Neighboring stream: one uniformly chosen non-blank update replaced by
    a blank. Returns (neighbor, replaced index); the input if all blank."""
    rng = np.random.default_rng(as_seed_sequence(seed))
    idx = [i for i, u in enumerate(stream) if not is_blank(u)]
    if not idx:
        return list(stream), -1
    i = idx[int(rng.integers(len(idx)))]
    out = list(stream)
    out[i] = BLANK
    return out, i


def _distinct_trajectory(stream) -> list[int]:
    """Exact distinct counts, tolerant of negative running counts (present
    means count > 0), so neighbors of valid streams are accepted."""
    counts: dict[int, int] = {}
    live = 0
    out = [0]
    for u in stream:
        if not is_blank(u):
            e = element_of(u)
            prev = counts.get(e, 0)
            c = prev + sign_of(u)
            counts[e] = c
            live += (c > 0) - (prev > 0)
        out.append(live)
    return out


def sensitivity_G(stream, T: int | None = None) -> list[np.ndarray]:
    """Dyadic-difference vectors of the exact distinct-count trajectory.

    Level h holds s(j*2^h) - s((j-1)*2^h) for j = 1..T/2^h, h = 0..log2(T).
    The stream is padded with blanks to the next power of two.
    """
    stream = list(stream)
    if T is None:
        T = len(stream)
    if T < len(stream):
        raise ValueError("T smaller than the stream")
    T_pad = 1 << max(0, (T - 1)).bit_length()
    stream = stream + [BLANK] * (T_pad - len(stream))
    s = np.asarray(_distinct_trajectory(stream), dtype=np.int64)
    levels = []
    h = 0
    while (1 << h) <= T_pad:
        step = 1 << h
        pts = s[::step]
        levels.append(np.diff(pts).astype(np.int64))
        h += 1
    return levels


def g_distance_sq(ga: list[np.ndarray], gb: list[np.ndarray]) -> int:
    """Squared l2 distance between two dyadic-difference representations."""
    if len(ga) != len(gb):
        raise ValueError("representations have different depths")
    total = 0
    for a, b in zip(ga, gb):
        d = a - b
        total += int(np.dot(d, d))
    return total


def binomial_margin(n: int, p: float, z: float = 3.0) -> float:
    """z standard deviations of a Binomial(n, p) count."""
    return z * math.sqrt(n * p * (1.0 - p))
