"""Dual-partition null models, expected support and Lift screening.

For an episode with distinct events ``Omega``, a dual partition picks a
proper subset of *informative* events. The null model keeps informative
events exactly where they are in the data and re-draws every other
(*random*) event independently at each timestamp with its empirical
frequency. The expected minimal-occurrence support under that model is
computed exactly by pushing a probability distribution over automaton
state sets through the sequence; the largest expectation over all
partitions is the episode's expected support, and observed / expected is
its Lift.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .automaton import minimal_occurrences, step_occupancy
from .core import Alphabet, Episode, EventSequence

log = logging.getLogger(__name__)

FULL = "full"
EARLY_EXIT = "early-exit"
MODES = (FULL, EARLY_EXIT)


@dataclass(frozen=True)
class DualPartition:
    """Split of an episode's distinct events into informative and random ones.

    ``universe`` is the episode alphabet in first-appearance order;
    ``mask`` has bit ``i`` set when ``universe[i]`` is informative.
    """

    universe: tuple[int, ...]
    mask: int
    allow_full: bool = field(default=False, compare=False)

    def __post_init__(self):
        full = (1 << len(self.universe)) - 1
        if not 0 <= self.mask <= full:
            raise ValueError(f"mask {self.mask} out of range")
        if self.mask == full and not self.allow_full:
            raise ValueError("informative set must be a proper subset of the episode alphabet")

    @classmethod
    def from_informative(cls, alpha: Episode, informative: Iterable[int], allow_full: bool = False) -> "DualPartition":
        universe = alpha.alphabet_of
        chosen = set(informative)
        unknown = chosen - set(universe)
        if unknown:
            raise ValueError(f"events {sorted(unknown)} are not in the episode")
        mask = sum(1 << i for i, e in enumerate(universe) if e in chosen)
        return cls(universe, mask, allow_full)

    @property
    def informative(self) -> frozenset[int]:
        return frozenset(e for i, e in enumerate(self.universe) if self.mask >> i & 1)

    @property
    def random(self) -> frozenset[int]:
        return frozenset(e for i, e in enumerate(self.universe) if not self.mask >> i & 1)

    @property
    def n_random(self) -> int:
        return len(self.universe) - bin(self.mask).count("1")

    def labels(self, alphabet: Alphabet) -> list[str]:
        return [alphabet.label(e) for e in self.universe if e in self.informative]


def enumerate_partitions(alpha: Episode) -> list[DualPartition]:
    """All proper informative subsets, fewest random events first, then by mask."""
    universe = alpha.alphabet_of
    if not universe:
        raise ValueError("episode has no events")
    full = (1 << len(universe)) - 1
    masks = sorted(range(full), key=lambda m: (len(universe) - bin(m).count("1"), m))
    return [DualPartition(universe, m) for m in masks]


class GenerativeModel:
    """Null model fixing informative events and re-drawing random ones."""

    def __init__(self, partition: DualPartition, sequence: EventSequence):
        self.partition = partition
        self.sequence = sequence
        self.probs = {e: sequence.p_ind(e) for e in sorted(partition.random)}

    @property
    def universe(self) -> tuple[int, ...]:
        return self.partition.universe

    def event_gen_prob(self, e: int, t: int) -> float:
        if e not in self.universe:
            raise ValueError(f"event {e} is not in the episode alphabet")
        if e in self.probs:
            return self.probs[e]
        return 1.0 if e in self.sequence.at(t) else 0.0

    def eventset_gen_prob(self, eset: Iterable[int], t: int) -> float:
        eset = set(eset)
        if not eset <= set(self.universe):
            raise ValueError("event set has events outside the episode alphabet")
        p = 1.0
        for e in self.universe:
            q = self.event_gen_prob(e, t)
            p *= q if e in eset else 1.0 - q
        return p

    def random_sequence_prob(self, candidate: EventSequence) -> float:
        if candidate.length != self.sequence.length:
            raise ValueError("candidate length differs from the original sequence")
        universe = set(self.universe)
        p = 1.0
        for t in range(1, candidate.length + 1):
            p *= self.eventset_gen_prob(candidate.at(t) & universe, t)
            if p == 0.0:
                break
        return p

    def sample(self, rng: np.random.Generator) -> EventSequence:
        """One draw from the model, restricted to the episode alphabet."""
        informative = self.partition.informative
        rand = list(self.probs)
        p = np.array([self.probs[e] for e in rand])
        draws = rng.random((self.sequence.length, len(rand))) < p
        slots = []
        for t, slot in enumerate(self.sequence.slots):
            extra = {rand[i] for i in np.flatnonzero(draws[t])}
            slots.append(frozenset(slot & informative) | frozenset(extra))
        return EventSequence(tuple(slots), self.sequence.alphabet)


# --------------------------------------------------------------------------
# exact expectation
# --------------------------------------------------------------------------

def occupancy_states(alpha: Episode, index: int) -> frozenset[int]:
    """Automaton states (source included) encoded by a distribution index."""
    mask = index << 1
    return frozenset([0] + [j for j in range(1, len(alpha)) if mask >> j & 1])


def _transition_tables(alpha: Episode, partition: DualPartition, probs: dict[int, float]):
    """Per informative-presence pattern: state-set transition matrix and hit vector.

    Matrices are indexed by occupancy bitmask over states ``1..k-1`` shifted
    down by one, so there are ``2**(k-1)`` possible state sets.
    """
    k = len(alpha)
    universe = partition.universe
    size = 1 << (k - 1)
    inf_bits = [i for i in range(len(universe)) if partition.mask >> i & 1]
    rnd_bits = [i for i in range(len(universe)) if not partition.mask >> i & 1]
    pos = {e: i for i, e in enumerate(universe)}

    combos = []
    for present in itertools.product((0, 1), repeat=len(rnd_bits)):
        p = 1.0
        rmask = 0
        for bit, on in zip(rnd_bits, present):
            q = probs[universe[bit]]
            p *= q if on else 1.0 - q
            rmask |= on << bit
        if p > 0.0:
            combos.append((rmask, p))

    tables = {}
    for inf_present in itertools.product((0, 1), repeat=len(inf_bits)):
        imask = sum(on << bit for bit, on in zip(inf_bits, inf_present))
        M = np.zeros((size, size))
        hit = np.zeros(size)
        for idx in range(size):
            occ = idx << 1
            for rmask, p in combos:
                full = imask | rmask
                nxt, done = step_occupancy(alpha, occ, lambda e: full >> pos[e] & 1)
                M[idx, nxt >> 1] += p
                if done:
                    hit[idx] += p
        tables[imask] = (M, hit)
    return tables


def _informative_masks(seq: EventSequence, partition: DualPartition) -> list[int]:
    bits = [(e, 1 << i) for i, e in enumerate(partition.universe) if partition.mask >> i & 1]
    return [sum(b for e, b in bits if e in slot) for slot in seq.slots]


def expected_support_exact(alpha: Episode, model: GenerativeModel,
                           on_step: Callable[[int, np.ndarray, float], None] | None = None) -> float:
    """Exact expected (unbounded-window) minimal-occurrence support under ``model``.

    ``on_step(t, distribution, accumulated)`` is called after each timestamp;
    ``distribution[i]`` is the mass of the state set ``occupancy_states(alpha, i)``.
    """
    partition = model.partition
    if set(alpha.alphabet_of) != set(partition.universe):
        raise ValueError("partition does not belong to this episode")
    tables = _transition_tables(alpha, partition, model.probs)
    dist = np.zeros(1 << (len(alpha) - 1))
    dist[0] = 1.0
    gains: list[float] = []
    for t, imask in enumerate(_informative_masks(model.sequence, partition), start=1):
        M, hit = tables[imask]
        gains.append(float(dist @ hit))
        dist = dist @ M
        if on_step is not None:
            on_step(t, dist, math.fsum(gains))
    return math.fsum(gains)


def state_set_distribution(alpha: Episode, dist: np.ndarray) -> dict[frozenset[int], float]:
    return {occupancy_states(alpha, i): float(p) for i, p in enumerate(dist) if p > 0.0}


# --------------------------------------------------------------------------
# Monte-Carlo estimate
# --------------------------------------------------------------------------

def expected_support_mc(alpha: Episode, model: GenerativeModel, samples: int, seed: int | None = None,
                        delta: int | None = None, batch: int = 4096) -> tuple[float, float]:
    """Sample mean and standard error of the support over model draws.

    With ``delta`` the support of each draw uses windows narrower than
    ``delta``; without it windows are unbounded.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    counts = np.concatenate([
        _mc_batch(alpha, model, min(batch, samples - done), rng, delta)
        for done in range(0, samples, batch)
    ])
    mean = float(counts.mean())
    se = float(counts.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return mean, se


def _mc_batch(alpha: Episode, model: GenerativeModel, B: int, rng: np.random.Generator,
              delta: int | None) -> np.ndarray:
    # vectorised version of automaton.minimal_occurrences over B draws
    k = len(alpha)
    rand = list(model.probs)
    rpos = {e: i for i, e in enumerate(rand)}
    p = np.array([model.probs[e] for e in rand])
    starts = np.full((k, B), -1, dtype=np.int64)
    counts = np.zeros(B, dtype=np.int64)
    informative = model.partition.informative
    for t, slot in enumerate(model.sequence.slots, start=1):
        draws = rng.random((B, len(rand))) < p if rand else None
        if delta is not None and k > 1:
            tail = starts[1:]
            tail[(tail >= 0) & (tail <= t - delta)] = -1
        for j in range(k - 1, -1, -1):
            e = alpha[j]
            if e in rpos:
                present = draws[:, rpos[e]]
            elif e in informative and e in slot:
                present = np.ones(B, dtype=bool)
            else:
                continue
            if j:
                adv = present & (starts[j] >= 0)
                s = starts[j]
            else:
                adv = present
                s = t
            if j + 1 == k:
                counts += adv
            else:
                starts[j + 1] = np.where(adv, s, starts[j + 1])
            if j:
                starts[j] = np.where(adv, -1, starts[j])
    return counts


# --------------------------------------------------------------------------
# screening
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionResult:
    partition: DualPartition
    expectation: float


@dataclass
class ScreeningRecord:
    episode: Episode
    support: int
    exp_sup: float
    lift: float
    kept: bool
    best_partition: DualPartition | None
    witness_partition: DualPartition | None
    fully_enumerated: bool
    results: list[PartitionResult] = field(default_factory=list, repr=False)

    def to_json(self, alphabet: Alphabet) -> dict:
        return {
            "episode": self.episode.format(alphabet),
            "support": self.support,
            "exp_sup": self.exp_sup,
            "lift": self.lift,
            "kept": self.kept,
            "best_partition": None if self.best_partition is None
            else {"informative": self.best_partition.labels(alphabet)},
            "witness_partition": None if self.witness_partition is None
            else {"informative": self.witness_partition.labels(alphabet)},
            "fully_enumerated": self.fully_enumerated,
        }


def lift_of(support: int, exp_sup: float) -> float:
    if support == 0:
        return 0.0
    if exp_sup == 0.0:
        return math.inf
    return support / exp_sup


def partition_expectation(alpha: Episode, seq: EventSequence, partition: DualPartition) -> PartitionResult:
    return PartitionResult(partition, expected_support_exact(alpha, GenerativeModel(partition, seq)))


def exp_sup(alpha: Episode, seq: EventSequence, observed_support: int | None = None,
            min_lift: float = 1.0, mode: str = FULL, delta: int | None = None,
            partitions: Sequence[DualPartition] | None = None,
            results: Sequence[PartitionResult] | None = None) -> ScreeningRecord:
    """Expected support, Lift and verdict for one episode.

    ``observed_support`` defaults to the ``delta``-bounded support in ``seq``.
    In early-exit mode the loop stops at the first partition whose
    expectation alone already pushes the Lift below ``min_lift``.
    Precomputed ``results`` (all partitions, any order) skip the loop.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if min_lift <= 0:
        raise ValueError("min_lift must be positive")
    sp = len(minimal_occurrences(seq, alpha, delta)) if observed_support is None else observed_support
    if partitions is None:
        partitions = enumerate_partitions(alpha)

    done: list[PartitionResult] = []
    witness = None
    if results is not None:
        done = list(results)
    else:
        for part in partitions:
            res = partition_expectation(alpha, seq, part)
            done.append(res)
            if mode == EARLY_EXIT and lift_of(sp, res.expectation) < min_lift:
                witness = part
                break

    best = max(done, key=lambda r: r.expectation) if done else None
    top = best.expectation if best else 0.0
    lift = lift_of(sp, top)
    return ScreeningRecord(
        episode=alpha,
        support=sp,
        exp_sup=top,
        lift=lift,
        kept=lift >= min_lift,
        best_partition=best.partition if best else None,
        witness_partition=witness,
        fully_enumerated=witness is None,
        results=done,
    )


def _screen_job(args):
    alpha, support, seq, min_lift, mode, partitions = args
    return exp_sup(alpha, seq, support, min_lift=min_lift, mode=mode, partitions=partitions)


def _partition_job(args):
    alpha, seq, part = args
    return partition_expectation(alpha, seq, part)


def rank_records(records: Iterable[ScreeningRecord], alphabet: Alphabet) -> list[ScreeningRecord]:
    """Kept records by Lift, support (both descending) then labels; screened ones after, by labels."""
    records = list(records)
    kept = sorted((r for r in records if r.kept),
                  key=lambda r: (-r.lift, -r.support, r.episode.labels(alphabet)))
    dropped = sorted((r for r in records if not r.kept), key=lambda r: r.episode.labels(alphabet))
    return kept + dropped


def screen(F: Sequence[tuple[Episode, int | None]], seq: EventSequence, min_lift: float = 1.0,
           workers: int = 1, mode: str = FULL, baseline: str | None = None,
           parallel: str = "episodes", delta: int | None = None) -> list[ScreeningRecord]:
    """Screen a candidate set and rank what survives.

    ``baseline="ind"`` restricts every episode to the all-random partition.
    ``parallel="partitions"`` farms out single partitions instead of whole
    episodes and always enumerates every partition.
    """
    if min_lift <= 0:
        raise ValueError("min_lift must be positive")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if baseline not in (None, "ind"):
        raise ValueError(f"unknown baseline {baseline!r}")
    if parallel not in ("episodes", "partitions"):
        raise ValueError(f"unknown parallel strategy {parallel!r}")
    m = len(seq.alphabet)
    items = []
    for alpha, sup in F:
        if not alpha.events or any(not 0 <= e < m for e in alpha):
            raise ValueError(f"episode {alpha.events} references events outside the sequence alphabet")
        if sup is None:
            sup = len(minimal_occurrences(seq, alpha, delta))
        parts = [DualPartition(alpha.alphabet_of, 0)] if baseline == "ind" else enumerate_partitions(alpha)
        items.append((alpha, sup, parts))
    if not items:
        return []

    if parallel == "partitions":
        jobs = [(alpha, seq, p) for alpha, _, parts in items for p in parts]
        results = _run(_partition_job, jobs, workers)
        records, i = [], 0
        for alpha, sup, parts in items:
            chunk = results[i:i + len(parts)]
            i += len(parts)
            records.append(exp_sup(alpha, seq, sup, min_lift=min_lift, results=chunk))
    else:
        jobs = [(alpha, sup, seq, min_lift, mode, parts) for alpha, sup, parts in items]
        records = _run(_screen_job, jobs, workers)
    return rank_records(records, seq.alphabet)


def _run(fn, jobs, workers: int):
    if workers > 1 and len(jobs) > 1:
        chunksize = max(1, len(jobs) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs, chunksize=chunksize))
    return [fn(job) for job in jobs]
