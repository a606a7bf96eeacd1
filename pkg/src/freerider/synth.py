"""Synthetic benchmark: two planted episodes, a frequent noise event and filler."""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field

import numpy as np

from .core import Alphabet, EventSequence

LETTERS = tuple(string.ascii_lowercase + string.ascii_uppercase)
PATTERNS = (("a", "b", "c"), ("d", "e", "f", "g"))


@dataclass
class SynConfig:
    n: int = 10_000
    plant_abc: int = 300
    plant_defg: int = 300
    gap_mean: float = 2.0
    gap_std: float = 2.0
    noise_event: str = "X"
    p_noise: float = 0.3
    # chance that a timestamp receives one filler event
    filler_rate: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.plant_abc < 0 or self.plant_defg < 0:
            raise ValueError("plant counts must be non-negative")
        if not 0.0 <= self.p_noise <= 1.0:
            raise ValueError("p_noise must lie in [0, 1]")
        if not 0.0 <= self.filler_rate <= 1.0:
            raise ValueError("filler_rate must lie in [0, 1]")
        if self.gap_std <= 0:
            raise ValueError("gap_std must be positive")
        if self.noise_event not in LETTERS or self.noise_event in "abcdefg":
            raise ValueError(f"noise event {self.noise_event!r} must be a letter outside a..g")
        if self.plant_abc and self.n < 3:
            raise ValueError("n too small to plant a->b->c")
        if self.plant_defg and self.n < 4:
            raise ValueError("n too small to plant d->e->f->g")


@dataclass
class SynData:
    sequence: EventSequence
    truth: list[tuple[str, ...]]
    abc_starts: list[int] = field(default_factory=list)
    defg_times: list[tuple[int, ...]] = field(default_factory=list)


def ground_truth(patterns=PATTERNS) -> list[tuple[str, ...]]:
    """Distinct subepisodes of length >= 2 of each planted pattern, sorted."""
    found = set()
    for pat in patterns:
        for r in range(2, len(pat) + 1):
            found.update(itertools.combinations(pat, r))
    return sorted(found)


def _draw_gap(rng: np.random.Generator, cfg: SynConfig) -> int:
    while True:
        g = int(np.rint(rng.normal(cfg.gap_mean, cfg.gap_std)))
        if g >= 1:
            return g


def generate_syn(cfg: SynConfig | None = None) -> SynData:
    """Generate the SYN sequence and its 15-episode ground truth.

    Steps, all from a single RNG stream: plant ``a,b,c`` at consecutive
    timestamps; plant ``d,e,f,g`` with rounded normal gaps (redrawn below 1)
    at a start that keeps the copy inside the sequence; add the noise event
    independently per timestamp; add one uniform filler event per timestamp
    with probability ``filler_rate``.
    """
    cfg = cfg or SynConfig()
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n
    slots: list[set[str]] = [set() for _ in range(n)]

    abc_starts = []
    for _ in range(cfg.plant_abc):
        t = int(rng.integers(1, n - 1))  # 1..n-2
        abc_starts.append(t)
        for off, ev in enumerate("abc"):
            slots[t - 1 + off].add(ev)

    defg_times = []
    for _ in range(cfg.plant_defg):
        while True:
            gaps = [_draw_gap(rng, cfg) for _ in range(3)]
            span = sum(gaps)
            if span < n:
                break
        while True:
            t = int(rng.integers(1, n + 1))
            if t + span <= n:
                break
        times = (t, t + gaps[0], t + gaps[0] + gaps[1], t + span)
        defg_times.append(times)
        for ts, ev in zip(times, "defg"):
            slots[ts - 1].add(ev)

    noise = rng.random(n) < cfg.p_noise
    for t in np.flatnonzero(noise):
        slots[t].add(cfg.noise_event)

    fillers = [x for x in LETTERS if x not in "abcdefg" and x != cfg.noise_event]
    has_filler = rng.random(n) < cfg.filler_rate
    picks = rng.integers(0, len(fillers), size=n)
    for t in np.flatnonzero(has_filler):
        slots[t].add(fillers[picks[t]])

    seq = EventSequence.from_labels(slots, Alphabet(LETTERS))
    return SynData(seq, ground_truth(), abc_starts, defg_times)
