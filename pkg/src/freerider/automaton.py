"""Prefix automaton of a serial episode and minimal-occurrence scanning.

State ``j`` of the automaton stands for the ``j``-prefix of the episode; state
0 is the source and state ``k`` the sink. During a scan at most one tracked
instance lives in each non-source state (the one with the latest start), and
an instance advances at most one state per timestamp, so the events of an
occurrence sit at strictly increasing timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, NamedTuple

from .core import Episode, EventSequence


class Window(NamedTuple):
    start: int
    end: int

    @property
    def width(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class EpisodeAutomaton:
    episode: Episode

    def __post_init__(self):
        if len(self.episode) < 1:
            raise ValueError("automaton needs a non-empty episode")

    @property
    def sink(self) -> int:
        return len(self.episode)

    @property
    def source(self) -> int:
        return 0

    def transition(self, state: int, eset: Collection[int]) -> int:
        """Advance by one state if the next needed event is in ``eset``."""
        if not 0 <= state < self.sink:
            raise ValueError(f"no transition out of state {state}")
        return state + 1 if self.episode[state] in eset else state


def step_occupancy(episode: Episode, occupied: int, present) -> tuple[int, bool]:
    """Advance a set of tracked states over one timestamp.

    ``occupied`` is a bitmask over states ``1..k-1`` (the source is implicit and
    always present); ``present(e)`` says whether event ``e`` occurs at this
    timestamp. Returns the new bitmask and whether an instance hit the sink.
    """
    k = len(episode)
    moved_into = 0
    stayed = 0
    hit = False
    for j in range(k):
        if j and not occupied >> j & 1:
            continue
        if present(episode[j]):
            if j + 1 == k:
                hit = True
            else:
                moved_into |= 1 << (j + 1)
        elif j:
            stayed |= 1 << j
    # an advanced copy displaces a stale one in the same state
    return moved_into | (stayed & ~moved_into), hit


def minimal_occurrences(seq: EventSequence, alpha: Episode, delta: int | None = None) -> list[Window]:
    """All minimal occurrence windows of ``alpha`` with ``end - start < delta``.

    ``delta=None`` means no window bound. Windows come back sorted by end time.
    """
    if delta is not None and delta < 1:
        raise ValueError("delta must be >= 1")
    k = len(alpha)
    events = alpha.events
    starts: list[int | None] = [None] * k
    out: list[Window] = []
    for t, slot in enumerate(seq.slots, start=1):
        if delta is not None:
            horizon = t - delta
            for j in range(1, k):
                s = starts[j]
                if s is not None and s <= horizon:
                    starts[j] = None
        if not slot:
            continue
        # high states first so nothing advances twice in one timestamp
        for j in range(k - 1, -1, -1):
            if events[j] not in slot:
                continue
            if j:
                s = starts[j]
                if s is None:
                    continue
                starts[j] = None
            else:
                s = t
            if j + 1 == k:
                out.append(Window(s, t))
            else:
                starts[j + 1] = s
    return out


def support(seq: EventSequence, alpha: Episode, delta: int | None = None) -> int:
    return len(minimal_occurrences(seq, alpha, delta))
