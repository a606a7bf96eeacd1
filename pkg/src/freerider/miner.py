"""Depth-first mining of frequent serial episodes under minimal-occurrence support.

Every node of the search tree is an episode together with its minimal
occurrence windows. Children append one event; their windows are derived
from the parent's windows and the occurrence list of the appended event, so
no full rescans are needed.
"""

from __future__ import annotations

import bisect
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .automaton import Window
from .core import Alphabet, Episode, EventSequence

DEFAULT_MAX_LEN = 6


def extend_windows(windows: Sequence[Window], occ: Sequence[int], delta: int | None) -> list[Window]:
    """Minimal windows of ``alpha -> e`` from those of ``alpha`` and occurrences of ``e``.

    Each parent window ``[s, t]`` pairs with the first occurrence of ``e``
    strictly after ``t``. Parent windows have strictly increasing starts and
    ends, so candidate ends are non-decreasing and only equal ends can nest;
    for those the latest start wins.
    """
    out: list[Window] = []
    for s, t in windows:
        i = bisect.bisect_right(occ, t)
        if i == len(occ):
            break
        end = occ[i]
        if delta is not None and end - s >= delta:
            continue
        if out and out[-1].end == end:
            out[-1] = Window(s, end)
        else:
            out.append(Window(s, end))
    return out


def _mine_subtree(seq: EventSequence, seed: int, frequent: Sequence[int], occ: dict[int, list[int]],
                  min_sup: int, delta: int | None, max_len: int) -> list[tuple[tuple[int, ...], int]]:
    found: list[tuple[tuple[int, ...], int]] = []
    stack = [((seed,), [Window(t, t) for t in occ[seed]])]
    while stack:
        events, windows = stack.pop()
        if len(events) >= 2 and len(set(events)) > 1:
            found.append((events, len(windows)))
        if len(events) >= max_len:
            continue
        for e in frequent:
            child = extend_windows(windows, occ[e], delta)
            if len(child) >= min_sup:
                stack.append((events + (e,), child))
    return found


def _subtree_job(args):
    return _mine_subtree(*args)


def mine_frequent(seq: EventSequence, min_sup: int, delta: int | None = 12,
                  max_len: int = DEFAULT_MAX_LEN, workers: int = 1) -> list[tuple[Episode, int]]:
    """Frequent episodes with at least two distinct events, sorted by labels.

    Single events and episodes over one distinct event are not reported but
    are still extended.
    """
    if min_sup < 1:
        raise ValueError("min_sup must be >= 1")
    if max_len < 2:
        raise ValueError("max_len must be >= 2")
    supports = seq.supports()
    frequent = [e for e, c in enumerate(supports) if c >= min_sup]
    occ = {e: seq.occurrences(e) for e in frequent}
    jobs = [(seq, e, frequent, occ, min_sup, delta, max_len) for e in frequent]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_subtree_job, jobs))
    else:
        parts = [_subtree_job(job) for job in jobs]
    found = [(Episode(ev), sup) for part in parts for ev, sup in part]
    return sort_lexicographic(found, seq.alphabet)


def sort_lexicographic(items, alphabet: Alphabet):
    return sorted(items, key=lambda item: item[0].labels(alphabet))


def top_k_by_support(F: Sequence[tuple[Episode, int]], k: int, alphabet: Alphabet) -> list[tuple[Episode, int]]:
    """The ``k`` most frequent episodes; ties go to the lexicographically smaller."""
    if k < 0:
        raise ValueError("k must be non-negative")
    ranked = sorted(F, key=lambda item: (-item[1], item[0].labels(alphabet)))
    return ranked[:k]
