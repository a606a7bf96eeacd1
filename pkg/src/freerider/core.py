"""Event sequences, serial episodes and their text formats.

A sequence covers the consecutive timestamps ``1..n``; each timestamp holds a
(possibly empty) set of events. Labels are interned into dense integer ids in
first-seen order and every algorithm downstream works on those ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

ARROW = "->"
_FORBIDDEN = ("\t", ",", "\n", "\r", "-", ">")


class SequenceFormatError(ValueError):
    """Raised for a malformed sequence or episode document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def check_label(label: str) -> str:
    if not label:
        raise ValueError("empty event label")
    for ch in _FORBIDDEN:
        if ch in label:
            raise ValueError(f"event label {label!r} contains forbidden character {ch!r}")
    return label


class Alphabet:
    """Ordered set of event labels with dense ids ``0..m-1``."""

    def __init__(self, symbols: Iterable[str] = ()):
        self._symbols: list[str] = []
        self._ids: dict[str, int] = {}
        for s in symbols:
            self.intern(s)

    def intern(self, label: str) -> int:
        idx = self._ids.get(label)
        if idx is None:
            check_label(label)
            idx = len(self._symbols)
            self._symbols.append(label)
            self._ids[label] = idx
        return idx

    def id(self, label: str) -> int:
        try:
            return self._ids[label]
        except KeyError:
            raise KeyError(f"unknown event label {label!r}") from None

    def label(self, idx: int) -> str:
        if not 0 <= idx < len(self._symbols):
            raise KeyError(f"unknown event id {idx}")
        return self._symbols[idx]

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(self._symbols)

    def __len__(self) -> int:
        return len(self._symbols)

    def __contains__(self, label: object) -> bool:
        return label in self._ids

    def __iter__(self) -> Iterator[str]:
        return iter(self._symbols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self._symbols == other._symbols

    def __repr__(self) -> str:
        return f"Alphabet({self._symbols!r})"


@dataclass(frozen=True)
class EventSequence:
    """Event sets over timestamps ``1..length``.

    ``slots[t - 1]`` is the set of event ids at timestamp ``t``.
    """

    slots: tuple[frozenset[int], ...]
    alphabet: Alphabet = field(compare=False)

    def __post_init__(self):
        if len(self.slots) < 1:
            raise ValueError("sequence length must be positive")
        m = len(self.alphabet)
        for t, slot in enumerate(self.slots, start=1):
            for e in slot:
                if not 0 <= e < m:
                    raise ValueError(f"timestamp {t}: event id {e} not in alphabet")

    @classmethod
    def from_labels(cls, slots: Sequence[Iterable[str]], alphabet: Alphabet | None = None) -> "EventSequence":
        """Build a sequence from per-timestamp label collections, interning labels."""
        alphabet = Alphabet() if alphabet is None else alphabet
        interned = tuple(frozenset(alphabet.intern(lab) for lab in slot) for slot in slots)
        return cls(interned, alphabet)

    @property
    def length(self) -> int:
        return len(self.slots)

    def __len__(self) -> int:
        return len(self.slots)

    def at(self, t: int) -> frozenset[int]:
        """Event set at timestamp ``t`` (1-based)."""
        if not 1 <= t <= len(self.slots):
            raise IndexError(f"timestamp {t} outside 1..{len(self.slots)}")
        return self.slots[t - 1]

    def _check_event(self, e: int) -> None:
        if not 0 <= e < len(self.alphabet):
            raise KeyError(f"unknown event id {e}")

    def event_support(self, e: int) -> int:
        """Number of timestamps whose event set contains ``e``."""
        self._check_event(e)
        return sum(1 for slot in self.slots if e in slot)

    def p_ind(self, e: int) -> float:
        """Empirical per-timestamp occurrence probability of ``e``."""
        return self.event_support(e) / len(self.slots)

    def supports(self) -> list[int]:
        counts = [0] * len(self.alphabet)
        for slot in self.slots:
            for e in slot:
                counts[e] += 1
        return counts

    def occurrences(self, e: int) -> list[int]:
        """Sorted timestamps at which ``e`` occurs."""
        self._check_event(e)
        return [t for t, slot in enumerate(self.slots, start=1) if e in slot]

    def restrict(self, events: Iterable[int]) -> "EventSequence":
        keep = frozenset(events)
        return EventSequence(tuple(slot & keep for slot in self.slots), self.alphabet)

    def mean_events_per_timestamp(self) -> float:
        return sum(len(s) for s in self.slots) / len(self.slots)

    def slot_labels(self, t: int) -> list[str]:
        return sorted(self.alphabet.label(e) for e in self.at(t))


@dataclass(frozen=True, order=True)
class Episode:
    """Serial episode: an ordered tuple of event ids (repeats allowed)."""

    events: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(int(e) for e in self.events))

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet) -> "Episode":
        return cls(tuple(alphabet.id(lab) for lab in split_episode(text)))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[int]:
        return iter(self.events)

    def __getitem__(self, i: int) -> int:
        return self.events[i]

    @property
    def alphabet_of(self) -> tuple[int, ...]:
        """Distinct event ids of the episode, in order of first appearance."""
        return tuple(dict.fromkeys(self.events))

    def prefix(self, j: int) -> "Episode":
        return prefix(self, j)

    def labels(self, alphabet: Alphabet) -> tuple[str, ...]:
        return tuple(alphabet.label(e) for e in self.events)

    def format(self, alphabet: Alphabet) -> str:
        return ARROW.join(self.labels(alphabet))


EMPTY_EPISODE = Episode(())


def prefix(alpha: Episode, j: int) -> Episode:
    """First ``j`` events of ``alpha``; ``j == 0`` gives :data:`EMPTY_EPISODE`."""
    if not 0 <= j <= len(alpha):
        raise ValueError(f"prefix length {j} outside 0..{len(alpha)}")
    return Episode(alpha.events[:j]) if j else EMPTY_EPISODE


def is_subepisode(beta: Episode | Sequence, alpha: Episode | Sequence) -> bool:
    """True iff ``beta`` embeds into ``alpha`` preserving order."""
    it = iter(alpha)
    return all(any(x == y for y in it) for x in beta)


def split_episode(text: str) -> tuple[str, ...]:
    text = text.strip()
    if not text:
        raise ValueError("empty episode")
    return tuple(check_label(lab) for lab in text.split(ARROW))


# --------------------------------------------------------------------------
# Sequence file format
# --------------------------------------------------------------------------

def parse_sequence(text: str) -> EventSequence:
    """Parse the ``# length=N`` / ``t<TAB>a,b`` sequence format."""
    lines = text.split("\n")
    if not lines or not lines[0].startswith("# length="):
        raise SequenceFormatError("missing '# length=N' header", 1)
    raw = lines[0][len("# length="):].strip()
    if not raw.isdigit() or int(raw) < 1:
        raise SequenceFormatError(f"invalid length {raw!r}", 1)
    n = int(raw)

    alphabet = Alphabet()
    slots: list[frozenset[int]] = [frozenset()] * n
    last = 0
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        ts, sep, body = line.partition("\t")
        if not sep or not ts.isdigit() or not body:
            raise SequenceFormatError(f"malformed line {line!r}", lineno)
        t = int(ts)
        if not 1 <= t <= n:
            raise SequenceFormatError(f"timestamp {t} outside 1..{n}", lineno)
        if t == last:
            raise SequenceFormatError(f"duplicate timestamp {t}", lineno)
        if t < last:
            raise SequenceFormatError(f"non-increasing timestamps ({last} then {t})", lineno)
        last = t
        try:
            slots[t - 1] = frozenset(alphabet.intern(lab) for lab in body.split(","))
        except ValueError as exc:
            raise SequenceFormatError(str(exc), lineno) from None
    return EventSequence(tuple(slots), alphabet)


def serialize_sequence(seq: EventSequence) -> str:
    """Canonical text form: labels sorted within a slot, empty slots omitted."""
    out = [f"# length={seq.length}"]
    for t, slot in enumerate(seq.slots, start=1):
        if slot:
            out.append(f"{t}\t" + ",".join(sorted(seq.alphabet.label(e) for e in slot)))
    return "\n".join(out) + "\n"


def read_sequence(path) -> EventSequence:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_sequence(fh.read())


def write_sequence(seq: EventSequence, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_sequence(seq))


# --------------------------------------------------------------------------
# Episode list format
# --------------------------------------------------------------------------

def parse_episode_list(text: str) -> list[tuple[tuple[str, ...], int | None]]:
    """Parse ``e1->e2<TAB>support`` lines into ``(labels, support)`` pairs."""
    out = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        body, sep, sup = line.partition("\t")
        try:
            labels = split_episode(body)
        except ValueError as exc:
            raise SequenceFormatError(str(exc), lineno) from None
        support = None
        if sep:
            if not sup.strip().isdigit():
                raise SequenceFormatError(f"invalid support {sup!r}", lineno)
            support = int(sup)
        out.append((labels, support))
    return out


def format_episode_list(items: Iterable[tuple[Sequence[str], int | None]]) -> str:
    lines = []
    for labels, support in items:
        text = ARROW.join(labels)
        lines.append(text if support is None else f"{text}\t{support}")
    return "".join(line + "\n" for line in lines)


def read_episode_list(path) -> list[tuple[tuple[str, ...], int | None]]:
    with open(path, encoding="utf-8") as fh:
        return parse_episode_list(fh.read())


def write_episode_list(items, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_episode_list(items))
