import random

import pytest

from freerider.automaton import EpisodeAutomaton, Window, minimal_occurrences, support
from freerider.core import Alphabet, Episode, EventSequence, parse_sequence
from oracles import D1_TEXT, brute_force_windows, fig1_sequence, random_instance


def test_transition_examples():
    A = Alphabet("abc")
    abc = EpisodeAutomaton(Episode.parse("a->b->c", A))
    assert abc.transition(2, {1, 2}) == 3 == abc.sink
    assert abc.transition(0, set()) == 0
    aab = EpisodeAutomaton(Episode.parse("a->a->b", A))
    assert aab.transition(1, {0, 1}) == 2
    with pytest.raises(ValueError):
        abc.transition(3, {0})


def test_fig1_moset():
    seq = fig1_sequence()
    abc = Episode.parse("a->b->c", seq.alphabet)
    assert minimal_occurrences(seq, abc, 4) == [Window(2, 4), Window(7, 10)]


def test_d1_ab():
    seq = parse_sequence(D1_TEXT)
    assert minimal_occurrences(seq, Episode.parse("a->b", seq.alphabet), 5) == [(1, 2), (3, 4)]


def test_single_event_window_is_a_point():
    seq = EventSequence.from_labels([set(), {"a"}, set()])
    assert minimal_occurrences(seq, Episode((0,)), 1) == [(2, 2)]


def test_same_slot_does_not_chain():
    seq = EventSequence.from_labels([{"a", "b"}])
    assert minimal_occurrences(seq, Episode((0, 1))) == []


def test_delta_must_be_positive():
    seq = parse_sequence(D1_TEXT)
    with pytest.raises(ValueError):
        minimal_occurrences(seq, Episode((0,)), 0)


def _random_cases(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        seq, alpha = random_instance(rng, max_n=12, max_sigma=3, max_k=3)
        delta = rng.choice([None, 1, 2, 3, 5, 12])
        yield seq, alpha, delta


@pytest.mark.parametrize("seed", range(4))
def test_matches_brute_force(seed):
    for seq, alpha, delta in _random_cases(100, seed):
        got = minimal_occurrences(seq, alpha, delta)
        assert got == brute_force_windows(seq, alpha, delta), (seq.slots, alpha, delta)


def test_windows_are_not_nested():
    for seq, alpha, delta in _random_cases(300, 11):
        ws = minimal_occurrences(seq, alpha, delta)
        for i, a in enumerate(ws):
            for b in ws[i + 1:]:
                assert not (a.start <= b.start and b.end <= a.end)
                assert not (b.start <= a.start and a.end <= b.end)


def test_support_monotone_in_delta():
    for seq, alpha, _ in _random_cases(200, 5):
        sups = [support(seq, alpha, d) for d in range(1, seq.length + 2)]
        assert sups == sorted(sups)
        assert sups[-1] == support(seq, alpha)


def test_single_event_support_equals_event_support():
    for seq, _, delta in _random_cases(100, 9):
        for e in range(len(seq.alphabet)):
            assert support(seq, Episode((e,)), delta) == seq.event_support(e)
