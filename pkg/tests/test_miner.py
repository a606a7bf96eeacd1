import random

import pytest

from freerider.automaton import support
from freerider.core import Alphabet, Episode, EventSequence, parse_sequence
from freerider.miner import extend_windows, mine_frequent, top_k_by_support
from oracles import D1_TEXT, brute_force_mine


@pytest.fixture
def d1():
    return parse_sequence(D1_TEXT)


def as_text(F, A):
    return {ep.format(A): sup for ep, sup in F}


def test_d1_example(d1):
    F = as_text(mine_frequent(d1, 2, 5, 3), d1.alphabet)
    assert F["a->b"] == 2
    assert "b->a" not in F
    assert all("->" in ep for ep in F)
    assert F == {k: v for k, v in _oracle(d1, 2, 5, 3).items()}


def _oracle(seq, min_sup, delta, max_len):
    A = seq.alphabet
    return {Episode(ev).format(A): s for ev, s in brute_force_mine(seq, min_sup, delta, max_len).items()}


def test_min_sup_above_length_gives_nothing(d1):
    assert mine_frequent(d1, d1.length + 1, 5, 3) == []


def test_argument_checks(d1):
    with pytest.raises(ValueError):
        mine_frequent(d1, 0, 5, 3)
    with pytest.raises(ValueError):
        mine_frequent(d1, 1, 5, 1)


@pytest.mark.parametrize("seed", range(3))
def test_complete_against_brute_force(seed):
    rng = random.Random(seed)
    for _ in range(25):
        n = rng.randint(3, 15)
        slots = [{x for x in "abc" if rng.random() < 0.45} for _ in range(n)]
        seq = EventSequence.from_labels(slots, Alphabet("abc"))
        min_sup = rng.randint(1, 3)
        delta = rng.choice([2, 3, 5, 15])
        max_len = rng.randint(2, 3)
        got = as_text(mine_frequent(seq, min_sup, delta, max_len), seq.alphabet)
        assert got == _oracle(seq, min_sup, delta, max_len)


def test_supports_match_scanner_and_order():
    rng = random.Random(3)
    slots = [{x for x in "abcd" if rng.random() < 0.35} for _ in range(200)]
    seq = EventSequence.from_labels(slots, Alphabet("abcd"))
    F = mine_frequent(seq, 10, 6, 4)
    assert F
    for ep, sup in F:
        assert sup == support(seq, ep, 6)
    keys = [ep.labels(seq.alphabet) for ep, _ in F]
    assert keys == sorted(keys)
    assert mine_frequent(seq, 10, 6, 4, workers=2) == F


def test_extend_windows_keeps_latest_start_per_end():
    # parent windows [1,1] and [2,2]; next e for both is at 5
    assert extend_windows([(1, 1), (2, 2)], [5], None) == [(2, 5)]
    assert extend_windows([(1, 1), (2, 2)], [5], 3) == []
    assert extend_windows([(1, 1), (4, 4)], [3, 6], 3) == [(1, 3), (4, 6)]


def test_top_k():
    A = Alphabet("abc")
    F = [(Episode.parse("b->c", A), 5), (Episode.parse("a->b", A), 5), (Episode.parse("a->c", A), 9)]
    assert top_k_by_support(F, 5, A) == [F[2], F[1], F[0]]
    assert top_k_by_support(F, 0, A) == []
    assert top_k_by_support(F, 2, A) == [F[2], F[1]]


def test_top_k_against_sort_oracle():
    rng = random.Random(8)
    slots = [{x for x in "abcd" if rng.random() < 0.4} for _ in range(150)]
    seq = EventSequence.from_labels(slots, Alphabet("abcd"))
    F = mine_frequent(seq, 5, 5, 3)
    top = top_k_by_support(F, 10, seq.alphabet)
    cutoff = sorted((s for _, s in F), reverse=True)[9]
    assert len(top) == 10
    assert [s for _, s in top] == sorted((s for _, s in F), reverse=True)[:10]
    assert all(s >= cutoff for _, s in top)
