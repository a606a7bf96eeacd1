import pytest

from freerider.core import serialize_sequence
from freerider.synth import LETTERS, SynConfig, generate_syn, ground_truth


@pytest.fixture(scope="module")
def default_syn():
    return generate_syn(SynConfig(seed=7))


def test_defaults_shape(default_syn):
    seq = default_syn.sequence
    assert seq.length == 10_000
    assert len(seq.alphabet) == 52
    assert set(seq.alphabet.symbols) == set(LETTERS)


def test_calibration(default_syn):
    seq = default_syn.sequence
    assert 1.3 <= seq.mean_events_per_timestamp() <= 1.5
    assert 0.28 <= seq.p_ind(seq.alphabet.id("X")) <= 0.32


def test_plants(default_syn):
    seq = default_syn.sequence
    A = seq.alphabet
    assert len(default_syn.abc_starts) == 300
    for t in default_syn.abc_starts:
        assert A.id("a") in seq.at(t) and A.id("b") in seq.at(t + 1) and A.id("c") in seq.at(t + 2)
    assert len(default_syn.defg_times) == 300
    for times in default_syn.defg_times:
        assert all(b - a >= 1 for a, b in zip(times, times[1:]))
        assert times[-1] <= seq.length
        for t, ev in zip(times, "defg"):
            assert A.id(ev) in seq.at(t)


def test_same_seed_same_bytes():
    a = serialize_sequence(generate_syn(SynConfig(n=2000, seed=3)).sequence)
    b = serialize_sequence(generate_syn(SynConfig(n=2000, seed=3)).sequence)
    c = serialize_sequence(generate_syn(SynConfig(n=2000, seed=4)).sequence)
    assert a == b != c


def test_degenerate_config_is_pure_filler():
    data = generate_syn(SynConfig(n=3000, plant_abc=0, plant_defg=0, p_noise=0.0, filler_rate=1.0, seed=1))
    seq = data.sequence
    assert seq.event_support(seq.alphabet.id("X")) == 0
    assert all(seq.event_support(seq.alphabet.id(x)) == 0 for x in "abcdefg")
    assert all(len(s) == 1 for s in seq.slots)


@pytest.mark.parametrize("p", [0.1, 0.6])
def test_noise_sweep(p):
    seq = generate_syn(SynConfig(seed=2, p_noise=p)).sequence
    assert abs(seq.p_ind(seq.alphabet.id("X")) - p) < 0.03


def test_config_validation():
    for bad in [dict(n=0), dict(plant_abc=-1), dict(p_noise=1.5), dict(gap_std=0), dict(n=2),
                dict(filler_rate=-0.1), dict(noise_event="a")]:
        with pytest.raises(ValueError):
            SynConfig(**bad)


def test_ground_truth():
    truth = ground_truth()
    assert len(truth) == 15
    assert ("e", "f", "g") in truth and ("d", "g") in truth
    assert ("a",) not in truth and ("X",) not in truth
    assert all(len(t) >= 2 for t in truth)
