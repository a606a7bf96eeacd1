import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from freerider.evaluate import compare_methods, format_table, kept_ranking, precision_at_k, read_report

TRUTH = [("a", "b"), ("b", "c"), ("a", "b", "c")]


def test_precision_examples():
    assert precision_at_k([("x", "y"), ("y", "x")], TRUTH, 2) == 0.0
    assert precision_at_k(list(reversed(TRUTH)), TRUTH, 3) == 1.0
    assert precision_at_k([("a", "b"), ("x", "y")], TRUTH, 2) == 0.5


def test_short_ranking_counts_missing_as_misses():
    assert precision_at_k([("a", "b")], TRUTH, 4) == 0.25


def test_identity_is_exact_not_subepisode():
    assert precision_at_k([("a", "c")], TRUTH, 1) == 0.0


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        precision_at_k([], TRUTH, 0)


eps = st.tuples(st.sampled_from("abcd"), st.sampled_from("abcd"))


@given(st.lists(eps, max_size=12), st.sets(eps), st.sets(eps), st.integers(1, 12))
def test_bounds_and_truth_monotonicity(ranked, t1, t2, k):
    p1 = precision_at_k(ranked, t1, k)
    assert 0.0 <= p1 <= 1.0
    assert precision_at_k(ranked, t1 | t2, k) >= p1


def test_compare_methods_table():
    table = compare_methods({"EDP": list(TRUTH), "IND": [("x", "y")] + list(TRUTH)}, TRUTH, 3)
    assert table["k"] == [1, 2, 3]
    assert table["precision"]["EDP"] == [1.0, 1.0, 1.0]
    assert table["precision"]["IND"][2] == pytest.approx(2 / 3)
    text = format_table(table)
    assert text.splitlines()[0].split() == ["Top", "k", "EDP", "IND"]
    assert "66.7%" in text
    one = compare_methods({"EDP": TRUTH}, TRUTH, 1)
    assert one["k"] == [1] and list(one["precision"]) == ["EDP"]
    json.dumps(table)


def test_read_report(tmp_path):
    path = tmp_path / "r.jsonl"
    rows = [{"episode": "a->b", "kept": True}, {"episode": "x->y", "kept": False}, {"episode": "b->c", "kept": True}]
    path.write_text("".join(json.dumps(r) + "\n" for r in rows))
    assert kept_ranking(read_report(path)) == [("a", "b"), ("b", "c")]
