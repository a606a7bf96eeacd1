"""Precision@k of ranked episodes against a ground-truth set."""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

Labels = tuple[str, ...]


def precision_at_k(ranked: Sequence[Labels], truth: Iterable[Labels], k: int) -> float:
    """Share of the top ``k`` that is in ``truth``; missing ranks count as misses."""
    if k < 1:
        raise ValueError("k must be >= 1")
    truth = {tuple(t) for t in truth}
    return sum(1 for ep in ranked[:k] if tuple(ep) in truth) / k


def compare_methods(reports: Mapping[str, Sequence[Labels]], truth: Iterable[Labels], k_max: int) -> dict:
    """Precision@k for ``k = 1..k_max`` per method."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    truth = [tuple(t) for t in truth]
    return {
        "k": list(range(1, k_max + 1)),
        "precision": {
            name: [precision_at_k(ranked, truth, k) for k in range(1, k_max + 1)]
            for name, ranked in reports.items()
        },
    }


def format_table(table: dict) -> str:
    ks = table["k"]
    names = list(table["precision"])
    width = max([len("Top k")] + [len(n) for n in names]) + 2
    head = "Top k".rjust(6) + "".join(n.rjust(width) for n in names)
    rows = [head]
    for i, k in enumerate(ks):
        cells = "".join(f"{100 * table['precision'][n][i]:.1f}%".rjust(width) for n in names)
        rows.append(str(k).rjust(6) + cells)
    return "\n".join(rows)


def read_report(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def kept_ranking(records: Iterable[Mapping]) -> list[Labels]:
    """Kept episodes of a report in file order, as label tuples."""
    return [tuple(r["episode"].split("->")) for r in records if r["kept"]]
