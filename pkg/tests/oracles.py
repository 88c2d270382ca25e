"""Independent reference implementations used as test oracles.

These are written from the definitions alone, with none of the package
internals (no shared helpers, no shortcut branches), so agreement with
the package is meaningful.
"""

from __future__ import annotations

import math
from itertools import combinations

SENTINELS = {"NO_METAPHOR", "OTHER_DOMAIN"}


def g2_direct(o1: int, n1: int, o2: int, n2: int) -> float:
    e1 = n1 * (o1 + o2) / (n1 + n2)
    e2 = n2 * (o1 + o2) / (n1 + n2)
    total = 0.0
    if o1 > 0:
        total += o1 * math.log(o1 / e1)
    if o2 > 0:
        total += o2 * math.log(o2 / e2)
    return max(2.0 * total, 0.0)


def pairs_within(sample) -> list[frozenset]:
    found = []
    for labels in sample.selections.values():
        usable = sorted(set(labels) - SENTINELS)
        for a, b in combinations(usable, 2):
            found.append(frozenset((a, b)))
    return found


def pairs_across(sample) -> set[frozenset]:
    found = set()
    annotators = list(sample.selections)
    for a_i in annotators:
        for a_j in annotators:
            if a_i == a_j:
                continue
            for x in sample.selections[a_i]:
                for y in sample.selections[a_j]:
                    if x != y and x not in SENTINELS and y not in SENTINELS:
                        found.add(frozenset((x, y)))
    return found


def count_pairs(batches, mode: str) -> dict[tuple[str, str], int]:
    counts: dict[tuple[str, str], int] = {}
    for batch in batches:
        for sample in batch.samples:
            if mode == "within":
                # one event per annotator record, so no per-sample dedup
                pairs = pairs_within(sample)
            else:
                pairs = pairs_across(sample)
            for pair in pairs:
                key = tuple(sorted(pair))
                counts[key] = counts.get(key, 0) + 1
    return counts


def agreement_brute(batch) -> float:
    per_sample = []
    for sample in batch.samples:
        sets = {a: set(labels) for a, labels in sample.selections.items()}
        present = [a for a in batch.annotators if a in sets]
        if len(present) < 2:
            continue
        scores = [
            1.0 if sets[a] & sets[b] else 0.0 for a, b in combinations(present, 2)
        ]
        per_sample.append(sum(scores) / len(scores))
    return sum(per_sample) / len(per_sample)


def strong_majority_brute(batch, quorum: int = 3) -> float:
    hits = 0
    for sample in batch.samples:
        counts: dict[str, int] = {}
        for labels in sample.selections.values():
            if len(labels) == 1:
                counts[labels[0]] = counts.get(labels[0], 0) + 1
        if any(n >= quorum for n in counts.values()):
            hits += 1
    return hits / len(batch.samples)
