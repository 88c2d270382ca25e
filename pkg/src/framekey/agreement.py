"""Inter-annotator agreement over label-selection batches.

Selections are small label sets, so chance-corrected coefficients for
single forced choices do not apply directly. Two descriptive rates are
used instead: pairwise overlap agreement (two annotators agree on a
sample when their selection sets intersect) and the strong-majority
rate (some label was the sole selection of at least `quorum`
annotators). NO_METAPHOR counts as an ordinary label in both; a
NO_METAPHOR set never intersects a domain-only set, so that pair
disagrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .batches import AnnotatorBatch, BatchSample
from .logs import WarningLog
from .taxonomy import OTHER_DOMAIN

DEFAULT_QUORUM = 3


@dataclass(frozen=True)
class MajorityOutcome:
    sample_id: str
    label: str | None
    reason: str  # "plurality", "tie", "other_domain", "no_selections"
    votes: dict[str, int]

    @property
    def resolved(self) -> bool:
        return self.label is not None


@dataclass(frozen=True)
class AgreementReport:
    batch_id: str
    n_samples: int
    agreement_rate: float
    strong_majority_rate: float
    outcomes: tuple[MajorityOutcome, ...]

    @property
    def adjudication_queue(self) -> tuple[MajorityOutcome, ...]:
        return tuple(o for o in self.outcomes if not o.resolved)


def _selection_sets(sample: BatchSample) -> dict[str, frozenset[str]]:
    return {annotator: frozenset(labels) for annotator, labels in sample.selections.items()}


def pairwise_overlap_agreement(batch: AnnotatorBatch, log: WarningLog | None = None) -> float:
    """Mean over samples of the mean over annotator pairs of set overlap.

    A pair agrees (1.0) when the two selection sets share any label.
    Samples where fewer than two annotators responded are skipped.
    """
    log = log if log is not None else WarningLog()
    sample_scores = []
    for sample in batch.samples:
        sets = _selection_sets(sample)
        missing = [a for a in batch.annotators if a not in sets]
        for annotator in missing:
            log.warn(
                "pairwise_overlap_agreement",
                sample.id,
                f"batch {batch.batch_id!r}: annotator {annotator!r} has no selection",
            )
        present = [a for a in batch.annotators if a in sets]
        if len(present) < 2:
            log.warn(
                "pairwise_overlap_agreement",
                sample.id,
                f"batch {batch.batch_id!r}: fewer than two selections, sample skipped",
            )
            continue
        pair_scores = [
            1.0 if sets[a] & sets[b] else 0.0 for a, b in combinations(present, 2)
        ]
        sample_scores.append(sum(pair_scores) / len(pair_scores))
    if not sample_scores:
        raise ValueError(f"batch {batch.batch_id!r}: no sample has two or more selections")
    return sum(sample_scores) / len(sample_scores)


def strong_majority_rate(batch: AnnotatorBatch, quorum: int = DEFAULT_QUORUM) -> float:
    """Fraction of samples where >= quorum annotators chose the same sole label."""
    if not batch.samples:
        raise ValueError(f"batch {batch.batch_id!r}: no samples")
    hits = 0
    for sample in batch.samples:
        sole_counts: dict[str, int] = {}
        for labels in sample.selections.values():
            if len(labels) == 1:
                sole_counts[labels[0]] = sole_counts.get(labels[0], 0) + 1
        if sole_counts and max(sole_counts.values()) >= quorum:
            hits += 1
    return hits / len(batch.samples)


def majority_label(sample: BatchSample) -> MajorityOutcome:
    """Strict-plurality vote; ties and OTHER_DOMAIN winners go unresolved.

    Every label an annotator selected counts as one vote. Unresolved
    outcomes carry the reason so they can be queued for adjudication.
    """
    votes: dict[str, int] = {}
    for labels in sample.selections.values():
        for label in labels:
            votes[label] = votes.get(label, 0) + 1
    if not votes:
        return MajorityOutcome(sample.id, None, "no_selections", votes)
    top = max(votes.values())
    winners = sorted(label for label, n in votes.items() if n == top)
    if len(winners) > 1:
        return MajorityOutcome(sample.id, None, "tie", votes)
    if winners[0] == OTHER_DOMAIN:
        return MajorityOutcome(sample.id, None, "other_domain", votes)
    return MajorityOutcome(sample.id, winners[0], "plurality", votes)


def agreement_report(
    batch: AnnotatorBatch,
    quorum: int = DEFAULT_QUORUM,
    log: WarningLog | None = None,
) -> AgreementReport:
    log = log if log is not None else WarningLog()
    return AgreementReport(
        batch_id=batch.batch_id,
        n_samples=len(batch.samples),
        agreement_rate=pairwise_overlap_agreement(batch, log),
        strong_majority_rate=strong_majority_rate(batch, quorum),
        outcomes=tuple(majority_label(sample) for sample in batch.samples),
    )
