"""Label co-selection analysis over annotator batches.

Normalized pointwise mutual information over label pairs reveals which
taxonomy labels annotators treat as interchangeable. Two co-selection
modes share one estimator shape:

  within: an event is one (sample, annotator) selection record; a pair
      is two distinct labels inside one record.
  across: an event is one sample; a pair is two distinct labels chosen
      by two different annotators on that sample, counted once.

Marginal and joint probabilities are containment frequencies over the
same event space, which keeps p(a,b) <= min(p(a), p(b)) and therefore
NPMI inside [-1, 1]. Sentinel labels never enter pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .batches import AnnotatorBatch
from .corpus import AnnotatedCorpus
from .taxonomy import SENTINEL_LABELS


class CooccurrenceMode(Enum):
    WITHIN = "within"
    ACROSS = "across"


@dataclass(frozen=True)
class Marginals:
    """Containment counts per label over n_events co-selection events."""

    mode: CooccurrenceMode
    n_events: int
    label_counts: dict[str, int]
    n_samples: int
    n_selections: int


def _event_sets(batches: list[AnnotatorBatch], mode: CooccurrenceMode):
    """Yield one effective label set per event, sentinels stripped."""
    for batch in batches:
        for sample in batch.samples:
            picked = [
                (annotator, frozenset(labels) - SENTINEL_LABELS)
                for annotator, labels in sample.selections.items()
            ]
            if mode is CooccurrenceMode.WITHIN:
                for _, labels in picked:
                    yield labels, [labels]
            else:
                union = frozenset().union(*(labels for _, labels in picked)) if picked else frozenset()
                yield union, [labels for _, labels in picked]


def cooccurrence_counts(
    batches: list[AnnotatorBatch], mode: CooccurrenceMode
) -> tuple[dict[tuple[str, str], int], Marginals]:
    """Pair counts keyed by lexicographically ordered label pairs, plus marginals."""
    pair_counts: dict[tuple[str, str], int] = {}
    label_counts: dict[str, int] = {}
    n_events = 0
    n_samples = sum(len(batch.samples) for batch in batches)
    n_selections = sum(
        len(sample.selections) for batch in batches for sample in batch.samples
    )
    for contained, parts in _event_sets(batches, mode):
        n_events += 1
        for label in contained:
            label_counts[label] = label_counts.get(label, 0) + 1
        pairs = set()
        if mode is CooccurrenceMode.WITHIN:
            labels = sorted(parts[0])
            for i, a in enumerate(labels):
                for b in labels[i + 1 :]:
                    pairs.add((a, b))
        else:
            for i, set_i in enumerate(parts):
                for j, set_j in enumerate(parts):
                    if i == j:
                        continue
                    for a in set_i:
                        for b in set_j:
                            if a != b:
                                pairs.add((min(a, b), max(a, b)))
        for pair in pairs:
            pair_counts[pair] = pair_counts.get(pair, 0) + 1
    marginals = Marginals(
        mode=mode,
        n_events=n_events,
        label_counts=label_counts,
        n_samples=n_samples,
        n_selections=n_selections,
    )
    return pair_counts, marginals


def npmi(p_a: float, p_b: float, p_ab: float) -> tuple[float, bool]:
    """NPMI = ln(p_ab / (p_a p_b)) / -ln(p_ab).

    Returns (value, degenerate). The normalizer vanishes at p_ab = 1,
    where the pair always co-occurs; that case is defined as +1 and
    flagged degenerate.
    """
    if not (0.0 < p_ab <= 1.0 and 0.0 < p_a <= 1.0 and 0.0 < p_b <= 1.0):
        raise ValueError(f"probabilities out of range: p_a={p_a}, p_b={p_b}, p_ab={p_ab}")
    if p_ab > min(p_a, p_b) + 1e-12:
        raise ValueError(f"joint probability {p_ab} exceeds a marginal ({p_a}, {p_b})")
    if p_ab == 1.0:
        return 1.0, True
    value = math.log(p_ab / (p_a * p_b)) / -math.log(p_ab)
    # clip rounding noise at the theoretical bounds
    value = max(-1.0, min(1.0, value))
    return value, False


@dataclass(frozen=True)
class ConfusionRecord:
    label_a: str
    label_b: str
    count: int
    p_a: float
    p_b: float
    p_ab: float
    npmi: float
    npmi_weighted: float
    degenerate: bool = False


@dataclass(frozen=True)
class ConfusionReport:
    mode: CooccurrenceMode
    records: tuple[ConfusionRecord, ...]
    n_events: int
    n_samples: int
    n_selections: int
    n_pairs: int


def top_confusions(
    batches: list[AnnotatorBatch],
    mode: CooccurrenceMode = CooccurrenceMode.WITHIN,
    min_count: int = 1,
) -> ConfusionReport:
    """Label pairs ranked by count-weighted NPMI.

    npmi_weighted = npmi * ln(count); ordering is npmi_weighted
    descending, then count descending, then the pair lexicographically.
    """
    pair_counts, marginals = cooccurrence_counts(batches, mode)
    records = []
    for (a, b), count in pair_counts.items():
        if count < min_count:
            continue
        p_a = marginals.label_counts[a] / marginals.n_events
        p_b = marginals.label_counts[b] / marginals.n_events
        p_ab = count / marginals.n_events
        value, degenerate = npmi(p_a, p_b, p_ab)
        records.append(
            ConfusionRecord(
                label_a=a,
                label_b=b,
                count=count,
                p_a=p_a,
                p_b=p_b,
                p_ab=p_ab,
                npmi=value,
                npmi_weighted=value * math.log(count),
                degenerate=degenerate,
            )
        )
    records.sort(key=lambda r: (-r.npmi_weighted, -r.count, r.label_a, r.label_b))
    return ConfusionReport(
        mode=mode,
        records=tuple(records),
        n_events=marginals.n_events,
        n_samples=marginals.n_samples,
        n_selections=marginals.n_selections,
        n_pairs=sum(pair_counts.values()),
    )


@dataclass(frozen=True)
class OverlapReport:
    """Frame-inventory overlap between two source domains."""

    domain_a: str
    domain_b: str
    frames_a: tuple[str, ...]
    frames_b: tuple[str, ...]
    shared: tuple[str, ...]
    overlap_ab: float  # |A & B| / |A|
    overlap_ba: float  # |A & B| / |B|
    subsumed: str | None  # "a_in_b", "b_in_a", or None

    @property
    def is_subsumed(self) -> bool:
        return self.subsumed is not None


def _domain_frames(corpus: AnnotatedCorpus, domain: str, min_frame_count: int) -> set[str]:
    counts: dict[str, int] = {}
    for ann in corpus.annotations:
        if ann.domain == domain:
            counts[ann.frame] = counts.get(ann.frame, 0) + 1
    return {frame for frame, n in counts.items() if n >= min_frame_count}


def frame_overlap(
    corpus: AnnotatedCorpus,
    domain_a: str,
    domain_b: str,
    min_frame_count: int = 1,
) -> OverlapReport:
    """Directed frame-set overlap; equal strict subset means subsumption.

    overlap_ab = 1.0 with |A| < |B| reads as: every frame domain A
    realizes also occurs under domain B, so A is the narrower taxon.
    """
    frames_a = _domain_frames(corpus, domain_a, min_frame_count)
    frames_b = _domain_frames(corpus, domain_b, min_frame_count)
    if not frames_a or not frames_b:
        raise ValueError(
            f"no frames at min count {min_frame_count}: "
            f"{domain_a!r} has {len(frames_a)}, {domain_b!r} has {len(frames_b)}"
        )
    shared = frames_a & frames_b
    overlap_ab = len(shared) / len(frames_a)
    overlap_ba = len(shared) / len(frames_b)
    subsumed = None
    if overlap_ab == 1.0 and len(frames_a) < len(frames_b):
        subsumed = "a_in_b"
    elif overlap_ba == 1.0 and len(frames_b) < len(frames_a):
        subsumed = "b_in_a"
    return OverlapReport(
        domain_a=domain_a,
        domain_b=domain_b,
        frames_a=tuple(sorted(frames_a)),
        frames_b=tuple(sorted(frames_b)),
        shared=tuple(sorted(shared)),
        overlap_ab=overlap_ab,
        overlap_ba=overlap_ba,
        subsumed=subsumed,
    )
