"""Log-likelihood-ratio keyness between two corpora.

For a label with observed counts O1, O2 and corpus totals N1, N2 the
statistic is

    g2 = 2 * sum_i O_i * ln(O_i / E_i),   E_i = N_i * (O1 + O2) / (N1 + N2)

with the convention 0 * ln(0/E) = 0. Under the null hypothesis of equal
relative frequency g2 is asymptotically chi-square with 1 degree of
freedom, so the significance gate is the chi-square quantile at the
configured p threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .corpus import AnnotatedCorpus, MetaphorAnnotation
from .logs import WarningLog

# Chi-square quantiles at 1 df for the standard thresholds. Other
# thresholds (e.g. Bonferroni-adjusted) are inverted numerically from the
# survival function erfc(sqrt(x/2)).
CHI2_CRITICAL_1DF = {0.05: 3.841, 0.01: 6.635, 0.001: 10.828}

DEFAULT_P_THRESHOLD = 0.05
DEFAULT_MIN_COUNT = 5
DEFAULT_EXAMPLE_LIMIT = 3


class Dimension(Enum):
    DOMAIN = "domain"
    FRAME = "frame"


class TotalsPolicy(Enum):
    """What N_i normalizes over: metaphor annotations (default) or tokens."""

    ANNOTATIONS = "annotations"
    TOKENS = "tokens"


class Direction(Enum):
    CORPUS1 = "corpus1"
    CORPUS2 = "corpus2"
    TIE = "tie"


def chi2_critical(p_threshold: float) -> float:
    """Critical g2 value at 1 df for the given right-tail probability."""
    if not 0.0 < p_threshold < 1.0:
        raise ValueError(f"p threshold must be in (0, 1), got {p_threshold}")
    if p_threshold in CHI2_CRITICAL_1DF:
        return CHI2_CRITICAL_1DF[p_threshold]
    # survival function of chi-square(1): S(x) = erfc(sqrt(x/2))
    lo, hi = 0.0, 1.0
    while math.erfc(math.sqrt(hi / 2.0)) > p_threshold:
        hi *= 2.0
        if hi > 1e6:
            raise ValueError(f"p threshold too small to invert: {p_threshold}")
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if math.erfc(math.sqrt(mid / 2.0)) > p_threshold:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class ContingencyCell:
    """Observed and expected counts for one label across two corpora."""

    label: str
    o1: int
    o2: int
    n1: int
    n2: int
    e1: float
    e2: float

    def __post_init__(self):
        if self.n1 <= 0 or self.n2 <= 0:
            raise ValueError(f"{self.label!r}: corpus totals must be positive")
        if self.o1 + self.o2 < 1:
            raise ValueError(f"{self.label!r}: label absent from both corpora")
        if self.o1 > self.n1 or self.o2 > self.n2:
            raise ValueError(f"{self.label!r}: observed count exceeds corpus total")
        rate = (self.o1 + self.o2) / (self.n1 + self.n2)
        if abs(self.e1 - self.n1 * rate) > 1e-12 or abs(self.e2 - self.n2 * rate) > 1e-12:
            raise ValueError(f"{self.label!r}: expected counts inconsistent with observed")


def make_cell(label: str, o1: int, n1: int, o2: int, n2: int) -> ContingencyCell:
    if n1 + n2 == 0:
        raise ValueError("both corpus totals are zero")
    rate = (o1 + o2) / (n1 + n2)
    return ContingencyCell(label=label, o1=o1, o2=o2, n1=n1, n2=n2, e1=n1 * rate, e2=n2 * rate)


def log_likelihood_ratio(cell: ContingencyCell) -> float:
    """g2 = 2 * sum O_i ln(O_i/E_i), zero-count terms contributing zero.

    Exactly 0.0 when the relative frequencies are equal (integer cross
    product check), otherwise the float evaluation clamped at 0 against
    rounding noise.
    """
    if cell.o1 * cell.n2 == cell.o2 * cell.n1:
        return 0.0
    total = 0.0
    for observed, expected in ((cell.o1, cell.e1), (cell.o2, cell.e2)):
        if observed == 0:
            continue
        assert expected > 0.0, "E_i = 0 with O_i > 0 cannot happen for valid cells"
        total += observed * math.log(observed / expected)
    g2 = 2.0 * total
    if g2 < 0.0:
        assert g2 > -1e-9, f"g2 = {g2} is negative beyond rounding slack"
        g2 = 0.0
    return g2


@dataclass(frozen=True)
class SaliencyRecord:
    label: str
    cell: ContingencyCell
    g2: float
    significant: bool
    direction: Direction
    rel_freq1: float
    rel_freq2: float
    # up to k annotation refs (doc_id, start, end) per corpus
    examples1: tuple[tuple[str, int, int], ...] = ()
    examples2: tuple[tuple[str, int, int], ...] = ()


def _label_of(ann: MetaphorAnnotation, dimension: Dimension) -> str:
    return ann.domain if dimension is Dimension.DOMAIN else ann.frame


def _totals(corpus: AnnotatedCorpus, policy: TotalsPolicy) -> int:
    if policy is TotalsPolicy.TOKENS:
        return corpus.token_count()
    return corpus.annotation_count


def _count_and_examples(corpus: AnnotatedCorpus, dimension: Dimension, limit: int):
    counts: dict[str, int] = {}
    refs: dict[str, list[tuple[str, int, int]]] = {}
    for ann in corpus.annotations:
        label = _label_of(ann, dimension)
        counts[label] = counts.get(label, 0) + 1
        refs.setdefault(label, []).append((ann.doc_id, ann.span[0], ann.span[1]))
    examples = {
        label: tuple(sorted(items)[:limit]) for label, items in refs.items()
    }
    return counts, examples


def build_contingency(
    label: str,
    corpus1: AnnotatedCorpus,
    corpus2: AnnotatedCorpus,
    dimension: Dimension,
    totals_policy: TotalsPolicy = TotalsPolicy.ANNOTATIONS,
) -> ContingencyCell | None:
    """Cell for one label, or None when the label is absent from both corpora."""
    o1 = sum(1 for a in corpus1.annotations if _label_of(a, dimension) == label)
    o2 = sum(1 for a in corpus2.annotations if _label_of(a, dimension) == label)
    n1 = _totals(corpus1, totals_policy)
    n2 = _totals(corpus2, totals_policy)
    if n1 + n2 == 0:
        raise ValueError("both corpora are empty under the totals policy")
    if o1 + o2 == 0:
        return None
    return make_cell(label, o1, n1, o2, n2)


def saliency_table(
    corpus1: AnnotatedCorpus,
    corpus2: AnnotatedCorpus,
    dimension: Dimension,
    p_threshold: float = DEFAULT_P_THRESHOLD,
    min_count: int = DEFAULT_MIN_COUNT,
    totals_policy: TotalsPolicy = TotalsPolicy.ANNOTATIONS,
    example_limit: int = DEFAULT_EXAMPLE_LIMIT,
    bonferroni: bool = False,
) -> list[SaliencyRecord]:
    """One record per label with O1+O2 >= min_count, sorted by g2 descending.

    Ordering is deterministic: g2 descending, then label lexicographic.
    With bonferroni=True the gate threshold becomes p/m where m is the
    number of labels entering the analysis.
    """
    n1 = _totals(corpus1, totals_policy)
    n2 = _totals(corpus2, totals_policy)
    if n1 <= 0 or n2 <= 0:
        raise ValueError("corpus empty under the totals policy")
    counts1, examples1 = _count_and_examples(corpus1, dimension, example_limit)
    counts2, examples2 = _count_and_examples(corpus2, dimension, example_limit)
    labels = [
        label
        for label in sorted(set(counts1) | set(counts2))
        if counts1.get(label, 0) + counts2.get(label, 0) >= min_count
    ]
    effective_p = p_threshold / len(labels) if (bonferroni and labels) else p_threshold
    gate = chi2_critical(effective_p)

    records = []
    for label in labels:
        cell = make_cell(label, counts1.get(label, 0), n1, counts2.get(label, 0), n2)
        g2 = log_likelihood_ratio(cell)
        rel1, rel2 = cell.o1 / cell.n1, cell.o2 / cell.n2
        if rel1 > rel2:
            direction = Direction.CORPUS1
        elif rel2 > rel1:
            direction = Direction.CORPUS2
        else:
            direction = Direction.TIE
        records.append(
            SaliencyRecord(
                label=label,
                cell=cell,
                g2=g2,
                significant=g2 >= gate,
                direction=direction,
                rel_freq1=rel1,
                rel_freq2=rel2,
                examples1=examples1.get(label, ()),
                examples2=examples2.get(label, ()),
            )
        )
    records.sort(key=lambda r: (-r.g2, r.label))
    return records


def nested_frame_saliency(
    domain: str,
    corpus1: AnnotatedCorpus,
    corpus2: AnnotatedCorpus,
    p_threshold: float = DEFAULT_P_THRESHOLD,
    min_count: int = DEFAULT_MIN_COUNT,
    example_limit: int = DEFAULT_EXAMPLE_LIMIT,
    bonferroni: bool = False,
    log: WarningLog | None = None,
) -> list[SaliencyRecord]:
    """Frame saliency within one source domain.

    Both corpora are restricted to annotations of that domain, so N_i is
    the domain's annotation count in corpus i. An empty restriction on
    either side yields an empty table with a diagnostic, not an error.
    """
    log = log if log is not None else WarningLog()
    sub1 = corpus1.restrict_domain(domain)
    sub2 = corpus2.restrict_domain(domain)
    if sub1.annotation_count == 0 or sub2.annotation_count == 0:
        log.warn(
            "nested_frame_saliency",
            "",
            f"domain {domain!r} has {sub1.annotation_count}/{sub2.annotation_count} "
            "annotations; no contrast possible",
        )
        return []
    return saliency_table(
        sub1,
        sub2,
        Dimension.FRAME,
        p_threshold=p_threshold,
        min_count=min_count,
        totals_policy=TotalsPolicy.ANNOTATIONS,
        example_limit=example_limit,
        bonferroni=bonferroni,
    )


def partition_contrast(
    corpus: AnnotatedCorpus,
    partition_a: str,
    partition_b: str,
    dimension: Dimension = Dimension.DOMAIN,
    domain: str | None = None,
    p_threshold: float = DEFAULT_P_THRESHOLD,
    min_count: int = DEFAULT_MIN_COUNT,
    example_limit: int = DEFAULT_EXAMPLE_LIMIT,
    bonferroni: bool = False,
    log: WarningLog | None = None,
) -> list[SaliencyRecord]:
    """Split one corpus by partition tags and contrast the two halves."""
    log = log if log is not None else WarningLog()
    sub_a = corpus.restrict_partition(partition_a)
    sub_b = corpus.restrict_partition(partition_b)
    if sub_a.annotation_count == 0 or sub_b.annotation_count == 0:
        log.warn(
            "partition_contrast",
            "",
            f"partitions {partition_a!r}/{partition_b!r} have "
            f"{sub_a.annotation_count}/{sub_b.annotation_count} annotations",
        )
        return []
    if domain is not None:
        return nested_frame_saliency(
            domain,
            sub_a,
            sub_b,
            p_threshold=p_threshold,
            min_count=min_count,
            example_limit=example_limit,
            bonferroni=bonferroni,
            log=log,
        )
    return saliency_table(
        sub_a,
        sub_b,
        dimension,
        p_threshold=p_threshold,
        min_count=min_count,
        example_limit=example_limit,
        bonferroni=bonferroni,
    )
