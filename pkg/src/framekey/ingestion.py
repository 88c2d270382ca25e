"""Corpus loading, candidate filtering and matched background sampling.

Every filter is a pure corpus -> corpus function: annotations only ever
shrink, the document set is carried through unchanged, and drops are
reported on the warning log rather than raised.
"""

from __future__ import annotations

import csv
import random
import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import AnnotatedCorpus, read_annotations, read_documents
from .logs import WarningLog, logger
from .taxonomy import LabelTaxonomy


@dataclass(frozen=True)
class CutoffTable:
    """Per-domain mean metaphoricity of human-confirmed candidates.

    Domains with zero confirmed positives are absent, never stored as 0.
    """

    cutoffs: dict[str, float] = field(default_factory=dict)
    positives: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for domain, cutoff in self.cutoffs.items():
            if not 0.0 <= cutoff <= 1.0:
                raise ValueError(f"cutoff for {domain!r} outside [0, 1]: {cutoff}")

    def __contains__(self, domain: str) -> bool:
        return domain in self.cutoffs

    def write_csv(self, path: str | Path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["domain", "cutoff", "judged_positives"])
            for domain in sorted(self.cutoffs):
                writer.writerow([domain, repr(self.cutoffs[domain]), self.positives.get(domain, 0)])

    @classmethod
    def read_csv(cls, path: str | Path) -> "CutoffTable":
        cutoffs: dict[str, float] = {}
        positives: dict[str, int] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                cutoffs[row["domain"]] = float(row["cutoff"])
                positives[row["domain"]] = int(row.get("judged_positives") or 0)
        return cls(cutoffs=cutoffs, positives=positives)


def load_corpus(
    docs_path: str | Path,
    annotations_path: str | Path,
    frames: LabelTaxonomy,
    domains: LabelTaxonomy,
) -> AnnotatedCorpus:
    """Load and validate a corpus from the two interchange files."""
    documents = read_documents(docs_path)
    annotations, lines = read_annotations(annotations_path)
    return AnnotatedCorpus(documents, annotations, frames, domains, _lines=lines)


def _contains_any(text: str, needles: list[str], word_boundary: bool) -> bool:
    hay = text.lower()
    if not word_boundary:
        return any(n in hay for n in needles)
    return any(re.search(rf"\b{re.escape(n)}\b", hay) for n in needles)


def filter_by_keywords(
    corpus: AnnotatedCorpus,
    keywords: list[str],
    log: WarningLog | None = None,
    word_boundary: bool = False,
) -> AnnotatedCorpus:
    """Keep annotations whose containing text mentions at least one keyword.

    Documents carry no sentence bounds in the interchange format, so the
    match context is the whole document (one paragraph or tweet per
    document in practice). Matching is case-insensitive substring by
    default; word_boundary=True switches to whole-word matching.
    """
    if not keywords:
        raise ValueError("keyword list is empty")
    log = log if log is not None else WarningLog()
    needles = [k.lower() for k in keywords]
    doc_ok = {
        doc.id: _contains_any(doc.text, needles, word_boundary) for doc in corpus.documents
    }
    kept = [a for a in corpus.annotations if doc_ok[a.doc_id]]
    surviving = {a.doc_id for a in kept}
    for doc in corpus.documents:
        had_before = any(a.doc_id == doc.id for a in corpus.annotations)
        if had_before and doc.id not in surviving:
            log.warn("filter_by_keywords", doc.id, "no annotations survive keyword filter")
    return corpus.with_annotations(kept)


def compute_cutoffs(
    judged: list[tuple[str, float, bool]], log: WarningLog | None = None
) -> CutoffTable:
    """Mean metaphoricity score of positively judged items, per domain.

    judged rows are (domain, score, verdict); only positive verdicts enter
    the mean. A domain with no positives is omitted with a warning.
    """
    log = log if log is not None else WarningLog()
    totals: dict[str, float] = {}
    counts: dict[str, int] = {}
    seen: set[str] = set()
    for domain, score, verdict in judged:
        if not 0.0 <= score <= 1.0:
            raise ValueError(f"metaphoricity score outside [0, 1]: {score}")
        seen.add(domain)
        if verdict:
            totals[domain] = totals.get(domain, 0.0) + score
            counts[domain] = counts.get(domain, 0) + 1
    for domain in sorted(seen - set(counts)):
        log.warn("compute_cutoffs", "", f"domain {domain!r} has no judged positives; omitted")
    cutoffs = {domain: totals[domain] / counts[domain] for domain in counts}
    return CutoffTable(cutoffs=cutoffs, positives=dict(counts))


def filter_candidates(
    corpus: AnnotatedCorpus, cutoffs: CutoffTable, log: WarningLog | None = None
) -> AnnotatedCorpus:
    """Keep annotations whose confidence strictly exceeds their domain cutoff.

    Ties at the cutoff drop. Annotations whose domain has no cutoff drop
    with a warning.
    """
    log = log if log is not None else WarningLog()
    kept = []
    for ann in corpus.annotations:
        cutoff = cutoffs.cutoffs.get(ann.domain)
        if cutoff is None:
            log.warn("filter_candidates", ann.doc_id, f"no cutoff for domain {ann.domain!r}")
            continue
        if ann.domain_confidence > cutoff:
            kept.append(ann)
    return corpus.with_annotations(kept)


def filter_by_target(
    corpus: AnnotatedCorpus,
    substrings: list[str],
    log: WarningLog | None = None,
    case_sensitive: bool = False,
) -> AnnotatedCorpus:
    """Keep annotations whose target referent contains any of the substrings."""
    if not substrings:
        raise ValueError("substring list is empty")
    log = log if log is not None else WarningLog()
    needles = substrings if case_sensitive else [s.lower() for s in substrings]
    kept = []
    for ann in corpus.annotations:
        if ann.target_referent is None:
            log.warn("filter_by_target", ann.doc_id, "annotation has no target referent")
            continue
        target = ann.target_referent if case_sensitive else ann.target_referent.lower()
        if any(n in target for n in needles):
            kept.append(ann)
    return corpus.with_annotations(kept)


def _year_key(year: int | None):
    # documents without year metadata share one sentinel stratum
    return (year is None, year if year is not None else 0)


def stratified_background_sample(
    pool: AnnotatedCorpus,
    template: AnnotatedCorpus,
    seed: int,
    exclude_keywords: list[str] | None = None,
    log: WarningLog | None = None,
) -> AnnotatedCorpus:
    """Draw a background corpus from pool matching template's per-year sizes.

    For every year in the template, the same number of pool documents of
    that year is sampled uniformly (seeded, reproducible). Years where the
    pool is short contribute everything they have, and the shortfall is
    recorded on the warning log.
    """
    log = log if log is not None else WarningLog()
    shared = {d.id for d in pool.documents} & {d.id for d in template.documents}
    if shared:
        raise ValueError(f"pool and template share documents: {sorted(shared)[:5]}")
    if exclude_keywords:
        needles = [k.lower() for k in exclude_keywords]
        for doc in pool.documents:
            if _contains_any(doc.text, needles, word_boundary=False):
                raise ValueError(
                    f"pool document {doc.id!r} contains an excluded keyword; "
                    "pool must be pre-filtered"
                )

    wanted: dict = {}
    for doc in template.documents:
        wanted[doc.year] = wanted.get(doc.year, 0) + 1
    by_year: dict = {}
    for doc in pool.documents:
        by_year.setdefault(doc.year, []).append(doc.id)

    rng = random.Random(seed)
    chosen: list[str] = []
    for year in sorted(wanted, key=_year_key):
        n = wanted[year]
        available = sorted(by_year.get(year, []))
        if len(available) < n:
            log.warn(
                "stratified_background_sample",
                "",
                f"year {year}: wanted {n} documents, pool has {len(available)}",
            )
            chosen.extend(available)
        else:
            chosen.extend(rng.sample(available, n))
    logger.info("sampled %d background documents for %d strata", len(chosen), len(wanted))
    return pool.restrict_documents(chosen)
