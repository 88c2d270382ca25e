"""Deterministic lexicon-driven metaphor annotator.

Matches word tokens against a lemma lexicon whose entries carry a
semantic frame, a source domain, and a prior confidence. It trades
recall for reproducibility: the same documents and lexicon always give
byte-identical annotations, which makes it the reference producer for
the interchange format and the fixture generator for the analyses.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .corpus import AnnotatedCorpus, Document, MetaphorAnnotation
from .taxonomy import LabelTaxonomy

_TOKEN = re.compile(r"\w+", re.UNICODE)

LEXICON_FIELDS = ["lemma", "frame", "domain", "prior", "triggers", "tag"]


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class LexiconEntry:
    lemma: str
    frame: str
    domain: str
    prior: float
    # all triggers must appear (case-insensitive) somewhere in the document
    triggers: tuple[str, ...] = ()
    tag: str = ""

    def __post_init__(self):
        if not self.lemma:
            raise LexiconError("entry with empty lemma")
        if not 0.0 <= self.prior <= 1.0:
            raise LexiconError(f"{self.lemma!r}: prior {self.prior} outside [0, 1]")


def load_lexicon(
    path: str | Path, frames: LabelTaxonomy, domains: LabelTaxonomy
) -> list[LexiconEntry]:
    """Read a lexicon CSV; every frame and domain must resolve in its taxonomy."""
    path = Path(path)
    entries = []
    seen = set()
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != LEXICON_FIELDS:
            raise LexiconError(f"{path}: expected header {','.join(LEXICON_FIELDS)}")
        for i, row in enumerate(reader, start=2):
            where = f"{path} line {i}"
            try:
                prior = float(row["prior"])
            except ValueError as exc:
                raise LexiconError(f"{where}: prior {row['prior']!r} is not a number") from exc
            frames.require(row["frame"])
            domains.require(row["domain"])
            triggers = tuple(t for t in row["triggers"].split(";") if t)
            entry = LexiconEntry(
                lemma=row["lemma"].lower(),
                frame=row["frame"],
                domain=row["domain"],
                prior=prior,
                triggers=triggers,
                tag=row["tag"],
            )
            key = (entry.lemma, entry.frame, entry.domain)
            if key in seen:
                raise LexiconError(f"{where}: duplicate entry for {key}")
            seen.add(key)
            entries.append(entry)
    if not entries:
        raise LexiconError(f"{path}: lexicon is empty")
    return entries


def default_lemmatizer(token: str) -> str:
    return token.lower()


def _triggers_fire(entry: LexiconEntry, text_lower: str) -> bool:
    return all(trigger.lower() in text_lower for trigger in entry.triggers)


def annotate(
    documents: Sequence[Document],
    lexicon: Iterable[LexiconEntry],
    frames: LabelTaxonomy,
    domains: LabelTaxonomy,
    lemmatizer: Callable[[str], str] | None = None,
) -> AnnotatedCorpus:
    """Annotate every lexicon match in every document.

    At most one annotation per token: the entry with the highest prior
    wins, ties broken by (frame, domain) lexicographic order so output
    never depends on lexicon file order.
    """
    lemmatize = lemmatizer if lemmatizer is not None else default_lemmatizer
    by_lemma: dict[str, list[LexiconEntry]] = {}
    for entry in lexicon:
        by_lemma.setdefault(entry.lemma, []).append(entry)

    annotations = []
    for doc in documents:
        text_lower = doc.text.lower()
        for match in _TOKEN.finditer(doc.text):
            lemma = lemmatize(match.group())
            candidates = [
                e for e in by_lemma.get(lemma, ()) if _triggers_fire(e, text_lower)
            ]
            if not candidates:
                continue
            best = min(candidates, key=lambda e: (-e.prior, e.frame, e.domain))
            annotations.append(
                MetaphorAnnotation(
                    doc_id=doc.id,
                    span=(match.start(), match.end()),
                    surface=match.group(),
                    lemma=lemma,
                    is_metaphor=True,
                    metaphor_prob=best.prior,
                    frame=best.frame,
                    domain=best.domain,
                    domain_confidence=best.prior,
                )
            )
    return AnnotatedCorpus(
        documents=tuple(documents),
        annotations=tuple(annotations),
        frames=frames,
        domains=domains,
    )
