"""Core corpus model: documents, metaphor annotations and validated corpora.

The JSON Lines interchange format defined here (one document or one
annotation per line, field names matching the dataclass fields) is the
contract between this engine and any external annotator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .taxonomy import LabelTaxonomy, TaxonomyError

# Reserved frame_dist key holding the renormalized probability mass of all
# frames outside the stored top-k. Never a real frame label.
REST_BUCKET = "__rest__"

PROB_TOL = 1e-6


class ValidationError(ValueError):
    """A record violated a corpus invariant.

    Carries the offending field and, when raised during file loading,
    the 1-based line number.
    """

    def __init__(self, message: str, field: str = "", line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        suffix = f" (field: {field})" if field else ""
        super().__init__(f"{prefix}{message}{suffix}")
        self.field = field
        self.line = line


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    partition: str
    year: int | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("document id is empty", field="id")

    def to_json(self) -> str:
        record: dict = {"id": self.id, "text": self.text, "partition": self.partition}
        if self.year is not None:
            record["year"] = self.year
        return json.dumps(record, ensure_ascii=False)

    @classmethod
    def from_dict(cls, record: Mapping, line: int | None = None) -> "Document":
        try:
            return cls(
                id=record["id"],
                text=record["text"],
                partition=record["partition"],
                year=record.get("year"),
            )
        except KeyError as exc:
            raise ValidationError("missing document field", field=exc.args[0], line=line)


@dataclass(frozen=True)
class MetaphorAnnotation:
    """One annotated metaphor instance, anchored to a character span."""

    doc_id: str
    span: tuple[int, int]
    surface: str
    lemma: str
    is_metaphor: bool
    frame: str
    domain: str
    domain_confidence: float
    metaphor_prob: float | None = None
    frame_dist: Mapping[str, float] | None = None
    target_referent: str | None = None

    def __post_init__(self):
        start, end = self.span
        if start < 0 or end <= start:
            raise ValidationError(f"bad span {self.span}", field="span")
        if not 0.0 <= self.domain_confidence <= 1.0:
            raise ValidationError(
                f"domain_confidence {self.domain_confidence} outside [0, 1]",
                field="domain_confidence",
            )
        if self.metaphor_prob is not None and not 0.0 <= self.metaphor_prob <= 1.0:
            raise ValidationError(
                f"metaphor_prob {self.metaphor_prob} outside [0, 1]", field="metaphor_prob"
            )
        if self.frame_dist is not None:
            object.__setattr__(self, "frame_dist", MappingProxyType(dict(self.frame_dist)))
        object.__setattr__(self, "span", (int(start), int(end)))

    def to_json(self) -> str:
        record: dict = {
            "doc_id": self.doc_id,
            "span": list(self.span),
            "surface": self.surface,
            "lemma": self.lemma,
            "is_metaphor": self.is_metaphor,
            "frame": self.frame,
            "domain": self.domain,
            "domain_confidence": self.domain_confidence,
        }
        if self.metaphor_prob is not None:
            record["metaphor_prob"] = self.metaphor_prob
        if self.frame_dist is not None:
            record["frame_dist"] = dict(self.frame_dist)
        if self.target_referent is not None:
            record["target_referent"] = self.target_referent
        return json.dumps(record, ensure_ascii=False)

    @classmethod
    def from_dict(cls, record: Mapping, line: int | None = None) -> "MetaphorAnnotation":
        try:
            span = record["span"]
            return cls(
                doc_id=record["doc_id"],
                span=(span[0], span[1]),
                surface=record["surface"],
                lemma=record["lemma"],
                is_metaphor=record["is_metaphor"],
                frame=record["frame"],
                domain=record["domain"],
                domain_confidence=record["domain_confidence"],
                metaphor_prob=record.get("metaphor_prob"),
                frame_dist=record.get("frame_dist"),
                target_referent=record.get("target_referent"),
            )
        except KeyError as exc:
            raise ValidationError("missing annotation field", field=exc.args[0], line=line)
        except ValidationError as exc:
            raise ValidationError(str(exc), field=exc.field, line=line)


def _check_frame_dist(ann: MetaphorAnnotation, frames: LabelTaxonomy, line: int | None = None):
    dist = ann.frame_dist
    if dist is None:
        return
    total = 0.0
    top = None
    for label, prob in dist.items():
        if prob < 0:
            raise ValidationError(
                f"negative probability {prob} for {label!r}", field="frame_dist", line=line
            )
        if label != REST_BUCKET:
            frames.require(label)
            if top is None or prob > top[1]:
                top = (label, prob)
        total += prob
    if abs(total - 1.0) > PROB_TOL:
        raise ValidationError(f"frame_dist sums to {total}", field="frame_dist", line=line)
    if ann.frame not in dist:
        raise ValidationError(
            f"frame_dist omits the annotated frame {ann.frame!r}", field="frame_dist", line=line
        )
    if dist[ann.frame] < top[1]:
        raise ValidationError(
            f"frame_dist argmax is {top[0]!r}, not the annotated frame {ann.frame!r}",
            field="frame_dist",
            line=line,
        )


class AnnotatedCorpus:
    """Immutable bundle of documents + annotations with invariants enforced.

    Every annotation is checked on construction: its doc_id resolves, the
    span lies inside the document and matches the surface text, and labels
    resolve against the frame/domain taxonomies.
    """

    def __init__(
        self,
        documents: Iterable[Document],
        annotations: Iterable[MetaphorAnnotation],
        frames: LabelTaxonomy,
        domains: LabelTaxonomy,
        partitions: Iterable[str] | None = None,
        _lines: Mapping[int, int] | None = None,
    ):
        self.documents: tuple[Document, ...] = tuple(documents)
        self.annotations: tuple[MetaphorAnnotation, ...] = tuple(annotations)
        self.frames = frames
        self.domains = domains

        self._doc_index: dict[str, Document] = {}
        for doc in self.documents:
            if doc.id in self._doc_index:
                raise ValidationError(f"duplicate document id {doc.id!r}", field="id")
            self._doc_index[doc.id] = doc

        found_partitions = {doc.partition for doc in self.documents}
        if partitions is None:
            self.partitions: frozenset[str] = frozenset(found_partitions)
        else:
            self.partitions = frozenset(partitions)
            extra = found_partitions - self.partitions
            if extra:
                raise ValidationError(
                    f"documents use undeclared partition tags: {sorted(extra)}", field="partition"
                )

        lines = _lines or {}
        for i, ann in enumerate(self.annotations):
            line = lines.get(i)
            doc = self._doc_index.get(ann.doc_id)
            if doc is None:
                raise ValidationError(
                    f"annotation references missing document {ann.doc_id!r}",
                    field="doc_id",
                    line=line,
                )
            start, end = ann.span
            if end > len(doc.text):
                raise ValidationError(
                    f"span {ann.span} exceeds document {doc.id!r} length {len(doc.text)}",
                    field="span",
                    line=line,
                )
            if doc.text[start:end] != ann.surface:
                raise ValidationError(
                    f"surface {ann.surface!r} != text slice {doc.text[start:end]!r}",
                    field="surface",
                    line=line,
                )
            try:
                frames.require(ann.frame)
            except TaxonomyError as exc:
                raise ValidationError(str(exc), field="frame", line=line)
            try:
                domains.require(ann.domain)
            except TaxonomyError as exc:
                raise ValidationError(str(exc), field="domain", line=line)
            _check_frame_dist(ann, frames, line=line)

    # -- counters ---------------------------------------------------------

    @property
    def doc_count(self) -> int:
        return len(self.documents)

    @property
    def annotation_count(self) -> int:
        return len(self.annotations)

    def partition_doc_counts(self) -> dict[str, int]:
        counts = {tag: 0 for tag in self.partitions}
        for doc in self.documents:
            counts[doc.partition] += 1
        return counts

    def partition_annotation_counts(self) -> dict[str, int]:
        counts = {tag: 0 for tag in self.partitions}
        for ann in self.annotations:
            counts[self.document(ann.doc_id).partition] += 1
        return counts

    # -- access -----------------------------------------------------------

    def document(self, doc_id: str) -> Document:
        return self._doc_index[doc_id]

    def has_document(self, doc_id: str) -> bool:
        return doc_id in self._doc_index

    def token_count(self) -> int:
        return sum(len(doc.text.split()) for doc in self.documents)

    # -- derived corpora ----------------------------------------------------

    def with_annotations(self, annotations: Iterable[MetaphorAnnotation]) -> "AnnotatedCorpus":
        """Same documents and taxonomies, different annotation set."""
        return AnnotatedCorpus(
            self.documents, annotations, self.frames, self.domains, self.partitions
        )

    def restrict_documents(self, doc_ids: Iterable[str]) -> "AnnotatedCorpus":
        keep = set(doc_ids)
        return AnnotatedCorpus(
            [d for d in self.documents if d.id in keep],
            [a for a in self.annotations if a.doc_id in keep],
            self.frames,
            self.domains,
        )

    def restrict_partition(self, tag: str) -> "AnnotatedCorpus":
        if tag not in self.partitions:
            raise KeyError(f"unknown partition tag {tag!r}; declared: {sorted(self.partitions)}")
        return self.restrict_documents(d.id for d in self.documents if d.partition == tag)

    def restrict_domain(self, domain: str) -> "AnnotatedCorpus":
        self.domains.require(domain)
        return self.with_annotations(a for a in self.annotations if a.domain == domain)


# -- interchange I/O -------------------------------------------------------


def write_documents(documents: Iterable[Document], path: str | Path):
    with open(path, "w", encoding="utf-8") as fh:
        for doc in documents:
            fh.write(doc.to_json() + "\n")


def write_annotations(annotations: Iterable[MetaphorAnnotation], path: str | Path):
    with open(path, "w", encoding="utf-8") as fh:
        for ann in annotations:
            fh.write(ann.to_json() + "\n")


def _read_jsonl(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"malformed JSON: {exc}", line=line_no)


def read_documents(path: str | Path) -> list[Document]:
    return [Document.from_dict(record, line=line) for line, record in _read_jsonl(path)]


def read_annotations(path: str | Path) -> tuple[list[MetaphorAnnotation], dict[int, int]]:
    """Returns the annotations plus an index -> file line map for error reporting."""
    annotations: list[MetaphorAnnotation] = []
    lines: dict[int, int] = {}
    for line, record in _read_jsonl(path):
        lines[len(annotations)] = line
        annotations.append(MetaphorAnnotation.from_dict(record, line=line))
    return annotations, lines
