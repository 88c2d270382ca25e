"""Interchange I/O: document reading and atomic annotation emission.

One JSON object per line. Document records carry id/text/partition and
an optional year; annotation records carry the fields the analysis
engine validates on load. Every record is checked here first, so a bad
one aborts the run before anything lands at the output path.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

# Reserved frame_dist key for the probability mass outside the stored top-k.
REST_BUCKET = "__rest__"
PROB_TOL = 1e-6

ANNOTATION_FIELDS = (
    "doc_id",
    "span",
    "surface",
    "lemma",
    "is_metaphor",
    "frame",
    "domain",
    "domain_confidence",
)


class EmitError(ValueError):
    """A record violated the interchange contract; carries the record."""

    def __init__(self, message: str, record: Mapping | None = None):
        if record is not None:
            message = f"{message}; offending record: {json.dumps(record, ensure_ascii=False)}"
        super().__init__(message)
        self.record = dict(record) if record is not None else None


@dataclass(frozen=True)
class InputDocument:
    id: str
    text: str
    partition: str
    year: int | None = None


def read_documents(path: str | Path) -> list[InputDocument]:
    documents: list[InputDocument] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmitError(f"line {number}: not valid JSON ({exc})")
            for key in ("id", "text", "partition"):
                if key not in record:
                    raise EmitError(f"line {number}: document missing {key!r}", record)
            if record["id"] in seen:
                raise EmitError(f"line {number}: duplicate document id", record)
            seen.add(record["id"])
            documents.append(
                InputDocument(
                    id=record["id"],
                    text=record["text"],
                    partition=record["partition"],
                    year=record.get("year"),
                )
            )
    return documents


def sparse_frame_dist(
    labels: list[str], probs: Iterable[float], top_k: int = 3
) -> dict[str, float]:
    """Top-k probabilities plus a rest bucket that restores an exact unit sum.

    The bucket is computed as 1.0 minus the running sum in insertion
    order, so a reader summing entries in the same order recovers 1.0
    without float drift.
    """
    pairs = sorted(zip(labels, probs), key=lambda pair: -pair[1])[:top_k]
    dist: dict[str, float] = {}
    running = 0.0
    for label, prob in pairs:
        prob = float(prob)
        dist[label] = prob
        running += prob
    dist[REST_BUCKET] = max(0.0, 1.0 - running)
    return dist


def _check_prob(record: Mapping, key: str, value) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or math.isnan(value):
        raise EmitError(f"{key} is not a number", record)
    if not 0.0 <= value <= 1.0:
        raise EmitError(f"{key} {value} outside [0, 1]", record)


def validate_annotation(record: Mapping) -> None:
    for key in ANNOTATION_FIELDS:
        if key not in record:
            raise EmitError(f"annotation missing {key!r}", record)
    span = record["span"]
    if (
        not isinstance(span, (list, tuple))
        or len(span) != 2
        or not all(isinstance(x, int) for x in span)
    ):
        raise EmitError("span is not a pair of integers", record)
    start, end = span
    if start < 0 or end <= start:
        raise EmitError(f"bad span {list(span)}", record)
    if not isinstance(record["is_metaphor"], bool):
        raise EmitError("is_metaphor is not a boolean", record)
    _check_prob(record, "domain_confidence", record["domain_confidence"])
    if record.get("metaphor_prob") is not None:
        _check_prob(record, "metaphor_prob", record["metaphor_prob"])
    dist = record.get("frame_dist")
    if dist is None:
        return
    total = 0.0
    top = None
    for label, prob in dist.items():
        if prob < 0:
            raise EmitError(f"negative probability for {label!r}", record)
        total += prob
        if label != REST_BUCKET and (top is None or prob > top[1]):
            top = (label, prob)
    if abs(total - 1.0) > PROB_TOL:
        raise EmitError(f"frame_dist sums to {total}", record)
    if record["frame"] not in dist:
        raise EmitError(f"frame_dist omits the annotated frame {record['frame']!r}", record)
    if top is not None and dist[record["frame"]] < top[1]:
        raise EmitError(
            f"frame_dist argmax is {top[0]!r}, not the annotated frame", record
        )


def emit_annotations(records: Iterable[Mapping], path: str | Path) -> int:
    """Validate and write annotation records atomically; returns the count.

    The file appears at `path` only after every record passed: records
    stream to a temp file in the same directory, which is renamed over
    the target. On any violation the temp file is removed and nothing
    at `path` changes.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(
        prefix=path.name + ".", suffix=".tmp", dir=path.parent
    )
    count = 0
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for record in records:
                validate_annotation(record)
                fh.write(json.dumps(record, ensure_ascii=False))
                fh.write("\n")
                count += 1
        os.replace(temp_name, path)
    except BaseException:
        try:
            os.unlink(temp_name)
        except FileNotFoundError:
            pass
        raise
    return count
