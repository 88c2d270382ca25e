"""Multi-annotator label-selection batches.

A batch is a JSON file of samples; each sample offers a set of candidate
labels plus the NO_METAPHOR and OTHER_DOMAIN sentinels, and records the
selections (1 to 3 labels) each annotator made.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .taxonomy import NO_METAPHOR, OTHER_DOMAIN, LabelTaxonomy

MAX_SELECTIONS = 3


class BatchError(ValueError):
    pass


@dataclass(frozen=True)
class BatchSample:
    id: str
    sentence: str
    span: tuple[int, int]
    options: tuple[str, ...]
    # annotator id -> chosen labels, insertion order preserved
    selections: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def labels_of(self, annotator: str) -> tuple[str, ...]:
        return self.selections.get(annotator, ())


@dataclass(frozen=True)
class AnnotatorBatch:
    batch_id: str
    annotators: tuple[str, ...]
    samples: tuple[BatchSample, ...]

    def __post_init__(self):
        if len(set(self.annotators)) != len(self.annotators):
            raise BatchError(f"batch {self.batch_id!r}: duplicate annotator ids")
        seen = set()
        for sample in self.samples:
            if sample.id in seen:
                raise BatchError(f"batch {self.batch_id!r}: duplicate sample id {sample.id!r}")
            seen.add(sample.id)
            self._check_sample(sample)

    def _check_sample(self, sample: BatchSample):
        where = f"batch {self.batch_id!r} sample {sample.id!r}"
        allowed = set(sample.options) | {NO_METAPHOR, OTHER_DOMAIN}
        for annotator, labels in sample.selections.items():
            if annotator not in self.annotators:
                raise BatchError(f"{where}: unknown annotator {annotator!r}")
            if not 1 <= len(labels) <= MAX_SELECTIONS:
                raise BatchError(
                    f"{where}: annotator {annotator!r} selected {len(labels)} labels, "
                    f"expected 1 to {MAX_SELECTIONS}"
                )
            if len(set(labels)) != len(labels):
                raise BatchError(f"{where}: annotator {annotator!r} repeated a label")
            for label in labels:
                if label not in allowed:
                    raise BatchError(f"{where}: label {label!r} not among the sample options")
            if NO_METAPHOR in labels and len(labels) > 1:
                raise BatchError(
                    f"{where}: annotator {annotator!r} combined {NO_METAPHOR} with other labels"
                )


def _require(record: dict, key: str, where: str):
    if key not in record:
        raise BatchError(f"{where}: missing field {key!r}")
    return record[key]


def load_batch(path: str | Path, domains: LabelTaxonomy | None = None) -> AnnotatorBatch:
    """Parse and validate one batch file.

    When a domain taxonomy is given, every non-sentinel option must
    resolve in it.
    """
    path = Path(path)
    try:
        record = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BatchError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(record, dict):
        raise BatchError(f"{path}: expected a JSON object at top level")
    where = str(path)
    batch_id = _require(record, "batch_id", where)
    annotators = tuple(_require(record, "annotators", where))
    samples = []
    for i, raw in enumerate(_require(record, "samples", where)):
        sw = f"{path} sample #{i}"
        span = _require(raw, "span", sw)
        if not (isinstance(span, list) and len(span) == 2):
            raise BatchError(f"{sw}: span must be a [start, end) pair")
        options = tuple(_require(raw, "options", sw))
        if domains is not None:
            for label in options:
                if label not in (NO_METAPHOR, OTHER_DOMAIN):
                    domains.require(label)
        selections = {
            annotator: tuple(labels)
            for annotator, labels in _require(raw, "selections", sw).items()
        }
        samples.append(
            BatchSample(
                id=str(_require(raw, "id", sw)),
                sentence=_require(raw, "sentence", sw),
                span=(int(span[0]), int(span[1])),
                options=options,
                selections=selections,
            )
        )
    return AnnotatorBatch(batch_id=batch_id, annotators=annotators, samples=tuple(samples))


def load_batches(paths: list[str | Path], domains: LabelTaxonomy | None = None) -> list[AnnotatorBatch]:
    batches = [load_batch(p, domains) for p in paths]
    seen = set()
    for batch in batches:
        if batch.batch_id in seen:
            raise BatchError(f"duplicate batch id {batch.batch_id!r}")
        seen.add(batch.batch_id)
    return batches
