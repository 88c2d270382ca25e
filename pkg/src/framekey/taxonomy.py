"""Label taxonomies for semantic frames and metaphor source domains.

Labels are opaque strings compared exactly: case, spaces and underscores
all matter ("OBJECT HANDLING" and "Object_handling" are different labels).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

# Sentinel options shown to annotators alongside real domain labels.
# They never enter taxonomies, confusion pairs or saliency tables.
NO_METAPHOR = "NO_METAPHOR"
OTHER_DOMAIN = "OTHER_DOMAIN"
SENTINEL_LABELS = frozenset({NO_METAPHOR, OTHER_DOMAIN})


class TaxonomyKind(Enum):
    FRAME = "frame"
    DOMAIN = "domain"


class TaxonomyError(ValueError):
    """Raised when a taxonomy file or label lookup is invalid."""


@dataclass(frozen=True)
class LabelTaxonomy:
    """An ordered, duplicate-free set of label strings."""

    kind: TaxonomyKind
    labels: tuple[str, ...]
    version: str = ""
    _index: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", frozenset(self.labels))
        if len(self._index) != len(self.labels):
            seen = set()
            for label in self.labels:
                if label in seen:
                    raise TaxonomyError(f"duplicate label: {label!r}")
                seen.add(label)
        if any(not label for label in self.labels):
            raise TaxonomyError("empty label string")

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def require(self, label: str) -> str:
        if label not in self._index:
            raise TaxonomyError(f"unknown {self.kind.value} label: {label!r}")
        return label


def load_taxonomy(path: str | Path, kind: TaxonomyKind, version: str = "") -> LabelTaxonomy:
    """Load a newline-delimited label list, preserving file order.

    Blank lines are skipped; anything else is a label verbatim.
    Duplicate or empty files are hard errors.
    """
    path = Path(path)
    labels: list[str] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            label = line.rstrip("\n").rstrip("\r")
            if not label.strip():
                continue
            if label in seen:
                raise TaxonomyError(f"duplicate label in {path}: {label!r}")
            seen.add(label)
            labels.append(label)
    if not labels:
        raise TaxonomyError(f"taxonomy file is empty: {path}")
    return LabelTaxonomy(kind=kind, labels=tuple(labels), version=version or path.name)
