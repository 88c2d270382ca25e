"""Packaged starter taxonomies and lexicon."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .taxonomy import LabelTaxonomy, TaxonomyKind, load_taxonomy


def packaged_path(name: str) -> Path:
    """Filesystem path of a file shipped under framekey/data."""
    return Path(str(resources.files("framekey").joinpath("data", name)))


def default_frames() -> LabelTaxonomy:
    return load_taxonomy(packaged_path("frames.txt"), TaxonomyKind.FRAME)


def default_domains() -> LabelTaxonomy:
    return load_taxonomy(packaged_path("domains.txt"), TaxonomyKind.DOMAIN)


def default_lexicon_path() -> Path:
    return packaged_path("lexicon.csv")
