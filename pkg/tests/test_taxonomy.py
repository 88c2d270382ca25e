import pytest

from framekey import (
    NO_METAPHOR,
    OTHER_DOMAIN,
    SENTINEL_LABELS,
    TaxonomyError,
    TaxonomyKind,
    load_taxonomy,
)


def test_load_taxonomy_reads_labels_in_order(tmp_path):
    path = tmp_path / "labels.txt"
    path.write_text("WATER\nWAR\n\nANIMAL\n", encoding="utf-8")
    tax = load_taxonomy(path, TaxonomyKind.DOMAIN)
    assert tax.labels == ("WATER", "WAR", "ANIMAL")
    assert len(tax) == 3
    assert "WAR" in tax
    assert "FIRE" not in tax


def test_load_taxonomy_version_defaults_to_filename(tmp_path):
    path = tmp_path / "domains-v2.txt"
    path.write_text("WATER\n", encoding="utf-8")
    assert load_taxonomy(path, TaxonomyKind.DOMAIN).version == "domains-v2.txt"
    assert load_taxonomy(path, TaxonomyKind.DOMAIN, version="x").version == "x"


def test_load_taxonomy_rejects_duplicates(tmp_path):
    path = tmp_path / "labels.txt"
    path.write_text("WATER\nWATER\n", encoding="utf-8")
    with pytest.raises(TaxonomyError, match="WATER"):
        load_taxonomy(path, TaxonomyKind.DOMAIN)


def test_load_taxonomy_rejects_empty(tmp_path):
    path = tmp_path / "labels.txt"
    path.write_text("\n\n", encoding="utf-8")
    with pytest.raises(TaxonomyError):
        load_taxonomy(path, TaxonomyKind.DOMAIN)


def test_require_raises_on_unknown_label(domains):
    domains.require("WATER")
    with pytest.raises(TaxonomyError, match="unknown domain label"):
        domains.require("NOT_A_DOMAIN")


def test_sentinels_are_not_taxonomy_members(domains, frames):
    assert SENTINEL_LABELS == {NO_METAPHOR, OTHER_DOMAIN}
    assert NO_METAPHOR not in domains
    assert OTHER_DOMAIN not in domains
    assert NO_METAPHOR not in frames
