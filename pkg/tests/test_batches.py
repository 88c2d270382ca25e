import json

import pytest

from framekey import BatchError, TaxonomyError, load_batch, load_batches


def batch_record(**overrides):
    base = {
        "batch_id": "b1",
        "annotators": ["a1", "a2", "a3", "a4"],
        "samples": [
            {
                "id": "s1",
                "sentence": "a flood of complaints",
                "span": [2, 7],
                "options": ["WATER", "WAR"],
                "selections": {"a1": ["WATER"], "a2": ["WATER", "WAR"], "a3": ["NO_METAPHOR"]},
            }
        ],
    }
    base.update(overrides)
    return base


def write_batch(tmp_path, record, name="batch.json"):
    path = tmp_path / name
    path.write_text(json.dumps(record), encoding="utf-8")
    return path


def test_load_valid_batch(tmp_path):
    batch = load_batch(write_batch(tmp_path, batch_record()))
    assert batch.batch_id == "b1"
    assert batch.annotators == ("a1", "a2", "a3", "a4")
    sample = batch.samples[0]
    assert sample.span == (2, 7)
    assert sample.labels_of("a2") == ("WATER", "WAR")
    assert sample.labels_of("a4") == ()


def test_selection_count_limits(tmp_path):
    record = batch_record()
    record["samples"][0]["options"] = ["WATER", "WAR", "ANIMAL", "FIRE"]
    record["samples"][0]["selections"]["a1"] = ["WATER", "WAR", "ANIMAL", "FIRE"]
    with pytest.raises(BatchError, match="expected 1 to 3"):
        load_batch(write_batch(tmp_path, record))
    record["samples"][0]["selections"]["a1"] = []
    with pytest.raises(BatchError, match="expected 1 to 3"):
        load_batch(write_batch(tmp_path, record))


def test_no_metaphor_must_be_exclusive(tmp_path):
    record = batch_record()
    record["samples"][0]["selections"]["a1"] = ["NO_METAPHOR", "WATER"]
    with pytest.raises(BatchError, match="NO_METAPHOR"):
        load_batch(write_batch(tmp_path, record))


def test_other_domain_may_combine(tmp_path):
    record = batch_record()
    record["samples"][0]["selections"]["a1"] = ["OTHER_DOMAIN", "WATER"]
    batch = load_batch(write_batch(tmp_path, record))
    assert batch.samples[0].labels_of("a1") == ("OTHER_DOMAIN", "WATER")


def test_selection_must_come_from_options(tmp_path):
    record = batch_record()
    record["samples"][0]["selections"]["a1"] = ["ANIMAL"]
    with pytest.raises(BatchError, match="not among the sample options"):
        load_batch(write_batch(tmp_path, record))


def test_unknown_annotator_rejected(tmp_path):
    record = batch_record()
    record["samples"][0]["selections"]["a9"] = ["WATER"]
    with pytest.raises(BatchError, match="unknown annotator"):
        load_batch(write_batch(tmp_path, record))


def test_repeated_label_rejected(tmp_path):
    record = batch_record()
    record["samples"][0]["selections"]["a1"] = ["WATER", "WATER"]
    with pytest.raises(BatchError, match="repeated"):
        load_batch(write_batch(tmp_path, record))


def test_duplicate_sample_ids_rejected(tmp_path):
    record = batch_record()
    record["samples"].append(dict(record["samples"][0]))
    with pytest.raises(BatchError, match="duplicate sample id"):
        load_batch(write_batch(tmp_path, record))


def test_missing_field_rejected(tmp_path):
    record = batch_record()
    del record["samples"][0]["options"]
    with pytest.raises(BatchError, match="options"):
        load_batch(write_batch(tmp_path, record))


def test_malformed_json_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(BatchError, match="not valid JSON"):
        load_batch(path)
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(BatchError, match="JSON object"):
        load_batch(path)


def test_options_validated_against_taxonomy(tmp_path, domains):
    record = batch_record()
    record["samples"][0]["options"] = ["WATER", "NOT_A_DOMAIN"]
    record["samples"][0]["selections"] = {"a1": ["WATER"]}
    with pytest.raises(TaxonomyError, match="NOT_A_DOMAIN"):
        load_batch(write_batch(tmp_path, record), domains)
    good = load_batch(write_batch(tmp_path, batch_record()), domains)
    assert good.batch_id == "b1"


def test_load_batches_rejects_duplicate_batch_ids(tmp_path):
    p1 = write_batch(tmp_path, batch_record(), "b1.json")
    p2 = write_batch(tmp_path, batch_record(), "b2.json")
    with pytest.raises(BatchError, match="duplicate batch id"):
        load_batches([p1, p2])
    record = batch_record(batch_id="b2")
    p2 = write_batch(tmp_path, record, "b2.json")
    assert [b.batch_id for b in load_batches([p1, p2])] == ["b1", "b2"]
