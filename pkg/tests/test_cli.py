import csv
import hashlib
import json

import pytest

from framekey import AnnotatedCorpus, Document, write_annotations, write_documents
from framekey.cli import main

from corpusgen import anchor_batch, build_corpus, random_batch, write_batch, write_corpus


@pytest.fixture(scope="module")
def disk_corpora(tmp_path_factory, planted_corpora):
    corpus1, corpus2 = planted_corpora
    root = tmp_path_factory.mktemp("cli_corpora")
    d1, a1 = write_corpus(corpus1, root, "target")
    d2, a2 = write_corpus(corpus2, root, "background")
    return {"d1": str(d1), "a1": str(a1), "d2": str(d2), "a2": str(a2)}


def _pair_args(paths):
    return [
        "--corpus1-documents", paths["d1"],
        "--corpus1-annotations", paths["a1"],
        "--corpus2-documents", paths["d2"],
        "--corpus2-annotations", paths["a2"],
    ]


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.startswith("framekey ")


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2


def test_annotate_end_to_end(tmp_path):
    docs = [
        Document(id="n1", text="A flood of complaints poured in.", partition="news"),
        Document(id="n2", text="Quiet afternoon tea.", partition="news"),
    ]
    docs_path = tmp_path / "docs.jsonl"
    write_documents(docs, docs_path)
    out = tmp_path / "anns.jsonl"
    code = main(["annotate", "--documents", str(docs_path), "--out", str(out)])
    assert code == 0
    records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert any(r["doc_id"] == "n1" and r["surface"] == "flood" for r in records)
    assert all(r["doc_id"] != "n2" for r in records)


def test_annotate_no_matches_exits_one(tmp_path, capsys):
    docs_path = tmp_path / "docs.jsonl"
    write_documents([Document(id="n1", text="zzz qqq xyzzy", partition="news")], docs_path)
    out = tmp_path / "anns.jsonl"
    code = main(["annotate", "--documents", str(docs_path), "--out", str(out)])
    assert code == 1
    assert "no lexicon entry matched" in capsys.readouterr().err


def test_filter_requires_some_filter(tmp_path, disk_corpora, capsys):
    code = main([
        "filter",
        "--documents", disk_corpora["d1"],
        "--annotations", disk_corpora["a1"],
        "--out-documents", str(tmp_path / "d.jsonl"),
        "--out-annotations", str(tmp_path / "a.jsonl"),
    ])
    assert code == 2
    assert "nothing to do" in capsys.readouterr().err


def test_filter_keywords_keeps_documents(tmp_path, disk_corpora):
    out_docs = tmp_path / "d.jsonl"
    out_anns = tmp_path / "a.jsonl"
    code = main([
        "filter",
        "--documents", disk_corpora["d1"],
        "--annotations", disk_corpora["a1"],
        "--keywords", "invasion",
        "--warnings", str(tmp_path / "w.jsonl"),
        "--out-documents", str(out_docs),
        "--out-annotations", str(out_anns),
    ])
    assert code == 0
    docs = out_docs.read_text(encoding="utf-8").splitlines()
    anns = out_anns.read_text(encoding="utf-8").splitlines()
    original_docs = len(open(disk_corpora["d1"], encoding="utf-8").read().splitlines())
    assert len(docs) == original_docs, "documents are carried through unchanged"
    assert 0 < len(anns) < 1000
    kept_docs = {json.loads(line)["doc_id"] for line in anns}
    for line in docs:
        doc = json.loads(line)
        if doc["id"] in kept_docs:
            assert "invasion" in doc["text"]


def test_missing_input_file_is_usage_error(tmp_path, capsys):
    code = main([
        "annotate",
        "--documents", str(tmp_path / "does_not_exist.jsonl"),
        "--out", str(tmp_path / "out.jsonl"),
    ])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_saliency_end_to_end_with_manifest(tmp_path, disk_corpora):
    out_csv = tmp_path / "saliency.csv"
    out_json = tmp_path / "saliency.json"
    out_fig = tmp_path / "figure.json"
    manifest_path = tmp_path / "manifest.json"
    code = main(
        ["saliency", *_pair_args(disk_corpora),
         "--out-csv", str(out_csv), "--out-json", str(out_json),
         "--out-figure", str(out_fig), "--manifest", str(manifest_path)]
    )
    assert code == 0
    with open(out_csv, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["label"] == "WAR" and rows[0]["significant"] == "true"
    assert rows[1]["label"] == "WATER" and rows[1]["significant"] == "false"
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    assert len(manifest["inputs"]) == 4
    digest = hashlib.sha256(out_csv.read_bytes()).hexdigest()
    assert manifest["outputs"][str(out_csv)] == digest
    assert manifest["settings"]["dimension"] == "domain"


def test_saliency_outputs_are_byte_identical_across_runs(tmp_path, disk_corpora):
    blobs = []
    for run in range(2):
        out_csv = tmp_path / f"s{run}.csv"
        out_json = tmp_path / f"s{run}.json"
        code = main(
            ["saliency", *_pair_args(disk_corpora),
             "--out-csv", str(out_csv), "--out-json", str(out_json)]
        )
        assert code == 0
        blobs.append((out_csv.read_bytes(), out_json.read_bytes()))
    assert blobs[0] == blobs[1]


def test_saliency_nested_frames_for_domain(tmp_path, disk_corpora):
    out_csv = tmp_path / "frames.csv"
    code = main(
        ["saliency", *_pair_args(disk_corpora), "--domain", "WAR",
         "--out-csv", str(out_csv)]
    )
    assert code == 0
    with open(out_csv, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["label"] == "Invading" and rows[0]["significant"] == "true"
    assert all(row["significant"] == "false" for row in rows[1:])
    # nested totals are the domain's own annotation counts
    assert int(rows[0]["N1"]) == 30 and int(rows[0]["N2"]) == 10


def test_saliency_no_rows_exits_one(disk_corpora, capsys):
    code = main(["saliency", *_pair_args(disk_corpora), "--min-count", "5000"])
    assert code == 1
    assert "no label meets the minimum count" in capsys.readouterr().err


def test_saliency_bad_threshold_is_usage_error(disk_corpora, capsys):
    code = main(["saliency", *_pair_args(disk_corpora), "--p-threshold", "1.5"])
    assert code == 2
    assert "p threshold must be in (0, 1)" in capsys.readouterr().err


def test_saliency_invalid_data_exits_three(tmp_path, disk_corpora, capsys):
    docs_path = tmp_path / "docs.jsonl"
    anns_path = tmp_path / "anns.jsonl"
    docs_path.write_text(
        json.dumps({"id": "x", "text": "short", "partition": "p"}) + "\n", encoding="utf-8"
    )
    anns_path.write_text(
        json.dumps(
            {
                "doc_id": "x",
                "span": [0, 50],
                "surface": "short",
                "lemma": "short",
                "is_metaphor": True,
                "frame": "Filling",
                "domain": "WATER",
                "domain_confidence": 0.9,
            }
        )
        + "\n",
        encoding="utf-8",
    )
    code = main(
        ["saliency",
         "--corpus1-documents", str(docs_path), "--corpus1-annotations", str(anns_path),
         "--corpus2-documents", disk_corpora["d2"], "--corpus2-annotations", disk_corpora["a2"]]
    )
    assert code == 3
    assert "error:" in capsys.readouterr().err


def test_config_file_precedence(tmp_path, disk_corpora):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("min_count = 5000\n", encoding="utf-8")
    assert main(["saliency", *_pair_args(disk_corpora), "--config", str(cfg)]) == 1
    # a command-line flag overrides the config value
    assert (
        main(
            ["saliency", *_pair_args(disk_corpora), "--config", str(cfg), "--min-count", "1"]
        )
        == 0
    )


def test_malformed_config_is_usage_error(tmp_path, disk_corpora, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("min_count\n", encoding="utf-8")
    code = main(["saliency", *_pair_args(disk_corpora), "--config", str(cfg)])
    assert code == 2
    assert "expected key=value" in capsys.readouterr().err


@pytest.fixture(scope="module")
def merged_corpus_paths(tmp_path_factory, planted_corpora, frames, domains):
    corpus1, corpus2 = planted_corpora
    merged = AnnotatedCorpus(
        documents=corpus1.documents + corpus2.documents,
        annotations=corpus1.annotations + corpus2.annotations,
        frames=frames,
        domains=domains,
    )
    root = tmp_path_factory.mktemp("cli_merged")
    d, a = write_corpus(merged, root, "merged")
    return str(d), str(a)


def test_contrast_between_partitions(tmp_path, merged_corpus_paths):
    docs_path, anns_path = merged_corpus_paths
    out_csv = tmp_path / "contrast.csv"
    code = main(
        ["contrast", "--documents", docs_path, "--annotations", anns_path,
         "--partition-a", "target", "--partition-b", "background",
         "--out-csv", str(out_csv)]
    )
    assert code == 0
    with open(out_csv, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["label"] == "WAR"
    assert rows[0]["significant"] == "true"
    assert rows[0]["direction"] == "corpus1"


def test_contrast_unknown_partition_is_usage_error(merged_corpus_paths, capsys):
    docs_path, anns_path = merged_corpus_paths
    code = main(
        ["contrast", "--documents", docs_path, "--annotations", anns_path,
         "--partition-a", "target", "--partition-b", "editorial"]
    )
    assert code == 2
    assert "unknown partition tag" in capsys.readouterr().err


def test_confusion_cli(tmp_path):
    batch_path = write_batch(anchor_batch(), tmp_path / "anchor.json")
    out_csv = tmp_path / "confusion.csv"
    out_json = tmp_path / "confusion.json"
    code = main(
        ["confusion", "--batches", str(batch_path),
         "--out-csv", str(out_csv), "--out-json", str(out_json)]
    )
    assert code == 0
    with open(out_csv, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["label_a"] == "BATTLE" and rows[0]["label_b"] == "WAR"
    assert int(rows[0]["count"]) == 33
    payload = json.loads(out_json.read_text(encoding="utf-8"))
    assert payload["mode"] == "within" and payload["n_samples"] == 40


def test_confusion_min_count_can_empty_the_table(tmp_path, capsys):
    batch_path = write_batch(anchor_batch(), tmp_path / "anchor.json")
    code = main(["confusion", "--batches", str(batch_path), "--min-count", "100"])
    assert code == 1
    assert "no label pair meets the minimum count" in capsys.readouterr().err


def test_agreement_cli(tmp_path):
    paths = [
        str(write_batch(random_batch(seed, batch_id=f"b{seed}"), tmp_path / f"b{seed}.json"))
        for seed in range(2)
    ]
    out_csv = tmp_path / "agreement.csv"
    queue = tmp_path / "queue.jsonl"
    code = main(
        ["agreement", "--batches", *paths, "--out-csv", str(out_csv), "--queue", str(queue)]
    )
    assert code == 0
    with open(out_csv, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["batch"] for r in rows] == ["b0", "b1", "mean"]
    for line in queue.read_text(encoding="utf-8").splitlines():
        assert set(json.loads(line)) == {"batch", "sample", "reason", "votes"}


def test_overlap_cli(tmp_path, frames, domains):
    spec = [("w", "Invading", "WAR", 2), ("b", "Invading", "BATTLE", 2), ("x", "Attack", "WAR", 1)]
    docs_path, anns_path = write_corpus(build_corpus(spec, frames, domains), tmp_path, "ov")
    out_json = tmp_path / "overlap.json"
    code = main(
        ["overlap", "--documents", str(docs_path), "--annotations", str(anns_path),
         "--domain-a", "BATTLE", "--domain-b", "WAR", "--out-json", str(out_json)]
    )
    assert code == 0
    payload = json.loads(out_json.read_text(encoding="utf-8"))
    assert payload["subsumed"] == "a_in_b"
    assert payload["overlap_ab"] == 1.0


def test_report_cli_writes_bundle(tmp_path, disk_corpora):
    out_dir = tmp_path / "bundle"
    code = main(["report", *_pair_args(disk_corpora), "--out-dir", str(out_dir)])
    assert code == 0
    names = {p.name for p in out_dir.iterdir()}
    assert {
        "domain_saliency.csv",
        "domain_saliency.json",
        "domain_figure.json",
        "frames_WAR.csv",
        "warnings.jsonl",
        "manifest.json",
    } <= names
    assert "frames_WATER.csv" not in names, "only significant domains get a nested table"
    with open(out_dir / "frames_WAR.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["label"] == "Invading"
    manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
    digest = hashlib.sha256((out_dir / "domain_saliency.csv").read_bytes()).hexdigest()
    assert manifest["outputs"][str(out_dir / "domain_saliency.csv")] == digest


@pytest.fixture()
def background_pool(tmp_path, frames, domains):
    pool_docs = [
        Document(id=f"p{i:02d}", text=f"plain pool text {i}", partition="pool", year=2015 + i % 2)
        for i in range(18)
    ]
    template_docs = [
        Document(id=f"t{i}", text=f"target text {i}", partition="target", year=2015 + i % 2)
        for i in range(5)
    ]
    pool_docs_path = tmp_path / "pool_docs.jsonl"
    pool_anns_path = tmp_path / "pool_anns.jsonl"
    template_path = tmp_path / "template_docs.jsonl"
    write_documents(pool_docs, pool_docs_path)
    write_annotations([], pool_anns_path)
    write_documents(template_docs, template_path)
    return str(pool_docs_path), str(pool_anns_path), str(template_path)


def test_sample_background_is_deterministic(tmp_path, background_pool):
    pool_docs, pool_anns, template = background_pool
    outputs = []
    for run in range(2):
        out_docs = tmp_path / f"sample{run}.jsonl"
        out_anns = tmp_path / f"sample{run}_anns.jsonl"
        code = main(
            ["sample-background",
             "--pool-documents", pool_docs, "--pool-annotations", pool_anns,
             "--template-documents", template, "--seed", "11",
             "--out-documents", str(out_docs), "--out-annotations", str(out_anns)]
        )
        assert code == 0
        outputs.append(out_docs.read_bytes())
    assert outputs[0] == outputs[1]
    sampled = [json.loads(line) for line in outputs[0].decode("utf-8").splitlines()]
    assert len(sampled) == 5
    years = sorted(doc["year"] for doc in sampled)
    assert years == [2015, 2015, 2015, 2016, 2016]


def test_sample_background_rejects_contaminated_pool(tmp_path, background_pool, capsys):
    pool_docs, pool_anns, template = background_pool
    code = main(
        ["sample-background",
         "--pool-documents", pool_docs, "--pool-annotations", pool_anns,
         "--template-documents", template, "--seed", "11",
         "--exclude-keywords", "pool",
         "--out-documents", str(tmp_path / "o.jsonl"),
         "--out-annotations", str(tmp_path / "oa.jsonl")]
    )
    assert code == 3
    assert "excluded keyword" in capsys.readouterr().err


def test_log_level_env_var_is_accepted(tmp_path, monkeypatch):
    monkeypatch.setenv("FRAMEKEY_LOG", "debug")
    docs_path = tmp_path / "docs.jsonl"
    write_documents([Document(id="n1", text="a flood of mail", partition="news")], docs_path)
    assert main(["annotate", "--documents", str(docs_path), "--out", str(tmp_path / "o.jsonl")]) == 0
