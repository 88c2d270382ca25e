"""Command-line interface.

Exit codes: 0 success, 1 the analysis ran but produced no rows,
2 usage or configuration error, 3 input data violated an invariant.
"""

from __future__ import annotations

import argparse
import sys
from importlib import metadata
from pathlib import Path

from . import config as cfgmod
from .agreement import agreement_report
from .batches import BatchError, load_batches
from .confusion import CooccurrenceMode, frame_overlap, top_confusions
from .corpus import (
    AnnotatedCorpus,
    ValidationError,
    read_documents,
    write_annotations,
    write_documents,
)
from .defaults import default_domains, default_frames, default_lexicon_path
from .ingestion import (
    CutoffTable,
    filter_by_keywords,
    filter_by_target,
    filter_candidates,
    load_corpus,
    stratified_background_sample,
)
from .lexicon import LexiconError, annotate, load_lexicon
from .logs import WarningLog, configure_logging
from .reports import (
    RunManifest,
    write_adjudication_queue,
    write_agreement_csv,
    write_confusion_csv,
    write_confusion_json,
    write_figure_data,
    write_overlap_json,
    write_saliency_csv,
    write_saliency_json,
)
from .saliency import (
    DEFAULT_MIN_COUNT,
    DEFAULT_P_THRESHOLD,
    Dimension,
    TotalsPolicy,
    nested_frame_saliency,
    partition_contrast,
    saliency_table,
)
from .taxonomy import LabelTaxonomy, TaxonomyError, TaxonomyKind, load_taxonomy

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_USAGE = 2
EXIT_DATA = 3

try:
    VERSION = metadata.version("framekey")
except metadata.PackageNotFoundError:
    VERSION = "0.0.0"


def _load_taxonomies(args) -> tuple[LabelTaxonomy, LabelTaxonomy]:
    frames = (
        load_taxonomy(args.frames, TaxonomyKind.FRAME) if args.frames else default_frames()
    )
    domains = (
        load_taxonomy(args.domains, TaxonomyKind.DOMAIN) if args.domains else default_domains()
    )
    return frames, domains


def _p_threshold(args, cfg) -> float:
    value = args.p_threshold
    if value is None:
        value = cfgmod.get_float(cfg, "p_threshold", DEFAULT_P_THRESHOLD)
    if not 0.0 < value < 1.0:
        raise cfgmod.ConfigError(f"p threshold must be in (0, 1), got {value}")
    return value


def _min_count(args, cfg) -> int:
    value = args.min_count
    if value is None:
        value = cfgmod.get_int(cfg, "min_count", DEFAULT_MIN_COUNT)
    if value < 1:
        raise cfgmod.ConfigError(f"min count must be at least 1, got {value}")
    return value


def _split_list(raw: str | None, cfg, key: str) -> list[str]:
    if raw is not None:
        return [item.strip() for item in raw.split(",") if item.strip()]
    return cfgmod.get_list(cfg, key)


def _new_manifest(args, command: str, **settings) -> RunManifest | None:
    if not getattr(args, "manifest", None):
        return None
    return RunManifest(command=command, version=VERSION, settings=settings)


def _finish_manifest(manifest: RunManifest | None, args, inputs, outputs):
    if manifest is None:
        return
    for path in inputs:
        if path:
            manifest.add_input(path)
    for path in outputs:
        if path:
            manifest.add_output(path)
    manifest.write(args.manifest)


def _write_warnings(args, log: WarningLog):
    if getattr(args, "warnings", None):
        log.write(args.warnings)


def _print_saliency(records, limit: int = 10):
    for record in records[:limit]:
        marker = "*" if record.significant else " "
        print(
            f"{marker} {record.label}: g2={record.g2:.4f} "
            f"O1={record.cell.o1}/{record.cell.n1} O2={record.cell.o2}/{record.cell.n2} "
            f"({record.direction.value})"
        )


def cmd_annotate(args, cfg) -> int:
    frames, domains = _load_taxonomies(args)
    lexicon_path = args.lexicon if args.lexicon else default_lexicon_path()
    entries = load_lexicon(lexicon_path, frames, domains)
    documents = read_documents(args.documents)
    corpus = annotate(documents, entries, frames, domains)
    write_annotations(corpus.annotations, args.out)
    manifest = _new_manifest(args, "annotate", lexicon=str(lexicon_path))
    _finish_manifest(manifest, args, [args.documents, lexicon_path], [args.out])
    print(f"{corpus.annotation_count} annotations over {corpus.doc_count} documents")
    if corpus.annotation_count == 0:
        print("no lexicon entry matched any document", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_filter(args, cfg) -> int:
    frames, domains = _load_taxonomies(args)
    corpus = load_corpus(args.documents, args.annotations, frames, domains)
    log = WarningLog()
    keywords = _split_list(args.keywords, cfg, "keywords")
    if keywords:
        word_boundary = args.word_boundary or cfgmod.get_bool(cfg, "word_boundary", False)
        corpus = filter_by_keywords(corpus, keywords, log=log, word_boundary=word_boundary)
    if args.cutoffs:
        corpus = filter_candidates(corpus, CutoffTable.read_csv(args.cutoffs), log=log)
    targets = _split_list(args.targets, cfg, "targets")
    if targets:
        case_sensitive = args.case_sensitive or cfgmod.get_bool(cfg, "case_sensitive", False)
        corpus = filter_by_target(corpus, targets, log=log, case_sensitive=case_sensitive)
    if not keywords and not args.cutoffs and not targets:
        raise cfgmod.ConfigError("nothing to do: give --keywords, --cutoffs, or --targets")
    write_documents(corpus.documents, args.out_documents)
    write_annotations(corpus.annotations, args.out_annotations)
    _write_warnings(args, log)
    manifest = _new_manifest(
        args, "filter", keywords=keywords, targets=targets, cutoffs=str(args.cutoffs or "")
    )
    _finish_manifest(
        manifest,
        args,
        [args.documents, args.annotations, args.cutoffs],
        [args.out_documents, args.out_annotations],
    )
    print(
        f"kept {corpus.doc_count} documents, {corpus.annotation_count} annotations "
        f"({len(log)} warnings)"
    )
    if corpus.annotation_count == 0:
        print("no annotations survive the filters", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_sample_background(args, cfg) -> int:
    frames, domains = _load_taxonomies(args)
    pool = load_corpus(args.pool_documents, args.pool_annotations, frames, domains)
    template_docs = read_documents(args.template_documents)
    template = AnnotatedCorpus(
        documents=tuple(template_docs), annotations=(), frames=frames, domains=domains
    )
    seed = args.seed if args.seed is not None else cfgmod.get_int(cfg, "seed", 0)
    exclude = _split_list(args.exclude_keywords, cfg, "exclude_keywords")
    log = WarningLog()
    sample = stratified_background_sample(
        pool, template, seed=seed, exclude_keywords=exclude or None, log=log
    )
    write_documents(sample.documents, args.out_documents)
    write_annotations(sample.annotations, args.out_annotations)
    _write_warnings(args, log)
    manifest = _new_manifest(args, "sample-background", exclude_keywords=exclude)
    if manifest is not None:
        manifest.seed = seed
    _finish_manifest(
        manifest,
        args,
        [args.pool_documents, args.pool_annotations, args.template_documents],
        [args.out_documents, args.out_annotations],
    )
    print(
        f"sampled {sample.doc_count}/{template.doc_count} documents "
        f"({len(log)} warnings)"
    )
    if sample.doc_count == 0:
        print("the sample is empty", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def _saliency_outputs(args, records, p_threshold: float, dimension: str) -> list:
    outputs = []
    if args.out_csv:
        write_saliency_csv(records, args.out_csv, p_threshold)
        outputs.append(args.out_csv)
    if args.out_json:
        write_saliency_json(records, args.out_json, p_threshold, dimension)
        outputs.append(args.out_json)
    if args.out_figure:
        write_figure_data(records, args.out_figure, dimension, p_threshold)
        outputs.append(args.out_figure)
    return outputs


def cmd_saliency(args, cfg) -> int:
    frames, domains = _load_taxonomies(args)
    corpus1 = load_corpus(args.corpus1_documents, args.corpus1_annotations, frames, domains)
    corpus2 = load_corpus(args.corpus2_documents, args.corpus2_annotations, frames, domains)
    p_threshold = _p_threshold(args, cfg)
    min_count = _min_count(args, cfg)
    bonferroni = args.bonferroni or cfgmod.get_bool(cfg, "bonferroni", False)
    totals = TotalsPolicy(args.totals)
    log = WarningLog()
    if args.domain:
        domains.require(args.domain)
        dimension = "frame"
        records = nested_frame_saliency(
            args.domain,
            corpus1,
            corpus2,
            p_threshold=p_threshold,
            min_count=min_count,
            bonferroni=bonferroni,
            log=log,
        )
    else:
        dimension = args.dimension or cfgmod.get_str(cfg, "dimension", "domain")
        records = saliency_table(
            corpus1,
            corpus2,
            Dimension(dimension),
            p_threshold=p_threshold,
            min_count=min_count,
            totals_policy=totals,
            bonferroni=bonferroni,
        )
    outputs = _saliency_outputs(args, records, p_threshold, dimension)
    _write_warnings(args, log)
    manifest = _new_manifest(
        args,
        "saliency",
        dimension=dimension,
        domain=args.domain or "",
        min_count=min_count,
        bonferroni=bonferroni,
        totals=totals.value,
    )
    if manifest is not None:
        manifest.p_threshold = p_threshold
    _finish_manifest(
        manifest,
        args,
        [
            args.corpus1_documents,
            args.corpus1_annotations,
            args.corpus2_documents,
            args.corpus2_annotations,
        ],
        outputs,
    )
    _print_saliency(records)
    if not records:
        print("no label meets the minimum count", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_contrast(args, cfg) -> int:
    frames, domains = _load_taxonomies(args)
    corpus = load_corpus(args.documents, args.annotations, frames, domains)
    p_threshold = _p_threshold(args, cfg)
    min_count = _min_count(args, cfg)
    bonferroni = args.bonferroni or cfgmod.get_bool(cfg, "bonferroni", False)
    dimension = args.dimension or cfgmod.get_str(cfg, "dimension", "domain")
    log = WarningLog()
    try:
        records = partition_contrast(
            corpus,
            args.partition_a,
            args.partition_b,
            dimension=Dimension(dimension),
            domain=args.domain,
            p_threshold=p_threshold,
            min_count=min_count,
            bonferroni=bonferroni,
            log=log,
        )
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    if args.domain:
        dimension = "frame"
    outputs = _saliency_outputs(args, records, p_threshold, dimension)
    _write_warnings(args, log)
    manifest = _new_manifest(
        args,
        "contrast",
        partition_a=args.partition_a,
        partition_b=args.partition_b,
        dimension=dimension,
        domain=args.domain or "",
        min_count=min_count,
    )
    if manifest is not None:
        manifest.p_threshold = p_threshold
    _finish_manifest(manifest, args, [args.documents, args.annotations], outputs)
    _print_saliency(records)
    if not records:
        print("no label meets the minimum count", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_confusion(args, cfg) -> int:
    domains = (
        load_taxonomy(args.domains, TaxonomyKind.DOMAIN) if args.domains else None
    )
    batches = load_batches(args.batches, domains)
    mode = CooccurrenceMode(args.mode or cfgmod.get_str(cfg, "mode", "within"))
    min_count = args.min_count if args.min_count is not None else cfgmod.get_int(
        cfg, "min_count", 1
    )
    report = top_confusions(batches, mode=mode, min_count=min_count)
    outputs = []
    if args.out_csv:
        write_confusion_csv(report, args.out_csv)
        outputs.append(args.out_csv)
    if args.out_json:
        write_confusion_json(report, args.out_json)
        outputs.append(args.out_json)
    manifest = _new_manifest(args, "confusion", mode=mode.value, min_count=min_count)
    _finish_manifest(manifest, args, list(args.batches), outputs)
    for record in report.records[:10]:
        print(
            f"{record.label_a} ~ {record.label_b}: count={record.count} "
            f"npmi={record.npmi:.4f} weighted={record.npmi_weighted:.4f}"
        )
    if not report.records:
        print("no label pair meets the minimum count", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_agreement(args, cfg) -> int:
    batches = load_batches(args.batches)
    quorum = args.quorum if args.quorum is not None else cfgmod.get_int(cfg, "quorum", 3)
    log = WarningLog()
    reports = [agreement_report(batch, quorum=quorum, log=log) for batch in batches]
    outputs = []
    if args.out_csv:
        write_agreement_csv(reports, args.out_csv)
        outputs.append(args.out_csv)
    if args.queue:
        write_adjudication_queue(reports, args.queue)
        outputs.append(args.queue)
    _write_warnings(args, log)
    manifest = _new_manifest(args, "agreement", quorum=quorum)
    _finish_manifest(manifest, args, list(args.batches), outputs)
    for report in reports:
        print(
            f"{report.batch_id}: agreement={report.agreement_rate:.4f} "
            f"majority={report.strong_majority_rate:.4f} "
            f"unresolved={len(report.adjudication_queue)}"
        )
    mean_agree = sum(r.agreement_rate for r in reports) / len(reports)
    mean_major = sum(r.strong_majority_rate for r in reports) / len(reports)
    print(f"mean: agreement={mean_agree:.4f} majority={mean_major:.4f}")
    return EXIT_OK


def _slug(label: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in label)


def cmd_report(args, cfg) -> int:
    frames, domains = _load_taxonomies(args)
    corpus1 = load_corpus(args.corpus1_documents, args.corpus1_annotations, frames, domains)
    corpus2 = load_corpus(args.corpus2_documents, args.corpus2_annotations, frames, domains)
    p_threshold = _p_threshold(args, cfg)
    min_count = _min_count(args, cfg)
    bonferroni = args.bonferroni or cfgmod.get_bool(cfg, "bonferroni", False)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    records = saliency_table(
        corpus1,
        corpus2,
        Dimension.DOMAIN,
        p_threshold=p_threshold,
        min_count=min_count,
        bonferroni=bonferroni,
    )
    outputs = []
    for name, writer in (
        ("domain_saliency.csv", lambda p: write_saliency_csv(records, p, p_threshold)),
        ("domain_saliency.json", lambda p: write_saliency_json(records, p, p_threshold, "domain")),
        ("domain_figure.json", lambda p: write_figure_data(records, p, "domain", p_threshold)),
    ):
        path = out_dir / name
        writer(path)
        outputs.append(path)

    log = WarningLog()
    for record in records:
        if not record.significant:
            continue
        nested = nested_frame_saliency(
            record.label,
            corpus1,
            corpus2,
            p_threshold=p_threshold,
            min_count=min_count,
            bonferroni=bonferroni,
            log=log,
        )
        if not nested:
            continue
        path = out_dir / f"frames_{_slug(record.label)}.csv"
        write_saliency_csv(nested, path, p_threshold)
        outputs.append(path)
    warn_path = out_dir / "warnings.jsonl"
    log.write(warn_path)
    outputs.append(warn_path)

    manifest = RunManifest(
        command="report",
        version=VERSION,
        p_threshold=p_threshold,
        settings={"min_count": min_count, "bonferroni": bonferroni},
    )
    for path in (
        args.corpus1_documents,
        args.corpus1_annotations,
        args.corpus2_documents,
        args.corpus2_annotations,
    ):
        manifest.add_input(path)
    for path in outputs:
        manifest.add_output(path)
    manifest.write(out_dir / "manifest.json")

    _print_saliency(records)
    if not records:
        print("no domain meets the minimum count", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_overlap(args, cfg) -> int:
    frames, domains = _load_taxonomies(args)
    corpus = load_corpus(args.documents, args.annotations, frames, domains)
    domains.require(args.domain_a)
    domains.require(args.domain_b)
    report = frame_overlap(
        corpus, args.domain_a, args.domain_b, min_frame_count=args.min_frame_count
    )
    outputs = []
    if args.out_json:
        write_overlap_json(report, args.out_json)
        outputs.append(args.out_json)
    manifest = _new_manifest(
        args, "overlap", domain_a=args.domain_a, domain_b=args.domain_b
    )
    _finish_manifest(manifest, args, [args.documents, args.annotations], outputs)
    print(
        f"{report.domain_a} -> {report.domain_b}: {report.overlap_ab:.4f} "
        f"({len(report.frames_a)} vs {len(report.frames_b)} frames, "
        f"subsumed={report.subsumed or 'no'})"
    )
    return EXIT_OK


def _add_taxonomy_args(parser):
    parser.add_argument("--frames", help="frame taxonomy file (default: packaged)")
    parser.add_argument("--domains", help="domain taxonomy file (default: packaged)")


def _add_common_args(parser):
    parser.add_argument("--config", help="key=value settings file")
    parser.add_argument("--manifest", help="write a run manifest to this path")
    parser.add_argument("--warnings", help="write structured warnings (JSON Lines)")


def _add_corpus_pair_args(parser):
    parser.add_argument("--corpus1-documents", required=True)
    parser.add_argument("--corpus1-annotations", required=True)
    parser.add_argument("--corpus2-documents", required=True)
    parser.add_argument("--corpus2-annotations", required=True)


def _add_stat_args(parser):
    parser.add_argument("--p-threshold", type=float, help="significance threshold (default 0.05)")
    parser.add_argument("--min-count", type=int, help="minimum combined count (default 5)")
    parser.add_argument("--bonferroni", action="store_true", help="divide the threshold by the label count")


def _add_saliency_out_args(parser):
    parser.add_argument("--out-csv")
    parser.add_argument("--out-json")
    parser.add_argument("--out-figure", help="column-oriented JSON for plotting")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framekey",
        description="Contrastive keyness analytics over metaphor annotations",
    )
    parser.add_argument("--version", action="version", version=f"framekey {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="run the lexicon annotator over documents")
    p.add_argument("--documents", required=True)
    p.add_argument("--lexicon", help="lexicon CSV (default: packaged)")
    p.add_argument("--out", required=True, help="annotations JSON Lines output")
    _add_taxonomy_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("filter", help="keyword, confidence-cutoff, and target filters")
    p.add_argument("--documents", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--keywords", help="comma-separated discourse keywords")
    p.add_argument("--word-boundary", action="store_true")
    p.add_argument("--cutoffs", help="per-domain confidence cutoff CSV")
    p.add_argument("--targets", help="comma-separated target-referent substrings")
    p.add_argument("--case-sensitive", action="store_true")
    p.add_argument("--out-documents", required=True)
    p.add_argument("--out-annotations", required=True)
    _add_taxonomy_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("sample-background", help="seeded per-year stratified sample")
    p.add_argument("--pool-documents", required=True)
    p.add_argument("--pool-annotations", required=True)
    p.add_argument("--template-documents", required=True, help="corpus whose per-year counts to match")
    p.add_argument("--seed", type=int)
    p.add_argument("--exclude-keywords", help="comma-separated keywords that must not occur in the pool")
    p.add_argument("--out-documents", required=True)
    p.add_argument("--out-annotations", required=True)
    _add_taxonomy_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_sample_background)

    p = sub.add_parser("saliency", help="keyness table between two corpora")
    _add_corpus_pair_args(p)
    p.add_argument("--dimension", choices=["domain", "frame"])
    p.add_argument("--domain", help="restrict to one domain and contrast frames")
    p.add_argument("--totals", choices=["annotations", "tokens"], default="annotations")
    _add_stat_args(p)
    _add_saliency_out_args(p)
    _add_taxonomy_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_saliency)

    p = sub.add_parser("contrast", help="keyness between two partitions of one corpus")
    p.add_argument("--documents", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--partition-a", required=True)
    p.add_argument("--partition-b", required=True)
    p.add_argument("--dimension", choices=["domain", "frame"])
    p.add_argument("--domain", help="restrict to one domain and contrast frames")
    _add_stat_args(p)
    _add_saliency_out_args(p)
    _add_taxonomy_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_contrast)

    p = sub.add_parser("confusion", help="label co-selection NPMI over batches")
    p.add_argument("--batches", nargs="+", required=True)
    p.add_argument("--mode", choices=["within", "across"])
    p.add_argument("--min-count", type=int, help="minimum pair count (default 1)")
    p.add_argument("--domains", help="validate batch options against this taxonomy")
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    _add_common_args(p)
    p.set_defaults(func=cmd_confusion)

    p = sub.add_parser("agreement", help="annotator agreement and majority votes")
    p.add_argument("--batches", nargs="+", required=True)
    p.add_argument("--quorum", type=int, help="sole-label votes needed (default 3)")
    p.add_argument("--out-csv")
    p.add_argument("--queue", help="adjudication queue JSON Lines output")
    _add_common_args(p)
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("overlap", help="frame-inventory overlap between two domains")
    p.add_argument("--documents", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--domain-a", required=True)
    p.add_argument("--domain-b", required=True)
    p.add_argument("--min-frame-count", type=int, default=1)
    p.add_argument("--out-json")
    _add_taxonomy_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("report", help="full contrastive report into a directory")
    _add_corpus_pair_args(p)
    p.add_argument("--out-dir", required=True)
    _add_stat_args(p)
    _add_taxonomy_args(p)
    _add_common_args(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = cfgmod.load_config(args.config) if getattr(args, "config", None) else {}
        return args.func(args, cfg)
    except cfgmod.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, TaxonomyError, BatchError, LexiconError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
