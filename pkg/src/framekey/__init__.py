"""Contrastive keyness analytics for metaphor source domains and frames."""

from .agreement import (
    AgreementReport,
    MajorityOutcome,
    agreement_report,
    majority_label,
    pairwise_overlap_agreement,
    strong_majority_rate,
)
from .batches import AnnotatorBatch, BatchError, BatchSample, load_batch, load_batches
from .config import load_config
from .confusion import (
    ConfusionRecord,
    ConfusionReport,
    CooccurrenceMode,
    Marginals,
    OverlapReport,
    cooccurrence_counts,
    frame_overlap,
    npmi,
    top_confusions,
)
from .corpus import (
    AnnotatedCorpus,
    Document,
    MetaphorAnnotation,
    ValidationError,
    read_annotations,
    read_documents,
    write_annotations,
    write_documents,
)
from .defaults import default_domains, default_frames, default_lexicon_path, packaged_path
from .ingestion import (
    CutoffTable,
    compute_cutoffs,
    filter_by_keywords,
    filter_by_target,
    filter_candidates,
    load_corpus,
    stratified_background_sample,
)
from .lexicon import LexiconEntry, LexiconError, annotate, load_lexicon
from .logs import WarningLog
from .saliency import (
    ContingencyCell,
    Dimension,
    Direction,
    SaliencyRecord,
    TotalsPolicy,
    build_contingency,
    chi2_critical,
    log_likelihood_ratio,
    make_cell,
    nested_frame_saliency,
    partition_contrast,
    saliency_table,
)
from .taxonomy import (
    NO_METAPHOR,
    OTHER_DOMAIN,
    SENTINEL_LABELS,
    LabelTaxonomy,
    TaxonomyError,
    TaxonomyKind,
    load_taxonomy,
)

__all__ = [
    "AgreementReport",
    "AnnotatedCorpus",
    "AnnotatorBatch",
    "BatchError",
    "BatchSample",
    "ConfusionRecord",
    "ConfusionReport",
    "ContingencyCell",
    "CooccurrenceMode",
    "CutoffTable",
    "Dimension",
    "Direction",
    "Document",
    "LabelTaxonomy",
    "LexiconEntry",
    "LexiconError",
    "MajorityOutcome",
    "Marginals",
    "MetaphorAnnotation",
    "NO_METAPHOR",
    "OTHER_DOMAIN",
    "OverlapReport",
    "SENTINEL_LABELS",
    "SaliencyRecord",
    "TaxonomyError",
    "TaxonomyKind",
    "TotalsPolicy",
    "ValidationError",
    "WarningLog",
    "agreement_report",
    "annotate",
    "build_contingency",
    "chi2_critical",
    "compute_cutoffs",
    "cooccurrence_counts",
    "default_domains",
    "default_frames",
    "default_lexicon_path",
    "filter_by_keywords",
    "filter_by_target",
    "filter_candidates",
    "frame_overlap",
    "load_batch",
    "load_batches",
    "load_config",
    "load_corpus",
    "load_lexicon",
    "load_taxonomy",
    "log_likelihood_ratio",
    "majority_label",
    "make_cell",
    "nested_frame_saliency",
    "npmi",
    "packaged_path",
    "pairwise_overlap_agreement",
    "partition_contrast",
    "read_annotations",
    "read_documents",
    "saliency_table",
    "stratified_background_sample",
    "strong_majority_rate",
    "top_confusions",
    "write_annotations",
    "write_documents",
]

__version__ = "0.1.0"
