"""Desk-scale neural metaphor annotator emitting interchange JSON Lines."""

from .config import ConfigError, TrainConfig, load_train_config, metaphor_defaults
from .domains import DomainClassifier, FusionState, fuse
from .emit import EmitError, emit_annotations, read_documents, sparse_frame_dist
from .encoding import EncodingError, SepEncoding, encode_sep_input, tokenize
from .frames import FrameClassifier
from .metaphor import MetaphorDetector, blend
from .stack import AnnotatorStack, build_stack, train_toy_stack

__version__ = "0.1.0"

__all__ = [
    "AnnotatorStack",
    "ConfigError",
    "DomainClassifier",
    "EmitError",
    "EncodingError",
    "FrameClassifier",
    "FusionState",
    "MetaphorDetector",
    "SepEncoding",
    "TrainConfig",
    "blend",
    "build_stack",
    "emit_annotations",
    "encode_sep_input",
    "fuse",
    "load_train_config",
    "metaphor_defaults",
    "read_documents",
    "sparse_frame_dist",
    "tokenize",
    "train_toy_stack",
    "__version__",
]
