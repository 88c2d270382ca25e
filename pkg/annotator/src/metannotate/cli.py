"""Command-line interface for the neural annotator.

Exit codes: 0 success, 2 usage or configuration error, 3 input data or
emitted records violated an invariant.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import metadata
from pathlib import Path

from .config import ConfigError, TrainConfig, load_train_config
from .emit import EmitError, emit_annotations, read_documents
from .encoding import EncodingError
from .stack import AnnotatorStack, toy_config, train_toy_stack
from .toydata import demo_documents, write_taxonomy, DOMAIN_LABELS, FRAME_LABELS

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def cmd_train_toy(args, config: TrainConfig) -> int:
    stack, scores = train_toy_stack(config=config)
    stack.save(args.out)
    out = Path(args.out)
    write_taxonomy(FRAME_LABELS, out / "frames.txt")
    write_taxonomy(DOMAIN_LABELS, out / "domains.txt")
    for task, score in sorted(scores.items()):
        print(f"{task}: {score:.3f}")
    print(f"saved stack to {out}")
    return EXIT_OK


def cmd_annotate(args, config: TrainConfig) -> int:
    stack = AnnotatorStack.load(args.model)
    documents = read_documents(args.documents)
    records = stack.annotate_documents(documents, batch_size=config.batch_size)
    count = emit_annotations(records, args.out)
    print(f"wrote {count} annotations for {len(documents)} documents to {args.out}")
    return EXIT_OK


def cmd_demo_docs(args, config: TrainConfig) -> int:
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in demo_documents():
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")
    print(f"wrote demo documents to {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metannotate",
        description="Neural metaphor annotator emitting interchange JSON Lines.",
    )
    try:
        version = metadata.version("metannotate")
    except metadata.PackageNotFoundError:
        version = "unknown"
    parser.add_argument("--version", action="version", version=f"%(prog)s {version}")
    parser.add_argument("--config", help="key=value settings file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-toy", help="train the desk-scale stack on the toy tasks")
    p.add_argument("--out", required=True, help="directory for weights and taxonomies")
    p.set_defaults(func=cmd_train_toy)

    p = sub.add_parser("annotate", help="annotate documents with a trained stack")
    p.add_argument("--model", required=True, help="stack directory from train-toy")
    p.add_argument("--documents", required=True, help="document JSON Lines file")
    p.add_argument("--out", required=True, help="annotation JSON Lines output")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("demo-docs", help="write a small demo document file")
    p.add_argument("--out", required=True, help="document JSON Lines output")
    p.set_defaults(func=cmd_demo_docs)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        base = toy_config() if args.command == "train-toy" else TrainConfig()
        config = load_train_config(args.config, base) if args.config else base
        return args.func(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EmitError, EncodingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
