"""Full annotator stack: frame, domain and metaphor models plus inference.

Each task owns its encoder, fine-tuned separately. Inference batches
candidate targets across documents: the frame classifier supplies a
distribution, the domain classifier consumes it through fusion and
reports a confidence, and the detector judges the blend. Only detected
metaphors become interchange records.
"""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass
from pathlib import Path

import torch

from .config import TrainConfig
from .domains import DomainClassifier
from .emit import InputDocument, sparse_frame_dist
from .encoder import TinyEncoder, collate
from .encoding import encode_sep_input
from .frames import FrameClassifier
from .metaphor import MetaphorDetector, blend
from .toydata import (
    DOMAIN_LABELS,
    FRAME_LABELS,
    ToyDomainExample,
    ToyExample,
    ToyMetaphorExample,
    domain_examples,
    frame_examples,
    metaphor_examples,
    target_lexicon,
)
from .training import make_batches, train_epochs

# overrides that let the tiny models overfit the toy tasks quickly
TOY_OVERRIDES = dict(learning_rate=5e-3, weight_decay=0.0, epochs=200)

STACK_WEIGHTS = "stack.pt"
STACK_META = "meta.json"


@dataclass
class AnnotatorStack:
    frame_clf: FrameClassifier
    domain_clf: DomainClassifier
    detector: MetaphorDetector
    lexicon: list[str]

    @property
    def frame_labels(self) -> list[str]:
        return self.frame_clf.labels

    @property
    def domain_labels(self) -> list[str]:
        return self.domain_clf.labels

    # -- inference --------------------------------------------------------

    def annotate_documents(
        self, documents: list[InputDocument], batch_size: int = 32
    ) -> list[dict]:
        """Annotate every lexicon hit in every document; metaphors only."""
        candidates = find_candidates(documents, self.lexicon)
        records: list[dict] = []
        for start in range(0, len(candidates), batch_size):
            chunk = candidates[start : start + batch_size]
            records.extend(self._annotate_batch(chunk))
        return records

    def _annotate_batch(self, chunk: list[tuple[InputDocument, int, int]]) -> list[dict]:
        if not chunk:
            return []
        encodings = [
            encode_sep_input(doc.text, (start, end)) for doc, start, end in chunk
        ]
        ids, target_mask = collate(encodings)
        frame_probs = self.frame_clf.predict_proba(ids, target_mask)
        domain_idx, alphas = self.domain_clf.predict(ids, target_mask, frame_probs)
        with torch.no_grad():
            e_words = self.detector.encoder.embed_tokens(ids, target_mask)
            blended = torch.stack(
                [
                    blend(
                        e_words[row],
                        self.domain_clf.source_embedding(int(domain_idx[row])),
                        float(alphas[row]),
                    )
                    for row in range(len(chunk))
                ]
            )
        is_metaphor, metaphor_probs = self.detector.predict(ids, target_mask, blended)
        records = []
        for row, (doc, start, end) in enumerate(chunk):
            if not bool(is_metaphor[row]):
                continue
            probs = [float(p) for p in frame_probs[row]]
            frame = self.frame_labels[probs.index(max(probs))]
            records.append(
                {
                    "doc_id": doc.id,
                    "span": [start, end],
                    "surface": doc.text[start:end],
                    "lemma": doc.text[start:end].lower(),
                    "is_metaphor": True,
                    "frame": frame,
                    "domain": self.domain_labels[int(domain_idx[row])],
                    "domain_confidence": float(alphas[row]),
                    "metaphor_prob": float(metaphor_probs[row]),
                    "frame_dist": sparse_frame_dist(self.frame_labels, probs),
                }
            )
        return records

    # -- persistence ------------------------------------------------------

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        torch.save(
            {
                "frame_clf": self.frame_clf.state_dict(),
                "domain_clf": self.domain_clf.state_dict(),
                "detector": self.detector.state_dict(),
            },
            directory / STACK_WEIGHTS,
        )
        meta = {
            "frame_labels": self.frame_labels,
            "domain_labels": self.domain_labels,
            "lexicon": self.lexicon,
        }
        (directory / STACK_META).write_text(
            json.dumps(meta, indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, directory: str | Path) -> "AnnotatorStack":
        directory = Path(directory)
        meta = json.loads((directory / STACK_META).read_text(encoding="utf-8"))
        stack = build_stack(meta["frame_labels"], meta["domain_labels"], meta["lexicon"])
        weights = torch.load(directory / STACK_WEIGHTS, weights_only=True)
        stack.frame_clf.load_state_dict(weights["frame_clf"])
        stack.domain_clf.load_state_dict(weights["domain_clf"])
        stack.detector.load_state_dict(weights["detector"])
        for model in (stack.frame_clf, stack.domain_clf, stack.detector):
            model.eval()
        return stack


def build_stack(
    frame_labels: list[str], domain_labels: list[str], lexicon: list[str]
) -> AnnotatorStack:
    torch.manual_seed(0)
    return AnnotatorStack(
        frame_clf=FrameClassifier(TinyEncoder(), list(frame_labels)),
        domain_clf=DomainClassifier(
            TinyEncoder(), list(domain_labels), n_frames=len(frame_labels)
        ),
        detector=MetaphorDetector(TinyEncoder()),
        lexicon=list(lexicon),
    )


def find_candidates(
    documents: list[InputDocument], lexicon: list[str]
) -> list[tuple[InputDocument, int, int]]:
    """Whole-word lexicon matches, in document order then position order."""
    if not lexicon:
        return []
    pattern = re.compile(
        r"\b(?:" + "|".join(re.escape(word) for word in sorted(lexicon)) + r")\b",
        re.IGNORECASE,
    )
    candidates = []
    for doc in documents:
        for match in pattern.finditer(doc.text):
            candidates.append((doc, match.start(), match.end()))
    return candidates


# -- toy training ---------------------------------------------------------


def _encode_examples(examples) -> tuple[torch.Tensor, torch.Tensor]:
    encodings = [encode_sep_input(ex.sentence, ex.target) for ex in examples]
    return collate(encodings)


def train_frame_toy(
    model: FrameClassifier, examples: list[ToyExample], config: TrainConfig
) -> list[float]:
    ids, target_mask = _encode_examples(examples)
    labels = torch.tensor([model.labels.index(ex.label) for ex in examples])
    batches = make_batches(len(examples), config.batch_size)

    def loss_fn(clf, batch):
        logits = clf(ids[batch], target_mask[batch])
        return torch.nn.functional.cross_entropy(logits, labels[batch])

    return train_epochs(model, batches, config, loss_fn)


def train_domain_toy(
    model: DomainClassifier, examples: list[ToyDomainExample], config: TrainConfig
) -> list[float]:
    ids, target_mask = _encode_examples(examples)
    labels = torch.tensor([model.labels.index(ex.label) for ex in examples])
    frame_dists = torch.tensor([ex.frame_dist for ex in examples])
    batches = make_batches(len(examples), config.batch_size)

    def loss_fn(clf, batch):
        logits = clf(ids[batch], target_mask[batch], frame_dists[batch])
        return torch.nn.functional.cross_entropy(logits, labels[batch])

    return train_epochs(model, batches, config, loss_fn)


def train_metaphor_toy(
    stack: AnnotatorStack, examples: list[ToyMetaphorExample], config: TrainConfig
) -> list[float]:
    """Train the detector against blends from the already-trained classifiers."""
    ids, target_mask = _encode_examples(examples)
    labels = torch.tensor([int(ex.is_metaphor) for ex in examples])
    frame_probs = stack.frame_clf.predict_proba(ids, target_mask)
    domain_idx, alphas = stack.domain_clf.predict(ids, target_mask, frame_probs)
    # upstream predictions are fixed inputs here, so detach their embeddings
    e_sources = torch.stack(
        [
            stack.domain_clf.source_embedding(int(index)).detach()
            for index in domain_idx
        ]
    )
    batches = make_batches(len(examples), config.batch_size)

    def loss_fn(detector, batch):
        e_words = detector.encoder.embed_tokens(ids[batch], target_mask[batch])
        blended = torch.stack(
            [
                blend(e_words[row], e_sources[index], float(alphas[index]))
                for row, index in enumerate(batch)
            ]
        )
        logits = detector(ids[batch], target_mask[batch], blended)
        return torch.nn.functional.cross_entropy(logits, labels[batch])

    return train_epochs(stack.detector, batches, config, loss_fn)


def toy_config(base: TrainConfig | None = None, **overrides) -> TrainConfig:
    config = base if base is not None else TrainConfig()
    merged = dict(TOY_OVERRIDES)
    merged.update(overrides)
    return dataclasses.replace(config, **merged)


def train_toy_stack(
    seed: int = 0, config: TrainConfig | None = None
) -> tuple[AnnotatorStack, dict[str, float]]:
    """Train all three models on the toy tasks; returns (stack, training scores)."""
    stack = build_stack(FRAME_LABELS, DOMAIN_LABELS, target_lexicon())
    if config is None:
        config = toy_config(TrainConfig(seed=seed))
    train_frame_toy(stack.frame_clf, frame_examples(), config)
    train_domain_toy(stack.domain_clf, domain_examples(), config)
    train_metaphor_toy(stack, metaphor_examples(), config)
    return stack, evaluate_toy_stack(stack)


def evaluate_toy_stack(stack: AnnotatorStack) -> dict[str, float]:
    return {
        "frame_accuracy": frame_accuracy(stack.frame_clf, frame_examples()),
        "domain_accuracy": domain_accuracy(stack.domain_clf, domain_examples()),
        "metaphor_f1": metaphor_f1(stack, metaphor_examples()),
    }


def frame_accuracy(model: FrameClassifier, examples: list[ToyExample]) -> float:
    ids, target_mask = _encode_examples(examples)
    predicted = model.predict_proba(ids, target_mask).argmax(dim=-1)
    hits = sum(
        int(model.labels[int(index)] == ex.label)
        for index, ex in zip(predicted, examples)
    )
    return hits / len(examples)


def domain_accuracy(
    model: DomainClassifier, examples: list[ToyDomainExample]
) -> float:
    ids, target_mask = _encode_examples(examples)
    frame_dists = torch.tensor([ex.frame_dist for ex in examples])
    indices, _ = model.predict(ids, target_mask, frame_dists)
    hits = sum(
        int(model.labels[int(index)] == ex.label)
        for index, ex in zip(indices, examples)
    )
    return hits / len(examples)


def metaphor_f1(stack: AnnotatorStack, examples: list[ToyMetaphorExample]) -> float:
    ids, target_mask = _encode_examples(examples)
    frame_probs = stack.frame_clf.predict_proba(ids, target_mask)
    domain_idx, alphas = stack.domain_clf.predict(ids, target_mask, frame_probs)
    with torch.no_grad():
        e_words = stack.detector.encoder.embed_tokens(ids, target_mask)
        blended = torch.stack(
            [
                blend(
                    e_words[row],
                    stack.domain_clf.source_embedding(int(domain_idx[row])),
                    float(alphas[row]),
                )
                for row in range(len(examples))
            ]
        )
    predicted, _ = stack.detector.predict(ids, target_mask, blended)
    tp = fp = fn = 0
    for flag, ex in zip(predicted, examples):
        if bool(flag) and ex.is_metaphor:
            tp += 1
        elif bool(flag):
            fp += 1
        elif ex.is_metaphor:
            fn += 1
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)