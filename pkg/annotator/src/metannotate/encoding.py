"""Target-aware input encoding.

A (sentence, target) pair becomes the token sequence
`[SEP] <sentence tokens> [SEP] <target tokens> [SEP]`, capped at a unit
budget. When over budget, sentence tokens drop from the right; the
target segment is never truncated, and a target that cannot fit at all
is an error. Token ids are stable hash buckets, so encoding needs no
fitted vocabulary and is deterministic across processes.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass

SEP_TOKEN = "[SEP]"
PAD_ID = 0
SEP_ID = 1
# ids 0 and 1 are reserved for padding and the separator
RESERVED_IDS = 2
DEFAULT_BUDGET = 256
DEFAULT_VOCAB_SIZE = 2048

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)


class EncodingError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    return [match.group().lower() for match in _TOKEN_RE.finditer(text)]


def token_id(token: str, vocab_size: int = DEFAULT_VOCAB_SIZE) -> int:
    if token == SEP_TOKEN:
        return SEP_ID
    bucket = zlib.crc32(token.encode("utf-8")) % (vocab_size - RESERVED_IDS)
    return bucket + RESERVED_IDS


@dataclass(frozen=True)
class SepEncoding:
    """Encoded pair: tokens with separators, ids, and the target positions."""

    tokens: tuple[str, ...]
    ids: tuple[int, ...]
    target_positions: tuple[int, ...]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


def encode_sep_input(
    sentence: str,
    target: str | tuple[int, int],
    budget: int = DEFAULT_BUDGET,
    vocab_size: int = DEFAULT_VOCAB_SIZE,
) -> SepEncoding:
    """Encode a sentence and its target span into one separator-delimited sequence."""
    if isinstance(target, tuple):
        start, end = target
        if not 0 <= start < end <= len(sentence):
            raise EncodingError(f"target span {target} outside the sentence")
        target_text = sentence[start:end]
    else:
        target_text = target
    sentence_tokens = tokenize(sentence)
    target_tokens = tokenize(target_text)
    if not target_tokens:
        raise EncodingError("target has no tokens")
    overhead = 3 + len(target_tokens)
    if overhead > budget:
        raise EncodingError(
            f"target needs {overhead} units, over the budget of {budget}"
        )
    keep = min(len(sentence_tokens), budget - overhead)
    sentence_tokens = sentence_tokens[:keep]
    tokens = [SEP_TOKEN, *sentence_tokens, SEP_TOKEN, *target_tokens, SEP_TOKEN]
    first_target = 2 + len(sentence_tokens)
    positions = tuple(range(first_target, first_target + len(target_tokens)))
    return SepEncoding(
        tokens=tuple(tokens),
        ids=tuple(token_id(token, vocab_size) for token in tokens),
        target_positions=positions,
    )
