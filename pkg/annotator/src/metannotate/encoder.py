"""Desk-scale sentence encoder.

A small embedding plus bidirectional GRU stands in for a pretrained
transformer so the full stack trains on a CPU in seconds. It exposes
the same contract a larger encoder would: per-token states, a pooled
sentence vector, and a pooled target vector.
"""

from __future__ import annotations

import torch
from torch import nn

from .encoding import DEFAULT_VOCAB_SIZE, PAD_ID, SepEncoding


def collate(encodings: list[SepEncoding]) -> tuple[torch.Tensor, torch.Tensor]:
    """Pad encodings into (ids, target_mask) long/float tensors."""
    if not encodings:
        raise ValueError("no encodings to collate")
    width = max(len(enc) for enc in encodings)
    ids = torch.full((len(encodings), width), PAD_ID, dtype=torch.long)
    target_mask = torch.zeros((len(encodings), width))
    for row, enc in enumerate(encodings):
        ids[row, : len(enc)] = torch.tensor(enc.ids, dtype=torch.long)
        for position in enc.target_positions:
            target_mask[row, position] = 1.0
    return ids, target_mask


class TinyEncoder(nn.Module):
    def __init__(
        self,
        vocab_size: int = DEFAULT_VOCAB_SIZE,
        embed_dim: int = 32,
        hidden_dim: int = 16,
    ):
        super().__init__()
        self.embed_dim = embed_dim
        self.output_dim = 2 * hidden_dim
        self.embedding = nn.Embedding(vocab_size, embed_dim, padding_idx=PAD_ID)
        self.rnn = nn.GRU(
            embed_dim, hidden_dim, batch_first=True, bidirectional=True
        )

    def forward(
        self, ids: torch.Tensor, target_mask: torch.Tensor
    ) -> tuple[torch.Tensor, torch.Tensor]:
        """Return (pooled sentence state, pooled target state), both (B, output_dim)."""
        pad_mask = (ids != PAD_ID).float()
        states, _ = self.rnn(self.embedding(ids))
        pooled = _masked_mean(states, pad_mask)
        target = _masked_mean(states, target_mask.float())
        return pooled, target

    def embed_tokens(self, ids: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
        """Mean static embedding of the masked tokens, (B, embed_dim)."""
        return _masked_mean(self.embedding(ids), mask.float())


def _masked_mean(states: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    weights = mask.unsqueeze(-1)
    totals = (states * weights).sum(dim=1)
    counts = weights.sum(dim=1).clamp(min=1.0)
    return totals / counts
