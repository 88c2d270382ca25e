"""Frame classifier over separator-encoded targets."""

from __future__ import annotations

import torch
from torch import nn

from .encoder import TinyEncoder


class FrameClassifier(nn.Module):
    """Predicts a distribution over frame labels for a target in context."""

    def __init__(self, encoder: TinyEncoder, labels: list[str]):
        super().__init__()
        if len(labels) != len(set(labels)):
            raise ValueError("frame labels must be unique")
        self.encoder = encoder
        self.labels = list(labels)
        self.head = nn.Linear(2 * encoder.output_dim, len(labels))

    def forward(
        self, ids: torch.Tensor, target_mask: torch.Tensor
    ) -> torch.Tensor:
        """Return unnormalized scores, one row per input."""
        pooled, target = self.encoder(ids, target_mask)
        return self.head(torch.cat([pooled, target], dim=-1))

    def predict_proba(
        self, ids: torch.Tensor, target_mask: torch.Tensor
    ) -> torch.Tensor:
        with torch.no_grad():
            return torch.softmax(self.forward(ids, target_mask), dim=-1)
