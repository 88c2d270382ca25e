"""Metaphor detector over confidence-blended embeddings.

The detector contrasts the contextual representation of the target with
a blended static one: the domain embedding weighted by the domain
classifier's confidence, the plain word embedding by the remainder. A
confident domain prediction pulls the literal side toward the source
domain; a diffident one leaves it near the word itself.
"""

from __future__ import annotations

import torch
from torch import nn

from .encoder import TinyEncoder


def blend(
    e_word: torch.Tensor, e_source: torch.Tensor, alpha: float
) -> torch.Tensor:
    """Convex combination alpha * e_source + (1 - alpha) * e_word."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    if e_word.shape != e_source.shape:
        raise ValueError(
            f"embedding shapes differ: {tuple(e_word.shape)} vs {tuple(e_source.shape)}"
        )
    return alpha * e_source + (1.0 - alpha) * e_word


class MetaphorDetector(nn.Module):
    """Binary classifier on (contextual, blended, |difference|) features."""

    def __init__(self, encoder: TinyEncoder, dropout: float = 0.2):
        super().__init__()
        if encoder.embed_dim != encoder.output_dim:
            raise ValueError(
                "encoder embed_dim must equal output_dim so the contextual "
                "and blended vectors are comparable"
            )
        self.encoder = encoder
        dim = encoder.output_dim
        self.head = nn.Sequential(
            nn.Linear(3 * dim, dim),
            nn.ReLU(),
            nn.Dropout(dropout),
            nn.Linear(dim, 2),
        )

    def forward(
        self,
        ids: torch.Tensor,
        target_mask: torch.Tensor,
        blended: torch.Tensor,
    ) -> torch.Tensor:
        _, contextual = self.encoder(ids, target_mask)
        features = torch.cat(
            [contextual, blended, (contextual - blended).abs()], dim=-1
        )
        return self.head(features)

    def predict(
        self,
        ids: torch.Tensor,
        target_mask: torch.Tensor,
        blended: torch.Tensor,
    ) -> tuple[torch.Tensor, torch.Tensor]:
        """Return (is_metaphor bools, metaphor probabilities)."""
        self.eval()
        with torch.no_grad():
            probs = torch.softmax(self.forward(ids, target_mask, blended), dim=-1)
        metaphor_prob = probs[:, 1]
        return metaphor_prob > 0.5, metaphor_prob
