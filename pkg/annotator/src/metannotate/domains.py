"""Frame-conditioned source-domain classifier with attention fusion.

The classifier conditions on the frame classifier's output distribution
in two ways: single-head attention from domain-embedding queries against
a trainable per-frame matrix reweights the distribution, and the frozen
distribution itself is added back as a residual. The frozen copy is
detached inside fuse(), so training moves only the trainable matrix and
the domain embeddings, never the frame features.
"""

from __future__ import annotations

import math

import torch
from torch import nn

from .encoder import TinyEncoder


def fuse(
    frame_dist: torch.Tensor,
    frame_matrix: torch.Tensor,
    domain_embeddings: torch.Tensor,
) -> torch.Tensor:
    """Attention-reweighted frame features plus the frozen residual.

    frame_dist: (..., F) probabilities, detached here (frozen contract).
    frame_matrix: (F, d) trainable, one row per frame.
    domain_embeddings: (K, d) trainable attention queries.
    Returns (..., F).
    """
    n_frames, dim = frame_matrix.shape
    if frame_dist.shape[-1] != n_frames:
        raise ValueError(
            f"frame_dist has {frame_dist.shape[-1]} entries, "
            f"frame matrix has {n_frames} rows"
        )
    if domain_embeddings.shape[-1] != dim:
        raise ValueError(
            f"domain embeddings have dim {domain_embeddings.shape[-1]}, "
            f"frame matrix has dim {dim}"
        )
    frozen = frame_dist.detach()
    scores = domain_embeddings @ frame_matrix.transpose(0, 1) / math.sqrt(dim)
    weights = torch.softmax(scores, dim=-1)
    # one attention profile over frames per domain query, averaged
    profile = weights.mean(dim=0)
    return profile * frozen + frozen


class FusionState(nn.Module):
    """Trainable half of the fusion: frame matrix and domain-embedding queries.

    The frozen half, the frame distribution, arrives per input and is
    detached inside fuse(); it is never a parameter of this module.
    """

    def __init__(self, n_frames: int, n_domains: int, embed_dim: int, seed: int = 0):
        super().__init__()
        generator = torch.Generator().manual_seed(seed)
        self.frame_matrix = nn.Parameter(
            torch.randn(n_frames, embed_dim, generator=generator) * 0.1
        )
        self.domain_embeddings = nn.Parameter(
            torch.randn(n_domains, embed_dim, generator=generator) * 0.1
        )

    def forward(self, frame_dist: torch.Tensor) -> torch.Tensor:
        return fuse(frame_dist, self.frame_matrix, self.domain_embeddings)


class DomainClassifier(nn.Module):
    """Predicts the metaphor source domain and a confidence for it."""

    def __init__(self, encoder: TinyEncoder, labels: list[str], n_frames: int):
        super().__init__()
        if len(labels) != len(set(labels)):
            raise ValueError("domain labels must be unique")
        self.encoder = encoder
        self.labels = list(labels)
        self.n_frames = n_frames
        self.fusion = FusionState(n_frames, len(labels), encoder.embed_dim)
        self.head = nn.Linear(2 * encoder.output_dim + n_frames, len(labels))

    def forward(
        self,
        ids: torch.Tensor,
        target_mask: torch.Tensor,
        frame_dist: torch.Tensor,
    ) -> torch.Tensor:
        pooled, target = self.encoder(ids, target_mask)
        fused = self.fusion(frame_dist)
        return self.head(torch.cat([pooled, target, fused], dim=-1))

    def predict(
        self,
        ids: torch.Tensor,
        target_mask: torch.Tensor,
        frame_dist: torch.Tensor,
    ) -> tuple[torch.Tensor, torch.Tensor]:
        """Return (label indices, confidences); confidence is the top probability."""
        with torch.no_grad():
            probs = torch.softmax(self.forward(ids, target_mask, frame_dist), dim=-1)
            alphas, indices = probs.max(dim=-1)
        return indices, alphas

    def source_embedding(self, index: int) -> torch.Tensor:
        """Embedding row for a predicted domain, the e_source side of the blend."""
        return self.fusion.domain_embeddings[index]
