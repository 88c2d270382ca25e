"""Seeded training loop with warmup plus linear decay.

One generic loop serves all three classifiers; the task supplies a
loss callback over its own batch shape. Determinism comes from seeding
torch before parameter init and before each run, never from ambient
entropy.
"""

from __future__ import annotations

from typing import Callable, Sequence

import torch
from torch.optim.lr_scheduler import LambdaLR

from .config import ConfigError, TrainConfig


def make_optimizer(model: torch.nn.Module, config: TrainConfig) -> torch.optim.Optimizer:
    if config.optimizer != "adamw":
        raise ConfigError(f"unsupported optimizer: {config.optimizer!r}")
    return torch.optim.AdamW(
        model.parameters(),
        lr=config.learning_rate,
        weight_decay=config.weight_decay,
    )


def linear_warmup_decay(
    optimizer: torch.optim.Optimizer, warmup_steps: int, total_steps: int
) -> LambdaLR:
    """Ramp linearly over warmup_steps, then decay linearly toward zero."""

    def factor(step: int) -> float:
        if step < warmup_steps:
            return (step + 1) / max(1, warmup_steps)
        remaining = max(1, total_steps - warmup_steps)
        return max(0.0, (total_steps - step) / remaining)

    return LambdaLR(optimizer, factor)


def make_batches(n_examples: int, batch_size: int) -> list[range]:
    return [
        range(start, min(start + batch_size, n_examples))
        for start in range(0, n_examples, batch_size)
    ]


def train_epochs(
    model: torch.nn.Module,
    batches: Sequence,
    config: TrainConfig,
    compute_loss: Callable[[torch.nn.Module, object], torch.Tensor],
) -> list[float]:
    """Run the configured number of epochs; returns per-step losses."""
    if not batches:
        raise ValueError("no training batches")
    torch.manual_seed(config.seed)
    optimizer = make_optimizer(model, config)
    steps_per_epoch = len(batches)
    total_steps = config.epochs * steps_per_epoch
    if config.schedule == "linear":
        scheduler = linear_warmup_decay(
            optimizer, config.warmup_epochs * steps_per_epoch, total_steps
        )
    elif config.schedule == "constant":
        scheduler = None
    else:
        raise ConfigError(f"unsupported schedule: {config.schedule!r}")
    losses: list[float] = []
    model.train()
    for _ in range(config.epochs):
        for batch in batches:
            optimizer.zero_grad()
            loss = compute_loss(model, batch)
            loss.backward()
            optimizer.step()
            if scheduler is not None:
                scheduler.step()
            losses.append(float(loss.detach()))
    model.eval()
    return losses
