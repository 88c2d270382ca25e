"""Training hyperparameters from flat key=value files.

Defaults follow the reference fine-tuning recipe: input length 256,
batch size 32, AdamW with learning rate 2e-5, linear decay after 2
warm-up epochs, weight decay 0.1. The metaphor head uses its own
recipe (learning rate 3e-5, dropout 0.2, 3 epochs). Toy-scale runs
override these through the same config surface.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    input_length: int = 256
    batch_size: int = 32
    optimizer: str = "adamw"
    learning_rate: float = 2e-5
    weight_decay: float = 0.1
    warmup_epochs: int = 2
    epochs: int = 10
    schedule: str = "linear"
    dropout: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.input_length < 4:
            raise ConfigError(f"input_length too small: {self.input_length}")
        if self.batch_size < 1 or self.epochs < 1:
            raise ConfigError("batch_size and epochs must be at least 1")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigError(f"dropout outside [0, 1): {self.dropout}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be positive: {self.learning_rate}")


def metaphor_defaults() -> TrainConfig:
    return TrainConfig(learning_rate=3e-5, dropout=0.2, epochs=3)


def parse_settings(text: str, source: str = "<config>") -> dict[str, str]:
    values: dict[str, str] = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source} line {n}: expected key=value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"{source} line {n}: empty key")
        if key in values:
            raise ConfigError(f"{source} line {n}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def load_train_config(path: str | Path, base: TrainConfig | None = None) -> TrainConfig:
    """Apply key=value overrides from a file on top of a base config."""
    base = base if base is not None else TrainConfig()
    path = Path(path)
    settings = parse_settings(path.read_text(encoding="utf-8"), source=str(path))
    overrides = {}
    known = {f.name: f.type for f in fields(TrainConfig)}
    for key, raw in settings.items():
        if key not in known:
            raise ConfigError(f"unknown setting {key!r}")
        current = getattr(base, key)
        try:
            if isinstance(current, bool):
                overrides[key] = raw.lower() in {"true", "yes", "1"}
            elif isinstance(current, int):
                overrides[key] = int(raw)
            elif isinstance(current, float):
                overrides[key] = float(raw)
            else:
                overrides[key] = raw
        except ValueError as exc:
            raise ConfigError(f"{key}: cannot parse {raw!r}") from exc
    return replace(base, **overrides)
