"""Training configuration: defaults, file overrides, validation."""

from __future__ import annotations

import pytest

from metannotate.config import (
    ConfigError,
    TrainConfig,
    load_train_config,
    metaphor_defaults,
    parse_settings,
)


def test_default_recipe():
    cfg = TrainConfig()
    assert cfg.input_length == 256
    assert cfg.batch_size == 32
    assert cfg.optimizer == "adamw"
    assert cfg.learning_rate == 2e-5
    assert cfg.weight_decay == 0.1
    assert cfg.warmup_epochs == 2
    assert cfg.schedule == "linear"


def test_metaphor_defaults_override_three_knobs():
    cfg = metaphor_defaults()
    assert cfg.learning_rate == 3e-5
    assert cfg.dropout == 0.2
    assert cfg.epochs == 3
    assert cfg.batch_size == 32


def test_parse_settings_skips_comments_and_blanks():
    settings = parse_settings("# note\n\nlearning_rate = 0.01\nepochs=5\n", "inline")
    assert settings == {"learning_rate": "0.01", "epochs": "5"}


def test_parse_settings_rejects_duplicates_and_bad_lines():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_settings("epochs=1\nepochs=2\n", "inline")
    with pytest.raises(ConfigError, match="expected key=value"):
        parse_settings("epochs\n", "inline")
    with pytest.raises(ConfigError, match="empty key"):
        parse_settings("=3\n", "inline")


def test_load_train_config_applies_typed_overrides(tmp_path):
    path = tmp_path / "train.cfg"
    path.write_text("learning_rate=0.005\nepochs=20\nweight_decay=0\n")
    cfg = load_train_config(path, TrainConfig())
    assert cfg.learning_rate == 0.005
    assert cfg.epochs == 20
    assert cfg.weight_decay == 0.0
    assert cfg.batch_size == 32


def test_load_train_config_rejects_unknown_setting(tmp_path):
    path = tmp_path / "train.cfg"
    path.write_text("momentum=0.9\n")
    with pytest.raises(ConfigError, match="momentum"):
        load_train_config(path, TrainConfig())


def test_load_train_config_rejects_untypeable_value(tmp_path):
    path = tmp_path / "train.cfg"
    path.write_text("epochs=lots\n")
    with pytest.raises(ConfigError, match="epochs"):
        load_train_config(path, TrainConfig())


@pytest.mark.parametrize(
    "field,value",
    [
        ("input_length", 2),
        ("batch_size", 0),
        ("epochs", 0),
        ("learning_rate", 0.0),
        ("dropout", 1.0),
        ("dropout", -0.1),
    ],
)
def test_train_config_validates_ranges(field, value):
    import dataclasses

    with pytest.raises(ConfigError):
        dataclasses.replace(TrainConfig(), **{field: value})
