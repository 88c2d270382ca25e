"""Shared fixtures; the toy stack trains once per session."""

from __future__ import annotations

import time

import pytest

from metannotate.stack import train_toy_stack


@pytest.fixture(scope="session")
def trained():
    """(stack, training scores, wall seconds) for the seed-0 toy stack."""
    started = time.perf_counter()
    stack, scores = train_toy_stack(seed=0)
    elapsed = time.perf_counter() - started
    return stack, scores, elapsed
