import pytest

from framekey import default_domains, default_frames

from corpusgen import PLANTED_BACKGROUND, PLANTED_TARGET, build_corpus


@pytest.fixture(scope="session")
def frames():
    return default_frames()


@pytest.fixture(scope="session")
def domains():
    return default_domains()


@pytest.fixture(scope="session")
def planted_corpora(frames, domains):
    """Two 1000-annotation corpora where only WAR (and frame Invading) is skewed."""
    corpus1 = build_corpus(PLANTED_TARGET, frames, domains, partition="target", prefix="t")
    corpus2 = build_corpus(PLANTED_BACKGROUND, frames, domains, partition="background", prefix="b")
    return corpus1, corpus2
