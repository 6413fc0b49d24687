import pytest

from turkpos.corpus import load_sample_corpus
from turkpos.trainer import TrainConfig, train


@pytest.fixture(scope="session")
def sample_corpus():
    return load_sample_corpus()


@pytest.fixture(scope="session")
def small_config():
    """Fast settings for tests that need a trained model, not a good one."""
    return TrainConfig(epochs=80, batch_size=8, embed_dim=16, hidden_dim=16, seed=7)


@pytest.fixture(scope="session")
def trained(sample_corpus, small_config):
    """A small model trained on the sample corpus, shared across tests."""
    model, losses = train(sample_corpus, small_config)
    return model, losses
