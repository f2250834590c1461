import pytest

from attreval.datasets import SynthConfig, generate_synthetic
from attreval.models import TrainConfig, train_logistic, train_mlp


@pytest.fixture(scope="session")
def synth_default():
    return generate_synthetic(SynthConfig())


@pytest.fixture(scope="session")
def synth_small():
    return generate_synthetic(SynthConfig(n_samples=160, dim=6, n_clusters=3, seed=5))


@pytest.fixture(scope="session")
def lr_default(synth_default):
    split, _ = synth_default
    return train_logistic(split, TrainConfig(seed=1))


@pytest.fixture(scope="session")
def mlp_default(synth_default):
    split, _ = synth_default
    return train_mlp(split, TrainConfig(seed=2))


@pytest.fixture(scope="session")
def lr_small(synth_small):
    split, _ = synth_small
    return train_logistic(split, TrainConfig(seed=3, epochs=20))


@pytest.fixture(scope="session")
def mlp_small(synth_small):
    split, _ = synth_small
    return train_mlp(split, TrainConfig(seed=4, epochs=20))
