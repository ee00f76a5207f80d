import numpy as np
import pytest

from sensorpca.pipeline import PipelineConfig, run
from sensorpca.synthgen import SynthConfig, generate

SMALL = SynthConfig(n_sensors=3, n_days=40, n_events=6, sample_minutes=10, seed=7)


@pytest.fixture(scope="session")
def small_corpus():
    return generate(SMALL)


@pytest.fixture(scope="session")
def small_run(small_corpus):
    return run(small_corpus.measurements, PipelineConfig())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
