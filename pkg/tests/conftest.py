import numpy as np
import pytest

from docmark import WatermarkKey, corpus, random_watermark


@pytest.fixture(scope="session")
def detailed_images():
    return corpus.detailed_images()


@pytest.fixture(scope="session")
def illustration_images():
    return corpus.illustration_images()


@pytest.fixture(scope="session")
def default_key():
    return WatermarkKey.from_seed(12345)


@pytest.fixture(scope="session")
def default_wm():
    return random_watermark(99)


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
