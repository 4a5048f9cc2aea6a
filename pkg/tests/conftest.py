import numpy as np
import pytest

from stegokit import GrayImage


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def random_image(rng, width, height):
    return GrayImage(width, height, rng.integers(0, 256, size=height * width, dtype=np.uint8))


def constant_image(width, height, value):
    return GrayImage(width, height, np.full(height * width, value, dtype=np.uint8))
