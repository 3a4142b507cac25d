"""Shared fixtures: deterministic natural-image crops at desk scale.

Accuracy thresholds in the acceptance tests were calibrated on natural
photographs, so the fixtures are fixed crops of the scikit-image sample
set (bundled files, identical on every install) rather than synthetic
patterns.  Sizes span 64x64 to 128x128.
"""

import numpy as np
import pytest
import skimage.data

from splitsmooth import ImageBuffer


def _desk_crops():
    cam = skimage.data.camera().astype(np.float64)
    coins = skimage.data.coins().astype(np.float64)
    moon = skimage.data.moon().astype(np.float64)
    text = skimage.data.text().astype(np.float64)
    page = skimage.data.page().astype(np.float64)
    clock = skimage.data.clock().astype(np.float64)
    return [
        cam[64:192, 64:192],
        cam[200:300, 100:228],
        cam[300:428, 300:428],
        cam[16:80, 240:304],
        coins[10:106, 50:178],
        coins[120:216, 180:276],
        moon[100:228, 100:228],
        text[0:96, 0:128],
        page[40:136, 100:228],
        clock[50:178, 100:228],
    ]


@pytest.fixture(scope="session")
def desk_images():
    """Ten grayscale crops, 64-128 px per side."""
    return [ImageBuffer.gray(c) for c in _desk_crops()]


@pytest.fixture(scope="session")
def camera128():
    """One 128x128 crop with strong structure, for convergence tests."""
    cam = skimage.data.camera().astype(np.float64)
    return ImageBuffer.gray(cam[64:192, 64:192])


@pytest.fixture(scope="session")
def camera64():
    """One 64x64 crop, for the slower re-weighted runs."""
    cam = skimage.data.camera().astype(np.float64)
    return ImageBuffer.gray(cam[200:264, 100:164])
