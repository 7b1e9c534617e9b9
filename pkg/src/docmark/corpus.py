"""Synthetic 512x512 bench covers.

Two deterministic families: texture-rich "detailed" images standing in for
natural photographs, and "illustration" images made of flat shapes and
gentle gradients like typical stock graphics.  Generated on demand so the
test suite and demos need no bundled binaries or network access.
"""

from __future__ import annotations

import numpy as np

SIZE = 512

DETAILED_NAMES = tuple(f"detailed_{i}" for i in range(5))
ILLUSTRATION_NAMES = tuple(f"illustration_{i}" for i in range(5))


def make_detailed(seed) -> np.ndarray:
    """Texture-rich cover: low-frequency waves plus noise and fine stripes."""
    g = np.random.default_rng(int(seed))
    y, x = np.mgrid[0:SIZE, 0:SIZE].astype(float)
    img = 118.0
    img = img + g.uniform(36, 50) * np.sin(x / g.uniform(33, 47) + g.uniform(0, 6))
    img = img + g.uniform(30, 42) * np.cos(y / g.uniform(23, 35) + x / g.uniform(80, 120))
    img = img + g.uniform(14, 20) * np.sin((x * x + y * y) / g.uniform(7000, 11000))
    img = img + g.uniform(16, 26) * np.sign(
        np.sin(x / g.uniform(3.8, 7.5) + 2.0 * np.sin(y / 13.0))
    )
    img = img + g.normal(0.0, g.uniform(13, 19), (SIZE, SIZE))
    return np.clip(img, 3, 252).astype(np.uint8)


def make_illustration(seed) -> np.ndarray:
    """Flat stock-graphic cover: solid shapes over a near-uniform background."""
    g = np.random.default_rng(int(seed) + 1000)
    img = np.full((SIZE, SIZE), float(g.integers(180, 250)))
    y, x = np.mgrid[0:SIZE, 0:SIZE].astype(float)
    for _ in range(6):
        cx, cy = g.uniform(60, SIZE - 60, size=2)
        r = g.uniform(30, 120)
        img[(x - cx) ** 2 + (y - cy) ** 2 < r * r] = float(g.integers(0, 256))
    for _ in range(3):
        x0, y0 = g.integers(0, SIZE - 140, size=2)
        w, h = g.integers(40, 140, size=2)
        img[y0 : y0 + h, x0 : x0 + w] = float(g.integers(0, 256))
    img += (x / SIZE) * g.uniform(0, 12)
    return np.clip(img, 0, 255).astype(np.uint8)


def detailed_images() -> list[tuple[str, np.ndarray]]:
    return [(name, make_detailed(i)) for i, name in enumerate(DETAILED_NAMES)]


def illustration_images() -> list[tuple[str, np.ndarray]]:
    return [(name, make_illustration(i)) for i, name in enumerate(ILLUSTRATION_NAMES)]


def bench_images() -> list[tuple[str, np.ndarray]]:
    """The full ten-cover bench set: five detailed plus five illustrations."""
    return detailed_images() + illustration_images()
