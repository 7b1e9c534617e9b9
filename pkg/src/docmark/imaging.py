"""Raster types and I/O.

Images are 2-D uint8 numpy arrays (8-bit grayscale, row-major).  Watermarks
are 2-D uint8 arrays with values in {0, 1}.  Interchange formats are binary
PGM (P5, maxval 255) for images and ASCII PBM (P1) for watermarks; both
round-trip bit-exactly.  A JPEG encode/decode cycle is provided as the lossy
degradation model for document format conversion.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image as _PILImage

# Named compression tiers, strongest quality first.  "none" performs no
# compression at all; the numeric qualities are defaults and may be
# overridden through configuration.
QUALITY_TIERS = ("none", "maximum", "high", "medium", "low", "minimum")

DEFAULT_TIER_QUALITY = {
    "none": None,
    "maximum": 90,
    "high": 75,
    "medium": 50,
    "low": 30,
    "minimum": 10,
}


def require_image(img) -> np.ndarray:
    """Validate and return an 8-bit grayscale image array."""
    img = np.asarray(img)
    if img.ndim == 3:
        raise ValueError("color images are not supported; provide 8-bit grayscale")
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D image array, got ndim={img.ndim}")
    if img.size == 0:
        raise ValueError("empty image")
    if img.dtype != np.uint8:
        raise ValueError(f"expected uint8 pixels, got {img.dtype}")
    return img


def require_watermark(wm) -> np.ndarray:
    """Validate and return a binary watermark array (values in {0, 1})."""
    wm = np.asarray(wm)
    if wm.ndim != 2 or wm.size == 0:
        raise ValueError("watermark must be a non-empty 2-D array")
    if not np.isin(wm, (0, 1)).all():
        raise ValueError("watermark values must be 0 or 1")
    return wm.astype(np.uint8)


# ---------------------------------------------------------------------------
# PGM (P5) images
# ---------------------------------------------------------------------------

def _read_header_tokens(data, n_tokens, offset):
    """Read whitespace-separated header tokens, skipping '#' comments."""
    tokens = []
    i = offset
    while len(tokens) < n_tokens:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if i < len(data) and data[i : i + 1] == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
            continue
        start = i
        while i < len(data) and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise ValueError("malformed header: unexpected end of file")
        tokens.append(data[start:i])
    return tokens, i


def read_image(path) -> np.ndarray:
    """Read a binary PGM (P5, maxval 255) file into a uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] == b"P2":
        raise ValueError("unsupported PGM variant (P2 is ASCII; only binary P5 is accepted)")
    if data[:2] != b"P5":
        raise ValueError("malformed header: not a PGM P5 file")
    tokens, pos = _read_header_tokens(data, 3, 2)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise ValueError("malformed header: non-numeric dimension") from None
    if width <= 0 or height <= 0:
        raise ValueError("malformed header: non-positive dimensions")
    if maxval != 255:
        raise ValueError(f"unsupported maxval {maxval} (must be 255)")
    payload = data[pos + 1 : pos + 1 + width * height]
    if len(payload) < width * height:
        raise ValueError("payload shorter than width*height")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()


def write_image(img, path) -> None:
    """Write a uint8 array as binary PGM (P5, maxval 255)."""
    img = require_image(img)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


# ---------------------------------------------------------------------------
# PBM (P1) watermarks
# ---------------------------------------------------------------------------

def read_watermark(path) -> np.ndarray:
    """Read an ASCII PBM (P1) file into a {0,1} uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] != b"P1":
        raise ValueError("malformed header: not a PBM P1 file")
    tokens, pos = _read_header_tokens(data, 2, 2)
    width, height = (int(t) for t in tokens)
    if width <= 0 or height <= 0:
        raise ValueError("malformed header: non-positive dimensions")
    bits = []
    i = pos
    while i < len(data) and len(bits) < width * height:
        c = data[i : i + 1]
        if c == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
        elif c in (b"0", b"1"):
            bits.append(c == b"1")
            i += 1
        elif c.isspace():
            i += 1
        else:
            raise ValueError(f"invalid PBM value {c!r} (only 0/1 digits allowed)")
    if len(bits) < width * height:
        raise ValueError("payload shorter than width*height")
    return np.array(bits, dtype=np.uint8).reshape(height, width)


def write_watermark(wm, path) -> None:
    """Write a {0,1} array as ASCII PBM (P1), one raster row per line."""
    wm = require_watermark(wm)
    h, w = wm.shape
    with open(path, "wb") as fh:
        fh.write(f"P1\n{w} {h}\n".encode("ascii"))
        for row in wm:
            fh.write("".join("1" if b else "0" for b in row).encode("ascii"))
            fh.write(b"\n")


# ---------------------------------------------------------------------------
# JPEG degradation model
# ---------------------------------------------------------------------------

def jpeg_cycle(img, quality) -> np.ndarray:
    """One baseline JPEG encode/decode cycle at the given quality (1..100).

    Deterministic for fixed input and quality; preserves dimensions.  Used to
    model the recompression an image suffers when its document is exported
    to a lossy container.
    """
    img = require_image(img)
    quality = int(quality)
    if not 1 <= quality <= 100:
        raise ValueError(f"quality {quality} out of range [1, 100]")
    buf = io.BytesIO()
    _PILImage.fromarray(img, mode="L").save(buf, format="JPEG", quality=quality)
    buf.seek(0)
    out = np.asarray(_PILImage.open(buf).convert("L"), dtype=np.uint8)
    return out.copy()


def quality_for_tier(tier, tier_quality=None):
    """Numeric JPEG quality for a named tier; None means no compression."""
    table = DEFAULT_TIER_QUALITY if tier_quality is None else tier_quality
    key = str(tier).lower()
    if key not in table:
        raise ValueError(f"unknown quality tier {tier!r} (expected one of {QUALITY_TIERS})")
    return table[key]


# ---------------------------------------------------------------------------
# Raster statistics
# ---------------------------------------------------------------------------

def detail_score(img) -> float:
    """Mean absolute pixel gradient, pooling horizontal and vertical steps.

    0 for constant images, 255 for a dense 0/255 checkerboard.  Used to
    separate highly detailed photographs from flat illustrations.
    """
    a = require_image(img).astype(float)
    dx = np.abs(np.diff(a, axis=1))
    dy = np.abs(np.diff(a, axis=0))
    total = dx.size + dy.size
    if total == 0:
        return 0.0
    return float((dx.sum() + dy.sum()) / total)
