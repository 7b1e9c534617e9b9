"""Watermark generation.

Two sources of 64x64 binary watermarks: a user-supplied logo thresholded to
bits, and a context-bound watermark derived by hashing the author identity
together with the document title and the text surrounding the image.  The
context-bound form lets an author later demonstrate the link between an
image and the exact document passage it illustrated.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .imaging import require_image, require_watermark

WM_SIDE = 64
WM_BITS = WM_SIDE * WM_SIDE

HASH_NAME = "sha256"

# Unit separator; joins payload fields so that ("ab", "c") and ("a", "bc")
# can never serialize identically.
_FIELD_SEP = b"\x1f"


@dataclass(frozen=True)
class AuthorPayload:
    """Identity and context material a watermark is derived from.

    An empty context yields a context-free watermark bound only to the
    author and document title.
    """

    author_id: str
    doc_title: str
    context: str = ""

    def __post_init__(self):
        if not self.author_id:
            raise ValueError("author_id must be non-empty")

    def serialize(self) -> bytes:
        return _FIELD_SEP.join(
            f.encode("utf-8") for f in (self.author_id, self.doc_title, self.context)
        )


def generate_context_watermark(payload: AuthorPayload) -> np.ndarray:
    """Deterministic 64x64 binary watermark for an author/document/context.

    The serialized payload is hashed with SHA-256 and the digest expanded in
    counter mode (block i = sha256(digest || i as 4 big-endian bytes)) to
    4096 bits, filled row-major with the most significant bit of each byte
    first.
    """
    digest = hashlib.sha256(payload.serialize()).digest()
    blocks = []
    need = WM_BITS // 8
    counter = 0
    while sum(len(b) for b in blocks) < need:
        blocks.append(hashlib.sha256(digest + counter.to_bytes(4, "big")).digest())
        counter += 1
    stream = b"".join(blocks)[:need]
    bits = np.unpackbits(np.frombuffer(stream, dtype=np.uint8))
    return bits.reshape(WM_SIDE, WM_SIDE)


def binarize_logo(img) -> np.ndarray:
    """Threshold a 64x64 grayscale logo at 128 (pixel >= 128 becomes 1)."""
    img = require_image(img)
    if img.shape != (WM_SIDE, WM_SIDE):
        raise ValueError(f"logo must be {WM_SIDE}x{WM_SIDE}, got {img.shape}")
    return (img >= 128).astype(np.uint8)


def watermark_to_image(wm) -> np.ndarray:
    """Render watermark bits as a 0/255 grayscale image (inverse of binarize_logo)."""
    return (require_watermark(wm) * np.uint8(255)).astype(np.uint8)


def watermark_digest(wm) -> str:
    """Hex SHA-256 of the watermark's packed row-major bits (MSB-first bytes)."""
    wm = require_watermark(wm)
    packed = np.packbits(wm.ravel())
    return hashlib.sha256(packed.tobytes()).hexdigest()


def random_watermark(seed) -> np.ndarray:
    """Keyed pseudorandom 64x64 watermark (splitmix64 low bits)."""
    from .transforms import splitmix64

    bits = (splitmix64(seed, WM_BITS) & np.uint64(1)).astype(np.uint8)
    return bits.reshape(WM_SIDE, WM_SIDE)
