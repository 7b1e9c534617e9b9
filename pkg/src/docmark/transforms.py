"""Numeric kernels shared by the watermarking schemes.

Blockwise 2-D DCT, one-level 2-D Haar wavelet analysis/synthesis, the Arnold
cat-map scrambler, and a keyed pseudorandom permutation.  All transforms use
orthonormal normalization so that energy is preserved and embedding strengths
stay scale-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dctn, idctn

SQRT2 = np.sqrt(2.0)

# splitmix64 constants (Steele, Lea & Flood; public-domain reference values)
_SM64_GAMMA = 0x9E3779B97F4A7C15
_SM64_M1 = 0xBF58476D1CE4E5B9
_SM64_M2 = 0x94D049BB133111EB
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class ScrambleKey:
    """Secret material for watermark scrambling and the embedding path."""

    arnold_iterations: int = 7
    permutation_seed: int = 0

    def __post_init__(self):
        if self.arnold_iterations < 1:
            raise ValueError("arnold_iterations must be >= 1")


# ---------------------------------------------------------------------------
# DCT
# ---------------------------------------------------------------------------

def dct2(x):
    """Orthonormal 2-D type-II DCT of a real matrix."""
    return dctn(np.asarray(x, dtype=float), norm="ortho")


def idct2(x):
    """Orthonormal 2-D type-III (inverse) DCT of a real matrix."""
    return idctn(np.asarray(x, dtype=float), norm="ortho")


def dct2_block(block):
    """Forward orthonormal DCT of one 8x8 block."""
    block = np.asarray(block, dtype=float)
    if block.shape != (8, 8):
        raise ValueError(f"expected an 8x8 block, got {block.shape}")
    return dct2(block)


def idct2_block(block):
    """Inverse orthonormal DCT of one 8x8 block."""
    block = np.asarray(block, dtype=float)
    if block.shape != (8, 8):
        raise ValueError(f"expected an 8x8 block, got {block.shape}")
    return idct2(block)


def _dct_matrix(n):
    k, j = np.mgrid[0:n, 0:n]
    mat = np.cos(np.pi * (2 * j + 1) * k / (2 * n)) * np.sqrt(2.0 / n)
    mat[0] /= SQRT2
    return mat


_DCT8 = _dct_matrix(8)


def split_blocks(img):
    """View an HxW matrix as a stack of 8x8 blocks in row-major block order."""
    h, w = img.shape
    if h % 8 or w % 8:
        raise ValueError(f"dimensions must be divisible by 8, got {h}x{w}")
    return (
        np.asarray(img, dtype=float)
        .reshape(h // 8, 8, w // 8, 8)
        .transpose(0, 2, 1, 3)
        .reshape(-1, 8, 8)
    )


def merge_blocks(blocks, height, width):
    """Inverse of split_blocks."""
    return (
        blocks.reshape(height // 8, width // 8, 8, 8)
        .transpose(0, 2, 1, 3)
        .reshape(height, width)
    )


def blockwise_dct2(blocks):
    """Forward orthonormal DCT applied to a (n, 8, 8) stack of blocks."""
    return np.einsum("ij,njk,lk->nil", _DCT8, blocks, _DCT8, optimize=True)


def blockwise_idct2(blocks):
    """Inverse orthonormal DCT applied to a (n, 8, 8) stack of blocks."""
    return np.einsum("ji,njk,kl->nil", _DCT8, blocks, _DCT8, optimize=True)


# ---------------------------------------------------------------------------
# Haar DWT
# ---------------------------------------------------------------------------

def haar_dwt(x):
    """One-level orthonormal 2-D Haar analysis.

    Returns the four half-resolution sub-bands (ll, lh, hl, hh), where the
    first letter is the row filter and the second the column filter
    (l = average, h = difference).
    """
    x = np.asarray(x, dtype=float)
    h, w = x.shape
    if h % 2 or w % 2:
        raise ValueError(f"odd dimension: {h}x{w}")
    lo = (x[0::2, :] + x[1::2, :]) / SQRT2
    hi = (x[0::2, :] - x[1::2, :]) / SQRT2
    ll = (lo[:, 0::2] + lo[:, 1::2]) / SQRT2
    lh = (lo[:, 0::2] - lo[:, 1::2]) / SQRT2
    hl = (hi[:, 0::2] + hi[:, 1::2]) / SQRT2
    hh = (hi[:, 0::2] - hi[:, 1::2]) / SQRT2
    return ll, lh, hl, hh


def haar_idwt(ll, lh, hl, hh):
    """One-level orthonormal 2-D Haar synthesis; inverse of haar_dwt."""
    ll, lh, hl, hh = (np.asarray(b, dtype=float) for b in (ll, lh, hl, hh))
    if not (ll.shape == lh.shape == hl.shape == hh.shape):
        raise ValueError("sub-bands must share one shape")
    h2, w2 = ll.shape
    lo = np.empty((h2, 2 * w2))
    hi = np.empty((h2, 2 * w2))
    lo[:, 0::2] = (ll + lh) / SQRT2
    lo[:, 1::2] = (ll - lh) / SQRT2
    hi[:, 0::2] = (hl + hh) / SQRT2
    hi[:, 1::2] = (hl - hh) / SQRT2
    x = np.empty((2 * h2, 2 * w2))
    x[0::2, :] = (lo + hi) / SQRT2
    x[1::2, :] = (lo - hi) / SQRT2
    return x


# ---------------------------------------------------------------------------
# Arnold cat map
# ---------------------------------------------------------------------------

def arnold(bits, iterations):
    """Scramble a square matrix with the Arnold cat map.

    Each iteration moves the entry at (x, y) to ((x + y) mod n,
    (x + 2y) mod n).  The map is a permutation of positions, so the multiset
    of values is preserved exactly.
    """
    bits = np.asarray(bits)
    n = _square_side(bits)
    x, y = np.mgrid[0:n, 0:n]
    dst_x = (x + y) % n
    dst_y = (x + 2 * y) % n
    out = bits
    for _ in range(int(iterations)):
        nxt = np.empty_like(out)
        nxt[dst_x, dst_y] = out
        out = nxt
    return out


def arnold_inverse(bits, iterations):
    """Undo arnold() for the same iteration count."""
    bits = np.asarray(bits)
    n = _square_side(bits)
    x, y = np.mgrid[0:n, 0:n]
    src_x = (x + y) % n
    src_y = (x + 2 * y) % n
    out = bits
    for _ in range(int(iterations)):
        out = out[src_x, src_y]
    return out


def _square_side(bits):
    if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
        raise ValueError(f"scrambling needs a square matrix, got {bits.shape}")
    return bits.shape[0]


# ---------------------------------------------------------------------------
# Keyed permutation
# ---------------------------------------------------------------------------

def splitmix64(seed, count):
    """First `count` outputs of the splitmix64 generator for a 64-bit seed.

    This is the documented PRG behind keyed_permutation: output i is
    mix(seed + (i+1) * 0x9E3779B97F4A7C15) with the standard splitmix64
    finalizer, all arithmetic modulo 2**64.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    i = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(int(seed) & _U64) + i * np.uint64(_SM64_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_SM64_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_SM64_M2)
    return z ^ (z >> np.uint64(31))


def keyed_permutation(count, seed):
    """Deterministic permutation of [0, count) driven by a 64-bit seed.

    The permutation is the stable argsort of the first `count` splitmix64
    outputs, so any implementation of the same generator reproduces it.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    return np.argsort(splitmix64(seed, count), kind="stable")


def invert_permutation(perm):
    """Inverse permutation: invert_permutation(p)[p[i]] == i."""
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return inv
