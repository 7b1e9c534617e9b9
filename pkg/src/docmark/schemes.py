"""The three robust embedding schemes behind one embed/extract interface.

* ``spatial_dc_qim`` (blind): quantization-index modulation of each 8x8
  block's mean brightness, which equals the block's DC term up to scale and
  needs no actual frequency transform.
* ``dct_interblock_diff`` (blind): parity intervals on the difference of one
  mid-frequency DCT coefficient between consecutive blocks of a keyed chain.
* ``hybrid_dct_dwt`` (non-blind): additive embedding of DCT-transformed
  watermark fragments into the four Haar sub-bands of the full-frame DCT;
  extraction subtracts the original cover's coefficients.

All schemes share the same key material: the watermark is scrambled with the
Arnold map, then routed through a keyed pseudorandom embedding path, so
extraction with a wrong permutation seed decodes random bits.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import transforms as tr
from .generation import watermark_digest
from .imaging import detail_score, require_image, require_watermark

SPATIAL_DC_QIM = "spatial_dc_qim"
DCT_INTERBLOCK_DIFF = "dct_interblock_diff"
HYBRID_DCT_DWT = "hybrid_dct_dwt"

SCHEME_IDS = (SPATIAL_DC_QIM, DCT_INTERBLOCK_DIFF, HYBRID_DCT_DWT)
BLIND_SCHEMES = frozenset({SPATIAL_DC_QIM, DCT_INTERBLOCK_DIFF})

# Mid-frequency coefficient used by dct_interblock_diff: position 14 of the
# standard 8x8 zigzag scan.
MID_COEF = (0, 4)

# Frequency-domain schemes degrade on covers flatter than this; embedding is
# still performed, with a warning (docpipe.select_scheme avoids the pairing).
LOW_DETAIL_WARN_THRESHOLD = 8.0


@dataclass(frozen=True)
class WatermarkKey:
    """Scrambling secrets plus per-scheme embedding strengths.

    delta is the brightness quantization step of spatial_dc_qim, t_interval
    the half-width of the coefficient-difference intervals of
    dct_interblock_diff, and alpha the additive strength multiplier of
    hybrid_dct_dwt.
    """

    scramble: tr.ScrambleKey = field(default_factory=tr.ScrambleKey)
    delta: float = 6.0
    t_interval: float = 30.0
    alpha: float = 0.16

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be > 0")
        if self.t_interval <= 0:
            raise ValueError("t_interval must be > 0")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")

    @classmethod
    def from_seed(cls, seed, arnold_iterations=7, **strengths) -> "WatermarkKey":
        return cls(
            scramble=tr.ScrambleKey(
                arnold_iterations=arnold_iterations, permutation_seed=int(seed)
            ),
            **strengths,
        )

    def to_dict(self) -> dict:
        return {
            "arnold_iterations": self.scramble.arnold_iterations,
            "permutation_seed": self.scramble.permutation_seed,
            "delta": self.delta,
            "t_interval": self.t_interval,
            "alpha": self.alpha,
        }

    @classmethod
    def from_dict(cls, d) -> "WatermarkKey":
        return cls(
            scramble=tr.ScrambleKey(
                arnold_iterations=int(d["arnold_iterations"]),
                permutation_seed=int(d["permutation_seed"]),
            ),
            delta=float(d["delta"]),
            t_interval=float(d["t_interval"]),
            alpha=float(d["alpha"]),
        )


@dataclass(frozen=True)
class MarkedImage:
    """Embedding result: the marked raster plus provenance."""

    image: np.ndarray
    scheme: str
    wm_digest: str


def is_blind(scheme) -> bool:
    if scheme not in SCHEME_IDS:
        raise ValueError(f"unknown scheme {scheme!r} (expected one of {SCHEME_IDS})")
    return scheme in BLIND_SCHEMES


def embed(scheme, cover, wm, key: WatermarkKey) -> MarkedImage:
    """Embed a binary watermark into a grayscale cover image.

    The cover must have both dimensions divisible by 8 and at least as many
    8x8 blocks as the watermark has bits.  Returns a MarkedImage whose raster
    has the cover's dimensions with pixels clamped to [0, 255].
    """
    is_blind(scheme)
    cover = require_image(cover)
    wm = require_watermark(wm)
    _check_capacity(scheme, cover, wm)
    if scheme != SPATIAL_DC_QIM:
        score = detail_score(cover)
        if score < LOW_DETAIL_WARN_THRESHOLD:
            warnings.warn(
                f"{scheme} on a low-detail cover (score {score:.2f}): "
                "frequency-domain embedding degrades on flat images",
                stacklevel=2,
            )
    marked = _EMBED[scheme](cover, wm, key)
    return MarkedImage(image=marked, scheme=scheme, wm_digest=watermark_digest(wm))


def extract(scheme, suspect, key: WatermarkKey, cover=None, wm_side=64) -> np.ndarray:
    """Recover a wm_side x wm_side watermark estimate from a suspect image.

    Blind schemes reject a cover argument; hybrid_dct_dwt requires the
    original cover.  Always returns bits; match quality is judged downstream
    with BER/NCC.
    """
    blind = is_blind(scheme)
    suspect = require_image(suspect)
    if blind and cover is not None:
        raise ValueError(f"{scheme} is blind: extraction must not receive a cover image")
    if not blind:
        if cover is None:
            raise ValueError(f"{scheme} is non-blind: extraction requires the cover image")
        cover = require_image(cover)
        if cover.shape != suspect.shape:
            raise ValueError(
                f"cover {cover.shape} and suspect {suspect.shape} dimensions differ"
            )
    if scheme == HYBRID_DCT_DWT and wm_side != 64:
        raise ValueError(f"{scheme} extracts a fixed 64x64 watermark")
    h, w = suspect.shape
    if h % 8 or w % 8:
        raise ValueError(f"suspect dimensions must be multiples of 8, got {h}x{w}")
    if (h // 8) * (w // 8) < wm_side * wm_side:
        raise ValueError(
            f"capacity violation: {(h // 8) * (w // 8)} blocks cannot hold "
            f"{wm_side * wm_side} bits"
        )
    return _EXTRACT[scheme](suspect, key, cover, wm_side)


def _check_capacity(scheme, cover, wm):
    h, w = cover.shape
    if h % 8 or w % 8 or h < 8 or w < 8:
        raise ValueError(f"cover dimensions must be multiples of 8, got {h}x{w}")
    if wm.shape[0] != wm.shape[1]:
        raise ValueError(f"watermark must be square, got {wm.shape}")
    n_blocks = (h // 8) * (w // 8)
    if n_blocks < wm.size:
        raise ValueError(
            f"capacity violation: {n_blocks} blocks cannot carry {wm.size} bits"
        )
    if scheme == HYBRID_DCT_DWT:
        if wm.shape != (64, 64):
            raise ValueError(f"{scheme} requires a 64x64 watermark, got {wm.shape}")
        if h < 64 or w < 64:
            raise ValueError(f"{scheme} requires a cover of at least 64x64, got {h}x{w}")


def _scrambled_path_bits(wm, key: WatermarkKey, count):
    """Watermark bits after Arnold scrambling, assigned along the keyed path.

    Returns an array `carrier` of length `count` where carrier[p] is the bit
    held by slot p; slots beyond the watermark size stay zero and are never
    read back.
    """
    scrambled = tr.arnold(wm, key.scramble.arnold_iterations).ravel()
    perm = tr.keyed_permutation(count, key.scramble.permutation_seed)
    carrier = np.zeros(count, dtype=np.uint8)
    carrier[perm[: scrambled.size]] = scrambled
    return carrier, perm


def _unscramble_path_bits(carrier, key: WatermarkKey, side):
    perm = tr.keyed_permutation(carrier.size, key.scramble.permutation_seed)
    flat = carrier[perm[: side * side]]
    return tr.arnold_inverse(
        flat.reshape(side, side).astype(np.uint8), key.scramble.arnold_iterations
    )


# ---------------------------------------------------------------------------
# spatial_dc_qim
# ---------------------------------------------------------------------------

def qim_target(mean, bit, delta):
    """Quantizer cell center a block mean must move to for the given bit.

    Returns (primary, alternate): the nearest valid center and the fallback
    used when clamping at 0/255 makes the primary unreachable.  Cell k covers
    [k*delta, (k+1)*delta) and encodes parity(k); centers sit at
    delta*(k + 0.5).
    """
    mean = np.asarray(mean, dtype=float)
    bit = np.asarray(bit)
    k = np.floor(mean / delta)
    center = delta * (k + 0.5)
    lower = delta * (k - 0.5)
    upper = delta * (k + 1.5)
    matches = (k.astype(np.int64) & 1) == bit
    lower_nearer = np.abs(mean - lower) <= np.abs(upper - mean)
    near = np.where(lower_nearer, lower, upper)
    far = np.where(lower_nearer, upper, lower)
    return np.where(matches, center, near), np.where(matches, center, far)


def _embed_spatial(cover, wm, key):
    h, w = cover.shape
    blocks = tr.split_blocks(cover)
    bits, _ = _scrambled_path_bits(wm, key, blocks.shape[0])
    means = blocks.mean(axis=(1, 2))
    primary, alternate = qim_target(means, bits, key.delta)

    def shift_to(target):
        out = blocks + (target - means)[:, None, None]
        return np.clip(np.round(out), 0, 255)

    out = shift_to(primary)
    # Clamping near 0/255 can push the realized mean into the wrong cell;
    # retry those blocks with the opposite center before giving up.
    decoded = np.floor(out.mean(axis=(1, 2)) / key.delta).astype(np.int64) & 1
    bad = decoded != bits
    if bad.any():
        retry = shift_to(alternate)
        out[bad] = retry[bad]
    return tr.merge_blocks(out, h, w).astype(np.uint8)


def _extract_spatial(suspect, key, _cover, wm_side):
    means = tr.split_blocks(suspect).mean(axis=(1, 2))
    carrier = (np.floor(means / key.delta).astype(np.int64) & 1).astype(np.uint8)
    return _unscramble_path_bits(carrier, key, wm_side)


# ---------------------------------------------------------------------------
# dct_interblock_diff
# ---------------------------------------------------------------------------

def interval_bit(diff, t_interval):
    """Parity decoded from a coefficient difference.

    The real line is split into intervals of width 2*t_interval; interval k
    carries bit parity(k).
    """
    return np.floor(np.asarray(diff, dtype=float) / (2.0 * t_interval)).astype(np.int64) & 1


def _nearest_correct_center(diff, bit, width):
    k = np.floor(diff / width)
    if (int(k) & 1) == bit:
        return width * (k + 0.5)
    lower = width * (k - 0.5)
    upper = width * (k + 1.5)
    return lower if abs(diff - lower) <= abs(upper - diff) else upper


def _embed_dctdiff(cover, wm, key):
    h, w = cover.shape
    blocks = tr.split_blocks(cover)
    n = blocks.shape[0]
    bits, perm = _scrambled_path_bits(wm, key, n)
    coef = tr.blockwise_dct2(blocks)
    c = coef[:, MID_COEF[0], MID_COEF[1]].copy()

    t = key.t_interval
    width = 2.0 * t
    chain = perm  # chain position i reads/writes block chain[i]
    chain_bits = bits[chain]

    # Sweep the chain backwards so every difference sees its successor's
    # final value; each difference lands exactly on the center of the
    # nearest correctly-labeled interval.
    for i in range(n - 1, -1, -1):
        successor = c[chain[(i + 1) % n]]
        target = _nearest_correct_center(c[chain[i]] - successor, int(chain_bits[i]), width)
        c[chain[i]] = successor + target

    # The chain is cyclic: the final move (chain position 0) perturbed the
    # difference at position n-1.  Walk backwards re-placing differences just
    # inside their correct interval; each step leaves a guard margin of t/2,
    # so the perturbation shrinks by t/2 per block and the walk stops after a
    # few blocks.
    guard = t / 2.0
    j = n - 1
    while j >= 0:
        diff = c[chain[j]] - c[chain[(j + 1) % n]]
        target = _nearest_correct_center(diff, int(chain_bits[j]), width)
        off = diff - target
        if abs(off) <= t - guard:
            break
        move = off - np.sign(off) * (t - guard)
        c[chain[j]] -= move
        j -= 1

    coef[:, MID_COEF[0], MID_COEF[1]] = c
    out = tr.blockwise_idct2(coef)
    return np.clip(np.round(tr.merge_blocks(out, h, w)), 0, 255).astype(np.uint8)


def _extract_dctdiff(suspect, key, _cover, wm_side):
    blocks = tr.split_blocks(suspect)
    n = blocks.shape[0]
    coef = tr.blockwise_dct2(blocks)
    c = coef[:, MID_COEF[0], MID_COEF[1]]
    perm = tr.keyed_permutation(n, key.scramble.permutation_seed)
    diffs = c[perm] - c[np.roll(perm, -1)]
    chain_bits = interval_bit(diffs, key.t_interval).astype(np.uint8)
    carrier = np.zeros(n, dtype=np.uint8)
    carrier[perm] = chain_bits
    return _unscramble_path_bits(carrier, key, wm_side)


# ---------------------------------------------------------------------------
# hybrid_dct_dwt
# ---------------------------------------------------------------------------

def _wm_quadrants(layout):
    return layout[:32, :32], layout[:32, 32:], layout[32:, :32], layout[32:, 32:]


def _embed_hybrid(cover, wm, key):
    full = tr.dct2(cover.astype(float))
    bands = list(tr.haar_dwt(full))
    carrier, _ = _scrambled_path_bits(wm, key, wm.size)
    layout = carrier.reshape(64, 64).astype(float)
    for band, frag in enumerate(_wm_quadrants(layout)):
        spread = float(bands[band].std())
        if spread == 0.0:
            warnings.warn(
                "degenerate cover: constant sub-band carries no watermark energy",
                stacklevel=3,
            )
        coeffs = tr.dct2(frag)
        bands[band] = bands[band].copy()
        bands[band][:32, :32] += key.alpha * spread * coeffs
    out = tr.idct2(tr.haar_idwt(*bands))
    return np.clip(np.round(out), 0, 255).astype(np.uint8)


def _extract_hybrid(suspect, key, cover, _wm_side=64):
    cover_bands = tr.haar_dwt(tr.dct2(cover.astype(float)))
    suspect_bands = tr.haar_dwt(tr.dct2(suspect.astype(float)))
    layout = np.empty((64, 64))
    regions = ((slice(0, 32), slice(0, 32)), (slice(0, 32), slice(32, 64)),
               (slice(32, 64), slice(0, 32)), (slice(32, 64), slice(32, 64)))
    for band, region in enumerate(regions):
        spread = float(cover_bands[band].std())
        if spread == 0.0:
            warnings.warn("degenerate cover: constant sub-band decodes as zeros", stacklevel=3)
            layout[region] = 0.0
            continue
        delta_coef = (suspect_bands[band][:32, :32] - cover_bands[band][:32, :32])
        layout[region] = tr.idct2(delta_coef / (key.alpha * spread))
    carrier = (layout >= 0.5).astype(np.uint8).ravel()
    return _unscramble_path_bits(carrier, key, 64)


_EMBED = {
    SPATIAL_DC_QIM: _embed_spatial,
    DCT_INTERBLOCK_DIFF: _embed_dctdiff,
    HYBRID_DCT_DWT: _embed_hybrid,
}

_EXTRACT = {
    SPATIAL_DC_QIM: _extract_spatial,
    DCT_INTERBLOCK_DIFF: _extract_dctdiff,
    HYBRID_DCT_DWT: _extract_hybrid,
}
