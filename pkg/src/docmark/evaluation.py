"""Extraction quality metrics, the attack suite, and the bench harness.

BER is the fraction of flipped bits between the original and extracted
watermark; NCC is their normalized cross-correlation; PSNR measures raster
distortion in dB.  The bench harness runs embed -> attack -> extract over a
grid of images, schemes and attacks and renders the results as CSV and
optionally as markdown tables.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from PIL import Image as _PILImage

from . import schemes as sch
from .generation import random_watermark
from .imaging import (
    DEFAULT_TIER_QUALITY,
    jpeg_cycle,
    quality_for_tier,
    require_image,
    require_watermark,
)


@dataclass(frozen=True)
class ExtractionReport:
    """Outcome of comparing an extracted watermark against the original."""

    wm_extracted: np.ndarray
    bits_total: int
    bit_errors: int
    ber: float
    ncc: float


def ber(original, extracted) -> float:
    """Bit error rate: differing bits / total bits."""
    a = require_watermark(original)
    b = require_watermark(extracted)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.count_nonzero(a != b)) / a.size


def ncc(original, extracted) -> float:
    """Normalized cross-correlation of two binary watermarks.

    sum(W * W_ext) / (sqrt(sum(W^2)) * sqrt(sum(W_ext^2))).  If either
    operand is all-zero the correlation is undefined; 0 is returned with a
    warning, signalling no correlation evidence.
    """
    a = require_watermark(original).astype(float)
    b = require_watermark(extracted).astype(float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.sqrt((a * a).sum())
    nb = np.sqrt((b * b).sum())
    if na == 0.0 or nb == 0.0:
        warnings.warn("degenerate NCC: an all-zero watermark has no correlation", stacklevel=2)
        return 0.0
    return float((a * b).sum() / (na * nb))


def compare(original, extracted) -> ExtractionReport:
    """Full extraction report for an original/extracted watermark pair."""
    a = require_watermark(original)
    b = require_watermark(extracted)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    errors = int(np.count_nonzero(a != b))
    return ExtractionReport(
        wm_extracted=b,
        bits_total=int(a.size),
        bit_errors=errors,
        ber=errors / a.size,
        ncc=ncc(a, b),
    )


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    a = require_image(a)
    b = require_image(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    mse = np.mean((a.astype(float) - b.astype(float)) ** 2)
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(255.0**2 / mse))


# ---------------------------------------------------------------------------
# Attacks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Attack:
    """A deterministic image degradation.

    kind is one of "jpeg", "brightness", "crop", "scale".  For jpeg, quality
    is the numeric setting (None = lossless tier) and label the tier name it
    came from, if any.  amount holds the brightness offset, kept crop
    fraction, or scale factor for the other kinds.
    """

    kind: str
    quality: int | None = None
    amount: float | None = None
    label: str = ""

    def describe(self) -> str:
        if self.kind == "jpeg":
            return "jpeg"
        return f"{self.kind}({self.amount:g})"


def jpeg_attack(tier=None, quality=None, tier_quality=None) -> Attack:
    """JPEG recompression attack from a tier name or explicit quality."""
    if (tier is None) == (quality is None):
        raise ValueError("specify exactly one of tier or quality")
    if tier is not None:
        q = quality_for_tier(tier, tier_quality)
        return Attack(kind="jpeg", quality=q, label=str(tier).lower())
    q = int(quality)
    if not 1 <= q <= 100:
        raise ValueError(f"quality {q} out of range [1, 100]")
    return Attack(kind="jpeg", quality=q, label=f"q{q}")


def brightness_attack(offset) -> Attack:
    offset = int(offset)
    if not -64 <= offset <= 64:
        raise ValueError(f"brightness offset {offset} out of range [-64, 64]")
    return Attack(kind="brightness", amount=offset)


def crop_attack(fraction) -> Attack:
    fraction = float(fraction)
    if not 0.5 <= fraction <= 1.0:
        raise ValueError(f"crop fraction {fraction} out of range [0.5, 1.0]")
    return Attack(kind="crop", amount=fraction)


def scale_attack(factor) -> Attack:
    factor = float(factor)
    if not 0.5 <= factor <= 2.0:
        raise ValueError(f"scale factor {factor} out of range [0.5, 2.0]")
    return Attack(kind="scale", amount=factor)


def tier_attacks(tier_quality=None) -> list[Attack]:
    """The six JPEG tier attacks, strongest quality first."""
    table = DEFAULT_TIER_QUALITY if tier_quality is None else tier_quality
    return [jpeg_attack(tier=t, tier_quality=table) for t in table]


def apply_attack(img, attack: Attack) -> np.ndarray:
    """Apply an attack; output always has the input's dimensions."""
    img = require_image(img)
    if attack.kind == "jpeg":
        if attack.quality is None:
            return img.copy()
        return jpeg_cycle(img, attack.quality)
    if attack.kind == "brightness":
        shifted = img.astype(np.int16) + int(attack.amount)
        return np.clip(shifted, 0, 255).astype(np.uint8)
    if attack.kind == "crop":
        h, w = img.shape
        kh = int(round(h * attack.amount))
        kw = int(round(w * attack.amount))
        out = np.full_like(img, 128)
        top, left = (h - kh) // 2, (w - kw) // 2
        out[top : top + kh, left : left + kw] = img[top : top + kh, left : left + kw]
        return out
    if attack.kind == "scale":
        h, w = img.shape
        sh = max(1, int(round(h * attack.amount)))
        sw = max(1, int(round(w * attack.amount)))
        pil = _PILImage.fromarray(img, mode="L")
        down = pil.resize((sw, sh), _PILImage.BILINEAR)
        back = down.resize((w, h), _PILImage.BILINEAR)
        return np.asarray(back, dtype=np.uint8).copy()
    raise ValueError(f"unknown attack kind {attack.kind!r}")


# ---------------------------------------------------------------------------
# Bench harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchCell:
    image: str
    scheme: str
    attack: Attack
    report: ExtractionReport | None
    psnr_db: float | None
    error: str | None = None


@dataclass(frozen=True)
class BenchResult:
    """One cell per (scheme, image, attack) grid point, in grid order."""

    cells: tuple[BenchCell, ...]

    def to_csv(self) -> str:
        lines = ["image,scheme,attack,quality,ber,ncc,psnr_db"]
        for c in self.cells:
            quality = c.attack.label if c.attack.kind == "jpeg" else ""
            if c.report is None:
                lines.append(f"{c.image},{c.scheme},{c.attack.describe()},{quality},,,")
            else:
                lines.append(
                    f"{c.image},{c.scheme},{c.attack.describe()},{quality},"
                    f"{c.report.ber:.6f},{c.report.ncc:.6f},{c.psnr_db:.4f}"
                )
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        """One table per scheme: attack rows against image columns."""
        out = []
        schemes = sorted({c.scheme for c in self.cells})
        for scheme in schemes:
            cells = [c for c in self.cells if c.scheme == scheme]
            images = sorted({c.image for c in cells})
            rows = []
            for c in cells:
                row_label = c.attack.label or c.attack.describe()
                if row_label not in rows:
                    rows.append(row_label)
            out.append(f"### {scheme}\n")
            out.append("| Attack | " + " | ".join(images) + " |")
            out.append("|" + "---|" * (len(images) + 1))
            grid = {
                ((c.attack.label or c.attack.describe()), c.image): c for c in cells
            }
            for row_label in rows:
                rendered = []
                for image in images:
                    c = grid.get((row_label, image))
                    if c is None or c.report is None:
                        rendered.append("failed" if c is not None else "")
                    else:
                        rendered.append(f"BER = {c.report.ber:.4f} NCC = {c.report.ncc:.4f}")
                out.append(f"| {row_label} | " + " | ".join(rendered) + " |")
            out.append("")
        return "\n".join(out) + "\n"


def run_bench(images, scheme_ids, attacks, key, wm=None) -> BenchResult:
    """Embed, attack and extract over the full grid.

    images: sequence of (name, uint8 array) pairs.  A failing cell is
    recorded with its error message instead of aborting the grid.  The
    watermark defaults to a pseudorandom one derived from the key's
    permutation seed, so reruns with equal inputs are identical.
    """
    images = list(images)
    if not images or not scheme_ids or not attacks:
        raise ValueError("need at least one image, scheme and attack")
    if wm is None:
        wm = random_watermark(key.scramble.permutation_seed)
    wm = require_watermark(wm)
    cells = []
    for scheme in sorted(scheme_ids):
        for name, cover in sorted(images, key=lambda pair: pair[0]):
            try:
                marked = sch.embed(scheme, cover, wm, key).image
            except ValueError as exc:
                for attack in attacks:
                    cells.append(BenchCell(name, scheme, attack, None, None, str(exc)))
                continue
            for attack in attacks:
                try:
                    attacked = apply_attack(marked, attack)
                    extracted = sch.extract(
                        scheme,
                        attacked,
                        key,
                        cover=cover if not sch.is_blind(scheme) else None,
                    )
                    cells.append(
                        BenchCell(
                            name,
                            scheme,
                            attack,
                            compare(wm, extracted),
                            psnr(cover, attacked),
                        )
                    )
                except ValueError as exc:
                    cells.append(BenchCell(name, scheme, attack, None, None, str(exc)))
    return BenchResult(cells=tuple(cells))
