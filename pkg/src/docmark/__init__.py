"""docmark: robust grayscale-image watermarking for document authorship protection.

Embed invisible 64x64 binary watermarks into images placed in electronic
documents, survive the JPEG recompression a document-to-PDF style export
applies, and later prove authorship by extracting the watermark and scoring
it with BER/NCC.
"""

from .docpipe import (
    CONFIRMED,
    INCONCLUSIVE,
    NOT_FOUND,
    ImageClass,
    ProtectionManifest,
    VerdictThresholds,
    VerificationVerdict,
    classify_image,
    protect,
    select_scheme,
    verify,
)
from .evaluation import (
    Attack,
    BenchResult,
    ExtractionReport,
    apply_attack,
    ber,
    brightness_attack,
    compare,
    crop_attack,
    jpeg_attack,
    ncc,
    psnr,
    run_bench,
    scale_attack,
    tier_attacks,
)
from .generation import (
    AuthorPayload,
    binarize_logo,
    generate_context_watermark,
    random_watermark,
    watermark_digest,
    watermark_to_image,
)
from .imaging import (
    DEFAULT_TIER_QUALITY,
    QUALITY_TIERS,
    detail_score,
    jpeg_cycle,
    quality_for_tier,
    read_image,
    read_watermark,
    write_image,
    write_watermark,
)
from .schemes import (
    DCT_INTERBLOCK_DIFF,
    HYBRID_DCT_DWT,
    SCHEME_IDS,
    SPATIAL_DC_QIM,
    MarkedImage,
    WatermarkKey,
    embed,
    extract,
    is_blind,
)
from .transforms import (
    ScrambleKey,
    arnold,
    arnold_inverse,
    dct2_block,
    haar_dwt,
    haar_idwt,
    idct2_block,
    keyed_permutation,
)

__version__ = "0.1.0"

__all__ = [
    "Attack",
    "AuthorPayload",
    "BenchResult",
    "CONFIRMED",
    "DCT_INTERBLOCK_DIFF",
    "DEFAULT_TIER_QUALITY",
    "ExtractionReport",
    "HYBRID_DCT_DWT",
    "INCONCLUSIVE",
    "ImageClass",
    "MarkedImage",
    "NOT_FOUND",
    "ProtectionManifest",
    "QUALITY_TIERS",
    "SCHEME_IDS",
    "SPATIAL_DC_QIM",
    "ScrambleKey",
    "VerdictThresholds",
    "VerificationVerdict",
    "WatermarkKey",
    "apply_attack",
    "arnold",
    "arnold_inverse",
    "ber",
    "binarize_logo",
    "brightness_attack",
    "classify_image",
    "compare",
    "crop_attack",
    "dct2_block",
    "detail_score",
    "embed",
    "extract",
    "generate_context_watermark",
    "haar_dwt",
    "haar_idwt",
    "idct2_block",
    "is_blind",
    "jpeg_attack",
    "jpeg_cycle",
    "keyed_permutation",
    "ncc",
    "protect",
    "psnr",
    "quality_for_tier",
    "random_watermark",
    "read_image",
    "read_watermark",
    "run_bench",
    "scale_attack",
    "select_scheme",
    "tier_attacks",
    "verify",
    "watermark_digest",
    "watermark_to_image",
    "write_image",
    "write_watermark",
]
