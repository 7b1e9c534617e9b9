"""Document protection workflow.

A "document" at desk scale is a directory of cover images plus a context
file listing, per image, the text fragment surrounding it.  protect()
classifies each image, picks an embedding scheme, embeds a context-bound
watermark and records everything in a JSON manifest; verify() later checks
suspect material against that manifest under three copying scenarios:

* complete: the whole document (text and images) was copied,
* images: only the graphics were copied,
* text: only the text was copied, so the author must demonstrate the link
  between the copied context and the original marked images.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import schemes as sch
from .evaluation import ExtractionReport, compare, psnr
from .generation import (
    HASH_NAME,
    AuthorPayload,
    generate_context_watermark,
    watermark_digest,
)
from .imaging import detail_score, read_image, require_image, write_image

MANIFEST_VERSION = 1

HIGHLY_DETAILED = "highly_detailed"
ILLUSTRATION = "illustration"

DEFAULT_DETAIL_THRESHOLD = 8.0

CONFIRMED = "Confirmed"
INCONCLUSIVE = "Inconclusive"
NOT_FOUND = "NotFound"

SCENARIOS = ("complete", "images", "text")


@dataclass(frozen=True)
class VerdictThresholds:
    """Decision rule mapping extraction metrics to a verdict.

    Confirmed when ncc >= confirm_ncc or ber <= confirm_ber; NotFound when
    ber >= notfound_ber (random-guess territory); Inconclusive between.
    """

    confirm_ncc: float = 0.85
    confirm_ber: float = 0.12
    notfound_ber: float = 0.40

    def decide(self, ber_value, ncc_value) -> str:
        if ncc_value >= self.confirm_ncc or ber_value <= self.confirm_ber:
            return CONFIRMED
        if ber_value >= self.notfound_ber:
            return NOT_FOUND
        return INCONCLUSIVE


@dataclass(frozen=True)
class ImageClass:
    label: str
    detail_score: float


def classify_image(img, threshold=DEFAULT_DETAIL_THRESHOLD) -> ImageClass:
    """Classify a cover by detail level (mean absolute gradient)."""
    score = detail_score(img)
    label = HIGHLY_DETAILED if score >= threshold else ILLUSTRATION
    return ImageClass(label=label, detail_score=score)


def select_scheme(image_class: ImageClass, non_blind_allowed=True) -> str:
    """Pick the embedding scheme for an image class.

    Illustrations always get the spatial scheme (frequency-domain embedding
    degrades on flat images).  Detailed images get the non-blind hybrid
    scheme when allowed, since it survives the strongest compression, and
    the blind DCT-difference scheme otherwise.
    """
    if image_class.label == ILLUSTRATION:
        return sch.SPATIAL_DC_QIM
    return sch.HYBRID_DCT_DWT if non_blind_allowed else sch.DCT_INTERBLOCK_DIFF


# ---------------------------------------------------------------------------
# Context file
# ---------------------------------------------------------------------------

def read_context_file(path) -> list[tuple[str, str]]:
    """Parse `image_path<TAB>context` lines; '#' starts a comment line."""
    records = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'image_path<TAB>context'")
            image_path, context = line.split("\t", 1)
            image_path = image_path.strip()
            if not image_path:
                raise ValueError(f"{path}:{lineno}: empty image path")
            if image_path in seen:
                raise ValueError(f"{path}:{lineno}: duplicate image path {image_path!r}")
            seen.add(image_path)
            records.append((image_path, context))
    return records


# ---------------------------------------------------------------------------
# Manifest
# ---------------------------------------------------------------------------

@dataclass
class ManifestEntry:
    image_path: str
    context: str
    context_bound: bool
    scheme: str
    key_material: dict
    wm_digest: str
    psnr_db: float
    image_class: ImageClass
    cover_path: str | None = None

    def to_dict(self) -> dict:
        d = {
            "image_path": self.image_path,
            "context": self.context,
            "context_bound": self.context_bound,
            "scheme": self.scheme,
            "key_material": dict(self.key_material),
            "wm_digest": self.wm_digest,
            "psnr_db": self.psnr_db,
            "image_class": {
                "label": self.image_class.label,
                "detail_score": self.image_class.detail_score,
            },
        }
        if self.cover_path is not None:
            d["cover_path"] = self.cover_path
        return d

    @classmethod
    def from_dict(cls, d) -> "ManifestEntry":
        return cls(
            image_path=d["image_path"],
            context=d["context"],
            context_bound=bool(d["context_bound"]),
            scheme=d["scheme"],
            key_material=dict(d["key_material"]),
            wm_digest=d["wm_digest"],
            psnr_db=float(d["psnr_db"]),
            image_class=ImageClass(
                label=d["image_class"]["label"],
                detail_score=float(d["image_class"]["detail_score"]),
            ),
            cover_path=d.get("cover_path"),
        )


@dataclass
class ProtectionManifest:
    """Author's private evidence record for one protected document."""

    author_id: str
    doc_title: str
    created_at: str
    entries: list[ManifestEntry] = field(default_factory=list)
    hash_name: str = HASH_NAME
    version: int = MANIFEST_VERSION

    def to_json(self) -> str:
        doc = {
            "version": self.version,
            "author_id": self.author_id,
            "doc_title": self.doc_title,
            "hash_name": self.hash_name,
            "created_at": self.created_at,
            "entries": [e.to_dict() for e in self.entries],
        }
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text) -> "ProtectionManifest":
        doc = json.loads(text)
        if doc.get("version") != MANIFEST_VERSION:
            raise ValueError(f"unsupported manifest version {doc.get('version')!r}")
        for key in ("author_id", "doc_title", "hash_name", "created_at", "entries"):
            if key not in doc:
                raise ValueError(f"manifest missing field {key!r}")
        if doc["hash_name"] != HASH_NAME:
            raise ValueError(f"unsupported hash {doc['hash_name']!r}")
        return cls(
            author_id=doc["author_id"],
            doc_title=doc["doc_title"],
            created_at=doc["created_at"],
            entries=[ManifestEntry.from_dict(d) for d in doc["entries"]],
        )

    def save(self, path) -> None:
        """Atomic write: the manifest appears complete or not at all."""
        path = Path(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(self.to_json())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path) -> "ProtectionManifest":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def payload_for(self, entry: ManifestEntry) -> AuthorPayload:
        return AuthorPayload(
            author_id=self.author_id, doc_title=self.doc_title, context=entry.context
        )

    def regenerate_watermark(self, entry: ManifestEntry) -> np.ndarray:
        """Recompute the entry's watermark and check it against the digest."""
        wm = generate_context_watermark(self.payload_for(entry))
        if watermark_digest(wm) != entry.wm_digest:
            raise ValueError(
                f"digest mismatch for {entry.image_path!r}: manifest does not "
                "bind this author/title/context combination"
            )
        return wm


# ---------------------------------------------------------------------------
# protect
# ---------------------------------------------------------------------------

def protect(
    image_dir,
    contexts_path,
    author_id,
    doc_title,
    out_dir,
    key: sch.WatermarkKey,
    non_blind_allowed=True,
    detail_threshold=DEFAULT_DETAIL_THRESHOLD,
    manifest_path=None,
) -> ProtectionManifest:
    """Watermark every image listed in the context file.

    Image paths in the context file are relative to image_dir.  Marked
    images are written under out_dir with their original file names; entry
    paths in the manifest are relative to the manifest's directory.  An
    empty context marks the entry context_bound=false: the watermark then
    binds only the author and title.
    """
    image_dir = Path(image_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = Path(manifest_path) if manifest_path else out_dir / "manifest.json"
    records = read_context_file(contexts_path)
    if not records:
        raise ValueError(f"context file {contexts_path} lists no images")
    basenames = set()
    for rel, _ in records:
        if not (image_dir / rel).is_file():
            raise ValueError(f"missing image: {image_dir / rel}")
        name = Path(rel).name
        if name in basenames:
            raise ValueError(f"duplicate output name {name!r}: marked images would collide")
        basenames.add(name)

    manifest = ProtectionManifest(
        author_id=author_id,
        doc_title=doc_title,
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    manifest_dir = manifest_path.parent.resolve()
    for rel, context in records:
        cover = read_image(image_dir / rel)
        image_class = classify_image(cover, threshold=detail_threshold)
        scheme = select_scheme(image_class, non_blind_allowed=non_blind_allowed)
        payload = AuthorPayload(author_id=author_id, doc_title=doc_title, context=context)
        wm = generate_context_watermark(payload)
        marked = sch.embed(scheme, cover, wm, key)
        out_path = out_dir / Path(rel).name
        write_image(marked.image, out_path)
        entry = ManifestEntry(
            image_path=_relative_to(out_path, manifest_dir),
            context=context,
            context_bound=bool(context),
            scheme=scheme,
            key_material=key.to_dict(),
            wm_digest=marked.wm_digest,
            psnr_db=round(psnr(cover, marked.image), 4),
            image_class=ImageClass(image_class.label, round(image_class.detail_score, 4)),
            cover_path=None
            if sch.is_blind(scheme)
            else _relative_to(image_dir / rel, manifest_dir),
        )
        manifest.entries.append(entry)
    manifest.save(manifest_path)
    return manifest


def _relative_to(path, base) -> str:
    path = Path(path).resolve()
    try:
        return path.relative_to(base).as_posix()
    except ValueError:
        return path.as_posix()


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImageVerdict:
    subject: str
    decision: str
    report: ExtractionReport | None
    entry: ManifestEntry | None
    scheme: str | None


@dataclass(frozen=True)
class VerificationVerdict:
    scenario: str
    decision: str
    results: tuple[ImageVerdict, ...]


def verify(
    suspect,
    manifest: ProtectionManifest,
    scenario,
    manifest_dir=None,
    thresholds: VerdictThresholds = VerdictThresholds(),
) -> VerificationVerdict:
    """Check suspect material against a protection manifest.

    complete / images: `suspect` is an image file or a directory of images;
    each is matched against every manifest entry and judged by its best
    match.  text: `suspect` is a UTF-8 text file holding the copied context
    fragment; the watermark it implies must both match a manifest entry's
    digest and extract from that entry's original marked image.

    manifest_dir resolves the relative image paths stored in the manifest
    (defaults to the current directory).
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r} (expected one of {SCENARIOS})")
    manifest_dir = Path(manifest_dir) if manifest_dir else Path(".")
    if scenario == "text":
        results = [_verify_text(Path(suspect), manifest, manifest_dir, thresholds)]
    else:
        suspect = Path(suspect)
        if suspect.is_dir():
            paths = sorted(p for p in suspect.iterdir() if p.suffix.lower() == ".pgm")
            if not paths:
                raise ValueError(f"no .pgm images found in {suspect}")
        else:
            paths = [suspect]
        results = [
            _verify_image(p, manifest, manifest_dir, thresholds) for p in paths
        ]
    return VerificationVerdict(
        scenario=scenario,
        decision=_overall([r.decision for r in results]),
        results=tuple(results),
    )


def _overall(decisions) -> str:
    if any(d == NOT_FOUND for d in decisions):
        return NOT_FOUND
    if any(d == INCONCLUSIVE for d in decisions):
        return INCONCLUSIVE
    return CONFIRMED


def _entry_cover(entry, manifest_dir):
    """Load the original cover a non-blind entry needs; None for blind ones."""
    if sch.is_blind(entry.scheme):
        return None
    if entry.cover_path is None:
        raise ValueError(
            f"manifest entry {entry.image_path!r} uses a non-blind scheme "
            "but records no cover path"
        )
    return read_image(manifest_dir / entry.cover_path)


def _verify_image(path, manifest, manifest_dir, thresholds) -> ImageVerdict:
    suspect_img = require_image(read_image(path))
    best = None
    for entry in manifest.entries:
        wm = manifest.regenerate_watermark(entry)
        key = sch.WatermarkKey.from_dict(entry.key_material)
        cover = _entry_cover(entry, manifest_dir)
        try:
            extracted = sch.extract(entry.scheme, suspect_img, key, cover=cover)
        except ValueError:
            continue  # incompatible dimensions: this entry cannot match
        report = compare(wm, extracted)
        if best is None or report.ber < best[0].ber:
            best = (report, entry)
    if best is None:
        return ImageVerdict(str(path), NOT_FOUND, None, None, None)
    report, entry = best
    return ImageVerdict(
        subject=str(path),
        decision=thresholds.decide(report.ber, report.ncc),
        report=report,
        entry=entry,
        scheme=entry.scheme,
    )


def _verify_text(path, manifest, manifest_dir, thresholds) -> ImageVerdict:
    context = path.read_text(encoding="utf-8").rstrip("\n")
    claimed = generate_context_watermark(
        AuthorPayload(manifest.author_id, manifest.doc_title, context)
    )
    claimed_digest = watermark_digest(claimed)
    for entry in manifest.entries:
        manifest.regenerate_watermark(entry)  # digest tamper check
        if entry.wm_digest != claimed_digest:
            continue
        # The copied context names this entry; demonstrating the link means
        # extracting exactly that watermark from the original marked image.
        marked = read_image(manifest_dir / entry.image_path)
        key = sch.WatermarkKey.from_dict(entry.key_material)
        extracted = sch.extract(
            entry.scheme, marked, key, cover=_entry_cover(entry, manifest_dir)
        )
        report = compare(claimed, extracted)
        return ImageVerdict(
            subject=str(path),
            decision=thresholds.decide(report.ber, report.ncc),
            report=report,
            entry=entry,
            scheme=entry.scheme,
        )
    return ImageVerdict(str(path), NOT_FOUND, None, None, None)
