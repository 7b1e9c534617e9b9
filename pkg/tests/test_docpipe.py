"""Protection workflow: classification, scheme policy, protect/verify."""

import json

import numpy as np
import pytest

from docmark import (
    CONFIRMED,
    DCT_INTERBLOCK_DIFF,
    HYBRID_DCT_DWT,
    NOT_FOUND,
    SPATIAL_DC_QIM,
    AuthorPayload,
    ProtectionManifest,
    classify_image,
    corpus,
    generate_context_watermark,
    jpeg_cycle,
    protect,
    select_scheme,
    verify,
    watermark_digest,
    write_image,
)
from docmark.docpipe import HIGHLY_DETAILED, ILLUSTRATION, ImageClass, read_context_file


class TestClassifier:
    def test_constant_is_illustration(self):
        cls = classify_image(np.full((64, 64), 200, dtype=np.uint8))
        assert cls.label == ILLUSTRATION
        assert cls.detail_score == 0.0

    def test_checkerboard_is_detailed(self):
        y, x = np.mgrid[0:64, 0:64]
        board = (((x + y) % 2) * 255).astype(np.uint8)
        cls = classify_image(board)
        assert cls.label == HIGHLY_DETAILED
        assert cls.detail_score == pytest.approx(255.0)

    def test_corpus_families_separate(self, detailed_images, illustration_images):
        detailed_scores = [classify_image(img).detail_score for _, img in detailed_images]
        flat_scores = [classify_image(img).detail_score for _, img in illustration_images]
        assert min(detailed_scores) > max(flat_scores)
        assert all(classify_image(img).label == HIGHLY_DETAILED for _, img in detailed_images)
        assert all(classify_image(img).label == ILLUSTRATION for _, img in illustration_images)

    def test_deterministic(self, detailed_images):
        _, img = detailed_images[0]
        assert classify_image(img) == classify_image(img.copy())


class TestSelectScheme:
    def test_illustration_always_spatial(self):
        cls = ImageClass(ILLUSTRATION, 1.0)
        assert select_scheme(cls, non_blind_allowed=True) == SPATIAL_DC_QIM
        assert select_scheme(cls, non_blind_allowed=False) == SPATIAL_DC_QIM

    def test_detailed_prefers_hybrid(self):
        cls = ImageClass(HIGHLY_DETAILED, 20.0)
        assert select_scheme(cls, non_blind_allowed=True) == HYBRID_DCT_DWT

    def test_detailed_blind_only(self):
        cls = ImageClass(HIGHLY_DETAILED, 20.0)
        assert select_scheme(cls, non_blind_allowed=False) == DCT_INTERBLOCK_DIFF


class TestContextFile:
    def test_parsing(self, tmp_path):
        p = tmp_path / "contexts.tsv"
        p.write_text(
            "# document figure contexts\n"
            "a.pgm\tthe first figure shows throughput\n"
            "\n"
            "b.pgm\t\n",
            encoding="utf-8",
        )
        records = read_context_file(p)
        assert records == [("a.pgm", "the first figure shows throughput"), ("b.pgm", "")]

    def test_duplicate_rejected(self, tmp_path):
        p = tmp_path / "contexts.tsv"
        p.write_text("a.pgm\tx\na.pgm\ty\n", encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate"):
            read_context_file(p)

    def test_missing_tab_rejected(self, tmp_path):
        p = tmp_path / "contexts.tsv"
        p.write_text("a.pgm context without tab\n", encoding="utf-8")
        with pytest.raises(ValueError, match="TAB"):
            read_context_file(p)


@pytest.fixture()
def protected_document(tmp_path, default_key):
    """A two-image document protected into tmp_path; returns all the paths."""
    src = tmp_path / "covers"
    out = tmp_path / "marked"
    src.mkdir()
    write_image(corpus.make_detailed(0), src / "figure1.pgm")
    write_image(corpus.make_illustration(0), src / "figure2.pgm")
    contexts = tmp_path / "contexts.tsv"
    contexts.write_text(
        "figure1.pgm\tresults for the east wing sensors\n"
        "figure2.pgm\tworkflow diagram of the approval chain\n",
        encoding="utf-8",
    )
    manifest_path = tmp_path / "manifest.json"
    manifest = protect(
        image_dir=src,
        contexts_path=contexts,
        author_id="alice",
        doc_title="Q3 facilities report",
        out_dir=out,
        key=default_key,
        manifest_path=manifest_path,
    )
    return {
        "src": src,
        "out": out,
        "manifest": manifest,
        "manifest_path": manifest_path,
        "tmp": tmp_path,
    }


class TestProtect:
    def test_manifest_entries(self, protected_document):
        manifest = protected_document["manifest"]
        assert len(manifest.entries) == 2
        by_name = {e.image_path: e for e in manifest.entries}
        detailed = by_name["marked/figure1.pgm"]
        flat = by_name["marked/figure2.pgm"]
        assert detailed.scheme == HYBRID_DCT_DWT
        assert detailed.cover_path == "covers/figure1.pgm"
        assert flat.scheme == SPATIAL_DC_QIM
        assert flat.cover_path is None
        assert all(e.context_bound for e in manifest.entries)
        assert all(e.psnr_db >= 35.0 for e in manifest.entries)

    def test_digests_recomputable(self, protected_document):
        manifest = protected_document["manifest"]
        for entry in manifest.entries:
            payload = AuthorPayload("alice", "Q3 facilities report", entry.context)
            wm = generate_context_watermark(payload)
            assert watermark_digest(wm) == entry.wm_digest

    def test_manifest_round_trip_is_byte_identical(self, protected_document):
        text = protected_document["manifest_path"].read_text(encoding="utf-8")
        reparsed = ProtectionManifest.from_json(text)
        assert reparsed.to_json() == text

    def test_empty_context_flagged_unbound(self, tmp_path, default_key):
        src = tmp_path / "covers"
        src.mkdir()
        write_image(corpus.make_illustration(1), src / "logo.pgm")
        contexts = tmp_path / "contexts.tsv"
        contexts.write_text("logo.pgm\t\n", encoding="utf-8")
        manifest = protect(src, contexts, "bob", "brochure", tmp_path / "out", default_key)
        assert manifest.entries[0].context_bound is False

    def test_missing_image_rejected(self, tmp_path, default_key):
        src = tmp_path / "covers"
        src.mkdir()
        contexts = tmp_path / "contexts.tsv"
        contexts.write_text("ghost.pgm\tsome context\n", encoding="utf-8")
        with pytest.raises(ValueError, match="missing image"):
            protect(src, contexts, "bob", "doc", tmp_path / "out", default_key)

    def test_blind_only_never_selects_hybrid(self, tmp_path, default_key):
        src = tmp_path / "covers"
        src.mkdir()
        write_image(corpus.make_detailed(1), src / "photo.pgm")
        contexts = tmp_path / "contexts.tsv"
        contexts.write_text("photo.pgm\tcaption\n", encoding="utf-8")
        manifest = protect(
            src, contexts, "bob", "doc", tmp_path / "out", default_key,
            non_blind_allowed=False,
        )
        assert manifest.entries[0].scheme == DCT_INTERBLOCK_DIFF


class TestVerify:
    def test_untouched_outputs_confirmed(self, protected_document):
        verdict = verify(
            protected_document["out"],
            protected_document["manifest"],
            "complete",
            manifest_dir=protected_document["tmp"],
        )
        assert verdict.decision == CONFIRMED
        assert len(verdict.results) == 2
        assert all(r.report.ber <= 0.01 for r in verdict.results)

    def test_images_only_after_medium_compression(self, protected_document, tmp_path):
        from docmark import read_image

        attacked_dir = tmp_path / "attacked"
        attacked_dir.mkdir()
        for p in sorted(protected_document["out"].glob("*.pgm")):
            write_image(jpeg_cycle(read_image(p), 50), attacked_dir / p.name)
        verdict = verify(
            attacked_dir,
            protected_document["manifest"],
            "images",
            manifest_dir=protected_document["tmp"],
        )
        assert verdict.decision == CONFIRMED

    def test_unrelated_image_not_found(self, protected_document, tmp_path):
        stranger = tmp_path / "stranger.pgm"
        write_image(corpus.make_detailed(7), stranger)
        verdict = verify(
            stranger,
            protected_document["manifest"],
            "images",
            manifest_dir=protected_document["tmp"],
        )
        assert verdict.decision == NOT_FOUND

    def test_text_scenario_matching_context(self, protected_document, tmp_path):
        claim = tmp_path / "claim.txt"
        claim.write_text("results for the east wing sensors\n", encoding="utf-8")
        verdict = verify(
            claim,
            protected_document["manifest"],
            "text",
            manifest_dir=protected_document["tmp"],
        )
        assert verdict.decision == CONFIRMED
        assert verdict.results[0].report.ber == 0.0

    def test_text_scenario_altered_context(self, protected_document, tmp_path):
        claim = tmp_path / "claim.txt"
        claim.write_text("results for the west wing sensors\n", encoding="utf-8")
        verdict = verify(
            claim,
            protected_document["manifest"],
            "text",
            manifest_dir=protected_document["tmp"],
        )
        assert verdict.decision == NOT_FOUND

    def test_tampered_digest_raises(self, protected_document):
        manifest = protected_document["manifest"]
        tampered = ProtectionManifest.from_json(manifest.to_json())
        tampered.entries[0].wm_digest = "0" * 64
        with pytest.raises(ValueError, match="digest mismatch"):
            verify(
                protected_document["out"],
                tampered,
                "complete",
                manifest_dir=protected_document["tmp"],
            )

    def test_unknown_scenario(self, protected_document):
        with pytest.raises(ValueError, match="unknown scenario"):
            verify(protected_document["out"], protected_document["manifest"], "partial")


class TestManifestSchema:
    def test_version_check(self):
        doc = {"version": 2, "author_id": "a", "doc_title": "t",
               "hash_name": "sha256", "created_at": "now", "entries": []}
        with pytest.raises(ValueError, match="version"):
            ProtectionManifest.from_json(json.dumps(doc))

    def test_missing_field(self):
        with pytest.raises(ValueError, match="missing field"):
            ProtectionManifest.from_json(json.dumps({"version": 1}))

    def test_unknown_hash(self):
        doc = {"version": 1, "author_id": "a", "doc_title": "t",
               "hash_name": "md5", "created_at": "now", "entries": []}
        with pytest.raises(ValueError, match="unsupported hash"):
            ProtectionManifest.from_json(json.dumps(doc))
