"""Acceptance suite: the release gate.

Each test enforces one numbered criterion at its stated tolerance and prints
one PASS line (visible with `pytest -s` or in captured output).  Criteria
1-5 share a session-scoped bench grid over the ten-cover corpus: all three
schemes on the five detailed covers, the spatial scheme on the five
illustrations, across the six JPEG quality tiers.
"""

import math

import numpy as np
import pytest

from docmark import (
    DCT_INTERBLOCK_DIFF,
    HYBRID_DCT_DWT,
    SCHEME_IDS,
    SPATIAL_DC_QIM,
    AuthorPayload,
    WatermarkKey,
    ber,
    corpus,
    embed,
    extract,
    generate_context_watermark,
    is_blind,
    jpeg_cycle,
    ncc,
    protect,
    run_bench,
    tier_attacks,
    verify,
    write_image,
)
from docmark import transforms as tr
from docmark.docpipe import CONFIRMED, NOT_FOUND
from docmark.imaging import QUALITY_TIERS

TIERS = list(QUALITY_TIERS)


def bench_cells(images, schemes, key):
    result = run_bench(images, schemes, tier_attacks(), key)
    # index: (scheme, image, tier) -> cell
    return {
        (c.scheme, c.image, c.attack.label): c for c in result.cells
    }


@pytest.fixture(scope="session")
def grid(detailed_images, illustration_images, default_key):
    cells = bench_cells(detailed_images, list(SCHEME_IDS), default_key)
    cells.update(bench_cells(illustration_images, [SPATIAL_DC_QIM], default_key))
    return cells


def tier_series(grid, scheme, image):
    return [grid[(scheme, image, tier)].report.ber for tier in TIERS]


def test_criterion_01_no_attack_round_trip(grid, detailed_images, illustration_images):
    for scheme in (DCT_INTERBLOCK_DIFF, HYBRID_DCT_DWT):
        for name, _ in detailed_images:
            report = grid[(scheme, name, "none")].report
            assert report.ber == 0.0, f"{scheme} on {name}: BER {report.ber}"
            assert report.ncc == 1.0, f"{scheme} on {name}: NCC {report.ncc}"
    worst = max(
        grid[(SPATIAL_DC_QIM, name, "none")].report.ber for name, _ in illustration_images
    )
    assert worst <= 0.01
    print(
        "ACCEPTANCE 01 PASS: no-attack BER=0/NCC=1 for both frequency schemes "
        f"on detailed covers; spatial on illustrations worst BER={worst:.4f} <= 0.01"
    )


def test_criterion_02_high_tier_band(grid, detailed_images):
    worst = 0.0
    for scheme in SCHEME_IDS:
        for name, _ in detailed_images:
            worst = max(worst, grid[(scheme, name, "high")].report.ber)
    assert worst <= 0.03
    print(f"ACCEPTANCE 02 PASS: high-tier (q=75) worst BER={worst:.4f} <= 0.03")


def test_criterion_03_degradation_monotone(grid, detailed_images, illustration_images):
    checked = 0
    for scheme in SCHEME_IDS:
        images = detailed_images if scheme != SPATIAL_DC_QIM else (
            detailed_images + illustration_images
        )
        for name, _ in images:
            series = tier_series(grid, scheme, name)
            inversions = [max(0.0, a - b) for a, b in zip(series, series[1:])]
            count = sum(1 for v in inversions if v > 0)
            assert count <= 1, f"{scheme}/{name}: {count} inversions in {series}"
            assert all(v <= 0.01 for v in inversions), f"{scheme}/{name}: {series}"
            checked += 1
    print(
        f"ACCEPTANCE 03 PASS: BER non-decreasing none->minimum over {checked} "
        "(scheme, image) columns, inversions within one of <= 0.01"
    )


def test_criterion_04_scheme_ordering_at_minimum(grid, detailed_images):
    at_min = {
        scheme: [grid[(scheme, name, "minimum")].report.ber for name, _ in detailed_images]
        for scheme in SCHEME_IDS
    }
    med = {scheme: float(np.median(v)) for scheme, v in at_min.items()}
    assert med[HYBRID_DCT_DWT] < med[SPATIAL_DC_QIM] < med[DCT_INTERBLOCK_DIFF]
    assert min(at_min[DCT_INTERBLOCK_DIFF]) >= 0.40
    print(
        "ACCEPTANCE 04 PASS: minimum-tier medians "
        f"hybrid={med[HYBRID_DCT_DWT]:.4f} < spatial={med[SPATIAL_DC_QIM]:.4f} "
        f"< dct-diff={med[DCT_INTERBLOCK_DIFF]:.4f}, dct-diff >= 0.40 on every cover"
    )


def test_criterion_05_imperceptibility(grid, detailed_images, illustration_images):
    worst = math.inf
    for scheme in SCHEME_IDS:
        images = detailed_images if scheme != SPATIAL_DC_QIM else (
            detailed_images + illustration_images
        )
        for name, _ in images:
            worst = min(worst, grid[(scheme, name, "none")].psnr_db)
    assert worst >= 35.0
    print(f"ACCEPTANCE 05 PASS: embedding PSNR >= 35 dB everywhere (worst {worst:.2f} dB)")


def test_criterion_06_key_separation(detailed_images, default_key, default_wm):
    _, cover = detailed_images[0]
    means = {}
    for scheme in SCHEME_IDS:
        marked = embed(scheme, cover, default_wm, default_key).image
        values = []
        for i in range(20):
            wrong = WatermarkKey.from_seed(5_000_000 + 97 * i)
            got = extract(
                scheme, marked, wrong, cover=None if is_blind(scheme) else cover
            )
            values.append(ber(default_wm, got))
        means[scheme] = float(np.mean(values))
        assert 0.45 <= means[scheme] <= 0.55, f"{scheme}: mean {means[scheme]}"
    summary = ", ".join(f"{s}={m:.4f}" for s, m in means.items())
    print(f"ACCEPTANCE 06 PASS: wrong-seed mean BER in [0.45, 0.55] ({summary})")


def test_criterion_07_metric_oracles(rng):
    def ber_oracle(a, b):
        return sum(
            int(a[i, j] != b[i, j]) for i in range(a.shape[0]) for j in range(a.shape[1])
        ) / a.size

    def ncc_oracle(a, b):
        num = sum(
            float(a[i, j]) * b[i, j] for i in range(a.shape[0]) for j in range(a.shape[1])
        )
        sa = math.sqrt(float((a.astype(int) ** 2).sum()))
        sb = math.sqrt(float((b.astype(int) ** 2).sum()))
        return num / (sa * sb)

    for _ in range(1000):
        a = rng.integers(0, 2, (8, 8)).astype(np.uint8)
        b = rng.integers(0, 2, (8, 8)).astype(np.uint8)
        assert abs(ber(a, b) - ber_oracle(a, b)) <= 1e-12
        if a.any() and b.any():
            assert abs(ncc(a, b) - ncc_oracle(a, b)) <= 1e-12
    original = np.ones((64, 64), dtype=np.uint8)
    extracted = np.zeros((64, 64), dtype=np.uint8)
    extracted.ravel()[:2048] = 1
    assert abs(ncc(original, extracted) - 1 / math.sqrt(2)) <= 1e-6
    print(
        "ACCEPTANCE 07 PASS: BER/NCC match the elementwise oracle on 1000 pairs "
        "(<= 1e-12); subset-overlap case equals 1/sqrt(2) (<= 1e-6)"
    )


def test_criterion_08_transform_suite(rng):
    worst_dct = worst_haar = 0.0
    worst_energy = 0.0
    for _ in range(1000):
        block = rng.normal(0, 60, (8, 8))
        back = tr.idct2_block(tr.dct2_block(block))
        worst_dct = max(worst_dct, np.abs(back - block).max())
        rebuilt = tr.haar_idwt(*tr.haar_dwt(block))
        worst_haar = max(worst_haar, np.abs(rebuilt - block).max())
        e_in = (block**2).sum()
        worst_energy = max(
            worst_energy,
            abs((tr.dct2_block(block) ** 2).sum() - e_in) / e_in,
            abs(sum((b**2).sum() for b in tr.haar_dwt(block)) - e_in) / e_in,
        )
    assert worst_dct < 1e-9 and worst_haar < 1e-9
    assert worst_energy <= 1e-6

    grid64 = np.arange(64 * 64).reshape(64, 64)
    state = tr.arnold(grid64, 1)
    period = 1
    while not np.array_equal(state, grid64):
        state = tr.arnold(state, 1)
        period += 1
    wm = rng.integers(0, 2, (64, 64)).astype(np.uint8)
    assert np.array_equal(tr.arnold_inverse(tr.arnold(wm, 7), 7), wm)

    for count in (1, 4096):
        perm = tr.keyed_permutation(count, 31337)
        assert np.array_equal(np.sort(perm), np.arange(count))
    print(
        f"ACCEPTANCE 08 PASS: DCT/Haar round-trip < 1e-9 and energy <= 1e-6 over "
        f"1000 blocks; Arnold period {period} found by iteration, inverse holds at 7; "
        "keyed permutation is a bijection for counts 1 and 4096"
    )


def test_criterion_09_context_watermark(rng):
    payload = AuthorPayload("alice", "annual report", "figure 2 shows the trend")
    first = generate_context_watermark(payload)
    for _ in range(100):
        np.testing.assert_array_equal(generate_context_watermark(payload), first)

    distances = []
    for i in range(100):
        context = f"observation {i}: values rose steadily through the quarter"
        pos = int(rng.integers(0, len(context)))
        flipped = context[:pos] + chr(ord(context[pos]) ^ 1) + context[pos + 1 :]
        a = generate_context_watermark(AuthorPayload("alice", "report", context))
        b = generate_context_watermark(AuthorPayload("alice", "report", flipped))
        distances.append(int(np.count_nonzero(a != b)))
    assert min(distances) >= 1843 and max(distances) <= 2253
    print(
        "ACCEPTANCE 09 PASS: context watermark deterministic over 100 repeats; "
        f"avalanche distances in [{min(distances)}, {max(distances)}] within [1843, 2253]"
    )


def test_criterion_10_end_to_end_scenarios(tmp_path, default_key):
    src = tmp_path / "covers"
    out = tmp_path / "marked"
    src.mkdir()
    write_image(corpus.make_detailed(0), src / "fig1.pgm")
    write_image(corpus.make_illustration(0), src / "fig2.pgm")
    contexts = tmp_path / "contexts.tsv"
    contexts.write_text(
        "fig1.pgm\tplot of east sensor drift\nfig2.pgm\tescalation flowchart\n",
        encoding="utf-8",
    )
    manifest = protect(
        src, contexts, "alice", "ops review", out, default_key,
        manifest_path=tmp_path / "manifest.json",
    )

    untouched = verify(out, manifest, "complete", manifest_dir=tmp_path)
    assert untouched.decision == CONFIRMED
    assert all(r.report.ber <= 0.01 for r in untouched.results)

    attacked_dir = tmp_path / "attacked"
    attacked_dir.mkdir()
    from docmark import read_image

    for p in sorted(out.glob("*.pgm")):
        write_image(jpeg_cycle(read_image(p), 50), attacked_dir / p.name)
    medium = verify(attacked_dir, manifest, "images", manifest_dir=tmp_path)
    assert medium.decision == CONFIRMED

    claim = tmp_path / "claim.txt"
    claim.write_text("plot of east sensor drift", encoding="utf-8")
    assert verify(claim, manifest, "text", manifest_dir=tmp_path).decision == CONFIRMED
    claim.write_text("plot of west sensor drift", encoding="utf-8")
    assert verify(claim, manifest, "text", manifest_dir=tmp_path).decision == NOT_FOUND

    strangers = 0
    for i in range(20):
        maker = corpus.make_detailed if i % 2 else corpus.make_illustration
        stranger = tmp_path / f"stranger_{i}.pgm"
        write_image(maker(100 + i), stranger)
        verdict = verify(stranger, manifest, "images", manifest_dir=tmp_path)
        assert verdict.decision == NOT_FOUND, f"stranger {i}: {verdict.decision}"
        strangers += 1
    print(
        "ACCEPTANCE 10 PASS: protect->verify Confirmed untouched and after "
        f"medium-tier compression; text scenario Confirmed/NotFound as claimed; "
        f"{strangers}/20 unrelated covers NotFound"
    )


def test_criterion_11_bench_determinism(detailed_images, illustration_images, default_key):
    def one_run():
        first = run_bench(detailed_images, list(SCHEME_IDS), tier_attacks(), default_key)
        second = run_bench(illustration_images, [SPATIAL_DC_QIM], tier_attacks(), default_key)
        return first.to_csv() + second.to_csv()

    a = one_run()
    b = one_run()
    assert a.encode() == b.encode()
    rows = a.count("\n") - 2
    print(f"ACCEPTANCE 11 PASS: two full bench runs byte-identical ({rows} data rows)")
