#!/usr/bin/env python3
"""Reproduce the robustness tables over the whole synthetic corpus.

Runs the full embed -> attack -> extract grid: all three schemes on the
five detailed covers plus the spatial scheme on the five illustrations,
across the six JPEG quality tiers.  Emits the CSV report and the markdown
tables (one per scheme, tiers as rows, covers as columns).
"""

from pathlib import Path

import docmark as dm
from docmark import corpus

out_dir = Path("demo_output/05_bench_report")
out_dir.mkdir(parents=True, exist_ok=True)

key = dm.WatermarkKey.from_seed(900_131)
attacks = dm.tier_attacks()

detailed = corpus.detailed_images()
flat = corpus.illustration_images()

photos = dm.run_bench(detailed, list(dm.SCHEME_IDS), attacks, key)
drawings = dm.run_bench(flat, [dm.SPATIAL_DC_QIM], attacks, key)

csv_text = photos.to_csv() + drawings.to_csv()
(out_dir / "report.csv").write_text(csv_text, encoding="utf-8")
(out_dir / "report_detailed.md").write_text(photos.to_markdown(), encoding="utf-8")
(out_dir / "report_illustrations.md").write_text(drawings.to_markdown(), encoding="utf-8")

cells = len(photos.cells) + len(drawings.cells)
print(f"{cells} grid cells evaluated; reports in {out_dir}/")
print()

# A quick read of the headline numbers: per scheme, median BER per tier.
import numpy as np

print(f"{'scheme':22s} " + " ".join(f"{t:>8s}" for t in dm.QUALITY_TIERS))
for scheme in dm.SCHEME_IDS:
    row = []
    for tier in dm.QUALITY_TIERS:
        values = [
            c.report.ber
            for c in photos.cells
            if c.scheme == scheme and c.attack.label == tier
        ]
        row.append(float(np.median(values)))
    print(f"{scheme:22s} " + " ".join(f"{v:8.4f}" for v in row))
print()
print("Medians over the five detailed covers. The non-blind hybrid scheme")
print("survives minimum-quality compression best; the coefficient-difference")
print("scheme is destroyed there, matching its narrower decision margins.")
