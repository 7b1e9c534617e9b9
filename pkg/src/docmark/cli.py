"""Command-line interface.

Subcommands: embed, extract, attack, bench, protect, verify.  Exit codes:
0 success (verify: all Confirmed), 1 I/O failure, 2 validation error,
3 verify found nothing, 4 verify inconclusive.

An optional config file (plain `key = value` lines, '#' comments) overrides
the built-in defaults; command-line flags override both.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import docpipe, evaluation, imaging, schemes
from .transforms import ScrambleKey

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_INCONCLUSIVE = 4

CONFIG_DEFAULTS = {
    "delta": 6.0,
    "t_interval": 30.0,
    "alpha": 0.16,
    "arnold_iterations": 7,
    "detail_threshold": docpipe.DEFAULT_DETAIL_THRESHOLD,
    "confirm_ncc": 0.85,
    "confirm_ber": 0.12,
    "notfound_ber": 0.40,
    "tier_maximum": 90,
    "tier_high": 75,
    "tier_medium": 50,
    "tier_low": 30,
    "tier_minimum": 10,
}

_INT_KEYS = {"arnold_iterations", "tier_maximum", "tier_high", "tier_medium",
             "tier_low", "tier_minimum"}


def load_config(path=None) -> dict:
    """Built-in defaults, overlaid with `key = value` lines from a file."""
    cfg = dict(CONFIG_DEFAULTS)
    if path is None:
        return cfg
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in cfg:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            cfg[key] = int(value) if key in _INT_KEYS else float(value)
    return cfg


def _tier_quality(cfg) -> dict:
    return {
        "none": None,
        "maximum": cfg["tier_maximum"],
        "high": cfg["tier_high"],
        "medium": cfg["tier_medium"],
        "low": cfg["tier_low"],
        "minimum": cfg["tier_minimum"],
    }


def _key_from_args(args, cfg) -> schemes.WatermarkKey:
    return schemes.WatermarkKey(
        scramble=ScrambleKey(
            arnold_iterations=args.arnold_iters
            if args.arnold_iters is not None
            else cfg["arnold_iterations"],
            permutation_seed=args.key_seed,
        ),
        delta=args.delta if args.delta is not None else cfg["delta"],
        t_interval=args.t if args.t is not None else cfg["t_interval"],
        alpha=args.alpha if args.alpha is not None else cfg["alpha"],
    )


def _add_key_flags(parser):
    parser.add_argument("--key-seed", type=int, required=True,
                        help="64-bit secret seed for the embedding path")
    parser.add_argument("--delta", type=float, default=None,
                        help="brightness quantization step (spatial scheme)")
    parser.add_argument("--t", type=float, default=None,
                        help="coefficient-difference interval half-width (DCT scheme)")
    parser.add_argument("--alpha", type=float, default=None,
                        help="additive strength multiplier (hybrid scheme)")
    parser.add_argument("--arnold-iters", type=int, default=None,
                        help="watermark scrambling iterations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docmark",
        description="Robust image watermarking for document authorship protection",
    )
    parser.add_argument("--config", type=str, default=None,
                        help="key=value config file overriding built-in defaults")
    parser.add_argument("--verbose", action="store_true",
                        help="echo the effective configuration")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a watermark into a cover image")
    p.add_argument("--scheme", required=True, choices=schemes.SCHEME_IDS)
    p.add_argument("--cover", required=True, help="cover image (PGM P5)")
    p.add_argument("--wm", required=True, help="watermark (PBM P1)")
    p.add_argument("--out", required=True, help="marked image output path (PGM)")
    _add_key_flags(p)

    p = sub.add_parser("extract", help="extract a watermark from a suspect image")
    p.add_argument("--scheme", required=True, choices=schemes.SCHEME_IDS)
    p.add_argument("--suspect", required=True, help="suspect image (PGM P5)")
    p.add_argument("--cover", default=None,
                   help="original cover (required by the non-blind scheme only)")
    p.add_argument("--out", required=True, help="extracted watermark output path (PBM)")
    p.add_argument("--original", default=None,
                   help="original watermark (PBM); prints BER/NCC against it")
    _add_key_flags(p)

    p = sub.add_parser("attack", help="apply one image degradation")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jpeg-tier", default=None,
                   choices=imaging.QUALITY_TIERS)
    p.add_argument("--jpeg-quality", type=int, default=None)
    p.add_argument("--brightness", type=int, default=None)
    p.add_argument("--crop", type=float, default=None)
    p.add_argument("--scale", type=float, default=None)

    p = sub.add_parser("bench", help="run the embed/attack/extract grid")
    p.add_argument("--images", required=True, help="directory of PGM covers")
    p.add_argument("--schemes", required=True,
                   help="comma-separated scheme ids (or 'all')")
    p.add_argument("--tiers", required=True,
                   help="comma-separated quality tiers (or 'all')")
    p.add_argument("--out", required=True, help="CSV report path")
    p.add_argument("--markdown", default=None, help="optional markdown report path")
    _add_key_flags(p)

    p = sub.add_parser("protect", help="watermark a document's image directory")
    p.add_argument("--images", required=True, help="directory of cover images")
    p.add_argument("--contexts", required=True,
                   help="context file: image_path<TAB>context per line")
    p.add_argument("--author", required=True)
    p.add_argument("--title", required=True)
    p.add_argument("--out", required=True, help="directory for marked images")
    p.add_argument("--manifest", required=True, help="manifest output path (JSON)")
    p.add_argument("--blind-only", action="store_true",
                   help="never select the non-blind scheme")
    _add_key_flags(p)

    p = sub.add_parser("verify", help="verify suspect material against a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--suspect", required=True,
                   help="image, image directory, or context text file (text scenario)")
    p.add_argument("--scenario", required=True, choices=docpipe.SCENARIOS)
    return parser


def cmd_embed(args, cfg) -> int:
    cover = imaging.read_image(args.cover)
    wm = imaging.read_watermark(args.wm)
    key = _key_from_args(args, cfg)
    marked = schemes.embed(args.scheme, cover, wm, key)
    imaging.write_image(marked.image, args.out)
    print(f"PSNR={evaluation.psnr(cover, marked.image):.4f}")
    return EXIT_OK


def cmd_extract(args, cfg) -> int:
    suspect = imaging.read_image(args.suspect)
    cover = imaging.read_image(args.cover) if args.cover else None
    key = _key_from_args(args, cfg)
    extracted = schemes.extract(args.scheme, suspect, key, cover=cover)
    imaging.write_watermark(extracted, args.out)
    if args.original:
        original = imaging.read_watermark(args.original)
        report = evaluation.compare(original, extracted)
        print(f"BER={report.ber:.4f} NCC={report.ncc:.4f}")
    return EXIT_OK


def cmd_attack(args, cfg) -> int:
    chosen = [
        (name, value)
        for name, value in (
            ("jpeg-tier", args.jpeg_tier),
            ("jpeg-quality", args.jpeg_quality),
            ("brightness", args.brightness),
            ("crop", args.crop),
            ("scale", args.scale),
        )
        if value is not None
    ]
    if len(chosen) != 1:
        raise ValueError("exactly one attack flag is required")
    name, value = chosen[0]
    if name == "jpeg-tier":
        attack = evaluation.jpeg_attack(tier=value, tier_quality=_tier_quality(cfg))
    elif name == "jpeg-quality":
        attack = evaluation.jpeg_attack(quality=value)
    elif name == "brightness":
        attack = evaluation.brightness_attack(value)
    elif name == "crop":
        attack = evaluation.crop_attack(value)
    else:
        attack = evaluation.scale_attack(value)
    img = imaging.read_image(args.infile)
    imaging.write_image(evaluation.apply_attack(img, attack), args.out)
    return EXIT_OK


def cmd_bench(args, cfg) -> int:
    image_dir = Path(args.images)
    paths = sorted(image_dir.glob("*.pgm"))
    if not paths:
        raise ValueError(f"no .pgm images found in {image_dir}")
    images = [(p.stem, imaging.read_image(p)) for p in paths]
    scheme_ids = (
        list(schemes.SCHEME_IDS)
        if args.schemes == "all"
        else [s.strip() for s in args.schemes.split(",") if s.strip()]
    )
    for s in scheme_ids:
        schemes.is_blind(s)  # validates the id
    tier_names = (
        list(imaging.QUALITY_TIERS)
        if args.tiers == "all"
        else [t.strip().lower() for t in args.tiers.split(",") if t.strip()]
    )
    table = _tier_quality(cfg)
    attacks = [evaluation.jpeg_attack(tier=t, tier_quality=table) for t in tier_names]
    key = _key_from_args(args, cfg)
    result = evaluation.run_bench(images, scheme_ids, attacks, key)
    Path(args.out).write_text(result.to_csv(), encoding="utf-8")
    print(f"wrote {len(result.cells)} cells to {args.out}")
    if args.markdown:
        Path(args.markdown).write_text(result.to_markdown(), encoding="utf-8")
        print(f"wrote markdown tables to {args.markdown}")
    return EXIT_OK


def cmd_protect(args, cfg) -> int:
    key = _key_from_args(args, cfg)
    manifest = docpipe.protect(
        image_dir=args.images,
        contexts_path=args.contexts,
        author_id=args.author,
        doc_title=args.title,
        out_dir=args.out,
        key=key,
        non_blind_allowed=not args.blind_only,
        detail_threshold=cfg["detail_threshold"],
        manifest_path=args.manifest,
    )
    for entry in manifest.entries:
        print(
            f"{entry.image_path}: scheme={entry.scheme} "
            f"class={entry.image_class.label} PSNR={entry.psnr_db:.4f}"
        )
    print(f"manifest written to {args.manifest} ({len(manifest.entries)} entries)")
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    manifest = docpipe.ProtectionManifest.load(args.manifest)
    thresholds = docpipe.VerdictThresholds(
        confirm_ncc=cfg["confirm_ncc"],
        confirm_ber=cfg["confirm_ber"],
        notfound_ber=cfg["notfound_ber"],
    )
    verdict = docpipe.verify(
        suspect=args.suspect,
        manifest=manifest,
        scenario=args.scenario,
        manifest_dir=Path(args.manifest).resolve().parent,
        thresholds=thresholds,
    )
    for res in verdict.results:
        if res.report is None:
            print(f"{res.subject}: {res.decision}")
        else:
            print(
                f"{res.subject}: {res.decision} BER={res.report.ber:.4f} "
                f"NCC={res.report.ncc:.4f} scheme={res.scheme}"
            )
    if verdict.decision == docpipe.NOT_FOUND:
        return EXIT_NOT_FOUND
    if verdict.decision == docpipe.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


_COMMANDS = {
    "embed": cmd_embed,
    "extract": cmd_extract,
    "attack": cmd_attack,
    "bench": cmd_bench,
    "protect": cmd_protect,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        if args.verbose:
            for k in sorted(cfg):
                print(f"config {k} = {cfg[k]}")
        return _COMMANDS[args.command](args, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
