"""Command-line interface: stats, embed, extract, attack, evaluate, bench."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .attacks import parse_attack, parse_attack_list, standard_suite
from .bench import compare_modes, derive_keys, evaluate, evaluate_corpus
from .codec import EmbedConfig, embed_image, extract_image, keystream
from .complexity import DatasetStats, dataset_stats
from .image import load_image, quantize_u8, save_image
from .metrics import similarity
from .transforms import ct_decompose

IMAGE_SUFFIXES = (".png", ".pgm")


def _load_corpus(directory: str) -> dict[str, np.ndarray]:
    root = Path(directory)
    paths = sorted(p for p in root.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
    if not paths:
        raise SystemExit(f"no PNG/PGM images found in {directory}")
    return {p.stem: load_image(p) for p in paths}


def _load_config(path: str | None, non_adaptive: bool = False) -> EmbedConfig:
    if path:
        config = EmbedConfig.from_dict(json.loads(Path(path).read_text()))
    else:
        config = EmbedConfig()
    return config.non_adaptive() if non_adaptive else config


def _load_stats(path: str | None) -> DatasetStats | None:
    if not path:
        return None
    return DatasetStats.from_json(Path(path).read_text())


def _parse_key(text: str) -> int:
    key = int(text, 16)
    if not 0 <= key < 1 << 64:
        raise SystemExit("key must be a 64-bit hex value")
    return key


def _read_payload_file(path: str, payload_len: int) -> np.ndarray:
    chars = [c for c in Path(path).read_text() if c in "01"]
    if len(chars) != payload_len:
        raise SystemExit(
            f"payload file holds {len(chars)} bits, expected {payload_len}"
        )
    return np.array([int(c) for c in chars], dtype=np.uint8)


def _dump_subbands(image: np.ndarray, directory: str) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    subs = ct_decompose(image.astype(np.float64))
    named = [("approximate", subs.approximate)]
    named += [(f"detail{i}", d) for i, d in enumerate(subs.details)]
    for name, grid in named:
        lo, hi = grid.min(), grid.max()
        scaled = np.zeros_like(grid) if hi <= lo else (grid - lo) / (hi - lo) * 255.0
        save_image(quantize_u8(scaled), out / f"{name}.pgm")


def cmd_stats(args) -> int:
    corpus = _load_corpus(args.dataset)
    stats = dataset_stats(corpus.values())
    Path(args.out).write_text(stats.to_json() + "\n")
    print(f"{stats.image_count} images: mu_D={stats.mu_d:.4f} sigma_D={stats.sigma_d:.4f}")
    return 0


def cmd_embed(args) -> int:
    config = _load_config(args.config, args.non_adaptive)
    stats = _load_stats(args.stats)
    image = load_image(args.image)
    key = _parse_key(args.key)
    payload = None
    if args.payload_file:
        payload = _read_payload_file(args.payload_file, args.payload_len)
    marked, report = embed_image(image, key, args.payload_len, config, stats, payload)
    save_image(marked, args.out)
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    if args.dump_subbands:
        _dump_subbands(marked, args.dump_subbands)
    print(f"embedded {args.payload_len} bits -> {args.out}")
    return 0


def cmd_extract(args) -> int:
    config = _load_config(args.config)
    image = load_image(args.image)
    key = _parse_key(args.key)
    bits, confidences = extract_image(image, key, args.payload_len, config)
    Path(args.out).write_text("".join(map(str, bits)) + "\n")
    sim = similarity(keystream(key, args.payload_len), bits)
    if args.report:
        Path(args.report).write_text(json.dumps({
            "bits": "".join(map(str, bits)),
            "confidences": [round(float(c), 6) for c in confidences],
            "vs_keystream": {"nc": sim.nc, "ber": sim.ber},
        }, sort_keys=True, indent=2) + "\n")
    print(f"extracted {args.payload_len} bits -> {args.out} "
          f"(vs keystream: ber={sim.ber:.4f} nc={sim.nc:.4f})")
    return 0


def cmd_attack(args) -> int:
    from .attacks import apply_attack

    spec = parse_attack(args.spec, seed=args.seed)
    image = load_image(args.image)
    save_image(apply_attack(image, spec), args.out)
    print(f"{spec.label()} -> {args.out}")
    return 0


def _attack_specs(text: str, seed: int):
    if text.strip().lower() == "all":
        return standard_suite(seed)
    return parse_attack_list(text, seed)


def cmd_evaluate(args) -> int:
    config = _load_config(args.config, args.non_adaptive)
    stats = _load_stats(args.stats)
    image = load_image(args.image)
    if stats is None:
        stats = dataset_stats([image])
    keys = derive_keys(args.keys, _parse_key(args.key_seed))
    attacks = _attack_specs(args.attacks, args.seed)
    report = evaluate(image, keys, attacks, config, stats,
                      args.payload_len, Path(args.image).stem)
    Path(args.csv).write_text(report.to_csv())
    if args.json:
        Path(args.json).write_text(report.to_json())
    agg = report.aggregates()
    print(f"fidelity: {agg['fidelity']}")
    for name, vals in agg["per_attack"].items():
        print(f"  {name:12s} mean_ber={vals['mean_ber']:.4f} mean_nc={vals['mean_nc']:.4f}")
    return 0


def cmd_bench(args) -> int:
    config = _load_config(args.config)
    corpus = _load_corpus(args.dataset)
    stats = _load_stats(args.stats) or dataset_stats(corpus.values())
    keys = derive_keys(args.runs, _parse_key(args.key_seed))
    attacks = _attack_specs(args.attacks, args.seed)
    if args.compare_modes:
        adaptive, plain, diff = compare_modes(corpus, keys, attacks, config, stats,
                                              args.payload_len)
        payload = {
            "adaptive": adaptive.to_dict(),
            "non_adaptive": plain.to_dict(),
            "diff": diff,
        }
        Path(args.csv).write_text(adaptive.to_csv() + plain.to_csv())
        if args.json:
            Path(args.json).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        for row in diff:
            print(row)
    else:
        report = evaluate_corpus(corpus, keys, attacks, config, stats, args.payload_len)
        Path(args.csv).write_text(report.to_csv())
        if args.json:
            Path(args.json).write_text(report.to_json())
        print(json.dumps(report.aggregates(), sort_keys=True, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctmark",
        description="Blind adaptive image watermarking toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="dataset complexity statistics")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("embed", help="embed a payload into an image")
    p.add_argument("--image", required=True)
    p.add_argument("--key", required=True, help="64-bit hex key")
    p.add_argument("--payload-len", type=int, default=128)
    p.add_argument("--payload-file", help="ASCII 0/1 file used instead of the keystream")
    p.add_argument("--stats", help="stats JSON from the stats command")
    p.add_argument("--non-adaptive", action="store_true")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write an embedding report JSON")
    p.add_argument("--dump-subbands", help="directory for normalized subband PGMs")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="blind-extract a payload")
    p.add_argument("--image", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--payload-len", type=int, default=128)
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply one attack to an image")
    p.add_argument("--image", required=True)
    p.add_argument("--spec", required=True, help='e.g. "jpeg:70", "crop:0.25", "histeq"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("evaluate", help="evaluate one image against attacks")
    p.add_argument("--image", required=True)
    p.add_argument("--keys", type=int, default=20, help="number of derived keys")
    p.add_argument("--key-seed", default="5eed")
    p.add_argument("--attacks", default="all")
    p.add_argument("--seed", type=int, default=0, help="attack noise seed")
    p.add_argument("--stats")
    p.add_argument("--payload-len", type=int, default=128)
    p.add_argument("--non-adaptive", action="store_true")
    p.add_argument("--config")
    p.add_argument("--csv", required=True)
    p.add_argument("--json")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="run the benchmark over a corpus directory")
    p.add_argument("--dataset", required=True)
    p.add_argument("--runs", type=int, default=20, help="keys per image")
    p.add_argument("--key-seed", default="5eed")
    p.add_argument("--attacks", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stats")
    p.add_argument("--payload-len", type=int, default=128)
    p.add_argument("--compare-modes", action="store_true")
    p.add_argument("--config")
    p.add_argument("--csv", required=True)
    p.add_argument("--json")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
