#!/usr/bin/env python3
"""Write the deterministic synthetic test corpus to a directory as PNGs.

The default settings produce the same ten 512x512 images the test suite
uses; any directory of 8-bit grayscale PNG/PGM images with dimensions
divisible by 32 works equally well with the ctmark CLI.
"""

import argparse
from pathlib import Path

from ctmark.complexity import dataset_stats, image_mean_complexity
from ctmark.image import save_image
from ctmark.synth import synthetic_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", type=Path)
    parser.add_argument("--count", type=int, default=10)
    parser.add_argument("--size", type=int, default=512, help="square image side")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    corpus = synthetic_corpus(args.count, shape=(args.size, args.size), seed=args.seed)
    for name, img in corpus.items():
        save_image(img, args.outdir / f"{name}.png")
    stats = dataset_stats(corpus.values())
    print(f"wrote {len(corpus)} images to {args.outdir}")
    print(f"mu_D={stats.mu_d:.2f} sigma_D={stats.sigma_d:.2f}")
    for name, img in corpus.items():
        mu = image_mean_complexity(img)
        band = "outlier" if abs(mu - stats.mu_d) > stats.sigma_d else "in-band"
        print(f"  {name:22s} mu={mu:7.2f}  {band}")


if __name__ == "__main__":
    main()
