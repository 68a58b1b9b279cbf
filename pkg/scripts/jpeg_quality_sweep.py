#!/usr/bin/env python3
"""BER versus JPEG quality factor, adaptive and non-adaptive.

A quick sweep over one corpus image per kind; useful for eyeballing where
the compression robustness knee sits for a given configuration.
"""

import argparse

import numpy as np

from ctmark.attacks import jpeg
from ctmark.bench import derive_keys
from ctmark.codec import EmbedConfig, embed_image, extract_image, keystream
from ctmark.complexity import dataset_stats
from ctmark.metrics import similarity
from ctmark.synth import synthetic_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--qualities", default="90,80,70,60,50,40,30")
    parser.add_argument("--keys", type=int, default=5)
    parser.add_argument("--payload-len", type=int, default=128)
    args = parser.parse_args()

    qualities = [int(q) for q in args.qualities.split(",")]
    corpus = synthetic_corpus(10, shape=(512, 512), seed=0)
    stats = dataset_stats(corpus.values())
    keys = derive_keys(args.keys)

    print(f"{'quality':>8s} {'BER adaptive':>14s} {'BER non-adaptive':>18s}")
    for q in qualities:
        results = {}
        for config in (EmbedConfig(), EmbedConfig().non_adaptive()):
            bers = []
            for img in corpus.values():
                for key in keys:
                    marked, _ = embed_image(img, key, args.payload_len, config, stats)
                    bits, _ = extract_image(jpeg(marked, q), key, args.payload_len, config)
                    bers.append(similarity(keystream(key, args.payload_len), bits).ber)
            results[config.adaptive] = float(np.mean(bers))
        print(f"{q:8d} {results[True]:14.4f} {results[False]:18.4f}")


if __name__ == "__main__":
    main()
