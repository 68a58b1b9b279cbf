"""Acceptance suite: every criterion at its stated tolerance, one printed
pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s``.  The corpus is the
deterministic synthetic set (10 images of 512x512, seed 0); keys and attack
seeds are fixed, so every number below is reproducible bit for bit.
"""

import time

import numpy as np
import pytest

from ctmark.attacks import parse_attack
from ctmark.bench import derive_keys
from ctmark.cli import main
from ctmark.codec import EmbedConfig, embed_image, extract_image, keystream, replication_plan
from ctmark.complexity import StrengthParams, StrengthState, dataset_stats, next_alpha
from ctmark.image import save_image
from ctmark.metrics import psnr, similarity, ssim
from ctmark.synth import synthetic_corpus
from ctmark.transforms import (
    dct2,
    dfb_decompose,
    dfb_reconstruct,
    idct2,
    lp_decompose,
    lp_reconstruct,
)

PAYLOAD_LEN = 128
KEYS_FULL = derive_keys(20, 0x5EED)
KEYS_ATTACK = KEYS_FULL[:5]
ATTACK_SEED = 11
CONFIG = EmbedConfig()


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"[criterion {criterion:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def corpus():
    return synthetic_corpus(10, shape=(512, 512), seed=0)


@pytest.fixture(scope="module")
def stats(corpus):
    return dataset_stats(corpus.values())


@pytest.fixture(scope="module")
def adaptive_marked(corpus, stats):
    """(image, key) -> (marked, psnr, ssim) for the full 20-key protocol."""
    out = {}
    for name, img in corpus.items():
        for key in KEYS_FULL:
            marked, _ = embed_image(img, key, PAYLOAD_LEN, CONFIG, stats)
            out[(name, key)] = (marked, psnr(img, marked), ssim(img, marked))
    return out


@pytest.fixture(scope="module")
def plain_marked(corpus, stats):
    """Non-adaptive runs: PSNR for all 20 keys, images kept for 5 keys."""
    config = CONFIG.non_adaptive()
    psnrs = {}
    marked5 = {}
    for name, img in corpus.items():
        for key in KEYS_FULL:
            marked, _ = embed_image(img, key, PAYLOAD_LEN, config, stats)
            psnrs[(name, key)] = psnr(img, marked)
            if key in KEYS_ATTACK:
                marked5[(name, key)] = marked
    return psnrs, marked5


def _attack_ber(marked, key, spec_text):
    attacked = __import__("ctmark.attacks", fromlist=["apply_attack"]).apply_attack(
        marked, parse_attack(spec_text, seed=ATTACK_SEED)
    )
    bits, _ = extract_image(attacked, key, PAYLOAD_LEN, CONFIG)
    return similarity(keystream(key, PAYLOAD_LEN), bits).ber


def test_criterion_01_transform_correctness(rng):
    start = time.time()
    for _ in range(20):
        block = rng.normal(size=(8, 8)) * 50
        coeffs = dct2(block)
        assert np.abs(idct2(coeffs) - block).max() < 1e-10
        assert abs(np.sum(coeffs**2) - np.sum(block**2)) <= 1e-10 * np.sum(block**2)
    worst = 0.0
    for i in range(50):
        x = np.random.default_rng(1000 + i).normal(size=(512, 512)) * 60 + 128
        coarse, bandpass = lp_decompose(x)
        subs = dfb_decompose(bandpass)
        norm = np.sqrt((x**2).mean())
        lp_err = np.sqrt(((lp_reconstruct(coarse, bandpass) - x) ** 2).mean()) / norm
        band = dfb_reconstruct(subs)
        dfb_err = np.sqrt(((band - bandpass) ** 2).mean()) / np.sqrt((bandpass**2).mean())
        ct_err = np.sqrt(((lp_reconstruct(coarse, band) - x) ** 2).mean()) / norm
        worst = max(worst, lp_err, dfb_err, ct_err)
    elapsed = time.time() - start
    report(1, worst <= 1e-6 and elapsed < 10.0,
           f"round-trip worst rel err {worst:.2e} (<=1e-6), {elapsed:.1f}s (<10s)")


def test_criterion_02_replication_arithmetic():
    plan = replication_plan(512, 512, 128, CONFIG)
    ok = (plan.rho == 2048.0 and plan.redundancy_approx == 32.0
          and plan.redundancy_detail == 8.0 and plan.blocks_approx == 4096
          and plan.blocks_per_detail_subband == 256)
    report(2, ok, f"rho={plan.rho} R_A={plan.redundancy_approx} R_D={plan.redundancy_detail}")


def test_criterion_03_no_attack_round_trip(corpus, adaptive_marked):
    start = time.time()
    worst_ber, worst_nc = 0.0, 1.0
    for name in corpus:
        for key in KEYS_FULL:
            marked, _, _ = adaptive_marked[(name, key)]
            bits, _ = extract_image(marked, key, PAYLOAD_LEN, CONFIG)
            sim = similarity(keystream(key, PAYLOAD_LEN), bits)
            worst_ber = max(worst_ber, sim.ber)
            worst_nc = min(worst_nc, sim.nc)
    elapsed = time.time() - start
    report(3, worst_ber == 0.0 and worst_nc == 1.0,
           f"10 images x 20 keys: max BER {worst_ber:.4f}, min NC {worst_nc:.4f}, "
           f"extraction {elapsed:.0f}s")


def test_criterion_04_imperceptibility(corpus, adaptive_marked):
    psnrs = [adaptive_marked[(n, k)][1] for n in corpus for k in KEYS_FULL]
    ssims = {n: min(adaptive_marked[(n, k)][2] for k in KEYS_FULL) for n in corpus}
    mean_psnr = float(np.mean(psnrs))
    min_ssim = min(ssims.values())
    report(4, mean_psnr >= 43.0 and min_ssim >= 0.97,
           f"mean PSNR {mean_psnr:.2f} dB (>=43), min per-image SSIM {min_ssim:.4f} (>=0.97)")


def test_criterion_05_adaptive_beats_non_adaptive(corpus, adaptive_marked, plain_marked):
    plain_psnrs, _ = plain_marked
    wins = 0
    mean_a, mean_n = [], []
    for name in corpus:
        a = np.mean([adaptive_marked[(name, k)][1] for k in KEYS_FULL])
        n = np.mean([plain_psnrs[(name, k)] for k in KEYS_FULL])
        mean_a.append(a)
        mean_n.append(n)
        wins += a > n
    ma, mn = float(np.mean(mean_a)), float(np.mean(mean_n))
    report(5, ma > mn and wins >= 0.7 * len(corpus),
           f"mean PSNR adaptive {ma:.3f} > non-adaptive {mn:.3f} dB, "
           f"wins {wins}/{len(corpus)} (>=70%)")


def test_criterion_06_jpeg_robustness(corpus, adaptive_marked):
    bers = {70: [], 40: []}
    for name in corpus:
        for key in KEYS_ATTACK:
            marked = adaptive_marked[(name, key)][0]
            for q in (70, 40):
                bers[q].append(_attack_ber(marked, key, f"jpeg:{q}"))
    m70, m40 = float(np.mean(bers[70])), float(np.mean(bers[40]))
    report(6, m70 <= 0.02 and m40 <= 0.20,
           f"mean BER jpeg:70 {m70:.4f} (<=0.02), jpeg:40 {m40:.4f} (<=0.20)")


def test_criterion_07_resize_robustness(corpus, adaptive_marked):
    worst = 0.0
    for scale in (0.5, 0.75, 1.5, 2.0):
        for name in corpus:
            for key in KEYS_ATTACK:
                marked = adaptive_marked[(name, key)][0]
                worst = max(worst, _attack_ber(marked, key, f"resize:{scale}"))
    report(7, worst == 0.0,
           f"max BER over scales (0.5, 0.75, 1.5, 2.0) = {worst:.4f} (must be 0)")


def test_criterion_08_median_filtering(corpus, adaptive_marked):
    bers = [
        _attack_ber(adaptive_marked[(name, key)][0], key, "median:3")
        for name in corpus for key in KEYS_ATTACK
    ]
    mean = float(np.mean(bers))
    report(8, mean <= 0.01, f"mean BER median:3 {mean:.4f} (<=0.01), max {max(bers):.4f}")


def test_criterion_09_small_rotations(corpus, adaptive_marked):
    means = {}
    for angle in (0.5, 1.0, 2.0):
        vals = [
            _attack_ber(adaptive_marked[(name, key)][0], key, f"rotate:{angle}")
            for name in corpus for key in KEYS_ATTACK
        ]
        means[angle] = float(np.mean(vals))
    report(9, all(v <= 0.05 for v in means.values()),
           "mean BER " + ", ".join(f"rotate:{a} {v:.4f}" for a, v in means.items())
           + " (each <=0.05)")


def test_criterion_10_cropping_comparison(corpus, adaptive_marked, plain_marked):
    _, plain5 = plain_marked
    config_n = CONFIG.non_adaptive()
    a_bers, n_bers = [], []
    for name in corpus:
        for key in KEYS_ATTACK:
            ref = keystream(key, PAYLOAD_LEN)
            atk = parse_attack("crop:0.25", seed=ATTACK_SEED)
            from ctmark.attacks import apply_attack

            bits, _ = extract_image(
                apply_attack(adaptive_marked[(name, key)][0], atk),
                key, PAYLOAD_LEN, CONFIG)
            a_bers.append(similarity(ref, bits).ber)
            bits, _ = extract_image(
                apply_attack(plain5[(name, key)], atk), key, PAYLOAD_LEN, config_n)
            n_bers.append(similarity(ref, bits).ber)
    ma, mn = float(np.mean(a_bers)), float(np.mean(n_bers))
    report(10, ma <= mn,
           f"crop:0.25 over 10 images x 5 keys: mean BER adaptive {ma:.4f} "
           f"<= non-adaptive {mn:.4f}")


def test_criterion_11_adaptivity_invariants():
    params = StrengthParams()
    gen = np.random.default_rng(77)
    escapes = 0
    for _ in range(10_000):
        alpha_i = float(gen.uniform(1.0, 30.0))
        length = int(gen.integers(2, 20))
        cs = gen.uniform(0.0, 500.0, size=length)
        cs[gen.random(length) < 0.2] = 0.0  # exercise the flat guard
        state = StrengthState(alpha_i, alpha_i, float(cs[0]))
        for c in cs[1:]:
            state = next_alpha(state, float(c), params)
            if not (params.t1 * alpha_i - 1e-9 <= state.alpha_m
                    <= params.t2 * alpha_i + 1e-9):
                escapes += 1
    # monotonicity in the complexity argument (hence in gamma)
    mono_ok = True
    for _ in range(2_000):
        prev = float(gen.uniform(0.0, 100.0))
        alpha_m = float(gen.uniform(5.5, 16.5))
        state = StrengthState(11.0, alpha_m, prev)
        c1, c2 = sorted(gen.uniform(0.0, 300.0, size=2))
        if (next_alpha(state, float(c1), params).alpha_m
                > next_alpha(state, float(c2), params).alpha_m + 1e-12):
            mono_ok = False
    guard = next_alpha(StrengthState(11.0, 11.0, 0.0), 100.0, params).alpha_m
    report(11, escapes == 0 and mono_ok and np.isfinite(guard),
           f"10000 chains, clamp escapes {escapes}, monotone {mono_ok}, "
           f"flat-predecessor guard alpha {guard:.2f}")


def test_criterion_12_bench_determinism(tmp_path):
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    for name, img in synthetic_corpus(3, shape=(128, 128), seed=5).items():
        save_image(img, corpus_dir / f"{name}.png")
    outputs = []
    for tag in ("a", "b"):
        csv_path = tmp_path / f"{tag}.csv"
        json_path = tmp_path / f"{tag}.json"
        main([
            "bench", "--dataset", str(corpus_dir), "--runs", "2",
            "--attacks", "jpeg:70,sp:0.01,histeq", "--payload-len", "32",
            "--seed", "4", "--csv", str(csv_path), "--json", str(json_path),
        ])
        outputs.append((csv_path.read_bytes(), json_path.read_bytes()))
    ok = outputs[0] == outputs[1]
    report(12, ok, f"two bench runs byte-identical: csv {len(outputs[0][0])} B, "
                   f"json {len(outputs[0][1])} B")


def test_criterion_13_wrong_key_null(corpus, adaptive_marked):
    marked = adaptive_marked[("mixed_02", KEYS_FULL[0])][0]
    bers = []
    for i in range(20):
        wrong = (0xBEEF0000 + 1009 * i) & (2**64 - 1)
        bits, _ = extract_image(marked, wrong, PAYLOAD_LEN, CONFIG)
        bers.append(similarity(keystream(wrong, PAYLOAD_LEN), bits).ber)
    lo, hi = min(bers), max(bers)
    report(13, lo >= 0.4 and hi <= 0.6,
           f"20 wrong keys: BER in [{lo:.3f}, {hi:.3f}] (required within [0.4, 0.6])")
