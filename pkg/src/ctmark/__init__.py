"""Blind adaptive grayscale image watermarking in a contourlet-DCT domain.

The embedding strength adapts on two levels: per image, by ranking its mean
pixel complexity against dataset statistics, and per block, by tracking the
relative complexity change along a serpentine scan.  Payload bits ride on
the ordering of fixed DCT coefficient pairs in every subband block and are
recovered blindly by weighted majority voting.
"""

from .attacks import AttackSpec, apply_attack, parse_attack, standard_suite
from .bench import EvaluationReport, compare_modes, derive_keys, evaluate, evaluate_corpus
from .codec import (
    CapacityError,
    EmbedConfig,
    EmbedReport,
    ReplicationPlan,
    embed_image,
    extract_image,
    keystream,
    replication_plan,
)
from .complexity import (
    DatasetStats,
    StrengthParams,
    StrengthState,
    block_complexity,
    complexity_map,
    dataset_stats,
    image_mean_complexity,
    initial_alpha,
    next_alpha,
)
from .image import DimensionError, load_image, partition, retile, save_image, serpentine_order
from .metrics import SimilarityResult, psnr, similarity, ssim
from .transforms import (
    SubbandSet,
    ct_decompose,
    ct_reconstruct,
    dct2,
    dfb_decompose,
    dfb_reconstruct,
    idct2,
    lp_decompose,
    lp_reconstruct,
)

__version__ = "0.1.0"

__all__ = [
    "AttackSpec",
    "CapacityError",
    "DatasetStats",
    "DimensionError",
    "EmbedConfig",
    "EmbedReport",
    "EvaluationReport",
    "ReplicationPlan",
    "SimilarityResult",
    "StrengthParams",
    "StrengthState",
    "SubbandSet",
    "apply_attack",
    "block_complexity",
    "compare_modes",
    "complexity_map",
    "ct_decompose",
    "ct_reconstruct",
    "dataset_stats",
    "dct2",
    "derive_keys",
    "dfb_decompose",
    "dfb_reconstruct",
    "embed_image",
    "evaluate",
    "evaluate_corpus",
    "extract_image",
    "idct2",
    "image_mean_complexity",
    "initial_alpha",
    "keystream",
    "load_image",
    "lp_decompose",
    "lp_reconstruct",
    "next_alpha",
    "parse_attack",
    "partition",
    "psnr",
    "replication_plan",
    "retile",
    "save_image",
    "serpentine_order",
    "similarity",
    "ssim",
    "standard_suite",
]
