"""Watermark bit-stream generation, replication planning, coefficient-pair
embedding, and blind extraction with weighted majority voting.

One payload bit is carried by the ordering of two fixed DCT coefficients in
each block of every subband.  Bits are assigned to serpentine scan positions
cyclically (with a per-row rotation that spreads a bit's replicas across
grid columns), replicating the payload across the approximate scale and
independently in each detail subband.  Extraction reads each pair's ordering
and weight (the coefficient gap) and decides every payload bit by weighted
majority across all replicas, with no access to the original image.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .complexity import (
    DatasetStats,
    StrengthParams,
    alpha_chain,
    image_mean_complexity,
    initial_alpha,
    stack_block_complexity,
)
from .image import BlockGrid, DimensionError, partition, quantize_u8, retile, serpentine_order
from .transforms import SubbandSet, ct_decompose, ct_reconstruct, dct2_stack, idct2_stack

_MASK64 = (1 << 64) - 1


class CapacityError(ValueError):
    """Raised when no subband can hold one full copy of the payload."""


def keystream(key: int, length: int) -> np.ndarray:
    """Deterministic pseudorandom bit sequence for a 64-bit key.

    Uses the splitmix64 mixing recurrence; each 64-bit output word is emitted
    most-significant bit first.  Bit-exact across platforms.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    state = key & _MASK64
    words = []
    for _ in range((length + 63) // 64):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        words.append(z ^ (z >> 31))
    bits = np.zeros(len(words) * 64, dtype=np.uint8)
    for i, w in enumerate(words):
        for j in range(64):
            bits[i * 64 + j] = (w >> (63 - j)) & 1
    return bits[:length]


@dataclass(frozen=True)
class EmbedConfig:
    """Embedding geometry and strength settings.

    Coefficient positions are 1-based (row, col) pairs inside a block; the
    defaults pick the mid/high-frequency mirror pair in each scale.  With
    ``adaptive`` off, every block uses the fixed base strength of its scale.
    """

    l_ab: int = 4
    l_db: int = 16
    approx_positions: tuple[tuple[int, int], tuple[int, int]] = ((3, 4), (4, 3))
    detail_positions: tuple[tuple[int, int], tuple[int, int]] = ((14, 15), (15, 14))
    strength: StrengthParams = field(default_factory=StrengthParams)
    adaptive: bool = True

    def __post_init__(self):
        for side, positions, label in (
            (self.l_ab, self.approx_positions, "approximate"),
            (self.l_db, self.detail_positions, "detail"),
        ):
            if side < 3:
                raise ValueError(f"{label} block side must be >= 3")
            p, q = positions
            if p == q:
                raise ValueError(f"{label} coefficient positions must be distinct")
            for (u, v) in (p, q):
                if not (1 <= u <= side and 1 <= v <= side):
                    raise ValueError(
                        f"{label} position {(u, v)} outside a {side}x{side} block"
                    )

    def to_dict(self) -> dict:
        return {
            "l_ab": self.l_ab,
            "l_db": self.l_db,
            "approx_positions": [list(p) for p in self.approx_positions],
            "detail_positions": [list(p) for p in self.detail_positions],
            "strength": self.strength.to_dict(),
            "adaptive": self.adaptive,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbedConfig":
        kwargs = dict(d)
        if "strength" in kwargs:
            kwargs["strength"] = StrengthParams.from_dict(kwargs["strength"])
        for key in ("approx_positions", "detail_positions"):
            if key in kwargs:
                kwargs[key] = tuple(tuple(p) for p in kwargs[key])
        return cls(**kwargs)

    def non_adaptive(self) -> "EmbedConfig":
        return replace(self, adaptive=False)


@dataclass(frozen=True)
class ReplicationPlan:
    """How often the payload fits into each scale."""

    rho: float
    blocks_approx: int
    blocks_per_detail_subband: int
    redundancy_approx: float
    redundancy_detail: float


def replication_plan(m: int, n: int, payload_len: int, config: EmbedConfig) -> ReplicationPlan:
    """Replication arithmetic for an m x n image and a payload of given length.

    The approximate scale holds rho / (4 * l_ab^2) copies and the detail
    scale as a whole rho / l_db^2, with rho = m*n / payload_len.  At least
    one subband must hold a full copy.
    """
    if payload_len < 1:
        raise ValueError("payload length must be >= 1")
    if (m * n) % (4 * config.l_ab**2) or ((m // 2) * (n // 2)) % (config.l_db**2):
        raise DimensionError("image does not tile into whole subband blocks")
    rho = (m * n) / payload_len
    blocks_approx = (m * n) // (4 * config.l_ab**2)
    blocks_detail = ((m // 2) * (n // 2)) // config.l_db**2
    if blocks_approx < payload_len and blocks_detail < payload_len:
        raise CapacityError(
            f"payload of {payload_len} bits does not fit: "
            f"{blocks_approx} approximate blocks, {blocks_detail} per detail subband"
        )
    return ReplicationPlan(
        rho=rho,
        blocks_approx=blocks_approx,
        blocks_per_detail_subband=blocks_detail,
        redundancy_approx=rho / (4 * config.l_ab**2),
        redundancy_detail=rho / config.l_db**2,
    )


def embed_bit(coeffs: np.ndarray, positions, alpha: float, bit: int) -> np.ndarray:
    """Force the ordering of one coefficient pair to encode ``bit``.

    If the ordering already holds with margin alpha the block is returned
    unchanged; otherwise the pair is pushed apart symmetrically about its
    mean, leaving a gap of exactly alpha with the required sign.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    (u1, v1), (u2, v2) = positions
    a = coeffs[u1 - 1, v1 - 1]
    c = coeffs[u2 - 1, v2 - 1]
    if bit == 1 and a > c + alpha:
        return coeffs
    if bit == 0 and a + alpha < c:
        return coeffs
    mean = 0.5 * (a + c)
    half = 0.5 * alpha
    out = coeffs.copy()
    if bit == 1:
        out[u1 - 1, v1 - 1] = mean + half
        out[u2 - 1, v2 - 1] = mean - half
    else:
        out[u1 - 1, v1 - 1] = mean - half
        out[u2 - 1, v2 - 1] = mean + half
    return out


def read_bit(coeffs: np.ndarray, positions) -> tuple[int, float]:
    """Read one coefficient pair: bit from the ordering, weight from the gap.

    Ties decode as bit 0 with weight 0.
    """
    (u1, v1), (u2, v2) = positions
    a = coeffs[u1 - 1, v1 - 1]
    c = coeffs[u2 - 1, v2 - 1]
    return (1 if a > c else 0), float(abs(a - c))


@dataclass(frozen=True)
class SubbandAlphaStats:
    """Summary of the strength factors emitted while embedding one subband."""

    first: float
    minimum: float
    maximum: float
    mean: float

    def to_dict(self) -> dict:
        return {"first": self.first, "min": self.minimum,
                "max": self.maximum, "mean": self.mean}


@dataclass(frozen=True)
class EmbedReport:
    """Everything needed to audit one embedding run."""

    plan: ReplicationPlan
    mu_image: float
    alpha_initial_approx: float
    alpha_initial_detail: float
    alpha_stats: tuple[SubbandAlphaStats, ...]
    payload_len: int
    config: EmbedConfig

    def to_dict(self) -> dict:
        return {
            "plan": {
                "rho": self.plan.rho,
                "blocks_approx": self.plan.blocks_approx,
                "blocks_per_detail_subband": self.plan.blocks_per_detail_subband,
                "redundancy_approx": self.plan.redundancy_approx,
                "redundancy_detail": self.plan.redundancy_detail,
            },
            "mu_image": self.mu_image,
            "alpha_initial_approx": self.alpha_initial_approx,
            "alpha_initial_detail": self.alpha_initial_detail,
            "alpha_stats": [s.to_dict() for s in self.alpha_stats],
            "payload_len": self.payload_len,
            "config": self.config.to_dict(),
        }


def _check_geometry(shape: tuple[int, int], config: EmbedConfig) -> None:
    m, n = shape
    if m % 4 or n % 4:
        raise DimensionError(f"image {m}x{n}: dimensions must be divisible by 4")
    for side, label in ((config.l_ab, "approximate"), (config.l_db, "detail")):
        if (m // 2) % side or (n // 2) % side:
            raise DimensionError(
                f"image {m}x{n}: subband {m//2}x{n//2} does not tile into "
                f"{side}x{side} {label} blocks"
            )


def _scan_blocks(grid: np.ndarray, side: int) -> tuple[BlockGrid, np.ndarray, np.ndarray]:
    bg = partition(grid, side)
    order = serpentine_order(bg.rows, bg.cols)
    return bg, order, bg.blocks[order[:, 0], order[:, 1]]


#: Per-row rotation stride of the bit-to-block assignment (see _bit_indexes).
_ROW_ROTATION = 17


def _bit_indexes(n_blocks: int, cols: int, payload_len: int) -> np.ndarray:
    """Payload index carried by each serpentine scan position.

    Each scan row covers the same cyclic index window as a plain
    position-mod-length assignment (so coverage and the replica count per
    bit are unchanged), but the association inside a row is rotated by a
    per-row stride.  A plain cyclic assignment degenerates whenever the row
    length divides the payload length: all replicas of one bit then share a
    single grid column and fall together to any column-aligned damage such
    as centered cropping.  The rotation spreads replicas across columns
    while staying computable from geometry alone, keeping extraction blind.
    """
    pos = np.arange(n_blocks)
    row = pos // cols
    col = pos % cols
    return (row * cols + (col + _ROW_ROTATION * row) % cols) % payload_len


def _embed_subband(grid, payload, side, positions, alpha_first, params, adaptive):
    bg, order, scan = _scan_blocks(grid, side)
    n = scan.shape[0]
    if adaptive:
        alphas = alpha_chain(alpha_first, stack_block_complexity(scan), params)
    else:
        alphas = np.full(n, alpha_first)

    coeffs = dct2_stack(scan)
    (u1, v1), (u2, v2) = positions
    a = coeffs[:, u1 - 1, v1 - 1]
    c = coeffs[:, u2 - 1, v2 - 1]
    bits = payload[_bit_indexes(n, bg.cols, payload.size)]

    ok = np.where(bits == 1, a > c + alphas, a + alphas < c)
    mean = 0.5 * (a + c)
    sign = np.where(bits == 1, 1.0, -1.0)
    coeffs[:, u1 - 1, v1 - 1] = np.where(ok, a, mean + sign * 0.5 * alphas)
    coeffs[:, u2 - 1, v2 - 1] = np.where(ok, c, mean - sign * 0.5 * alphas)

    out = np.empty_like(bg.blocks)
    out[order[:, 0], order[:, 1]] = idct2_stack(coeffs)
    stats = SubbandAlphaStats(first=float(alphas[0]), minimum=float(alphas.min()),
                              maximum=float(alphas.max()), mean=float(alphas.mean()))
    return retile(BlockGrid(side, out)), stats


def embed_image(
    image: np.ndarray,
    key: int,
    payload_len: int,
    config: EmbedConfig | None = None,
    stats: DatasetStats | None = None,
    payload: np.ndarray | None = None,
) -> tuple[np.ndarray, EmbedReport]:
    """Embed a payload into a grayscale image; returns (watermarked, report).

    The payload defaults to ``keystream(key, payload_len)``.  ``stats`` ranks
    the image against a dataset for the initial strength factor; without it
    the base strengths are used directly.
    """
    config = config or EmbedConfig()
    image = np.asarray(image)
    if image.ndim != 2 or image.dtype != np.uint8:
        raise ValueError("expected a 2-D uint8 image")
    _check_geometry(image.shape, config)
    plan = replication_plan(image.shape[0], image.shape[1], payload_len, config)

    if payload is None:
        payload = keystream(key, payload_len)
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.size != payload_len or not np.isin(payload, (0, 1)).all():
        raise ValueError("payload must be a 0/1 vector of the declared length")

    params = config.strength
    mu = image_mean_complexity(image)
    if config.adaptive and stats is not None:
        alpha_a = initial_alpha(mu, stats, params.alpha0_approx)
        alpha_d = initial_alpha(mu, stats, params.alpha0_detail)
    else:
        alpha_a = params.alpha0_approx
        alpha_d = params.alpha0_detail

    subs = ct_decompose(image.astype(np.float64))
    approx, stats_a = _embed_subband(
        subs.approximate, payload, config.l_ab, config.approx_positions,
        alpha_a, params, config.adaptive,
    )
    details = []
    stats_d = []
    for det in subs.details:
        out, st = _embed_subband(
            det, payload, config.l_db, config.detail_positions,
            alpha_d, params, config.adaptive,
        )
        details.append(out)
        stats_d.append(st)

    marked = quantize_u8(ct_reconstruct(SubbandSet(approx, tuple(details))))
    report = EmbedReport(
        plan=plan,
        mu_image=mu,
        alpha_initial_approx=alpha_a,
        alpha_initial_detail=alpha_d,
        alpha_stats=tuple([stats_a] + stats_d),
        payload_len=payload_len,
        config=config,
    )
    return marked, report


def _read_subband(grid, side, positions, payload_len):
    bg, _, scan = _scan_blocks(grid, side)
    coeffs = dct2_stack(scan)
    (u1, v1), (u2, v2) = positions
    a = coeffs[:, u1 - 1, v1 - 1]
    c = coeffs[:, u2 - 1, v2 - 1]
    idx = _bit_indexes(scan.shape[0], bg.cols, payload_len)
    return idx, (a > c).astype(np.intp), np.abs(a - c)


def extract_image(
    image: np.ndarray,
    key: int,
    payload_len: int,
    config: EmbedConfig | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Blind extraction: returns (bits, confidences) of length payload_len.

    Votes from every block of every subband are pooled per payload index and
    decided by weighted majority (ties decode as 0).  The confidence of a bit
    is the winning margin as a fraction of the total vote weight.  Decoding
    itself needs no key; the key is what makes the reference keystream, and
    with a wrong key the decoded bits are uncorrelated with its stream.
    """
    config = config or EmbedConfig()
    image = np.asarray(image)
    if image.ndim != 2 or image.dtype != np.uint8:
        raise ValueError("expected a 2-D uint8 image")
    _check_geometry(image.shape, config)

    subs = ct_decompose(image.astype(np.float64))
    acc = np.zeros((payload_len, 2))
    readers = [(subs.approximate, config.l_ab, config.approx_positions)]
    readers += [(d, config.l_db, config.detail_positions) for d in subs.details]
    for grid, side, positions in readers:
        idx, bits, weights = _read_subband(grid, side, positions, payload_len)
        np.add.at(acc, (idx, bits), weights)

    decoded = (acc[:, 1] > acc[:, 0]).astype(np.uint8)
    total = acc.sum(axis=1)
    margin = np.abs(acc[:, 1] - acc[:, 0])
    confidences = np.divide(margin, total, out=np.zeros_like(total), where=total > 0)
    return decoded, confidences
