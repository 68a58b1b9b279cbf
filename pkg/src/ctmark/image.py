"""Grayscale image handling: file I/O, block partitioning, and the
serpentine block-scan order shared by embedding and extraction."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image


class DimensionError(ValueError):
    """Raised when an array shape is incompatible with the requested operation."""


def load_image(path) -> np.ndarray:
    """Load an 8-bit grayscale image (PNG or binary PGM) as a 2-D uint8 array.

    Color inputs are reduced to luminance with the ITU-R BT.601 weights.
    """
    with Image.open(path) as im:
        if im.mode != "L":
            im = im.convert("L")
        return np.asarray(im, dtype=np.uint8)


def save_image(img: np.ndarray, path) -> None:
    """Write a 2-D uint8 array as PNG or PGM, chosen by file extension."""
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("expected a 2-D uint8 array")
    path = Path(path)
    fmt = {".png": "PNG", ".pgm": "PPM"}.get(path.suffix.lower())
    if fmt is None:
        raise ValueError(f"unsupported image extension: {path.suffix!r}")
    Image.fromarray(img, mode="L").save(path, format=fmt)


def quantize_u8(grid: np.ndarray) -> np.ndarray:
    """Round to nearest integer and clamp to [0, 255]."""
    return np.clip(np.rint(grid), 0, 255).astype(np.uint8)


@dataclass(frozen=True)
class BlockGrid:
    """A lossless tiling of a 2-D grid into square blocks.

    ``blocks`` has shape (rows, cols, block_side, block_side); block (r, c)
    covers source rows [r*L, (r+1)*L) and columns [c*L, (c+1)*L).
    """

    block_side: int
    blocks: np.ndarray

    @property
    def rows(self) -> int:
        return self.blocks.shape[0]

    @property
    def cols(self) -> int:
        return self.blocks.shape[1]

    def block(self, r: int, c: int) -> np.ndarray:
        return self.blocks[r, c]


def partition(grid: np.ndarray, block_side: int) -> BlockGrid:
    """Tile a 2-D grid into non-overlapping block_side x block_side blocks."""
    grid = np.asarray(grid)
    if grid.ndim != 2:
        raise DimensionError("expected a 2-D grid")
    if block_side < 1:
        raise ValueError("block_side must be positive")
    h, w = grid.shape
    if h % block_side or w % block_side:
        raise DimensionError(
            f"grid {h}x{w} is not divisible into {block_side}x{block_side} blocks"
        )
    r, c = h // block_side, w // block_side
    blocks = grid.reshape(r, block_side, c, block_side).swapaxes(1, 2)
    return BlockGrid(block_side, blocks)


def retile(bg: BlockGrid) -> np.ndarray:
    """Exact inverse of :func:`partition`."""
    r, c, l, _ = bg.blocks.shape
    return bg.blocks.swapaxes(1, 2).reshape(r * l, c * l)


def serpentine_order(rows: int, cols: int) -> np.ndarray:
    """Boustrophedon scan: row 0 left-to-right, row 1 right-to-left, ...

    Returns an (rows*cols, 2) int array of (row, col) indices in scan order;
    consecutive entries are always grid-adjacent.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    r = np.repeat(np.arange(rows), cols)
    c = np.tile(np.arange(cols), rows)
    c = c.reshape(rows, cols)
    c[1::2] = c[1::2, ::-1]
    return np.stack([r, c.ravel()], axis=1)
