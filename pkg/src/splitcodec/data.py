"""Synthetic image dataset generation and the on-disk dataset format.

File layout (big-endian): magic b"SCDS" | version u16 | count u32 |
H u16 | W u16 | C u16 | count*H*W*C raw uint8 pixels.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import ContractViolation, FormatError
from .rng import RngStream

MAGIC = b"SCDS"
FORMAT_VERSION = 1
_HEADER = struct.Struct(">4sHIHHH")


def _gradient(h, w, gen):
    ang = gen.random() * 2 * np.pi
    yy, xx = np.mgrid[0:h, 0:w]
    t = np.cos(ang) * xx / max(w - 1, 1) + np.sin(ang) * yy / max(h - 1, 1)
    t = (t - t.min()) / max(t.max() - t.min(), 1e-12)
    lo, hi = sorted(gen.integers(0, 256, 2).tolist())
    return lo + t * (hi - lo)


def _rectangle(h, w, gen):
    img = np.full((h, w), float(gen.integers(0, 256)))
    y0, y1 = sorted(gen.integers(0, h, 2).tolist())
    x0, x1 = sorted(gen.integers(0, w, 2).tolist())
    img[y0:y1 + 1, x0:x1 + 1] = float(gen.integers(0, 256))
    return img


def _disc(h, w, gen):
    img = np.full((h, w), float(gen.integers(0, 256)))
    cy, cx = gen.random() * (h - 1), gen.random() * (w - 1)
    r = 1.0 + gen.random() * (min(h, w) / 2.0)
    yy, xx = np.mgrid[0:h, 0:w]
    img[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = float(gen.integers(0, 256))
    return img


def _checkerboard(h, w, gen):
    period = int(gen.integers(1, max(2, min(h, w) // 2) + 1))
    yy, xx = np.mgrid[0:h, 0:w]
    cells = ((yy // period) + (xx // period)) % 2
    a, b = gen.integers(0, 256, 2).tolist()
    return np.where(cells == 0, float(a), float(b))


_GENERATORS = (_gradient, _rectangle, _disc, _checkerboard)


def generate_synthetic(count: int, h: int, w: int, c: int,
                       seed: int) -> np.ndarray:
    """Parametric images (gradients, rectangles, discs, checkerboards)."""
    if h <= 0 or w <= 0 or c <= 0 or count < 0:
        raise ContractViolation("dimensions must be positive, count >= 0")
    gen = RngStream(seed, "synthetic").generator
    images = np.empty((count, h, w, c), dtype=np.uint8)
    for i in range(count):
        kind = _GENERATORS[gen.integers(len(_GENERATORS))]
        for ch in range(c):
            plane = np.clip(kind(h, w, gen), 0, 255)
            images[i, :, :, ch] = np.floor(plane + 0.5).astype(np.uint8)
    return images


def save_dataset(path, images: np.ndarray) -> None:
    images = np.asarray(images, dtype=np.uint8)
    count, h, w, c = images.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, count, h, w, c))
        fh.write(images.tobytes())


def load_dataset(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise FormatError(f"truncated header ({len(raw)} bytes)")
    magic, version, count, h, w, c = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r} at offset 0")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported dataset version {version}")
    expected = _HEADER.size + count * h * w * c
    if len(raw) != expected:
        raise FormatError(
            f"file length {len(raw)} != expected {expected} (offset {_HEADER.size})")
    pixels = np.frombuffer(raw, dtype=np.uint8, offset=_HEADER.size)
    return pixels.reshape(count, h, w, c).copy()


def split_indices(count: int, ratios: tuple[float, float, float],
                  seed: int) -> dict[str, np.ndarray]:
    """Deterministic shuffled split; floor for val/eval, remainder to train."""
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ContractViolation("split ratios must sum to 1")
    perm = RngStream(seed, "split").permutation(count)
    n_val = int(np.floor(ratios[1] * count))
    n_eval = int(np.floor(ratios[2] * count))
    n_train = count - n_val - n_eval
    return {
        "train": perm[:n_train],
        "val": perm[n_train:n_train + n_val],
        "eval": perm[n_train + n_val:],
    }
