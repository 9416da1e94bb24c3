"""Digital separate-coding baseline: quantizer + Hamming(7,4) + QAM chain.

Deliberately simple so the cliff effect shows up: below the modulation's
working SNR the hard-decision bit stream collapses and PSNR falls off a
cliff, in contrast to the learned pipeline's graceful slope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import awgn
from .errors import ContractViolation
from .metrics import psnr, sigma2_for_snr
from .rng import RngStream

CODES = ("none", "hamming74")
MODULATIONS = ("bpsk", "qam4", "qam16")


@dataclass(frozen=True)
class BaselineConfig:
    bits_per_pixel: int = 3
    code: str = "hamming74"
    modulation: str = "qam4"

    def __post_init__(self):
        if not 1 <= self.bits_per_pixel <= 8:
            raise ContractViolation("bits_per_pixel must be in 1..8")
        if self.code not in CODES:
            raise ContractViolation(f"unknown code {self.code!r}")
        if self.modulation not in MODULATIONS:
            raise ContractViolation(f"unknown modulation {self.modulation!r}")

    @property
    def tag(self) -> str:
        return f"q{self.bits_per_pixel}+{self.code}+{self.modulation}"


@dataclass(frozen=True)
class BaselineRecord:
    snr_db: float
    psnr_db: float
    chain: str


# --- uniform quantizer -------------------------------------------------------

def quantize(pixels: np.ndarray, bits: int) -> np.ndarray:
    """8-bit pixels -> indices in [0, 2^bits): keep the top `bits` bits."""
    return (np.asarray(pixels, dtype=np.uint8) >> (8 - bits)).astype(np.uint8)


def dequantize(indices: np.ndarray, bits: int) -> np.ndarray:
    """Midpoint reconstruction of each quantization cell."""
    step = 1 << (8 - bits)
    return (indices.astype(np.int64) * step + step // 2).astype(np.uint8)


def indices_to_bits(indices: np.ndarray, bits: int) -> np.ndarray:
    """MSB-first bit stream."""
    shifts = np.arange(bits - 1, -1, -1)
    return ((indices.reshape(-1, 1) >> shifts) & 1).astype(np.uint8).reshape(-1)


def bits_to_indices(bitstream: np.ndarray, bits: int) -> np.ndarray:
    groups = bitstream.reshape(-1, bits)
    weights = 1 << np.arange(bits - 1, -1, -1)
    return (groups * weights).sum(axis=1).astype(np.uint8)


# --- Hamming(7,4) ------------------------------------------------------------
# Codeword positions 1..7; parity at 1, 2, 4; the syndrome is the position
# of a single flipped bit.

_DATA_POS = np.array([2, 4, 5, 6])   # 0-based positions of d1..d4
_PARITY_POS = np.array([0, 1, 3])
_PARITY_MASKS = [np.array([0, 2, 4, 6]),   # positions with bit0 set (1,3,5,7)
                 np.array([1, 2, 5, 6]),   # bit1 set (2,3,6,7)
                 np.array([3, 4, 5, 6])]   # bit2 set (4,5,6,7)


def hamming74_encode(data_bits: np.ndarray) -> np.ndarray:
    """Encode a bit stream (length multiple of 4) into 7-bit blocks."""
    data = np.asarray(data_bits, dtype=np.uint8)
    if data.size % 4 != 0:
        raise ContractViolation("hamming74_encode needs a multiple of 4 bits")
    blocks = data.reshape(-1, 4)
    code = np.zeros((blocks.shape[0], 7), dtype=np.uint8)
    code[:, _DATA_POS] = blocks
    for k, mask in enumerate(_PARITY_MASKS):
        code[:, _PARITY_POS[k]] = code[:, mask].sum(axis=1) % 2
    return code.reshape(-1)


def hamming74_decode(code_bits: np.ndarray) -> np.ndarray:
    """Correct up to one flipped bit per 7-bit block, return data bits."""
    code = np.asarray(code_bits, dtype=np.uint8).reshape(-1, 7).copy()
    syndrome = np.zeros(code.shape[0], dtype=np.int64)
    for k, mask in enumerate(_PARITY_MASKS):
        syndrome += (code[:, mask].sum(axis=1).astype(np.int64) % 2) << k
    rows = np.nonzero(syndrome)[0]
    code[rows, syndrome[rows] - 1] ^= 1
    return code[:, _DATA_POS].reshape(-1)


# --- modulation --------------------------------------------------------------

_GRAY2 = np.array([0, 1, 3, 2])          # 2-bit Gray index -> amplitude rank
_GRAY2_INV = np.argsort(_GRAY2)
_PAM4 = np.array([-3.0, -1.0, 1.0, 3.0])

BITS_PER_SYMBOL = {"bpsk": 1, "qam4": 2, "qam16": 4}


def _pad_bits(bits: np.ndarray, multiple: int) -> np.ndarray:
    rem = bits.size % multiple
    if rem == 0:
        return bits
    return np.concatenate([bits, np.zeros(multiple - rem, dtype=np.uint8)])


def modulate(bits: np.ndarray, modulation: str, pbar: float) -> np.ndarray:
    """Bits -> interleaved-real symbol block with average power pbar."""
    bits = np.asarray(bits, dtype=np.uint8)
    if modulation == "bpsk":
        re = (1.0 - 2.0 * bits) * np.sqrt(pbar)
        block = np.zeros(2 * bits.size)
        block[0::2] = re
        return block
    if modulation == "qam4":
        pairs = _pad_bits(bits, 2).reshape(-1, 2)
        scale = np.sqrt(pbar / 2.0)
        block = np.empty(2 * pairs.shape[0])
        block[0::2] = (1.0 - 2.0 * pairs[:, 0]) * scale
        block[1::2] = (1.0 - 2.0 * pairs[:, 1]) * scale
        return block
    quads = _pad_bits(bits, 4).reshape(-1, 4)
    scale = np.sqrt(pbar / 10.0)   # E[amp^2] over PAM4 levels is 5 per axis
    gray_i = quads[:, 0] * 2 + quads[:, 1]
    gray_q = quads[:, 2] * 2 + quads[:, 3]
    block = np.empty(2 * quads.shape[0])
    block[0::2] = _PAM4[_GRAY2[gray_i]] * scale
    block[1::2] = _PAM4[_GRAY2[gray_q]] * scale
    return block


def demodulate(block: np.ndarray, modulation: str, pbar: float,
               nbits: int) -> np.ndarray:
    """Hard-decision demodulation back to the first nbits bits."""
    block = np.asarray(block, dtype=np.float64)
    if modulation == "bpsk":
        bits = (block[0::2] < 0.0).astype(np.uint8)
        return bits[:nbits]
    if modulation == "qam4":
        bits = np.empty(block.size, dtype=np.uint8)
        bits[0::2] = block[0::2] < 0.0
        bits[1::2] = block[1::2] < 0.0
        return bits[:nbits]
    scale = np.sqrt(pbar / 10.0)
    ranks_i = np.abs(block[0::2, None] - (_PAM4 * scale)).argmin(axis=1)
    ranks_q = np.abs(block[1::2, None] - (_PAM4 * scale)).argmin(axis=1)
    gi = _GRAY2_INV[ranks_i]
    gq = _GRAY2_INV[ranks_q]
    quads = np.stack([gi >> 1, gi & 1, gq >> 1, gq & 1], axis=1).astype(np.uint8)
    return quads.reshape(-1)[:nbits]


# --- full chain --------------------------------------------------------------

def baseline_transmit(image: np.ndarray, config: BaselineConfig, sigma2: float,
                      pbar: float, rng: RngStream) -> tuple[np.ndarray, int]:
    """Run one image through the digital chain; returns (image, channel uses)."""
    b = config.bits_per_pixel
    idx = quantize(image.reshape(-1), b)
    bits = indices_to_bits(idx, b)
    n_data = bits.size
    if config.code == "hamming74":
        coded = hamming74_encode(_pad_bits(bits, 4))
    else:
        coded = bits
    n_coded = coded.size
    block = modulate(coded, config.modulation, pbar)
    received = awgn(block, sigma2, rng)
    coded_rx = demodulate(received, config.modulation, pbar, n_coded)
    if config.code == "hamming74":
        bits_rx = hamming74_decode(coded_rx)[:n_data]
    else:
        bits_rx = coded_rx[:n_data]
    idx_rx = bits_to_indices(bits_rx, b)
    return dequantize(idx_rx, b).reshape(image.shape), block.size // 2


def digital_baseline_eval(config: BaselineConfig, images: np.ndarray,
                          snr_list, pbar: float, seed: int) -> list[BaselineRecord]:
    records = []
    for snr in sorted(snr_list):
        rng = RngStream(seed, f"baseline/{snr!r}")
        sigma2 = sigma2_for_snr(pbar, snr)
        psnrs = [psnr(img, baseline_transmit(img, config, sigma2, pbar, rng)[0])
                 for img in images]
        records.append(BaselineRecord(float(snr), float(np.mean(psnrs)), config.tag))
    return records


def baseline_csv(records: list[BaselineRecord]) -> str:
    lines = ["snr_db,psnr_db,chain"]
    for r in records:
        lines.append(f"{r.snr_db!r},{r.psnr_db!r},{r.chain}")
    return "\n".join(lines) + "\n"
