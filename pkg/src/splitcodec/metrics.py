"""Scalar quality/rate metrics."""

from __future__ import annotations

import numpy as np

from .errors import ContractViolation

PSNR_CAP_DB = 100.0
PIXEL_PEAK = 255.0


def snr_db(pbar: float, sigma2: float) -> float:
    if pbar <= 0.0 or sigma2 <= 0.0:
        raise ContractViolation("snr_db needs positive power and noise variance")
    return 10.0 * np.log10(pbar / sigma2)


def sigma2_for_snr(pbar: float, snr: float) -> float:
    if pbar <= 0.0:
        raise ContractViolation("pbar must be positive")
    return pbar / (10.0 ** (snr / 10.0))


def bcr(k: int, h: int, w: int, c: int) -> float:
    """Bandwidth compression ratio: channel uses per source dimension."""
    if min(k, h, w, c) <= 0:
        raise ContractViolation("dimensions must be positive")
    return k / (h * w * c)


def psnr(x: np.ndarray, xhat: np.ndarray) -> float:
    """Peak SNR in dB over 8-bit pixels; zero error is capped at 100 dB."""
    x = np.asarray(x, dtype=np.float64)
    xhat = np.asarray(xhat, dtype=np.float64)
    if x.shape != xhat.shape:
        raise ContractViolation("psnr shape mismatch")
    mse = float(np.mean((x - xhat) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(PSNR_CAP_DB, 10.0 * np.log10(PIXEL_PEAK ** 2 / mse))
