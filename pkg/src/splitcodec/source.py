"""Source codec: image -> bit probabilities -> bits, and bits -> image.

Images are 8-bit arrays of shape (H, W, C); networks see the flattened
[0, 1]-normalized view. The reconstruction log-likelihood is the negative
(scaled) sum of squared pixel errors in the normalized domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import nn
from .errors import ContractViolation
from .interface import ReliabilityProfile


def normalize_image(image: np.ndarray) -> np.ndarray:
    """uint8 (H, W, C) -> flat float64 in [0, 1]."""
    image = np.asarray(image)
    if image.ndim != 3:
        raise ContractViolation(f"image must be (H, W, C), got shape {image.shape}")
    return image.reshape(-1).astype(np.float64) / 255.0


def to_pixels(flat: np.ndarray, shape: tuple[int, int, int]) -> np.ndarray:
    """Flat [0, 1] reconstruction -> uint8 pixels, round half-up."""
    scaled = np.clip(np.asarray(flat, dtype=np.float64), 0.0, 1.0) * 255.0
    return np.floor(scaled + 0.5).astype(np.uint8).reshape(shape)


@dataclass
class SourceCodecPair:
    mapper: nn.NetworkModel     # image -> M bit probabilities (sigmoid)
    demapper: nn.NetworkModel   # M bits -> image (sigmoid)
    profile: ReliabilityProfile
    image_shape: tuple[int, int, int]

    def __post_init__(self):
        h, w, c = self.image_shape
        if self.mapper.input_size != h * w * c:
            raise ContractViolation("mapper input size != image dimensionality")
        if self.mapper.output_size != self.profile.M:
            raise ContractViolation("mapper output size != profile M")
        if self.demapper.input_size != self.profile.M:
            raise ContractViolation("demapper input size != profile M")
        if self.demapper.output_size != h * w * c:
            raise ContractViolation("demapper output size != image dimensionality")


def encode_probs(pair: SourceCodecPair, image: np.ndarray) -> np.ndarray:
    """Per-bit Bernoulli means f(x), clamped away from {0, 1}."""
    x = normalize_image(image)
    probs, _ = nn.forward(pair.mapper, x)
    return nn.clamp_probs(probs)


def round_bits(probs: np.ndarray) -> np.ndarray:
    """Elementwise rounding with ties at 0.5 going to 1."""
    return (np.asarray(probs) >= 0.5).astype(np.uint8)


def encode_bits(pair: SourceCodecPair, image: np.ndarray) -> np.ndarray:
    """Deterministic maximum-likelihood codeword: round the Bernoulli means."""
    return round_bits(encode_probs(pair, image))


def decode_real(pair: SourceCodecPair, bits: np.ndarray) -> np.ndarray:
    """Demapper output in [0, 1] (the differentiable reconstruction)."""
    bits = np.asarray(bits, dtype=np.float64)
    if bits.shape != (pair.profile.M,):
        raise ContractViolation("bit vector length != profile M")
    out, _ = nn.forward(pair.demapper, bits)
    return out


def decode(pair: SourceCodecPair, bits: np.ndarray) -> np.ndarray:
    """Reconstructed 8-bit image."""
    return to_pixels(decode_real(pair, bits), pair.image_shape)


def recon_loglik(x_norm: np.ndarray, reconstruction: np.ndarray,
                 beta: float = 1.0) -> float:
    """-beta * sum of squared errors between normalized image and reconstruction."""
    x_norm = np.asarray(x_norm, dtype=np.float64)
    xhat = np.asarray(reconstruction, dtype=np.float64)
    if x_norm.shape != xhat.shape:
        raise ContractViolation("shape mismatch in recon_loglik")
    diff = x_norm - xhat
    return float(-beta * np.dot(diff, diff))


def recon_loglik_drecon(x_norm: np.ndarray, reconstruction: np.ndarray,
                        beta: float = 1.0) -> np.ndarray:
    """Derivative of recon_loglik with respect to the reconstruction."""
    return 2.0 * beta * (np.asarray(x_norm, dtype=np.float64)
                         - np.asarray(reconstruction, dtype=np.float64))
