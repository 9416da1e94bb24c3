"""Channel codec: bits -> power-normalized complex symbols -> AWGN -> bits.

Symbols are kept as 2K interleaved reals (re, im, re, im, ...). Noise
variance sigma2 is per complex symbol, i.e. sigma2/2 per real component,
so SNR = 10*log10(Pbar/sigma2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import nn
from .errors import ContractViolation
from .rng import RngStream


@dataclass
class ChannelCodecPair:
    mapper: nn.NetworkModel     # M bits -> 2K reals (linear output)
    demapper: nn.NetworkModel   # 2K reals -> M bit probabilities (sigmoid)

    def __post_init__(self):
        if self.mapper.output_size % 2 != 0:
            raise ContractViolation("mapper must emit an even number of reals")
        if self.demapper.input_size != self.mapper.output_size:
            raise ContractViolation("demapper input size != mapper output size")
        if self.demapper.output_size != self.mapper.input_size:
            raise ContractViolation("demapper output size != mapper input size")
        if self.mapper.output_activation != "linear":
            raise ContractViolation("channel mapper output must be linear")

    @property
    def num_symbols(self) -> int:
        return self.mapper.output_size // 2


@dataclass(frozen=True)
class AwgnConfig:
    sigma2: float
    snr_train_db: float

    def __post_init__(self):
        if self.sigma2 < 0.0:
            raise ContractViolation("sigma2 must be non-negative")


def map_to_symbols(pair: ChannelCodecPair, codeword: np.ndarray) -> np.ndarray:
    """Unnormalized symbol block: network reals (2k-1, 2k) -> symbol k."""
    bits = np.asarray(codeword, dtype=np.float64)
    out, _ = nn.forward(pair.mapper, bits)
    return out


def average_power(block: np.ndarray) -> float:
    block = np.asarray(block, dtype=np.float64)
    return float(np.dot(block, block) / (block.size // 2))


def normalize_power(block: np.ndarray, pbar: float) -> np.ndarray:
    """Scale so the average complex-symbol power is exactly pbar."""
    block = np.asarray(block, dtype=np.float64)
    energy = np.dot(block, block)
    if energy == 0.0:
        raise ContractViolation("cannot normalize an all-zero symbol block")
    k = block.size // 2
    return block * np.sqrt(k * pbar / energy)


def normalize_power_backward(block: np.ndarray, pbar: float,
                             upstream_grad: np.ndarray) -> np.ndarray:
    """Jacobian-transpose product of normalize_power at the given input.

    With s = sqrt(k*pbar/(z.z)): d out_i/d z_j = s*(delta_ij - z_i z_j/(z.z)).
    """
    z = np.asarray(block, dtype=np.float64)
    g = np.asarray(upstream_grad, dtype=np.float64)
    if z.shape != g.shape:
        raise ContractViolation("gradient shape mismatch")
    energy = np.dot(z, z)
    k = z.size // 2
    s = np.sqrt(k * pbar / energy)
    return s * (g - z * (np.dot(z, g) / energy))


def awgn(block: np.ndarray, sigma2: float, rng: RngStream) -> np.ndarray:
    """Add white Gaussian noise, variance sigma2/2 per real component."""
    if sigma2 < 0.0:
        raise ContractViolation("sigma2 must be non-negative")
    block = np.asarray(block, dtype=np.float64)
    if sigma2 == 0.0:
        return block.copy()
    return block + rng.normal(np.sqrt(sigma2 / 2.0), block.shape)


def demap_probs(pair: ChannelCodecPair, received: np.ndarray) -> np.ndarray:
    """Per-bit probabilities from the received block, clamped."""
    y = np.asarray(received, dtype=np.float64)
    probs, _ = nn.forward(pair.demapper, y)
    return nn.clamp_probs(probs)


def demap_bits(pair: ChannelCodecPair, received: np.ndarray) -> np.ndarray:
    from .source import round_bits
    return round_bits(demap_probs(pair, received))


def bernoulli_loglik(bits: np.ndarray, probs: np.ndarray) -> float:
    """log prod_j q_j^{v_j} (1-q_j)^{1-v_j}."""
    v = np.asarray(bits, dtype=np.float64)
    q = np.asarray(probs, dtype=np.float64)
    return float(np.sum(v * np.log(q) + (1.0 - v) * np.log1p(-q)))


def channel_loglik(pair: ChannelCodecPair, u: np.ndarray, v: np.ndarray,
                   sigma2: float, pbar: float, num_noise_samples: int,
                   rng: RngStream) -> float:
    """Monte Carlo log p(v | u): log-mean-exp over noise draws.

    Diagnostic/test operation; training samples noise pathwise instead.
    """
    if num_noise_samples < 1:
        raise ContractViolation("need at least one noise sample")
    z = normalize_power(map_to_symbols(pair, u), pbar)
    logliks = np.empty(num_noise_samples)
    for r in range(num_noise_samples):
        y = awgn(z, sigma2, rng)
        q = demap_probs(pair, y)
        logliks[r] = bernoulli_loglik(v, q)
    peak = logliks.max()
    return float(peak + np.log(np.mean(np.exp(logliks - peak))))
