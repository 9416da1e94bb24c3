"""Multi-sample variational objective and leave-one-out gradient estimators.

Per image, J noisy codewords are drawn; the objective is the log of the
mean reconstruction likelihood. Score-term coefficients use leave-one-out
baselines where the held-out likelihood is replaced (inside the log) by
the geometric mean of the others. Decoder gradients are weighted by the
softmax of the per-sample log-likelihoods.
"""

from __future__ import annotations

import numpy as np

from . import nn
from .channel import (ChannelCodecPair, awgn, map_to_symbols, normalize_power,
                      normalize_power_backward)
from .errors import ContractViolation, TrainingError
from .interface import ReliabilityProfile, medium_apply, medium_loglik_dprobs
from .rng import RngStream
from .source import (SourceCodecPair, encode_bits, normalize_image,
                     recon_loglik, recon_loglik_drecon)


def _check_logliks(logliks: np.ndarray) -> np.ndarray:
    logliks = np.asarray(logliks, dtype=np.float64)
    if not np.all(np.isfinite(logliks)):
        raise TrainingError("non-finite sample log-likelihood")
    return logliks


def elbo_multisample(logliks: np.ndarray) -> float:
    """log((1/J) sum_j exp(loglik_j)), via log-sum-exp."""
    logliks = _check_logliks(logliks)
    peak = logliks.max()
    return float(peak + np.log(np.mean(np.exp(logliks - peak))))


def importance_weights(logliks: np.ndarray) -> np.ndarray:
    """Softmax of the per-sample log-likelihoods; sums to one."""
    logliks = _check_logliks(logliks)
    shifted = np.exp(logliks - logliks.max())
    return shifted / shifted.sum()


def vimco_baselined_signals(logliks: np.ndarray) -> np.ndarray:
    """Per-sample learning signals with leave-one-out baselines.

    signal_j = elbo - log((1/J)(sum_{i!=j} exp(l_i) + exp(mean_{i!=j} l_i))).
    """
    logliks = _check_logliks(logliks)
    j_count = logliks.size
    if j_count < 2:
        raise ContractViolation("leave-one-out baselines need J >= 2")
    total = logliks.sum()
    elbo = elbo_multisample(logliks)
    signals = np.empty(j_count)
    for j in range(j_count):
        geo = (total - logliks[j]) / (j_count - 1)
        held_out = np.concatenate([np.delete(logliks, j), [geo]])
        peak = held_out.max()
        baseline = peak + np.log(np.mean(np.exp(held_out - peak)))
        signals[j] = elbo - baseline
    return signals


def naive_signals(logliks: np.ndarray) -> np.ndarray:
    """Single shared coefficient (the raw multi-sample bound), for testing."""
    logliks = _check_logliks(logliks)
    return np.full(logliks.size, elbo_multisample(logliks))


def _clamped_mask(probs: np.ndarray) -> np.ndarray:
    return (probs > nn.PROB_EPS) & (probs < 1.0 - nn.PROB_EPS)


def stage1_gradients(pair: SourceCodecPair, image: np.ndarray,
                     profile: ReliabilityProfile, J: int, rng: RngStream,
                     beta: float = 1.0, baseline: str = "vimco"):
    """Gradient estimate for the source mapper/demapper on one image.

    Returns (mapper grads, demapper grads, elbo) with grads in
    nn.parameters() order; grads point in the ascent direction.
    """
    if J < 2 and baseline == "vimco":
        raise ContractViolation("vimco baseline needs J >= 2")
    x = normalize_image(image)
    raw_probs, cache_f = nn.forward(pair.mapper, x)
    f = nn.clamp_probs(raw_probs)

    noisy = []
    logliks = np.empty(J)
    dec_caches = []
    recons = []
    for j in range(J):
        u = (rng.uniform(profile.M) < f).astype(np.uint8)
        uhat = medium_apply(u, profile, rng)
        xhat, cache_g = nn.forward(pair.demapper, uhat.astype(np.float64))
        noisy.append(uhat)
        recons.append(xhat)
        dec_caches.append(cache_g)
        logliks[j] = recon_loglik(x, xhat, beta)

    signals = (vimco_baselined_signals(logliks) if baseline == "vimco"
               else naive_signals(logliks))
    weights = importance_weights(logliks)

    # Score term: the M medium log-likelihood derivatives share one encoder
    # forward pass, so the J signals fold into a single output gradient.
    dprobs = np.zeros(profile.M)
    for j in range(J):
        dprobs += signals[j] * medium_loglik_dprobs(f, noisy[j], profile)
    dprobs *= _clamped_mask(raw_probs)
    grads_theta, _ = nn.backward(pair.mapper, cache_f, dprobs)

    grads_eta = None
    for j in range(J):
        gout = weights[j] * recon_loglik_drecon(x, recons[j], beta)
        g, _ = nn.backward(pair.demapper, dec_caches[j], gout)
        if grads_eta is None:
            grads_eta = g
        else:
            for acc, add in zip(grads_eta, g):
                acc += add
    return grads_theta, grads_eta, elbo_multisample(logliks)


def stage2_gradients(source_pair: SourceCodecPair, channel_pair: ChannelCodecPair,
                     image: np.ndarray, sigma2: float, pbar: float, J: int,
                     rng: RngStream, beta: float = 1.0,
                     noise_bank: list[np.ndarray] | None = None,
                     baseline: str = "vimco"):
    """Gradient estimate for the channel mapper/demapper on one image.

    The source pair is frozen; its demapper only scores reconstructions.
    noise_bank, when given, replaces fresh Gaussian draws by a uniform
    choice from a fixed set (used by the enumeration oracle tests).
    """
    if J < 2 and baseline == "vimco":
        raise ContractViolation("vimco baseline needs J >= 2")
    x = normalize_image(image)
    u = encode_bits(source_pair, image)

    s, cache_h = nn.forward(channel_pair.mapper, u.astype(np.float64))
    z = normalize_power(s, pbar)

    m_bits = channel_pair.mapper.input_size
    logliks = np.empty(J)
    sampled = []
    dem_caches = []
    probs_raw = []
    for j in range(J):
        if noise_bank is not None:
            y = z + noise_bank[rng.integers(len(noise_bank))]
        else:
            y = awgn(z, sigma2, rng)
        q_raw, cache_q = nn.forward(channel_pair.demapper, y)
        q = nn.clamp_probs(q_raw)
        v = (rng.uniform(m_bits) < q).astype(np.uint8)
        xhat, _ = nn.forward(source_pair.demapper, v.astype(np.float64))
        logliks[j] = recon_loglik(x, xhat, beta)
        sampled.append((v, q))
        probs_raw.append(q_raw)
        dem_caches.append(cache_q)

    signals = (vimco_baselined_signals(logliks) if baseline == "vimco"
               else naive_signals(logliks))

    grads_phi = None
    grad_z = np.zeros_like(z)
    for j in range(J):
        v, q = sampled[j]
        dq = (v / q - (1.0 - v) / (1.0 - q)) * _clamped_mask(probs_raw[j])
        g, gy = nn.backward(channel_pair.demapper, dem_caches[j],
                            signals[j] * dq)
        grad_z += gy
        if grads_phi is None:
            grads_phi = g
        else:
            for acc, add in zip(grads_phi, g):
                acc += add

    grad_s = normalize_power_backward(s, pbar, grad_z)
    grads_psi, _ = nn.backward(channel_pair.mapper, cache_h, grad_s)
    return grads_psi, grads_phi, elbo_multisample(logliks)
