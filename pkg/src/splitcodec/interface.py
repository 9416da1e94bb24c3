"""The multi-level bit-reliability interface.

A codeword of M bits is split into N contiguous levels; level i is carried
by an independent binary symmetric channel with flip probability eps_i,
strictly decreasing in i. The closed-form log-likelihood of a noisy
codeword given per-bit encoder probabilities is what the stage-1 score
gradient differentiates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, ProfileError
from .nn import clamp_probs
from .rng import RngStream


@dataclass(frozen=True)
class ReliabilityProfile:
    """N levels over an M-bit codeword with flip probabilities epsilons."""

    N: int
    M: int
    epsilons: tuple[float, ...]

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise ProfileError("N and M must be positive")
        if self.M % self.N != 0:
            raise ProfileError(f"M={self.M} not divisible by N={self.N}")
        if len(self.epsilons) != self.N:
            raise ProfileError("epsilons length must equal N")
        eps = np.asarray(self.epsilons)
        if np.any(eps <= 0.0) or np.any(eps >= 0.5):
            raise ProfileError("flip probabilities must lie in (0, 0.5)")
        if self.N > 1 and not np.all(np.diff(eps) < 0.0):
            raise ProfileError("flip probabilities must be strictly decreasing")
        if self.epsilons[-1] * self.bits_per_level < 1.0:
            warnings.warn(
                "last level expects less than one bit error on average "
                f"(eps_N * M/N = {self.epsilons[-1] * self.bits_per_level:.3g})",
                stacklevel=2,
            )

    @property
    def bits_per_level(self) -> int:
        return self.M // self.N

    def per_bit_epsilons(self) -> np.ndarray:
        """Length-M vector mapping each bit position to its level's epsilon."""
        return np.repeat(np.asarray(self.epsilons), self.bits_per_level)

    def level_slice(self, level: int) -> slice:
        """1-based level index -> slice of bit positions."""
        if not 1 <= level <= self.N:
            raise ContractViolation(f"level {level} outside 1..{self.N}")
        b = self.bits_per_level
        return slice((level - 1) * b, level * b)


def geometric_profile(eps1: float, epsN: float, N: int, M: int) -> ReliabilityProfile:
    """Profile with a fixed ratio between consecutive flip probabilities.

    eps_i = eps1 / (eps1/epsN)**((i-1)/(N-1)); endpoints are exact.
    """
    if N < 2:
        raise ProfileError("geometric profile needs N >= 2")
    if not (0.0 < epsN < eps1 < 0.5):
        raise ProfileError("need 0 < epsN < eps1 < 0.5")
    i = np.arange(1, N + 1)
    eps = eps1 / (eps1 / epsN) ** ((i - 1) / (N - 1))
    eps[0] = eps1
    eps[-1] = epsN
    return ReliabilityProfile(N, M, tuple(eps.tolist()))


def bsc_apply(bits: np.ndarray, epsilon: float, rng: RngStream) -> np.ndarray:
    """Flip each bit independently with probability epsilon."""
    if not 0.0 <= epsilon <= 1.0:
        raise ContractViolation("epsilon outside [0, 1]")
    bits = np.asarray(bits, dtype=np.uint8)
    flips = rng.uniform(bits.shape) < epsilon
    return bits ^ flips.astype(np.uint8)


def medium_apply(codeword: np.ndarray, profile: ReliabilityProfile,
                 rng: RngStream) -> np.ndarray:
    """Pass each level of the codeword through its own BSC."""
    codeword = np.asarray(codeword, dtype=np.uint8)
    if codeword.shape != (profile.M,):
        raise ContractViolation(
            f"codeword length {codeword.shape} != profile M {profile.M}")
    flips = rng.uniform(profile.M) < profile.per_bit_epsilons()
    return codeword ^ flips.astype(np.uint8)


def medium_loglik(encoder_probs: np.ndarray, noisy_codeword: np.ndarray,
                  profile: ReliabilityProfile) -> float:
    """log p(noisy codeword | per-bit Bernoulli means) through the medium.

    Per bit j in level i with mean f_j:
      u_j=1 contributes log(f_j(1-2eps_i)+eps_i),
      u_j=0 contributes log((1-eps_i)+f_j(2eps_i-1)).
    """
    f = np.asarray(encoder_probs, dtype=np.float64)
    u = np.asarray(noisy_codeword, dtype=np.float64)
    if f.shape != (profile.M,) or u.shape != (profile.M,):
        raise ContractViolation("encoder_probs/noisy codeword length mismatch")
    f = clamp_probs(f)
    if np.any(f <= 0.0) or np.any(f >= 1.0):
        raise ContractViolation("encoder probabilities outside (0, 1)")
    eps = profile.per_bit_epsilons()
    p1 = f * (1.0 - 2.0 * eps) + eps
    return float(np.sum(u * np.log(p1) + (1.0 - u) * np.log1p(-p1)))


def medium_loglik_dprobs(encoder_probs: np.ndarray, noisy_codeword: np.ndarray,
                         profile: ReliabilityProfile) -> np.ndarray:
    """Derivative of medium_loglik with respect to each encoder probability."""
    f = clamp_probs(np.asarray(encoder_probs, dtype=np.float64))
    u = np.asarray(noisy_codeword, dtype=np.float64)
    eps = profile.per_bit_epsilons()
    p1 = f * (1.0 - 2.0 * eps) + eps
    return (1.0 - 2.0 * eps) * (u / p1 - (1.0 - u) / (1.0 - p1))
