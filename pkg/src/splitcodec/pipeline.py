"""Glue between RunConfig and the trainable pipeline pieces."""

from __future__ import annotations

from .channel import ChannelCodecPair
from .config import RunConfig
from .interface import ReliabilityProfile
from .nn import init_network
from .rng import RngStream
from .source import SourceCodecPair
from .training import TrainConfig


def build_source_pair(cfg: RunConfig, profile: ReliabilityProfile,
                      seed: int) -> SourceCodecPair:
    hidden = cfg.hidden_sizes("source")
    mapper = init_network([cfg.image_dim, *hidden, cfg.codeword_bits],
                          "sigmoid", RngStream(seed, "init/source/mapper"))
    demapper = init_network([cfg.codeword_bits, *reversed(hidden), cfg.image_dim],
                            "sigmoid", RngStream(seed, "init/source/demapper"))
    return SourceCodecPair(mapper, demapper, profile, cfg.image_shape)


def build_channel_pair(cfg: RunConfig, seed: int) -> ChannelCodecPair:
    hidden = cfg.hidden_sizes("channel")
    mapper = init_network([cfg.codeword_bits, *hidden, 2 * cfg.symbols],
                          "linear", RngStream(seed, "init/channel/mapper"))
    # With all-zero biases the all-zero codeword would map to a zero-energy
    # symbol block, which cannot be power-normalized; seed the output bias
    # with small noise so every codeword has nonzero energy from the start.
    mapper.biases[-1][...] = RngStream(
        seed, "init/channel/mapper-bias").normal(1e-3, 2 * cfg.symbols)
    demapper = init_network([2 * cfg.symbols, *reversed(hidden), cfg.codeword_bits],
                            "sigmoid", RngStream(seed, "init/channel/demapper"))
    return ChannelCodecPair(mapper, demapper)


def train_config(cfg: RunConfig, stage: str, seed: int) -> TrainConfig:
    return TrainConfig(
        J=cfg.vimco_samples,
        batch_size=cfg.batch_size,
        epochs=cfg.epochs,
        learning_rate=cfg.learning_rate,
        beta=cfg.beta,
        seed=seed,
        stage=stage,
        snr_train_db=cfg.snr_train_db,
        pbar=cfg.power,
    )
