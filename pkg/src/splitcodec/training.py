"""Two-stage training loops.

Stage 1 trains the source mapper/demapper against the multi-level BSC
medium; stage 2 freezes them and trains the channel mapper/demapper
against AWGN at the configured training SNR. Both stages maximize the
multi-sample bound (Adam descends on its negation) with plateau lr decay
and early stopping on the validation bound.
"""

from __future__ import annotations

import copy
import time
from dataclasses import dataclass, field

import numpy as np

from . import nn
from .channel import ChannelCodecPair
from .errors import ContractViolation
from .interface import ReliabilityProfile
from .optim import AdamState, PlateauSchedule, adam_step
from .rng import RngStream
from .source import SourceCodecPair
from .vimco import stage1_gradients, stage2_gradients


@dataclass
class TrainConfig:
    J: int = 10
    batch_size: int = 32
    epochs: int = 50
    learning_rate: float = 1e-3
    beta: float = 1.0
    seed: int = 0
    stage: str = "source"
    snr_train_db: float = 10.0
    pbar: float = 1.0

    def __post_init__(self):
        if self.J < 2 or self.batch_size < 1 or self.epochs < 1:
            raise ContractViolation("J >= 2, batch_size >= 1, epochs >= 1 required")
        if self.learning_rate <= 0 or self.beta <= 0 or self.pbar <= 0:
            raise ContractViolation("learning_rate, beta, pbar must be positive")


@dataclass
class EpochRecord:
    epoch: int
    train_elbo: float
    val_elbo: float
    learning_rate: float
    wall_time_s: float


@dataclass
class TrainingLog:
    records: list[EpochRecord] = field(default_factory=list)
    initial_val_elbo: float = float("nan")
    final_val_elbo: float = float("nan")

    def to_csv(self) -> str:
        lines = ["epoch,train_elbo,val_elbo,learning_rate,wall_time_s"]
        for r in self.records:
            lines.append(f"{r.epoch},{r.train_elbo!r},{r.val_elbo!r},"
                         f"{r.learning_rate!r},{r.wall_time_s:.3f}")
        return "\n".join(lines) + "\n"


def _mean_val_elbo(grad_fn, val_images, rng_factory) -> float:
    if len(val_images) == 0:
        return float("nan")
    total = 0.0
    for i, image in enumerate(val_images):
        _, _, elbo = grad_fn(image, rng_factory(i))
        total += elbo
    return total / len(val_images)


def _run_stage(params, grad_fn, train_images, val_images, config: TrainConfig,
               stream: str):
    """Shared epoch loop. grad_fn(image, rng) -> (grads_a, grads_b, elbo)
    where grads concatenate in the same order as params."""
    opt = AdamState(learning_rate=config.learning_rate)
    sched = PlateauSchedule()
    log = TrainingLog()
    root = RngStream(config.seed, stream)

    # Validation noise is regenerated identically each epoch so plateau
    # comparisons are not dominated by sampling variance.
    def val_rng_factory(i):
        return RngStream(config.seed, f"{stream}/val/{i}")

    init_val = _mean_val_elbo(grad_fn, val_images, val_rng_factory)
    best_val = init_val
    best_params = [p.copy() for p in params]

    n_train = len(train_images)
    for epoch in range(config.epochs):
        t0 = time.monotonic()
        order = RngStream(config.seed, f"{stream}/shuffle/{epoch}").permutation(n_train)
        epoch_elbos = []
        for start in range(0, n_train, config.batch_size):
            batch = order[start:start + config.batch_size]
            acc = [np.zeros_like(p) for p in params]
            for idx in batch:
                img_rng = root.child(f"e{epoch}/i{idx}")
                grads_a, grads_b, elbo = grad_fn(train_images[idx], img_rng)
                epoch_elbos.append(elbo)
                for slot, g in zip(acc, grads_a + grads_b):
                    slot += g
            # Ascent on the bound == descent on its negation.
            scale = -1.0 / len(batch)
            adam_step(opt, params, [scale * g for g in acc])
        val_elbo = _mean_val_elbo(grad_fn, val_images, val_rng_factory)
        log.records.append(EpochRecord(
            epoch=epoch,
            train_elbo=float(np.mean(epoch_elbos)),
            val_elbo=val_elbo,
            learning_rate=opt.learning_rate,
            wall_time_s=time.monotonic() - t0,
        ))
        if not np.isnan(val_elbo) and val_elbo > best_val:
            best_val = val_elbo
            best_params = [p.copy() for p in params]
        stop = sched.update(opt, -val_elbo if not np.isnan(val_elbo) else 0.0)
        if stop:
            break

    # Keep the best-validation parameters seen during the stage.
    for p, best in zip(params, best_params):
        p[...] = best
    return log, init_val, best_val


def train_stage1(images: np.ndarray, split: dict, profile: ReliabilityProfile,
                 pair: SourceCodecPair, config: TrainConfig):
    """Train the source codec in place; returns (pair, TrainingLog)."""
    train_images = images[split["train"]]
    val_images = images[split["val"]]
    params = nn.parameters(pair.mapper) + nn.parameters(pair.demapper)

    def grad_fn(image, rng):
        return stage1_gradients(pair, image, profile, config.J, rng,
                                beta=config.beta)

    log, init_val, best_val = _run_stage(
        params, grad_fn, train_images, val_images, config, "stage1")
    log.initial_val_elbo = init_val
    log.final_val_elbo = best_val
    return pair, log


def train_stage2(images: np.ndarray, split: dict, source_pair: SourceCodecPair,
                 channel_pair: ChannelCodecPair, config: TrainConfig):
    """Train the channel codec in place against AWGN; the source codec is
    frozen (bit-identical before and after)."""
    frozen = copy.deepcopy(nn.parameters(source_pair.mapper)
                           + nn.parameters(source_pair.demapper))
    sigma2 = config.pbar / (10.0 ** (config.snr_train_db / 10.0))
    train_images = images[split["train"]]
    val_images = images[split["val"]]
    params = nn.parameters(channel_pair.mapper) + nn.parameters(channel_pair.demapper)

    def grad_fn(image, rng):
        return stage2_gradients(source_pair, channel_pair, image, sigma2,
                                config.pbar, config.J, rng, beta=config.beta)

    log, init_val, best_val = _run_stage(
        params, grad_fn, train_images, val_images, config, "stage2")
    log.initial_val_elbo = init_val
    log.final_val_elbo = best_val

    for before, after in zip(frozen, nn.parameters(source_pair.mapper)
                             + nn.parameters(source_pair.demapper)):
        if not np.array_equal(before, after):
            raise ContractViolation("source codec changed during stage 2")
    return channel_pair, log
