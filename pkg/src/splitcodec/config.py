"""Flat key=value run configuration.

Unknown keys are hard errors so typos cannot silently fall back to
defaults. Hidden-layer lists are comma-separated integers.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError
from .interface import ReliabilityProfile, geometric_profile


@dataclass
class RunConfig:
    height: int = 8
    width: int = 8
    channels: int = 1
    levels: int = 10
    codeword_bits: int = 80
    symbols: int = 16
    eps_first: float = 0.4
    eps_last: float = 0.001
    power: float = 1.0
    snr_train_db: float = 10.0
    vimco_samples: int = 10
    batch_size: int = 32
    epochs: int = 50
    learning_rate: float = 1e-3
    beta: float = 1.0
    seed: int = 0
    split_train: float = 0.8
    split_val: float = 0.1
    split_eval: float = 0.1
    source_hidden: str = "128"
    channel_hidden: str = "128,128"
    images_per_point: int = 200

    def validate(self) -> None:
        if min(self.height, self.width, self.channels) <= 0:
            raise ConfigError("image dimensions must be positive")
        if self.codeword_bits % self.levels != 0:
            raise ConfigError("codeword_bits must be divisible by levels")
        if abs(self.split_train + self.split_val + self.split_eval - 1.0) > 1e-9:
            raise ConfigError("split ratios must sum to 1")
        if self.vimco_samples < 2:
            raise ConfigError("vimco_samples must be at least 2")
        for key in ("power", "learning_rate", "beta"):
            if getattr(self, key) <= 0:
                raise ConfigError(f"{key} must be positive")

    @property
    def image_shape(self) -> tuple[int, int, int]:
        return (self.height, self.width, self.channels)

    @property
    def image_dim(self) -> int:
        return self.height * self.width * self.channels

    @property
    def split_ratios(self) -> tuple[float, float, float]:
        return (self.split_train, self.split_val, self.split_eval)

    def profile(self) -> ReliabilityProfile:
        return geometric_profile(self.eps_first, self.eps_last,
                                 self.levels, self.codeword_bits)

    def hidden_sizes(self, which: str) -> list[int]:
        raw = self.source_hidden if which == "source" else self.channel_hidden
        if not raw.strip():
            return []
        try:
            return [int(v) for v in raw.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad hidden-layer list {raw!r}") from exc


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_config(text: str) -> RunConfig:
    cfg = RunConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key = key.strip()
        value = value.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        kind = _FIELD_TYPES[key]
        try:
            if kind == "int":
                setattr(cfg, key, int(value))
            elif kind == "float":
                setattr(cfg, key, float(value))
            else:
                setattr(cfg, key, value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    cfg.validate()
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
