"""Model bundle persistence: text header + decimal parameter arrays.

Parameters are written with repr (shortest round-trip), so
save -> load -> save is byte-identical. The bundle embeds the reliability
profile and image dimensions so later stages refuse mismatched interfaces.
"""

from __future__ import annotations

import numpy as np

from .channel import ChannelCodecPair
from .errors import FormatError
from .interface import ReliabilityProfile
from .nn import NetworkModel
from .source import SourceCodecPair

BUNDLE_VERSION = 1


def _write_model(lines: list[str], name: str, model: NetworkModel) -> None:
    lines.append(f"model {name}")
    lines.append("layers " + " ".join(str(s) for s in model.layer_sizes))
    lines.append(f"hidden {model.hidden_activation}")
    lines.append(f"output {model.output_activation}")
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        lines.append(f"weights {i} " + " ".join(repr(float(v)) for v in w.reshape(-1)))
        lines.append(f"biases {i} " + " ".join(repr(float(v)) for v in b))


def _bundle_text(stage: str, profile: ReliabilityProfile,
                 image_shape: tuple[int, int, int],
                 models: dict[str, NetworkModel]) -> str:
    lines = [f"splitcodec-bundle {BUNDLE_VERSION}",
             f"stage {stage}",
             f"image {image_shape[0]} {image_shape[1]} {image_shape[2]}",
             f"profile {profile.N} {profile.M} "
             + " ".join(repr(float(e)) for e in profile.epsilons)]
    for name, model in models.items():
        _write_model(lines, name, model)
    return "\n".join(lines) + "\n"


def save_source_bundle(path, pair: SourceCodecPair) -> None:
    text = _bundle_text("source", pair.profile, pair.image_shape,
                        {"mapper": pair.mapper, "demapper": pair.demapper})
    with open(path, "w") as fh:
        fh.write(text)


def save_channel_bundle(path, pair: ChannelCodecPair,
                        profile: ReliabilityProfile,
                        image_shape: tuple[int, int, int]) -> None:
    text = _bundle_text("channel", profile, image_shape,
                        {"mapper": pair.mapper, "demapper": pair.demapper})
    with open(path, "w") as fh:
        fh.write(text)


class _Parser:
    def __init__(self, path):
        with open(path) as fh:
            self.lines = fh.read().splitlines()
        self.pos = 0
        self.path = path

    def next(self) -> str:
        while self.pos < len(self.lines) and not self.lines[self.pos].strip():
            self.pos += 1
        if self.pos >= len(self.lines):
            raise FormatError(f"{self.path}: unexpected end of bundle at line {self.pos}")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def expect(self, key: str) -> list[str]:
        line = self.next()
        parts = line.split()
        if not parts or parts[0] != key:
            raise FormatError(
                f"{self.path}: line {self.pos}: expected {key!r}, got {line!r}")
        return parts[1:]

    def done(self) -> bool:
        while self.pos < len(self.lines) and not self.lines[self.pos].strip():
            self.pos += 1
        return self.pos >= len(self.lines)


def _read_model(p: _Parser, name: str) -> NetworkModel:
    got = p.expect("model")
    if got != [name]:
        raise FormatError(f"{p.path}: expected model {name!r}, got {got}")
    layers = [int(v) for v in p.expect("layers")]
    hidden = p.expect("hidden")[0]
    output = p.expect("output")[0]
    weights, biases = [], []
    for i in range(len(layers) - 1):
        wv = p.expect("weights")
        if int(wv[0]) != i:
            raise FormatError(f"{p.path}: weights index mismatch at layer {i}")
        w = np.array([float(v) for v in wv[1:]]).reshape(layers[i + 1], layers[i])
        bv = p.expect("biases")
        b = np.array([float(v) for v in bv[1:]])
        if b.shape != (layers[i + 1],):
            raise FormatError(f"{p.path}: bias length mismatch at layer {i}")
        weights.append(w)
        biases.append(b)
    model = NetworkModel(layers, weights, biases, hidden_activation=hidden,
                         output_activation=output)
    model.validate()
    return model


def _read_header(p: _Parser, expect_stage: str):
    version = p.expect("splitcodec-bundle")
    if version != [str(BUNDLE_VERSION)]:
        raise FormatError(f"{p.path}: unsupported bundle version {version}")
    stage = p.expect("stage")[0]
    if stage != expect_stage:
        raise FormatError(f"{p.path}: bundle stage {stage!r}, expected {expect_stage!r}")
    h, w, c = (int(v) for v in p.expect("image"))
    prof = p.expect("profile")
    profile = ReliabilityProfile(int(prof[0]), int(prof[1]),
                                 tuple(float(v) for v in prof[2:]))
    return profile, (h, w, c)


def load_source_bundle(path) -> SourceCodecPair:
    p = _Parser(path)
    profile, shape = _read_header(p, "source")
    mapper = _read_model(p, "mapper")
    demapper = _read_model(p, "demapper")
    if not p.done():
        raise FormatError(f"{path}: trailing content at line {p.pos + 1}")
    return SourceCodecPair(mapper, demapper, profile, shape)


def load_channel_bundle(path, expected_profile: ReliabilityProfile | None = None):
    p = _Parser(path)
    profile, shape = _read_header(p, "channel")
    mapper = _read_model(p, "mapper")
    demapper = _read_model(p, "demapper")
    if not p.done():
        raise FormatError(f"{path}: trailing content at line {p.pos + 1}")
    if expected_profile is not None and profile != expected_profile:
        raise FormatError(
            f"{path}: bundle profile (N={profile.N}, M={profile.M}) does not "
            f"match the session profile (N={expected_profile.N}, "
            f"M={expected_profile.M})")
    return ChannelCodecPair(mapper, demapper), profile, shape
