"""Command-line surface tying the pipeline together.

Exit codes: 0 success, 2 config error, 3 data/format error, 4 training
failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import data, evaluation, persist, wire
from .baseline import BaselineConfig, baseline_csv, digital_baseline_eval
from .config import RunConfig, load_config
from .errors import (ConfigError, ContractViolation, FormatError,
                     ProtocolError, TrainingError)
from .pipeline import build_channel_pair, build_source_pair, train_config
from .training import train_stage1, train_stage2


def _parse_snr(spec: str) -> list[float]:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"--snr range must be a:b:step, got {spec!r}")
        a, b, step = (float(v) for v in parts)
        if step <= 0:
            raise ConfigError("--snr step must be positive")
        n = int(np.floor((b - a) / step + 1e-9)) + 1
        return [a + i * step for i in range(n)]
    return [float(v) for v in spec.split(",")]


def _load_cfg(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    return cfg


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _split(cfg: RunConfig, images: np.ndarray):
    return data.split_indices(len(images), cfg.split_ratios, cfg.seed)


def cmd_gen_data(args) -> int:
    cfg = _load_cfg(args)
    images = data.generate_synthetic(args.count, cfg.height, cfg.width,
                                     cfg.channels, cfg.seed)
    data.save_dataset(args.out, images)
    print(f"wrote {len(images)} images ({cfg.height}x{cfg.width}x{cfg.channels}) "
          f"to {args.out}")
    return 0


def cmd_train_source(args) -> int:
    cfg = _load_cfg(args)
    images = data.load_dataset(args.data)
    profile = cfg.profile()
    pair = build_source_pair(cfg, profile, cfg.seed)
    pair, log = train_stage1(images, _split(cfg, images), profile, pair,
                             train_config(cfg, "source", cfg.seed))
    persist.save_source_bundle(args.out, pair)
    if args.log:
        _write(args.log, log.to_csv())
    print(f"stage-1 validation bound: {log.initial_val_elbo:.4f} -> "
          f"{log.final_val_elbo:.4f} ({len(log.records)} epochs)")
    return 0


def cmd_train_channel(args) -> int:
    cfg = _load_cfg(args)
    images = data.load_dataset(args.data)
    source_pair = persist.load_source_bundle(args.source)
    if source_pair.profile.M != cfg.codeword_bits:
        raise FormatError(
            f"source bundle M={source_pair.profile.M} does not match "
            f"config codeword_bits={cfg.codeword_bits}")
    channel_pair = build_channel_pair(cfg, cfg.seed)
    channel_pair, log = train_stage2(images, _split(cfg, images), source_pair,
                                     channel_pair,
                                     train_config(cfg, "channel", cfg.seed))
    persist.save_channel_bundle(args.out, channel_pair, source_pair.profile,
                                source_pair.image_shape)
    if args.log:
        _write(args.log, log.to_csv())
    print(f"stage-2 validation bound: {log.initial_val_elbo:.4f} -> "
          f"{log.final_val_elbo:.4f} ({len(log.records)} epochs)")
    return 0


def _load_pairs(args, cfg: RunConfig):
    source_pair = persist.load_source_bundle(args.source)
    channel_pair, _, _ = persist.load_channel_bundle(
        args.channel, expected_profile=source_pair.profile)
    return source_pair, channel_pair


def cmd_eval_sweep(args) -> int:
    cfg = _load_cfg(args)
    images = data.load_dataset(args.data)
    source_pair, channel_pair = _load_pairs(args, cfg)
    eval_images = images[_split(cfg, images)["eval"]]
    records = evaluation.sweep_eval(source_pair, channel_pair, eval_images,
                                    _parse_snr(args.snr), cfg.images_per_point,
                                    cfg.power, cfg.seed)
    _write(args.out, evaluation.sweep_csv(records, source_pair.profile.N))
    print(f"wrote {len(records)} sweep rows to {args.out}")
    return 0


def cmd_probe_levels(args) -> int:
    cfg = _load_cfg(args)
    images = data.load_dataset(args.data)
    source_pair = persist.load_source_bundle(args.source)
    eval_images = images[_split(cfg, images)["eval"]][:cfg.images_per_point]
    drops = evaluation.level_importance_probe(source_pair, eval_images,
                                              cfg.seed, args.flip_prob)
    lines = ["level,psnr_drop_db"]
    lines += [f"{i + 1},{float(d)!r}" for i, d in enumerate(drops)]
    _write(args.out, "\n".join(lines) + "\n")
    print(f"wrote per-level PSNR drops to {args.out}")
    return 0


def cmd_ber_report(args) -> int:
    cfg = _load_cfg(args)
    images = data.load_dataset(args.data)
    source_pair, channel_pair = _load_pairs(args, cfg)
    eval_images = images[_split(cfg, images)["eval"]]
    records = evaluation.sweep_eval(source_pair, channel_pair, eval_images,
                                    _parse_snr(args.snr), cfg.images_per_point,
                                    cfg.power, cfg.seed)
    n = source_pair.profile.N
    lines = ["snr_db," + ",".join(f"ber_level_{i}" for i in range(1, n + 1))]
    for r in records:
        lines.append(f"{r.snr_db!r}," + ",".join(repr(b) for b in r.ber_per_level))
    _write(args.out, "\n".join(lines) + "\n")
    print(f"wrote per-level BER report to {args.out}")
    return 0


def cmd_baseline_eval(args) -> int:
    cfg = _load_cfg(args)
    images = data.load_dataset(args.data)
    eval_images = images[_split(cfg, images)["eval"]][:cfg.images_per_point]
    bl = BaselineConfig(args.bits, args.code, args.modulation)
    records = digital_baseline_eval(bl, eval_images, _parse_snr(args.snr),
                                    cfg.power, cfg.seed)
    _write(args.out, baseline_csv(records))
    print(f"wrote {len(records)} baseline rows to {args.out}")
    return 0


def _profile_for_wire(args):
    if args.profile_doc:
        with open(args.profile_doc) as fh:
            return wire.parse_profile_document(fh.read())
    cfg = _load_cfg(args)
    return cfg.profile()


def cmd_pack(args) -> int:
    profile = _profile_for_wire(args)
    with open(args.bits) as fh:
        text = "".join(fh.read().split())
    if set(text) - {"0", "1"}:
        raise FormatError("bits file must contain only 0/1 characters")
    codeword = np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")
    if codeword.size != profile.M:
        raise FormatError(f"bits file has {codeword.size} bits, profile M={profile.M}")
    packets = wire.pack(codeword, profile, args.session)
    with open(args.out, "wb") as fh:
        for p in packets:
            fh.write(wire.encode_packet(p))
    print(f"wrote {len(packets)} packets to {args.out}")
    return 0


def cmd_unpack(args) -> int:
    profile = _profile_for_wire(args)
    with open(args.packets, "rb") as fh:
        raw = fh.read()
    packets = []
    pos = 0
    while pos < len(raw):
        packet = wire.decode_packet(raw[pos:])
        packets.append(packet)
        pos += 12 + (packet.payload_bit_count + 7) // 8
    codeword = wire.unpack(packets, profile)
    _write(args.out, "".join(str(int(b)) for b in codeword) + "\n")
    print(f"reassembled {codeword.size} bits to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitcodec",
        description="Split source/channel image codec over a multi-level "
                    "bit-reliability interface.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--seed", type=int, help="override config seed")
        if out:
            p.add_argument("--out", required=True, help="output path")

    p = sub.add_parser("gen-data", help="generate a synthetic dataset")
    common(p)
    p.add_argument("--count", type=int, default=2000)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train-source", help="train the source codec (stage 1)")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--log", help="write per-epoch CSV training log")
    p.set_defaults(func=cmd_train_source)

    p = sub.add_parser("train-channel", help="train the channel codec (stage 2)")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--source", required=True, help="trained source bundle")
    p.add_argument("--log", help="write per-epoch CSV training log")
    p.set_defaults(func=cmd_train_channel)

    p = sub.add_parser("eval-sweep", help="PSNR/BER sweep over test SNRs")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--snr", required=True, help="a:b:step in dB, or comma list")
    p.set_defaults(func=cmd_eval_sweep)

    p = sub.add_parser("probe-levels", help="per-level PSNR-drop probe")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--flip-prob", type=float, default=0.5)
    p.set_defaults(func=cmd_probe_levels)

    p = sub.add_parser("ber-report", help="empirical per-level BER report")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--snr", required=True)
    p.set_defaults(func=cmd_ber_report)

    p = sub.add_parser("baseline-eval", help="digital baseline sweep")
    common(p)
    p.add_argument("--data", required=True)
    p.add_argument("--snr", required=True)
    p.add_argument("--bits", type=int, default=3, help="quantizer bits per pixel")
    p.add_argument("--code", default="hamming74", choices=["none", "hamming74"])
    p.add_argument("--modulation", default="qam4",
                   choices=["bpsk", "qam4", "qam16"])
    p.set_defaults(func=cmd_baseline_eval)

    p = sub.add_parser("pack", help="packetize a codeword")
    common(p)
    p.add_argument("--bits", required=True, help="file of 0/1 characters")
    p.add_argument("--session", type=int, default=0)
    p.add_argument("--profile-doc", help="profile exchange document")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("unpack", help="reassemble a codeword from packets")
    common(p)
    p.add_argument("--packets", required=True)
    p.add_argument("--profile-doc", help="profile exchange document")
    p.set_defaults(func=cmd_unpack)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, ProtocolError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except TrainingError as exc:
        print(f"training failure: {exc}", file=sys.stderr)
        return 4
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
