"""Packet wire format for level-tagged interface bits.

Layout (big-endian): magic 0x5A4A (2) | version (1) | level_index (1) |
session_id (4) | sequence_number (2) | payload_bit_count (2) | payload
bytes with bits packed MSB-first. One packet per reliability level.

The companion profile-exchange document is a small text file carrying
N, M and the epsilon list, sent before a session starts.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, FormatError, IncompleteSessionError, ProtocolError
from .interface import ReliabilityProfile

MAGIC = 0x5A4A
WIRE_VERSION = 1
_HEADER = struct.Struct(">HBBIHH")


@dataclass(frozen=True)
class InterfacePacket:
    version: int
    session_id: int
    level_index: int
    sequence_number: int
    payload_bit_count: int
    payload: bytes

    def __post_init__(self):
        if self.payload_bit_count > 8 * len(self.payload):
            raise ProtocolError("payload_bit_count exceeds payload capacity")


def _pack_bits(bits: np.ndarray) -> bytes:
    return np.packbits(bits.astype(np.uint8)).tobytes()


def _unpack_bits(payload: bytes, count: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    return bits[:count]


def pack(codeword: np.ndarray, profile: ReliabilityProfile,
         session_id: int) -> list[InterfacePacket]:
    """Split a codeword into one packet per level, sequence numbers from 0."""
    codeword = np.asarray(codeword, dtype=np.uint8)
    if codeword.shape != (profile.M,):
        raise ContractViolation("codeword does not conform to profile")
    packets = []
    for level in range(1, profile.N + 1):
        bits = codeword[profile.level_slice(level)]
        packets.append(InterfacePacket(
            version=WIRE_VERSION,
            session_id=session_id & 0xFFFFFFFF,
            level_index=level,
            sequence_number=level - 1,
            payload_bit_count=bits.size,
            payload=_pack_bits(bits),
        ))
    return packets


def unpack(packets, profile: ReliabilityProfile) -> np.ndarray:
    """Reassemble a codeword; arrival order is irrelevant (level_index wins)."""
    seen: dict[int, InterfacePacket] = {}
    session = None
    for p in packets:
        if p.version != WIRE_VERSION:
            raise ProtocolError(f"wire version {p.version}, expected {WIRE_VERSION}")
        if session is None:
            session = p.session_id
        elif p.session_id != session:
            raise ProtocolError("packets from different sessions")
        if not 1 <= p.level_index <= profile.N:
            raise ProtocolError(f"level index {p.level_index} outside profile")
        if p.level_index in seen:
            raise ProtocolError(f"duplicate packet for level {p.level_index}")
        seen[p.level_index] = p
    missing = [i for i in range(1, profile.N + 1) if i not in seen]
    if missing:
        raise IncompleteSessionError(f"missing level(s) {missing}")
    codeword = np.empty(profile.M, dtype=np.uint8)
    for level, p in seen.items():
        if p.payload_bit_count != profile.bits_per_level:
            raise ProtocolError(
                f"level {level} carries {p.payload_bit_count} bits, "
                f"expected {profile.bits_per_level}")
        codeword[profile.level_slice(level)] = _unpack_bits(
            p.payload, p.payload_bit_count)
    return codeword


def encode_packet(packet: InterfacePacket) -> bytes:
    header = _HEADER.pack(MAGIC, packet.version, packet.level_index,
                          packet.session_id, packet.sequence_number,
                          packet.payload_bit_count)
    return header + packet.payload


def decode_packet(data: bytes) -> InterfacePacket:
    if len(data) < _HEADER.size:
        raise ProtocolError(f"truncated packet header ({len(data)} bytes)")
    magic, version, level, session, seq, nbits = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ProtocolError(f"bad magic 0x{magic:04X} at offset 0")
    payload = data[_HEADER.size:]
    need = (nbits + 7) // 8
    if len(payload) < need:
        raise ProtocolError("truncated packet payload")
    return InterfacePacket(version, session, level, seq, nbits, payload[:need])


def profile_document(profile: ReliabilityProfile) -> str:
    """Text document announcing the interface before a session."""
    lines = [f"levels {profile.N}", f"codeword_bits {profile.M}"]
    lines += [f"epsilon {e!r}" for e in profile.epsilons]
    return "\n".join(lines) + "\n"


def parse_profile_document(text: str) -> ReliabilityProfile:
    n = m = None
    eps = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        try:
            if key == "levels":
                n = int(value)
            elif key == "codeword_bits":
                m = int(value)
            elif key == "epsilon":
                eps.append(float(value))
            else:
                raise FormatError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if n is None or m is None:
        raise FormatError("profile document missing levels/codeword_bits")
    return ReliabilityProfile(n, m, tuple(eps))
