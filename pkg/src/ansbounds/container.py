"""Self-describing file format for an encoded byte sequence.

All integers are little-endian::

    magic        4s   b"ANSC"
    version      u8   1
    codec        u8   0 tANS-simplified, 1 tANS-precise, 2 rANS fixed accuracy
    r            u8
    k            u8   0 for tANS
    sigma        u32
    n_letters    u64
    frequencies  sigma x u32, summing to 2**r
    final_state  u64
    payload_bits u64
    payload      ceil(payload_bits / 8) bytes, LSB-first
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from . import errors
from .bitio import LifoBitBuffer
from .errors import ContractError
from .model import FrequencyTable, count_frequencies, make_table, normalize
from .spread import MAX_SPREAD_R
from .analysis import make_codec, state_bits

MAGIC = b"ANSC"
VERSION = 1
CODEC_IDS = {"tans-simplified": 0, "tans-precise": 1, "rans": 2}
CODEC_NAMES = {v: k for k, v in CODEC_IDS.items()}

_FIXED = struct.Struct("<4sBBBBIQ")
_TRAILER = struct.Struct("<QQ")


@dataclass(frozen=True)
class ContainerHeader:
    codec: str
    r: int
    k: int
    n_letters: int
    frequencies: tuple[int, ...]
    final_state: int
    payload_bit_count: int

    @property
    def sigma(self) -> int:
        return len(self.frequencies)

    @property
    def table(self) -> FrequencyTable:
        return make_table(self.frequencies, self.r)

    def state_range(self) -> tuple[int, int]:
        lo = 1 << (state_bits(self.codec, self.r, self.k) - 1)
        return lo, 2 * lo


def _validate_params(codec_id: int, r: int, k: int) -> str:
    if codec_id not in CODEC_NAMES:
        raise errors.BadCodecError(f"unknown codec id {codec_id}")
    codec = CODEC_NAMES[codec_id]
    if not 1 <= r <= MAX_SPREAD_R:
        raise errors.BadParameterError(f"r={r} outside [1..{MAX_SPREAD_R}]")
    if codec == "rans" and not 0 <= k <= 8:
        raise errors.BadParameterError(f"k={k} outside [0..8]")
    if codec != "rans" and k != 0:
        raise errors.BadParameterError("tANS containers must have k=0")
    return codec


def _validate_header(h: ContainerHeader) -> None:
    _validate_params(CODEC_IDS.get(h.codec, -1), h.r, h.k)
    if not h.frequencies or sum(h.frequencies) != 1 << h.r:
        raise errors.BadFrequencySumError(
            f"frequencies sum to {sum(h.frequencies)}, expected 2^{h.r}")
    lo, hi = h.state_range()
    if not lo <= h.final_state < hi:
        raise errors.StateOutOfRangeError(
            f"final state {h.final_state} outside [{lo}..{hi})")


def write_container(header: ContainerHeader, payload: bytes) -> bytes:
    _validate_header(header)
    if len(payload) != (header.payload_bit_count + 7) // 8:
        raise ContractError("payload length does not match payload_bit_count")
    parts = [
        _FIXED.pack(MAGIC, VERSION, CODEC_IDS[header.codec], header.r, header.k,
                    header.sigma, header.n_letters),
        struct.pack(f"<{header.sigma}I", *header.frequencies),
        _TRAILER.pack(header.final_state, header.payload_bit_count),
        payload,
    ]
    return b"".join(parts)


def read_container(data: bytes) -> tuple[ContainerHeader, bytes]:
    data = bytes(data)
    if len(data) < 4 or data[:4] != MAGIC:
        raise errors.BadMagicError("not an ANSC container")
    if len(data) < _FIXED.size:
        raise errors.TruncatedHeaderError("header shorter than its fixed part")
    magic, version, codec_id, r, k, sigma, n_letters = _FIXED.unpack_from(data)
    if version != VERSION:
        raise errors.BadVersionError(f"unsupported version {version}")
    codec = _validate_params(codec_id, r, k)
    pos = _FIXED.size
    end = pos + 4 * sigma + _TRAILER.size
    if len(data) < end:
        raise errors.TruncatedHeaderError(f"header needs {end} bytes, got {len(data)}")
    freqs = struct.unpack_from(f"<{sigma}I", data, pos)
    final_state, nbits = _TRAILER.unpack_from(data, pos + 4 * sigma)
    header = ContainerHeader(codec=codec, r=r, k=k, n_letters=n_letters,
                             frequencies=tuple(freqs), final_state=final_state,
                             payload_bit_count=nbits)
    _validate_header(header)
    payload = data[end:]
    want = (nbits + 7) // 8
    if len(payload) < want:
        raise errors.TruncatedPayloadError(
            f"payload needs {want} bytes, got {len(payload)}")
    if len(payload) > want:
        raise errors.TrailingDataError(f"{len(payload) - want} bytes after payload")
    if nbits % 8 and payload[-1] >> (nbits % 8):
        raise errors.BadPaddingError("nonzero padding bits in the last payload byte")
    return header, payload


def default_r(counts) -> int:
    """Smallest ``r >= 1`` whose ``2**r`` slots fit every distinct letter."""
    distinct = sum(1 for c in counts if c)
    return max(1, (distinct - 1).bit_length())


def encode_bytes(data: bytes, codec: str = "tans-precise", k: int = 0,
                 r: int | None = None) -> bytes:
    """Encode a byte string, letters being byte values."""
    if codec not in CODEC_IDS:
        raise ContractError(f"unknown codec {codec!r}")
    if codec != "rans":
        k = 0
    letters = list(data)
    sigma = max(letters) + 1 if letters else 1
    counts = count_frequencies(letters, sigma)
    if r is None:
        r = default_r(counts)
    if letters:
        table = normalize(counts, r)
    else:
        table = make_table([1 << r], r)
    state, buf = make_codec(codec, table, k).encode(letters)
    header = ContainerHeader(codec=codec, r=r, k=k, n_letters=len(letters),
                             frequencies=table.freq, final_state=state,
                             payload_bit_count=buf.bit_count)
    return write_container(header, buf.to_bytes())


def decode_bytes(blob: bytes) -> bytes:
    header, payload = read_container(blob)
    if header.sigma > 256:
        raise errors.BadParameterError(f"sigma={header.sigma} exceeds the byte alphabet")
    buf = LifoBitBuffer.from_bytes(payload, header.payload_bit_count)
    coder = make_codec(header.codec, header.table, header.k)
    letters = coder.decode(header.final_state, buf, header.n_letters)
    return bytes(letters)
