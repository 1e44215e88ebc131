"""Streaming tabled ANS.

The coder state ``x`` always lies in ``[2**r .. 2**(r+1))``; it is the top
``r+1`` bits of the conceptual big integer, the lower bits having been spilled
into a :class:`LifoBitBuffer`.

``tans_push``/``tans_pop`` are the per-letter reference operations.
``tans_encode``/``tans_decode`` run whole sequences through compiled loops
that produce the same bits.  Encoding pushes the sequence back to front, so
decoding yields it front to back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .bitio import LifoBitBuffer
from .errors import ContractError, DecodeError
from .model import FrequencyTable
from .spread import DecodeTable, SpreadTable, build_decode_table

# letters decoded per kernel call
DECODE_BLOCK = 1 << 20


def shift_offset(f: int, r: int, k: int = 0) -> int:
    """Collet's per-letter constant ``d`` with ``s = (x + d) >> (r+k+1)``."""
    t = r - (f.bit_length() - 1)
    return (t << (r + k + 1)) - (f << (t + k))


@dataclass(frozen=True, eq=False)
class TansCodec:
    """Precomputed encode and decode tables for one frequency table and spread."""

    table: FrequencyTable
    spread: SpreadTable

    @cached_property
    def decode_table(self) -> DecodeTable:
        return build_decode_table(self.spread, self.table)

    @cached_property
    def _enc_arrays(self):
        t = self.table
        shift_d = np.array([shift_offset(f, t.r) if f else 0 for f in t.freq],
                           dtype=np.int64)
        base = np.asarray(t.cum[:-1], dtype=np.int64) - np.asarray(t.freq,
                                                                   dtype=np.int64)
        next_state = t.n + self.spread.shuffle.astype(np.int64)
        return shift_d, base, next_state

    def encode(self, sequence) -> tuple[int, LifoBitBuffer]:
        return tans_encode(sequence, self.table, self.spread, codec=self)

    def decode(self, state: int, buf: LifoBitBuffer, n_letters: int) -> list[int]:
        return tans_decode(state, buf, n_letters, self.table, self.decode_table)


def tans_push(x: int, a: int, table: FrequencyTable, spread: SpreadTable,
              buf: LifoBitBuffer) -> int:
    f = table.freq[a] if 0 <= a < table.sigma else 0
    if f == 0:
        raise ContractError(f"letter {a} has zero frequency and cannot be encoded")
    r = table.r
    s = (x + shift_offset(f, r)) >> (r + 1)
    buf.write_bits(x & ((1 << s) - 1), s)
    x_hat = x >> s
    return (1 << r) + int(spread.shuffle[table.cum[a] + x_hat - f])


def tans_pop(x: int, decode: DecodeTable, table: FrequencyTable,
             buf: LifoBitBuffer) -> tuple[int, int]:
    z = x & (table.n - 1)
    s = int(decode.nb_bits[z])
    x = (int(decode.restored_x[z]) << s) | buf.read_bits(s)
    return x, int(decode.letter[z])


def _as_letters(sequence, table: FrequencyTable) -> np.ndarray:
    seq = np.asarray(sequence, dtype=np.int64).reshape(-1)
    if seq.size:
        if seq.min() < 0 or seq.max() >= table.sigma:
            raise ContractError(f"letter outside alphabet [0..{table.sigma})")
        if np.any(np.asarray(table.freq, dtype=np.int64)[seq] == 0):
            raise ContractError("sequence contains a letter with zero frequency")
    return seq


def words_to_buffer(words: np.ndarray, nbits: int) -> LifoBitBuffer:
    data = words.astype("<u4").tobytes()[: (nbits + 7) // 8]
    return LifoBitBuffer.from_bytes(data, nbits)


def buffer_to_words(buf: LifoBitBuffer) -> np.ndarray:
    data = buf.to_bytes()
    data += bytes(-len(data) % 4 + 8)
    return np.frombuffer(data, dtype="<u4").astype(np.int64)


def tans_encode(sequence, table: FrequencyTable, spread: SpreadTable, *,
                codec: TansCodec | None = None,
                use_kernel: bool = True) -> tuple[int, LifoBitBuffer]:
    """Encode ``sequence``; the total size is ``payload bits + r + 1``."""
    seq = _as_letters(sequence, table)
    if use_kernel and table.r <= _kernels.MAX_KERNEL_R:
        codec = codec or TansCodec(table, spread)
        x, words, nbits = _kernels.tans_encode(seq, *codec._enc_arrays, table.r)
        return int(x), words_to_buffer(words, int(nbits))
    buf = LifoBitBuffer()
    x = table.n
    for a in reversed(seq.tolist()):
        x = tans_push(x, a, table, spread, buf)
    return x, buf


def decode_in_chunks(kernel, state: int, buf: LifoBitBuffer, n_letters: int,
                     *tables) -> tuple[list[int], int, int]:
    """Run a decode kernel a block at a time.

    A corrupt letter count then fails on bit underflow instead of
    allocating the whole claimed output up front.
    """
    words = buffer_to_words(buf)
    x, pos = state, buf.bit_count
    letters: list[int] = []
    while True:
        count = min(DECODE_BLOCK, n_letters - len(letters))
        out, x, pos, status = kernel(x, words, pos, count, *tables)
        if status:
            raise DecodeError("bit underflow: stream truncated or corrupt")
        letters.extend(out.tolist())
        if len(letters) == n_letters:
            return letters, int(x), int(pos)


def tans_decode(state: int, buf: LifoBitBuffer, n_letters: int,
                table: FrequencyTable, decode: DecodeTable, *,
                use_kernel: bool = True) -> list[int]:
    if not table.n <= state < 2 * table.n:
        raise DecodeError(f"final state {state} outside [2^r .. 2^(r+1))")
    if use_kernel and table.r <= _kernels.MAX_KERNEL_R:
        letters, x, pos = decode_in_chunks(
            _kernels.tans_decode, state, buf, n_letters,
            decode.letter, decode.restored_x, decode.nb_bits, table.r)
    else:
        buf.rewind()
        x, letters = state, []
        for _ in range(n_letters):
            x, a = tans_pop(x, decode, table, buf)
            letters.append(a)
        pos = buf.remaining
    if x != table.n or pos:
        raise DecodeError("stream does not unwind to the initial state")
    return letters
