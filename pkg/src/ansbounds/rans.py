"""Range ANS with fixed accuracy ``k``.

Every push divides a value ``x_hat`` in ``[f*2**k .. f*2**(k+1))`` by the letter
frequency ``f``, so the quotient is confined to ``[2**k .. 2**(k+1))`` and can
be produced by ``k`` conditional subtractions instead of a hardware divide.
With ``k = 0`` the scheme is plain rANS without shuffling and its bitstream is
identical to tabled ANS over the contiguous layout.

The state lies in ``[2**(r+k) .. 2**(r+k+1))``; the encoded size is
``payload bits + r + k + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .bitio import LifoBitBuffer
from .errors import ContractError, DecodeError
from .model import FrequencyTable
from .tans import _as_letters, decode_in_chunks, shift_offset, words_to_buffer

MAX_K = 8


@dataclass(frozen=True)
class RansParams:
    r: int
    k: int = 0

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ContractError(f"r must be >= 1, got {self.r}")
        if not 0 <= self.k <= MAX_K:
            raise ContractError(f"k must be in [0..{MAX_K}], got {self.k}")
        if self.r + self.k + 1 > 64:
            raise ContractError("state does not fit in 64 bits")

    @property
    def big_r(self) -> int:
        return self.r + self.k

    @property
    def state_bits(self) -> int:
        return self.r + self.k + 1


@dataclass(frozen=True)
class LetterEntry:
    """Per-letter constants read by the encoder in one lookup."""

    cum: int
    freq: int
    shift_d: int
    log_f: int


def letter_entries(table: FrequencyTable, params: RansParams) -> list[LetterEntry]:
    return [
        LetterEntry(c, f, shift_offset(f, params.r, params.k) if f else 0,
                    f.bit_length() - 1)
        for c, f in zip(table.cum, table.freq)
    ]


def restricted_divide(x: int, f: int, k: int) -> tuple[int, int]:
    """``divmod(x, f)`` for ``x`` in ``[f*2**k .. f*2**(k+1))``, branch-free.

    Subtracts ``f << k`` and then ``f << i`` for ``i = k-1 .. 0``, keeping a
    trial difference only when it is non-negative.  The sign of each trial is
    collected, inverted, at bit ``b + i`` of the accumulator, where ``f`` has
    ``b`` bits; one xor at the end restores the quotient.
    """
    if f < 1 or k < 0 or not f << k <= x < f << (k + 1):
        raise ContractError(f"x={x} outside [f*2^k .. f*2^(k+1)) for f={f}, k={k}")
    b = f.bit_length()
    y = x - (f << k)
    acc = 0
    for i in range(k - 1, -1, -1):
        y0 = y - (f << i)
        acc |= y0 & (1 << (b + i))
        # |y0| < 2**(b+i), so this is -1 for negative y0 and 0 otherwise
        y = y0 + ((y0 >> (b + i + 1)) & (f << i))
    q = (acc ^ (((1 << (k + 1)) - 1) << b)) >> b
    return q, y


def shift_amount(x: int, f: int, params: RansParams) -> int:
    """Number of low bits of ``x`` to spill before encoding a letter of frequency ``f``."""
    big_r = params.big_r
    if not 1 << big_r <= x < 2 << big_r:
        raise ContractError(f"state {x} outside [2^R .. 2^(R+1))")
    if f == 1 << params.r:
        # t = 0: the only letter; answer by direct range test
        return 0 if x < f << (params.k + 1) else 1
    return (x + shift_offset(f, params.r, params.k)) >> (big_r + 1)


def rans_push(x: int, a: int, table: FrequencyTable, params: RansParams,
              buf: LifoBitBuffer) -> int:
    f = table.freq[a] if 0 <= a < table.sigma else 0
    if f == 0:
        raise ContractError(f"letter {a} has zero frequency and cannot be encoded")
    s = shift_amount(x, f, params)
    buf.write_bits(x & ((1 << s) - 1), s)
    q, rem = restricted_divide(x >> s, f, params.k)
    return (q << params.r) + table.cum[a] + rem


def rans_pop(x: int, table: FrequencyTable, params: RansParams,
             buf: LifoBitBuffer) -> tuple[int, int]:
    z = x & (table.n - 1)
    a = table.letter_of_slot(z)
    y = (x >> params.r) * table.freq[a] + z - table.cum[a]
    s = params.big_r + 1 - y.bit_length()
    return (y << s) | buf.read_bits(s), a


@dataclass(frozen=True, eq=False)
class RansCodec:
    table: FrequencyTable
    params: RansParams

    def __post_init__(self) -> None:
        if self.table.r != self.params.r:
            raise ContractError("table and params disagree on r")

    @cached_property
    def entries(self) -> list[LetterEntry]:
        return letter_entries(self.table, self.params)

    @cached_property
    def _arrays(self):
        freq = np.asarray(self.table.freq, dtype=np.int64)
        cum = np.asarray(self.table.cum[:-1], dtype=np.int64)
        shift_d = np.array([e.shift_d for e in self.entries], dtype=np.int64)
        return freq, cum, shift_d

    @property
    def _kernel_ok(self) -> bool:
        return (self.params.r <= _kernels.MAX_KERNEL_R
                and self.params.state_bits <= _kernels.MAX_KERNEL_STATE_BITS)

    def encode(self, sequence, *, use_kernel: bool = True) -> tuple[int, LifoBitBuffer]:
        seq = _as_letters(sequence, self.table)
        if use_kernel and self._kernel_ok:
            freq, cum, shift_d = self._arrays
            x, words, nbits = _kernels.rans_encode(seq, freq, cum, shift_d,
                                                   self.params.r, self.params.k)
            return int(x), words_to_buffer(words, int(nbits))
        buf = LifoBitBuffer()
        x = 1 << self.params.big_r
        for a in reversed(seq.tolist()):
            x = rans_push(x, a, self.table, self.params, buf)
        return x, buf

    def decode(self, state: int, buf: LifoBitBuffer, n_letters: int, *,
               use_kernel: bool = True) -> list[int]:
        big_r = self.params.big_r
        if not 1 << big_r <= state < 2 << big_r:
            raise DecodeError(f"final state {state} outside [2^R .. 2^(R+1))")
        if use_kernel and self._kernel_ok:
            freq, cum, _ = self._arrays
            letters, x, pos = decode_in_chunks(
                _kernels.rans_decode, state, buf, n_letters,
                freq, cum, self.params.r, self.params.k)
        else:
            buf.rewind()
            x, letters = state, []
            for _ in range(n_letters):
                x, a = rans_pop(x, self.table, self.params, buf)
                letters.append(a)
            pos = buf.remaining
        if x != 1 << big_r or pos:
            raise DecodeError("stream does not unwind to the initial state")
        return letters


def rans_encode(sequence, table: FrequencyTable, params: RansParams,
                **kw) -> tuple[int, LifoBitBuffer]:
    return RansCodec(table, params).encode(sequence, **kw)


def rans_decode(state: int, buf: LifoBitBuffer, n_letters: int,
                table: FrequencyTable, params: RansParams, **kw) -> list[int]:
    return RansCodec(table, params).decode(state, buf, n_letters, **kw)
