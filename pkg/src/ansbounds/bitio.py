"""LIFO bit container.

The encoder appends variable-width groups; the decoder consumes them from the
end, so groups come back in reverse write order. Bits are stored LSB-first in
write order: bit ``i`` of the stream is bit ``i % 8`` of byte ``i // 8``.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractError, DecodeError

MAX_WIDTH = 64
_WORD = 64
_WORD_MASK = (1 << _WORD) - 1


class LifoBitBuffer:
    """Append-only bit stack read back from the end.

    Completed 64-bit words live in ``_words``; the partially filled top word is
    ``_tail`` holding ``_tail_bits`` bits.  Reading never mutates the bits, only
    ``_read_pos``, which any write resets to the end of the stream.
    """

    __slots__ = ("_words", "_tail", "_tail_bits", "_read_pos")

    def __init__(self) -> None:
        self._words: list[int] = []
        self._tail = 0
        self._tail_bits = 0
        self._read_pos = 0

    @property
    def bit_count(self) -> int:
        return len(self._words) * _WORD + self._tail_bits

    @property
    def remaining(self) -> int:
        """Number of bits not yet consumed by ``read_bits``."""
        return self._read_pos

    def write_bits(self, value: int, width: int) -> None:
        if not 0 <= width <= MAX_WIDTH:
            raise ContractError(f"width {width} outside [0..{MAX_WIDTH}]")
        if value < 0 or value >> width:
            raise ContractError(f"value {value} does not fit in {width} bits")
        self._tail |= value << self._tail_bits
        self._tail_bits += width
        if self._tail_bits >= _WORD:
            self._words.append(self._tail & _WORD_MASK)
            self._tail >>= _WORD
            self._tail_bits -= _WORD
        self._read_pos = self.bit_count

    def _word(self, i: int) -> int:
        return self._words[i] if i < len(self._words) else self._tail

    def read_bits(self, width: int) -> int:
        """Pop the most recent unread ``width`` bits."""
        if not 0 <= width <= MAX_WIDTH:
            raise ContractError(f"width {width} outside [0..{MAX_WIDTH}]")
        if width > self._read_pos:
            raise DecodeError(
                f"bit underflow: need {width} bits, {self._read_pos} left"
            )
        if width == 0:
            return 0
        start = self._read_pos - width
        idx, off = divmod(start, _WORD)
        value = self._word(idx) >> off
        if off + width > _WORD:
            value |= self._word(idx + 1) << (_WORD - off)
        self._read_pos = start
        return value & ((1 << width) - 1)

    def rewind(self) -> None:
        """Reset the read cursor to the end of the stream."""
        self._read_pos = self.bit_count

    def to_bytes(self) -> bytes:
        body = np.array(self._words, dtype="<u8").tobytes()
        return body + self._tail.to_bytes((self._tail_bits + 7) // 8, "little")

    @classmethod
    def from_bytes(cls, data: bytes, bit_count: int) -> LifoBitBuffer:
        if bit_count < 0 or len(data) != (bit_count + 7) // 8:
            raise ContractError(
                f"{len(data)} bytes cannot hold exactly {bit_count} bits"
            )
        if bit_count % 8 and data[-1] >> (bit_count % 8):
            raise ContractError("nonzero padding bits after the last group")
        buf = cls()
        n_full = bit_count // _WORD
        buf._words = np.frombuffer(data, dtype="<u8", count=n_full).tolist()
        buf._tail = int.from_bytes(data[8 * n_full:], "little")
        buf._tail_bits = bit_count - n_full * _WORD
        buf._read_pos = bit_count
        return buf

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LifoBitBuffer):
            return NotImplemented
        return (self.bit_count == other.bit_count
                and self.to_bytes() == other.to_bytes())

    def __repr__(self) -> str:
        return f"LifoBitBuffer(bit_count={self.bit_count}, remaining={self._read_pos})"
