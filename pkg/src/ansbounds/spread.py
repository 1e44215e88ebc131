"""Letter layouts for tabled ANS and the derived encode/decode tables.

A spread is the ``range`` array (which letter owns each of the ``2**r`` slots)
together with ``shuffle``: ``shuffle[cum[a] + i]`` is the slot of the
``(i+1)``-th occurrence of ``a``.  Given any layout, ``shuffle`` is the stable
argsort of the layout, which makes it increasing within each letter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .model import FrequencyTable

# Keys j/f (or (2j+1)/(2f)) with f <= 2**24 are separated by more than twice
# the float64 rounding error, so sorting the rounded keys is exact.
MAX_SPREAD_R = 24


@dataclass(frozen=True, eq=False)
class SpreadTable:
    layout: np.ndarray  # the `range` array: letter at each slot
    shuffle: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpreadTable):
            return NotImplemented
        return (np.array_equal(self.layout, other.layout)
                and np.array_equal(self.shuffle, other.shuffle))


@dataclass(frozen=True, eq=False)
class DecodeTable:
    letter: np.ndarray
    restored_x: np.ndarray  # in [f_a .. 2 f_a) for a = letter[z]
    nb_bits: np.ndarray  # bits to refill so that restored_x << nb_bits >= 2**r


def spread_from_layout(table: FrequencyTable, layout) -> SpreadTable:
    layout = np.asarray(layout, dtype=np.int64)
    if layout.shape != (table.n,):
        raise ContractError(f"layout must have {table.n} slots")
    counts = np.bincount(layout, minlength=table.sigma)
    if counts.size != table.sigma or not np.array_equal(counts, table.freq):
        raise ContractError("layout does not match the frequency table")
    shuffle = np.argsort(layout, kind="stable").astype(np.int64)
    return SpreadTable(layout=layout, shuffle=shuffle)


def spread_identity(table: FrequencyTable) -> SpreadTable:
    """Contiguous layout: slots ``[cum[a] .. cum[a+1])`` belong to ``a``."""
    layout = np.repeat(np.arange(table.sigma, dtype=np.int64), table.freq)
    return SpreadTable(layout=layout, shuffle=np.arange(table.n, dtype=np.int64))


def _priority_spread(table: FrequencyTable, precise: bool) -> SpreadTable:
    if table.r > MAX_SPREAD_R:
        raise ContractError(f"r={table.r} exceeds {MAX_SPREAD_R}")
    freq = np.asarray(table.freq, dtype=np.int64)
    letters = np.repeat(np.arange(table.sigma, dtype=np.int64), freq)
    # occurrence index j of each entry within its letter
    j = np.arange(table.n, dtype=np.int64) - np.repeat(
        np.asarray(table.cum[:-1], dtype=np.int64), freq)
    f = freq[letters].astype(np.float64)
    if precise:
        key = (2 * j + 1) / (2 * f)
    else:
        key = j / f
    # Equal keys: a letter's pending seed goes first, then smaller letter.
    order = np.lexsort((letters, j > 0, key))
    return spread_from_layout(table, letters[order])


def spread_simplified(table: FrequencyTable) -> SpreadTable:
    """Seed every letter with key 0, place by smallest key, re-key at +n/f."""
    return _priority_spread(table, precise=False)


def spread_precise(table: FrequencyTable) -> SpreadTable:
    """Like the simplified spread, but each letter's first key is n/(2f)."""
    return _priority_spread(table, precise=True)


SPREADS = {
    "simplified": spread_simplified,
    "precise": spread_precise,
    "identity": spread_identity,
}


def build_decode_table(spread: SpreadTable, table: FrequencyTable) -> DecodeTable:
    freq = np.asarray(table.freq, dtype=np.int64)
    cum = np.asarray(table.cum[:-1], dtype=np.int64)
    unshuffle = np.empty(table.n, dtype=np.int64)
    unshuffle[spread.shuffle] = np.arange(table.n, dtype=np.int64)
    letter = spread.layout
    restored = freq[letter] + unshuffle - cum[letter]
    _, exp = np.frexp(restored.astype(np.float64))
    nb_bits = table.r - (exp.astype(np.int64) - 1)
    return DecodeTable(letter=letter, restored_x=restored, nb_bits=nb_bits)


def check_spread(spread: SpreadTable, table: FrequencyTable) -> None:
    """Raise ``ContractError`` unless counts, monotonicity and permutation hold."""
    layout, shuffle = spread.layout, spread.shuffle
    if not np.array_equal(np.bincount(layout, minlength=table.sigma), table.freq):
        raise ContractError("letter counts differ from frequencies")
    if not np.array_equal(np.sort(shuffle), np.arange(table.n)):
        raise ContractError("shuffle is not a permutation")
    owner = np.repeat(np.arange(table.sigma), table.freq)
    if not np.array_equal(layout[shuffle], owner):
        raise ContractError("shuffle does not point at its own letter")
    falls = (np.diff(shuffle) <= 0) & (np.diff(owner) == 0)
    if falls.any():
        a = int(owner[np.argmax(falls)])
        raise ContractError(f"shuffle not increasing for letter {a}")


def slot_bound_holds(spread: SpreadTable, table: FrequencyTable,
                     precise: bool) -> bool:
    """Check the uniformity bound on every occurrence's slot.

    For the (d+1)-th occurrence of ``a`` at slot k, with s letters present:
    simplified ``k <= d*n/f_a + s``, precise ``k <= (d + 1/2)*n/f_a + s/2``,
    compared in integers.
    """
    freq = np.asarray(table.freq, dtype=np.int64)
    letters = np.repeat(np.arange(table.sigma, dtype=np.int64), freq)
    d = np.arange(table.n, dtype=np.int64) - np.repeat(
        np.asarray(table.cum[:-1], dtype=np.int64), freq)
    f = freq[letters]
    k = spread.shuffle
    s = table.support
    if precise:
        ok = 2 * k * f <= (2 * d + 1) * table.n + s * f
    else:
        ok = k * f <= d * table.n + s * f
    return bool(np.all(ok))
