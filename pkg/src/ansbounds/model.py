"""Frequency tables, power-of-two normalization and the entropy formula."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from typing import Sequence

import numpy as np

from .errors import ContractError


@dataclass(frozen=True)
class FrequencyTable:
    """Letter frequencies ``freq`` summing to ``2**r`` with prefix sums ``cum``.

    Letter ``a`` owns the slots ``[cum[a] .. cum[a+1])`` of the range.
    """

    r: int
    freq: tuple[int, ...]
    cum: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.r < 0:
            raise ContractError(f"r must be non-negative, got {self.r}")
        if any(f < 0 for f in self.freq):
            raise ContractError("negative frequency")
        if sum(self.freq) != 1 << self.r:
            raise ContractError(
                f"frequencies sum to {sum(self.freq)}, expected 2^{self.r}"
            )
        if self.cum != (0, *accumulate(self.freq)):
            raise ContractError("cum is not the prefix sum of freq")

    @property
    def sigma(self) -> int:
        return len(self.freq)

    @property
    def n(self) -> int:
        return 1 << self.r

    @property
    def support(self) -> int:
        """Number of letters with nonzero frequency."""
        return sum(1 for f in self.freq if f)

    def letter_of_slot(self, z: int) -> int:
        """Letter ``a`` with ``cum[a] <= z < cum[a+1]``."""
        lo, hi = 0, self.sigma
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.cum[mid] <= z:
                lo = mid
            else:
                hi = mid
        return lo


def count_frequencies(sequence: Sequence[int], sigma: int) -> list[int]:
    seq = np.asarray(sequence, dtype=np.int64)
    if seq.size and (seq.min() < 0 or seq.max() >= sigma):
        raise ContractError(f"letter outside alphabet [0..{sigma})")
    return np.bincount(seq, minlength=sigma).tolist()


def make_table(counts: Sequence[int], r: int) -> FrequencyTable:
    freq = tuple(int(c) for c in counts)
    return FrequencyTable(r=r, freq=freq, cum=(0, *accumulate(freq)))


def normalize(raw: Sequence[int], r: int) -> FrequencyTable:
    """Scale raw counts to a power-of-two total by largest remainders.

    Every letter with a nonzero count keeps at least one slot; letters with a
    zero count get none.  Rounding is repaired by adding slots to the largest
    fractional parts and removing slots from the smallest, ties going to the
    smaller letter index.
    """
    raw = [int(c) for c in raw]
    if r < 1:
        raise ContractError("r must be at least 1")
    if any(c < 0 for c in raw):
        raise ContractError("negative count")
    m = sum(raw)
    if m == 0:
        raise ContractError("all counts are zero")
    n = 1 << r
    present = [a for a, c in enumerate(raw) if c]
    if len(present) > n:
        raise ContractError(f"{len(present)} distinct letters exceed 2^{r} slots")

    out = [0] * len(raw)
    # fractional part of raw*n/m, scaled by m to stay integral
    residue = {}
    for a in present:
        q, rem = divmod(raw[a] * n, m)
        out[a] = max(1, q)
        residue[a] = rem if q else -1
    diff = n - sum(out)
    if diff > 0:
        order = sorted(present, key=lambda a: (-residue[a], a))
        for a in order[:diff]:
            out[a] += 1
    while diff < 0:
        order = sorted(present, key=lambda a: (residue[a], a))
        for a in order:
            if diff == 0:
                break
            if out[a] > 1:
                out[a] -= 1
                diff += 1
    return make_table(out, r)


def entropy_bits(counts: Sequence[int], m: int | None = None) -> float:
    """Entropy formula: sum of ``f * log2(m / f)`` over nonzero counts."""
    if isinstance(counts, FrequencyTable):
        counts = counts.freq
    counts = [int(c) for c in counts]
    if m is None:
        m = sum(counts)
    if m <= 0:
        return 0.0
    log_m = math.log2(m)
    return math.fsum(f * (log_m - math.log2(f)) for f in counts if f)


def cross_entropy_bits(counts: Sequence[int], table: FrequencyTable) -> float:
    """Ideal size when letters with true counts are coded with ``table``'s model.

    Returns ``inf`` when a letter that occurs has zero modelled frequency.
    """
    terms = []
    for a, f in enumerate(counts):
        if not f:
            continue
        fhat = table.freq[a] if a < table.sigma else 0
        if fhat == 0:
            return math.inf
        terms.append(int(f) * (table.r - math.log2(fhat)))
    return math.fsum(terms)
