"""Worst-case input for tabled ANS.

For even ``r`` and ``n = 2**r`` the alphabet has ``sigma = (n - 1)/3 + 1``
letters: ``sigma - 1`` letters of frequency 3 and one final letter of
frequency 1.  Both priority-queue spreads lay the range out as ``0..sigma-1``
followed by two blocks of ``0..sigma-2``.  Letters are arranged so that the
encoder state alternates between the low quarter (segment A) and the upper
half (segment C) of ``[0..n)``, spilling ``r-2`` and ``r-1`` bits in turn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitio import LifoBitBuffer
from .errors import ContractError
from .model import FrequencyTable, make_table
from .spread import SpreadTable
from .tans import tans_push


class AlternationError(ContractError):
    def __init__(self, step: int, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason


@dataclass(frozen=True)
class AdversarialInstance:
    r: int
    sequence: tuple[int, ...]  # a_1 .. a_n in the order they must be pushed
    table: FrequencyTable

    @property
    def n(self) -> int:
        return 1 << self.r

    @property
    def sigma(self) -> int:
        return self.table.sigma

    def canonical_layout(self) -> np.ndarray:
        """The range both spreads build: 0..sigma-1, then 0..sigma-2 twice."""
        head = np.arange(self.sigma)
        tail = np.arange(self.sigma - 1)
        return np.concatenate([head, tail, tail])


def build_adversarial(r: int) -> AdversarialInstance:
    if r < 4 or r % 2:
        raise ContractError(f"r must be even and >= 4, got {r}")
    n = 1 << r
    sigma = (n - 1) // 3 + 1
    if sigma % 2:
        raise ContractError(f"sigma={sigma} is odd; the construction needs sigma/2")
    half = sigma // 2
    shared = half - 1
    # odd positions draw from [half-1 .. sigma-1), even ones from [0 .. half)
    odd = list(range(half, sigma - 1)) * 3 + [shared, shared]
    even = [shared] + list(range(0, shared)) * 3
    assert len(odd) == n // 2 and len(even) == n // 2 - 1
    seq = []
    for i in range(1, n):
        seq.append(odd[i // 2] if i % 2 else even[i // 2 - 1])
    seq.append(sigma - 1)
    table = make_table([3] * (sigma - 1) + [1], r)
    return AdversarialInstance(r=r, sequence=tuple(seq), table=table)


def segment_of(state: int, r: int) -> str:
    """A = [0..n/4), B = [n/4..n/2), C = [n/2..n) for ``state = x mod 2**r``."""
    if state < 1 << (r - 2):
        return "A"
    if state < 1 << (r - 1):
        return "B"
    return "C"


@dataclass
class AlternationReport:
    r: int
    steps: int
    states: list[int] = field(default_factory=list)
    widths: list[int] = field(default_factory=list)

    @property
    def payload_bits(self) -> int:
        return sum(self.widths)


def verify_alternation(instance: AdversarialInstance,
                       spread: SpreadTable) -> AlternationReport:
    """Push a_1 .. a_{n-1} and check the A/C bounce and the spill widths.

    Raises :class:`AlternationError` naming the first step that misbehaves.
    """
    r = instance.r
    x = 1 << r
    report = AlternationReport(r=r, steps=0)
    for i, a in enumerate(instance.sequence[:-1], start=1):
        before = segment_of(x - (1 << r), r)
        scratch = LifoBitBuffer()
        x = tans_push(x, a, instance.table, spread, scratch)
        state = x - (1 << r)
        want_width = r - 2 if before == "A" else r - 1
        want_seg = "C" if i % 2 else "A"
        if before == "B":
            raise AlternationError(i, "state entered segment B")
        if scratch.bit_count != want_width:
            raise AlternationError(
                i, f"spilled {scratch.bit_count} bits, expected {want_width}")
        if segment_of(state, r) != want_seg:
            raise AlternationError(
                i, f"state {state} in segment {segment_of(state, r)}, expected {want_seg}")
        report.states.append(state)
        report.widths.append(scratch.bit_count)
        report.steps = i
    return report


def lower_bound_bits(sigma: int, r: int) -> float:
    return (sigma - 1) / 4 + r - 2


def instance_entropy_bits(r: int) -> float:
    """Closed form ``(n-1) log2(n/3) + log2 n`` of the instance's entropy."""
    n = 1 << r
    return (n - 1) * (r - math.log2(3)) + r

