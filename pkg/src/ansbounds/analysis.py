"""Redundancy measurement and bound checks.

Encoded size is counted as payload bits plus the explicit final state
(``r + 1`` bits for tANS, ``r + k + 1`` for rANS).  The conceptual integer the
coder builds has exactly that many bits, one more than the logarithm the
upper bounds are stated for, so upper-bound checks allow one extra bit.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, DecodeError
from .model import (FrequencyTable, count_frequencies, cross_entropy_bits,
                    entropy_bits, make_table, normalize)
from .rans import RansCodec, RansParams
from .spread import SPREADS
from .tans import TansCodec

LOG2E = math.log2(math.e)
SLACK = 1e-9

TANS_CODECS = ("tans-simplified", "tans-precise", "tans-identity")
CODECS = TANS_CODECS + ("rans",)

CSV_HEADER = ["codec", "r", "k", "sigma", "n", "encoded_bits", "entropy_bits",
              "redundancy", "bound", "pass"]


def make_codec(codec: str, table: FrequencyTable, k: int = 0):
    if codec == "rans":
        return RansCodec(table, RansParams(table.r, k))
    if codec in TANS_CODECS:
        if k:
            raise ContractError("tANS codecs take no accuracy parameter")
        return TansCodec(table, SPREADS[codec.split("-", 1)[1]](table))
    raise ContractError(f"unknown codec {codec!r}")


def state_bits(codec: str, r: int, k: int = 0) -> int:
    return r + k + 1 if codec == "rans" else r + 1


@dataclass
class RedundancyReport:
    codec: str
    r: int
    k: int
    sigma: int  # letters occurring in the sequence
    n_letters: int
    payload_bits: int
    encoded_bits: int
    entropy_bits: float
    model_bits: float  # ideal size under the table's frequencies
    redundancy: float
    bound_kind: str = "none"
    bound_bits: float = math.inf
    bound_satisfied: bool = True
    round_trip_ok: bool = True

    @property
    def per_letter_redundancy(self) -> float:
        return self.redundancy / self.n_letters if self.n_letters else 0.0

    def csv_row(self) -> list[str]:
        return [self.codec, str(self.r), str(self.k), str(self.sigma),
                str(self.n_letters), str(self.encoded_bits),
                f"{self.entropy_bits:.12g}", f"{self.redundancy:.12g}",
                f"{self.bound_bits:.12g}", "1" if self.bound_satisfied else "0"]


def theorem1_bound(sigma: int, r: int) -> float:
    return sigma * LOG2E + r + 1


def theorem2_bound(report: RedundancyReport, m: int | None = None) -> float:
    """Redundancy bound for approximate frequencies, simplified spread.

    ``(model_bits - entropy_bits) + sigma*m/2^r * log2(e) + r + 1``.
    """
    m = report.n_letters if m is None else m
    penalty = report.model_bits - report.entropy_bits
    return penalty + report.sigma * m / (1 << report.r) * LOG2E + report.r + 1


def precise_approx_bound(report: RedundancyReport, counts: Sequence[int],
                         table: FrequencyTable) -> float:
    """Approximate-frequency bound for the precise spread.

    Per letter: ``log2(2^r/fhat) + (1/(2 fhat) + sigma/2^(r+1)) log2(e)``.
    """
    extra = math.fsum(f / (2 * table.freq[a]) for a, f in enumerate(counts) if f)
    per_sigma = report.sigma * report.n_letters / (2 << report.r)
    penalty = report.model_bits - report.entropy_bits
    return penalty + (extra + per_sigma) * LOG2E + report.r + 1


def theorem3_bound(sigma: int, r: int) -> float:
    return (sigma - 1) / 4 + r - 2


def theorem4_bound(n: int, r: int, k: int, strict: bool = False) -> float:
    """``n log2(e)/(2^k - 1) + r`` plus ``k + 1`` state bits unless ``strict``."""
    if k < 1:
        return math.inf
    base = n * LOG2E / ((1 << k) - 1) + r
    return base if strict else base + k + 1


def check_theorem1(report: RedundancyReport) -> bool:
    return report.redundancy <= theorem1_bound(report.sigma, report.r) + SLACK


def check_theorem2(report: RedundancyReport, m: int | None = None) -> bool:
    return report.redundancy <= theorem2_bound(report, m) + SLACK


def check_theorem3(report: RedundancyReport) -> bool:
    sigma = report.sigma
    return report.redundancy >= theorem3_bound(sigma, report.r) - SLACK


def check_theorem4(report: RedundancyReport, strict: bool = False) -> bool:
    bound = theorem4_bound(report.n_letters, report.r, report.k, strict)
    penalty = report.model_bits - report.entropy_bits
    return report.redundancy <= penalty + bound + SLACK


def measure(codec: str, sequence, table: FrequencyTable, *, k: int = 0,
            paper_push_order: bool = False, bound: str = "auto",
            codec_obj=None) -> RedundancyReport:
    """Encode, decode, and compare the encoded size to the entropy formula.

    With ``paper_push_order`` letters are pushed first to last (the decoder
    then yields them reversed); otherwise last to first.

    ``bound`` selects the theorem attached to the report: ``auto`` picks the
    one whose hypotheses the input meets; ``thm3`` attaches the lower bound.
    """
    seq = np.asarray(sequence, dtype=np.int64).reshape(-1)
    fed = seq[::-1] if paper_push_order else seq
    coder = codec_obj or make_codec(codec, table, k)
    state, buf = coder.encode(fed)
    try:
        ok = coder.decode(state, buf, len(fed)) == fed.tolist()
    except DecodeError:
        ok = False

    counts = count_frequencies(seq, table.sigma)
    m = len(seq)
    ent = entropy_bits(counts)
    model = cross_entropy_bits(counts, table)
    encoded = buf.bit_count + state_bits(codec, table.r, k)
    report = RedundancyReport(
        codec=codec, r=table.r, k=k, sigma=sum(1 for c in counts if c),
        n_letters=m, payload_bits=buf.bit_count, encoded_bits=encoded,
        entropy_bits=ent, model_bits=model, redundancy=encoded - ent,
        round_trip_ok=ok)

    exact = m == table.n and tuple(counts) == table.freq
    if bound == "auto":
        if codec in ("tans-simplified", "tans-precise"):
            bound = "thm1" if exact else "thm2"
        elif codec == "rans" and k >= 1:
            bound = "thm4"
        else:
            bound = "none"
    report.bound_kind = bound
    if bound == "thm1":
        report.bound_bits = theorem1_bound(report.sigma, table.r)
        report.bound_satisfied = check_theorem1(report)
    elif bound == "thm2":
        if codec == "tans-precise":
            report.bound_bits = precise_approx_bound(report, counts, table)
        else:
            report.bound_bits = theorem2_bound(report)
        report.bound_satisfied = report.redundancy <= report.bound_bits + SLACK
    elif bound == "thm3":
        report.bound_bits = theorem3_bound(report.sigma, table.r)
        report.bound_satisfied = check_theorem3(report)
    elif bound == "thm4":
        report.bound_bits = (model - ent) + theorem4_bound(m, table.r, k)
        report.bound_satisfied = check_theorem4(report)
    elif bound != "none":
        raise ContractError(f"unknown bound {bound!r}")
    report.bound_satisfied = report.bound_satisfied and ok
    return report


# -- random instances -------------------------------------------------------

SHAPES = ("composition", "zipf", "dirichlet", "flat")


def random_frequencies(rng: np.random.Generator, sigma: int, r: int,
                       shape: str = "composition") -> list[int]:
    """Frequencies summing to ``2**r`` with every one of ``sigma`` letters >= 1."""
    n = 1 << r
    if not 1 <= sigma <= n:
        raise ContractError(f"need 1 <= sigma <= 2^r, got sigma={sigma}, r={r}")
    if shape == "composition":
        cuts = np.sort(rng.choice(n - 1, size=sigma - 1, replace=False) + 1)
        return np.diff(np.concatenate([[0], cuts, [n]])).tolist()
    if shape == "flat":
        base = [n // sigma] * sigma
        for a in rng.choice(sigma, size=n - sum(base), replace=False):
            base[a] += 1
        return base
    if shape == "zipf":
        weights = 1.0 / np.arange(1, sigma + 1) ** 1.1
        weights = weights[rng.permutation(sigma)]
    elif shape == "dirichlet":
        weights = rng.dirichlet(np.full(sigma, 0.5))
    else:
        raise ContractError(f"unknown shape {shape!r}")
    raw = np.maximum(1, np.round(weights / weights.sum() * (1 << 30))).astype(np.int64)
    return list(normalize(raw.tolist(), r).freq)


def random_instance(rng: np.random.Generator, sigma: int, r: int,
                    shape: str = "composition") -> tuple[np.ndarray, FrequencyTable]:
    """A uniformly shuffled sequence whose letter counts are exactly the table."""
    freq = random_frequencies(rng, sigma, r, shape)
    seq = rng.permutation(np.repeat(np.arange(sigma, dtype=np.int64), freq))
    return seq, make_table(freq, r)


# -- sweeps -----------------------------------------------------------------

@dataclass
class SweepGrid:
    sigmas: Sequence[int] = (2, 16, 256)
    rs: Sequence[int] = (8, 12)
    shapes: Sequence[str] = ("composition", "zipf")
    codecs: Sequence[str] = ("tans-simplified", "tans-precise", "rans")
    ks: Sequence[int] = (0, 1, 2, 3, 4)
    reps: int = 1
    seed: int = 0

    def cells(self) -> Iterable[tuple[int, int, str, str, int, int]]:
        for sigma, r, shape, codec, rep in itertools.product(
                self.sigmas, self.rs, self.shapes, self.codecs, range(self.reps)):
            if sigma > 1 << r:
                continue
            for k in (self.ks if codec == "rans" else (0,)):
                yield sigma, r, shape, codec, k, rep


def sweep(grid: SweepGrid) -> list[RedundancyReport]:
    reports = []
    cache: dict[tuple, tuple] = {}
    for sigma, r, shape, codec, k, rep in grid.cells():
        key = (sigma, r, shape, rep)
        if key not in cache:
            # one instance per (sigma, r, shape, rep), shared by all codecs
            seed = [grid.seed, sigma, r, SHAPES.index(shape) if shape in SHAPES else 99, rep]
            cache[key] = random_instance(np.random.default_rng(seed), sigma, r, shape)
        seq, table = cache[key]
        reports.append(measure(codec, seq, table, k=k))
    return reports


def write_csv(reports: Iterable[RedundancyReport], out=None) -> str:
    """Write the sweep CSV to ``out`` (a text stream) and return it as a string."""
    sink = io.StringIO()
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rep in reports:
        writer.writerow(rep.csv_row())
    text = sink.getvalue()
    if out is not None:
        out.write(text)
    return text


def report_dict(report: RedundancyReport) -> dict:
    d = asdict(report)
    d["per_letter_redundancy"] = report.per_letter_redundancy
    return d
