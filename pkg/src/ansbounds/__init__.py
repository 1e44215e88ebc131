"""Tabled ANS, fixed-accuracy range ANS, and redundancy measurement."""

from .bitio import LifoBitBuffer
from .model import (FrequencyTable, count_frequencies, cross_entropy_bits,
                    entropy_bits, make_table, normalize)
from .spread import (DecodeTable, SpreadTable, build_decode_table,
                     spread_identity, spread_precise, spread_simplified)
from .tans import TansCodec, tans_decode, tans_encode, tans_pop, tans_push
from .rans import (RansCodec, RansParams, rans_decode, rans_encode, rans_pop,
                   rans_push, restricted_divide, shift_amount)
from .adversarial import build_adversarial, lower_bound_bits, verify_alternation
from .analysis import RedundancyReport, measure

__version__ = "0.1.0"
