import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ansbounds.bitio import LifoBitBuffer
from ansbounds.errors import ContractError, DecodeError
from ansbounds.model import entropy_bits, make_table
from ansbounds.spread import (build_decode_table, spread_identity, spread_precise,
                              spread_simplified)
from ansbounds.tans import TansCodec, tans_decode, tans_encode, tans_pop, tans_push
from oracles import unbounded_encode

T3562 = make_table([3, 5, 6, 2], 4)
SPREADS = [spread_simplified, spread_precise, spread_identity]


def test_push_example_simplified():
    spread = spread_simplified(T3562)
    assert spread.shuffle[1] == 6
    buf = LifoBitBuffer()
    x = tans_push(16, 0, T3562, spread, buf)
    assert x == 22
    assert buf.bit_count == 2 and buf.read_bits(2) == 0


def test_push_example_identity():
    buf = LifoBitBuffer()
    x = tans_push(25, 2, T3562, spread_identity(T3562), buf)
    assert x == 24
    assert buf.bit_count == 2 and buf.read_bits(2) == 1


def test_push_single_letter_emits_nothing():
    table = make_table([16], 4)
    spread = spread_simplified(table)
    for x in range(16, 32):
        buf = LifoBitBuffer()
        assert tans_push(x, 0, table, spread, buf) == x
        assert buf.bit_count == 0


@pytest.mark.parametrize("build", SPREADS)
def test_pop_inverts_push(build):
    spread = build(T3562)
    dec = build_decode_table(spread, T3562)
    for a in range(4):
        for x in range(16, 32):
            buf = LifoBitBuffer()
            y = tans_push(x, a, T3562, spread, buf)
            assert 16 <= y < 32
            assert tans_pop(y, dec, T3562, buf) == (x, a)
            assert buf.remaining == 0


@pytest.mark.parametrize("build", SPREADS)
def test_spill_width_and_growth(build):
    spread = build(T3562)
    for a, f in enumerate(T3562.freq):
        t = 4 - (f.bit_length() - 1)
        for x in range(16, 32):
            buf = LifoBitBuffer()
            y = tans_push(x, a, T3562, spread, buf)
            s = buf.bit_count
            assert s in (t - 1, t)
            assert y << s > x


def test_push_rejects_absent_letter():
    table = make_table([16, 0], 4)
    with pytest.raises(ContractError):
        tans_push(16, 1, table, spread_simplified(table), LifoBitBuffer())
    with pytest.raises(ContractError):
        tans_encode([0, 1], table, spread_simplified(table))


def test_encode_empty():
    state, buf = tans_encode([], T3562, spread_precise(T3562))
    assert state == 16 and buf.bit_count == 0


def test_encode_constant_sequence():
    table = make_table([256], 8)
    state, buf = tans_encode([0] * 256, table, spread_precise(table))
    assert state == 256 and buf.bit_count == 0


def _random_case(seed, sigma, r):
    rng = np.random.default_rng(seed)
    n = 1 << r
    cuts = np.sort(rng.choice(n - 1, sigma - 1, replace=False) + 1)
    freq = np.diff(np.concatenate([[0], cuts, [n]])).tolist()
    seq = rng.permutation(np.repeat(np.arange(sigma), freq))
    return seq, make_table(freq, r)


@pytest.mark.parametrize("seed,sigma,r", [(0, 4, 4), (1, 10, 7), (2, 60, 9), (3, 2, 10)])
@pytest.mark.parametrize("build", SPREADS)
def test_matches_unbounded_integer(seed, sigma, r, build):
    seq, table = _random_case(seed, sigma, r)
    spread = build(table)
    state, buf = tans_encode(seq, table, spread)
    w = unbounded_encode(seq, list(table.freq), r, shuffle=spread.shuffle.tolist())
    payload = int.from_bytes(buf.to_bytes(), "little")
    assert w == (state << buf.bit_count) | payload
    assert w.bit_length() == buf.bit_count + r + 1


@pytest.mark.parametrize("build", SPREADS)
def test_kernel_matches_reference(build):
    for seed in range(20):
        seq, table = _random_case(seed, 1 + seed * 3, 6 + seed % 5)
        spread = build(table)
        fast = tans_encode(seq, table, spread)
        slow = tans_encode(seq, table, spread, use_kernel=False)
        assert fast == slow
        dec = build_decode_table(spread, table)
        assert tans_decode(*slow, len(seq), table, dec, use_kernel=False) == seq.tolist()


@st.composite
def cases(draw):
    r = draw(st.integers(1, 12))
    sigma = draw(st.integers(1, min(256, 1 << r)))
    seed = draw(st.integers(0, 2**32 - 1))
    return _random_case(seed, sigma, r) + (draw(st.sampled_from(SPREADS)),)


@given(cases())
def test_round_trip_and_upper_bound(case):
    seq, table, build = case
    codec = TansCodec(table, build(table))
    state, buf = codec.encode(seq)
    assert table.n <= state < 2 * table.n
    assert codec.decode(state, buf, len(seq)) == seq.tolist()
    if build is not spread_identity:
        redundancy = buf.bit_count + table.r + 1 - entropy_bits(table.freq)
        assert redundancy <= table.support * math.log2(math.e) + table.r + 1 + 1e-9


def test_approximate_frequencies_round_trip():
    rng = np.random.default_rng(5)
    table = make_table([100, 28], 7)
    seq = rng.integers(0, 2, size=1000)
    codec = TansCodec(table, spread_precise(table))
    assert codec.decode(*codec.encode(seq), 1000) == seq.tolist()


def test_decode_detects_truncation():
    seq, table = _random_case(9, 8, 8)
    codec = TansCodec(table, spread_precise(table))
    state, buf = codec.encode(seq)
    nb = buf.bit_count - 16
    low = int.from_bytes(buf.to_bytes(), "little") & ((1 << nb) - 1)
    short = LifoBitBuffer.from_bytes(low.to_bytes((nb + 7) // 8, "little"), nb)
    with pytest.raises(DecodeError):
        codec.decode(state, short, len(seq))
    with pytest.raises(DecodeError):
        codec.decode(2 * table.n, buf, len(seq))
    short.rewind()
    with pytest.raises(DecodeError):
        tans_decode(state, short, len(seq), table, codec.decode_table,
                    use_kernel=False)


def test_decode_spans_several_blocks(monkeypatch):
    import ansbounds.tans as tans_mod
    monkeypatch.setattr(tans_mod, "DECODE_BLOCK", 7)
    seq, table = _random_case(4, 12, 6)
    codec = TansCodec(table, spread_simplified(table))
    assert codec.decode(*codec.encode(seq), len(seq)) == seq.tolist()
    assert codec.decode(table.n, LifoBitBuffer(), 0) == []


def test_huge_claimed_length_fails_fast():
    seq, table = _random_case(4, 12, 6)
    codec = TansCodec(table, spread_precise(table))
    state, buf = codec.encode(seq)
    with pytest.raises(DecodeError):
        codec.decode(state, buf, 1 << 40)
