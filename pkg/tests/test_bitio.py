import random

import pytest
from hypothesis import given, strategies as st

from ansbounds.bitio import LifoBitBuffer
from ansbounds.errors import ContractError, DecodeError


def test_single_group_round_trip():
    buf = LifoBitBuffer()
    buf.write_bits(5, 3)
    assert buf.read_bits(3) == 5


def test_zero_width_write_is_noop():
    buf = LifoBitBuffer()
    buf.write_bits(0, 0)
    assert buf.bit_count == 0
    assert buf.to_bytes() == b""


def test_reads_come_back_in_reverse():
    buf = LifoBitBuffer()
    buf.write_bits(1, 1)
    buf.write_bits(2, 2)
    assert buf.read_bits(2) == 2
    assert buf.read_bits(1) == 1
    assert buf.remaining == 0


def test_lsb_first_packing():
    buf = LifoBitBuffer()
    buf.write_bits(0b101, 3)
    assert buf.to_bytes() == b"\x05"
    assert buf.bit_count == 3
    assert LifoBitBuffer().to_bytes() == b""


def test_value_out_of_range():
    buf = LifoBitBuffer()
    with pytest.raises(ContractError):
        buf.write_bits(4, 2)
    with pytest.raises(ContractError):
        buf.write_bits(1, 0)
    with pytest.raises(ContractError):
        buf.write_bits(0, 65)


def test_underflow():
    buf = LifoBitBuffer()
    buf.write_bits(3, 2)
    with pytest.raises(DecodeError):
        buf.read_bits(3)


def test_full_width_groups():
    buf = LifoBitBuffer()
    vals = [(1 << 64) - 1, 0, 0x0123456789ABCDEF]
    for v in vals:
        buf.write_bits(v, 64)
    buf.write_bits(1, 1)
    assert buf.read_bits(1) == 1
    assert [buf.read_bits(64) for _ in vals] == vals[::-1]


@pytest.mark.parametrize("bits,data", [(8, b"\x00\x00"), (0, b"\x00"), (9, b"\x00")])
def test_from_bytes_length_mismatch(bits, data):
    with pytest.raises(ContractError):
        LifoBitBuffer.from_bytes(data, bits)


def test_from_bytes_rejects_dirty_padding():
    with pytest.raises(ContractError):
        LifoBitBuffer.from_bytes(b"\xff", 3)


groups = st.lists(
    st.integers(0, 64).flatmap(
        lambda w: st.tuples(st.integers(0, (1 << w) - 1), st.just(w))),
    max_size=60)


@given(groups)
def test_round_trip_property(pairs):
    buf = LifoBitBuffer()
    for v, w in pairs:
        buf.write_bits(v, w)
    assert buf.bit_count == sum(w for _, w in pairs)
    clone = LifoBitBuffer.from_bytes(buf.to_bytes(), buf.bit_count)
    assert clone == buf
    assert [clone.read_bits(w) for _, w in reversed(pairs)] == [v for v, _ in reversed(pairs)]


def test_round_trip_many_random_lists():
    rng = random.Random(1234)
    for _ in range(10_000):
        pairs = []
        for _ in range(rng.randrange(0, 12)):
            w = rng.randrange(0, 65)
            pairs.append((rng.getrandbits(w) if w else 0, w))
        buf = LifoBitBuffer()
        for v, w in pairs:
            buf.write_bits(v, w)
        buf = LifoBitBuffer.from_bytes(buf.to_bytes(), buf.bit_count)
        for v, w in reversed(pairs):
            assert buf.read_bits(w) == v
        assert buf.remaining == 0
