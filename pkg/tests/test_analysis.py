import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ansbounds.analysis import (CSV_HEADER, SHAPES, SweepGrid, make_codec, measure,
                                random_frequencies, random_instance, sweep,
                                theorem1_bound, theorem3_bound, theorem4_bound,
                                write_csv)
from ansbounds.errors import ContractError
from ansbounds.model import make_table, normalize


def test_bound_formulas():
    assert theorem1_bound(4, 4) == pytest.approx(4 / math.log(2) + 5)
    assert theorem3_bound(6, 4) == 3.25
    assert theorem4_bound(16, 4, 0) == math.inf
    assert theorem4_bound(16, 4, 1) == pytest.approx(16 / math.log(2) + 4 + 2)
    assert theorem4_bound(16, 4, 1, strict=True) == pytest.approx(16 / math.log(2) + 4)


def test_make_codec_rejects():
    table = make_table([3, 5, 6, 2], 4)
    with pytest.raises(ContractError):
        make_codec("huffman", table)
    with pytest.raises(ContractError):
        make_codec("tans-precise", table, k=2)


def test_measure_exact_picks_exact_bound():
    seq = [0] * 3 + [1] * 5 + [2] * 6 + [3] * 2
    rep = measure("tans-simplified", seq, make_table([3, 5, 6, 2], 4))
    assert rep.bound_kind == "thm1"
    assert rep.round_trip_ok and rep.bound_satisfied
    assert rep.encoded_bits == rep.payload_bits + 5
    assert rep.model_bits == pytest.approx(rep.entropy_bits)


def test_measure_approximate_picks_approximate_bound():
    rng = np.random.default_rng(0)
    seq = rng.choice(3, size=700, p=[0.6, 0.3, 0.1])
    table = normalize(np.bincount(seq, minlength=3), 5)
    for codec in ("tans-simplified", "tans-precise"):
        rep = measure(codec, seq, table)
        assert rep.bound_kind == "thm2"
        assert rep.bound_satisfied
        assert rep.model_bits >= rep.entropy_bits


def test_measure_rans_picks_fixed_accuracy_bound():
    seq, table = random_instance(np.random.default_rng(1), 20, 8)
    assert measure("rans", seq, table, k=3).bound_kind == "thm4"
    assert measure("rans", seq, table, k=0).bound_kind == "none"
    assert measure("tans-identity", seq, table).bound_kind == "none"


def test_measure_unknown_bound():
    seq, table = random_instance(np.random.default_rng(1), 4, 4)
    with pytest.raises(ContractError):
        measure("tans-precise", seq, table, bound="thm9")


def test_sigma_counts_only_present_letters():
    table = make_table([8, 4, 4], 4)
    rep = measure("tans-precise", [0] * 16, table)
    assert rep.sigma == 1 and rep.entropy_bits == 0


@given(st.integers(1, 12), st.data())
def test_random_frequencies(r, data):
    sigma = data.draw(st.integers(1, min(256, 1 << r)))
    shape = data.draw(st.sampled_from(SHAPES))
    seed = data.draw(st.integers(0, 2**32 - 1))
    freq = random_frequencies(np.random.default_rng(seed), sigma, r, shape)
    assert len(freq) == sigma and sum(freq) == 1 << r and min(freq) >= 1


def test_random_frequencies_errors():
    rng = np.random.default_rng(0)
    with pytest.raises(ContractError):
        random_frequencies(rng, 5, 2)
    with pytest.raises(ContractError):
        random_frequencies(rng, 2, 4, "pareto")


def test_sweep_is_deterministic():
    grid = SweepGrid(sigmas=(2, 16), rs=(6,), shapes=("zipf", "flat"),
                     codecs=("tans-precise", "rans"), ks=(0, 2), reps=2, seed=3)
    a = write_csv(sweep(grid))
    assert a == write_csv(sweep(grid))
    rows = list(csv.reader(io.StringIO(a)))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + 2 * 2 * 2 * (1 + 2)
    assert all(row[-1] == "1" for row in rows[1:])


def test_sweep_skips_oversized_alphabet():
    grid = SweepGrid(sigmas=(300,), rs=(8,), codecs=("tans-precise",))
    assert sweep(grid) == []
    sink = io.StringIO()
    assert write_csv([], sink) == ",".join(CSV_HEADER) + "\n"
    assert sink.getvalue() == ",".join(CSV_HEADER) + "\n"
