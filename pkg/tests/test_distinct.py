import random

import pytest
from hypothesis import given, strategies as st

from brcodes.distinct import DistinctError, d_decode, d_encode


def test_all_zero_trace():
    assert d_encode("0" * 17, 3, 6) == ["000000", "000001", "001000"]
    assert d_decode(["000000", "000001", "001000"]) == "0" * 17


def test_distinct_input_untouched():
    u = "000001" + "000010" + "00011"
    assert d_encode(u, 3, 6) == ["000001", "000010", "000111"]
    assert d_decode(["000001", "000010", "000111"]) == u


def test_last_entry_ending_in_one_skips_replay():
    blocks = ["110000", "101010", "011111"]
    assert d_decode(blocks) == "".join(blocks)[:-1]


def test_parameter_checks():
    with pytest.raises(DistinctError):
        d_encode("0" * 14, 3, 5)
    with pytest.raises(DistinctError):
        d_encode("0" * 16, 3, 6)
    with pytest.raises(DistinctError):
        d_decode(["000000"])


def test_malformed_replacement_rejected():
    # slot 1 is occupied by the first block, so this replacement cannot be valid
    with pytest.raises(DistinctError):
        d_decode(["001000", "000001", "001000"])
    with pytest.raises(DistinctError):
        d_decode(["000000", "000001", "011110"])


def _structured(rng, l, m, alphabet_size):
    pool = [format(rng.getrandbits(m), f"0{m}b") for _ in range(alphabet_size)]
    w = "".join(rng.choice(pool) for _ in range(l))
    return w[:-1]


@pytest.mark.parametrize("l,m", [(3, 6), (8, 8), (16, 10), (5, 8), (32, 12)])
def test_random_and_repetitive_inputs(l, m):
    rng = random.Random(l * 1000 + m)
    for trial in range(400):
        if trial % 2:
            u = format(rng.getrandbits(l * m - 1), f"0{l * m - 1}b")
        else:
            u = _structured(rng, l, m, rng.randint(1, 3))
        out = d_encode(u, l, m)
        assert len(out) == l and len(set(out)) == l
        assert all(len(s) == m for s in out)
        assert d_decode(out) == u


@given(st.integers(0, 5), st.data())
def test_marker_prefix_preserved(alpha, data):
    l, m = 8, 8
    alpha = min(alpha, l - 2)
    rest = data.draw(st.text("01", min_size=(l - alpha) * m - 1, max_size=(l - alpha) * m - 1))
    markers = [format(i, f"0{m}b") for i in range(alpha)]
    out = d_encode("".join(markers) + rest, l, m)
    assert out[:alpha] == markers


def test_all_equal_blocks_every_small_case():
    for l, m in [(3, 6), (4, 6), (8, 8), (16, 10)]:
        for pattern in ("0" * m, "1" * m, "10" * (m // 2)):
            u = (pattern * l)[:-1]
            out = d_encode(u, l, m)
            assert len(set(out)) == l
            assert d_decode(out) == u
