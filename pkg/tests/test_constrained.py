from itertools import product

import pytest
from hypothesis import given, strategies as st

from brcodes.constrained import (
    MuLayout, RllError, RllProfile, ceil_log2, mu_decode, mu_encode, mu_scan, packet_profile,
    rll_count, rll_decode, rll_encode,
)


def valid_words(length, run_limit, leading_one=True):
    """Lexicographic enumeration oracle."""
    out = []
    for t in product("01", repeat=length):
        w = "".join(t)
        if leading_one and w[0] != "1":
            continue
        if "0" * (run_limit + 1) in w:
            continue
        out.append(w)
    return out


def test_count_examples():
    assert rll_count(8, 3) == 108
    assert rll_count(1, 1) == 1
    assert rll_count(7, 7, leading_one=False) == 128


@pytest.mark.parametrize("length,run", [(n, r) for n in range(1, 11) for r in range(0, 4)])
def test_count_matches_enumeration(length, run):
    assert rll_count(length, run) == len(valid_words(length, run))
    assert rll_count(length, run, leading_one=False) == len(valid_words(length, run, False))


def test_rank_examples():
    prof = RllProfile(6, 8, 3)
    assert rll_encode("000000", prof) == "10001000"
    assert rll_decode("10001000", prof) == "000000"
    assert rll_encode(format(63, "06b"), prof) == valid_words(8, 3)[63]
    assert rll_decode("01111111", prof) is None
    assert rll_decode("10000111", prof) is None


def test_infeasible_profile_rejected_at_construction():
    with pytest.raises(RllError):
        RllProfile(7, 8, 3)


@pytest.mark.parametrize("length,run,inp", [(8, 3, 6), (9, 2, 5), (10, 1, 5)])
def test_unrank_is_lexicographic(length, run, inp):
    prof = RllProfile(inp, length, run)
    words = valid_words(length, run)
    for rank in range(1 << inp):
        payload = format(rank, f"0{inp}b")
        assert rll_encode(payload, prof) == words[rank]
        assert rll_decode(words[rank], prof) == payload


def test_out_of_range_rank_is_invalid():
    prof = RllProfile(6, 8, 3)
    assert rll_decode(valid_words(8, 3)[64], prof) is None


@given(st.integers(0, (1 << 52) - 1))
def test_packet_round_trip_m12(v):
    prof = packet_profile(12)
    payload = format(v, "052b")
    word = rll_encode(payload, prof)
    assert len(word) == 59 and prof.is_valid(word)
    assert rll_decode(word, prof) == payload


@given(st.integers(0, 4095), st.integers(0, 4095))
def test_rank_order_preserved_m12(a, b):
    lay = MuLayout(12)
    wa, wb = (rll_encode(format(v, "012b"), lay.payload) for v in (a, b))
    assert (a < b) == (wa < wb)


def test_mu_layout_lengths():
    assert mu_encode("000000", MuLayout(6)) == "0000110001000"
    assert MuLayout(6).total_len == 13
    assert MuLayout(12).total_len == 20
    for m in range(2, 17):
        assert MuLayout(m).total_len == m + ceil_log2(m) + 4
        assert packet_profile(m).out_len == 4 * m + 11


def test_mu_round_trip_exhaustive_m6():
    lay = MuLayout(6)
    seen = set()
    for v in range(64):
        u = format(v, "06b")
        c = mu_encode(u, lay)
        assert mu_decode(c, lay) == u
        assert mu_scan(c, lay) == [(0, u)]
        seen.add(c)
    assert len(seen) == 64


def test_sync_only_at_codeword_starts_m6():
    lay = MuLayout(6)
    words = [mu_encode(format(v, "06b"), lay) for v in range(64)]
    for a in words:
        for b in words:
            joined = a + b
            # a 1 after at least P=4 zeros anchors a sync four bits earlier
            starts = [i - 4 for i in range(4, len(joined)) if joined[i] == "1"
                      and joined[i - 4:i] == "0000"]
            assert starts == [0, 13]
            assert [o for o, _ in mu_scan(joined, lay)] == [0, 13]


def test_scan_examples():
    lay = MuLayout(6)
    assert mu_scan("1" * 40, lay) == []
    a, b = mu_encode("101010", lay), mu_encode("000111", lay)
    assert mu_scan("1" + a + b + "10", lay) == [(1, "101010"), (14, "000111")]
    # truncated codeword at the end is not reported
    assert mu_scan(a + b[:-1], lay) == [(0, "101010")]


def test_scan_consistent_across_overlapping_slices():
    lay = MuLayout(8)
    bits = "".join(mu_encode(format(v, "08b"), lay) for v in (3, 200, 77, 15))
    left, right = bits[:50], bits[10:]
    hits_l = {u: o for o, u in mu_scan(left, lay)}
    hits_r = {u: o + 10 for o, u in mu_scan(right, lay)}
    for u in hits_l.keys() & hits_r.keys():
        assert hits_l[u] == hits_r[u]
    assert hits_l.keys() & hits_r.keys()
