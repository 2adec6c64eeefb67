import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from brcodes.channel import BreakPlan
from brcodes.codec import (
    DecodeError, Fragment, build_next, decode, decode_report, encode, encode_trace,
    next_to_dstrings, preprocess,
)
from brcodes.constrained import mu_scan
from brcodes.params import BrcParams, budget_ok
from conftest import random_bits
from harness import check_plan

P1 = BrcParams(1, 3, 6)
P2 = BrcParams(2, 5, 8)


def test_layout_of_small_codeword(rng):
    w = random_bits(rng, 11)
    cw = encode(w, P1)
    assert len(cw) == 74
    assert [o for o, _ in mu_scan(cw, P1.mu)] == [0, 48, 61]


def test_zero_word_starts_with_marker():
    cw = encode("0" * 11, P1)
    assert mu_scan(cw, P1.mu)[0] == (0, "000000")


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        encode("0" * 10, P1)


def test_whole_codeword_round_trip(rng):
    for p in (P1, P2, BrcParams(3, 8, 8)):
        for _ in range(50):
            w = random_bits(rng, p.k)
            assert decode([encode(w, p)], p) == w


def test_break_at_information_midpoint(rng):
    w = random_bits(rng, 11)
    cw = encode(w, P1)
    mid = (P1.redundancy_len + P1.n) // 2
    assert decode([cw[mid:], cw[:mid]], P1) == w


def test_encode_trace_pieces(rng):
    w = random_bits(rng, P2.k)
    tr = encode_trace(w, P2)
    assert tr.dstrings[:2] == ["00000000", "00000001"]
    assert len(tr.parity) == 8
    assert next_to_dstrings(tr.next_map, P2.l, P2.m) == tr.dstrings


@given(st.integers(0, 2**40))
def test_next_map_bijection(seed):
    r = random.Random(seed)
    l, m = 8, 8
    vals = r.sample(range(1, 256), l - 1)
    d = [format(0, "08b")] + [format(v, "08b") for v in vals]
    assert next_to_dstrings(build_next(d, m), l, m) == d


def test_chain_walk_failures():
    nxt = np.arange(64)
    with pytest.raises(DecodeError, match="stops"):
        next_to_dstrings(nxt, 3, 6)
    nxt[0], nxt[1] = 1, 0
    with pytest.raises(DecodeError, match="revisits"):
        next_to_dstrings(nxt, 3, 6)
    nxt = np.arange(64)
    nxt[0], nxt[1], nxt[2] = 1, 2, 3
    with pytest.raises(DecodeError, match="continues"):
        next_to_dstrings(nxt, 3, 6)


def test_preprocess_examples(rng):
    cw = encode(random_bits(rng, 11), P1)
    assert preprocess([cw[0:50], cw[40:74]], P1) == sorted([cw[0:50], cw[40:74]])
    assert preprocess([cw[0:61], cw[45:74]], P1) == [cw]
    assert preprocess([cw[5:30]], P1) == [cw[5:30]]


def test_preprocess_refuses_conflicting_overlap(rng):
    cw = encode(random_bits(rng, 11), P1)
    a = cw[0:66]
    # flip a bit inside the overlap but outside the shared MU codeword at 48
    b = cw[45:46] + ("0" if cw[46] == "1" else "1") + cw[47:74]
    assert sorted(preprocess([a, b], P1)) == sorted([a, b])


def test_preprocess_is_order_independent(rng):
    cw = encode(random_bits(rng, P2.k), P2)
    pieces = [cw[0:75], cw[55:135], cw[110:161], cw[3:20]]
    ref = preprocess(pieces, P2)
    for _ in range(10):
        rng.shuffle(pieces)
        assert preprocess(pieces, P2) == ref
    assert ref == sorted([cw, cw[3:20]])


def test_short_fragments_ignored(rng):
    w = random_bits(rng, 11)
    cw = encode(w, P1)
    assert decode([cw, "0101", "1"], P1) == w


def test_empty_input_fails_cleanly():
    rep = decode_report([], P1)
    assert not rep.ok and rep.stage == "no MU codewords"
    with pytest.raises(DecodeError) as exc:
        decode([], P1)
    assert exc.value.stage == "no MU codewords"


def test_fragment_objects_and_strings_equivalent(rng):
    w = random_bits(rng, 11)
    cw = encode(w, P1)
    assert decode([Fragment(cw[:30], 0, 30), cw[30:]], P1) == w


@pytest.mark.parametrize("params", [P1, P2], ids=["a1", "a2"])
def test_every_single_cut(params, rng):
    for _ in range(3):
        w = random_bits(rng, params.k)
        tr = encode_trace(w, params)
        for c in range(1, params.n):
            ok, rep, out = check_plan(params, w, BreakPlan([c]), tr)
            assert out.t == 1 and out.s == 0
            assert ok, (c, rep.stage, rep.message)


@pytest.mark.parametrize("params", [P1, P2], ids=["a1", "a2"])
def test_single_cut_with_hidden_side(params, rng):
    w = random_bits(rng, params.k)
    tr = encode_trace(w, params)
    for c in range(1, params.n):
        for side in (0, 1):
            plan = BreakPlan([c], hidden=[side])
            s = c if side == 0 else params.n - c
            if not budget_ok(params, 1, s):
                continue
            ok, rep, out = check_plan(params, w, plan, tr)
            assert (out.t, out.s) == (1, s)
            assert ok, (c, side, rep.stage, rep.message)


def test_cut_pairs_alpha2(rng):
    w = random_bits(rng, P2.k)
    tr = encode_trace(w, P2)
    n = P2.n
    for a in range(1, n - 1, 2):
        for b in range(a + 1, n, 3):
            ok, rep, out = check_plan(P2, w, BreakPlan([a, b]), tr)
            assert out.t == 2
            assert ok, (a, b, rep.stage, rep.message)


def test_two_cuts_hidden_middle_alpha2(rng):
    w = random_bits(rng, P2.k)
    tr = encode_trace(w, P2)
    for a in range(1, P2.n - 1):
        for gap in (1, 2, 7, 15):
            b = a + gap
            if b >= P2.n:
                continue
            plan = BreakPlan([a, b], hidden=[1])
            ok, rep, out = check_plan(P2, w, plan, tr)
            assert (out.t, out.s) == (2, gap)
            if budget_ok(P2, out.t, out.s):
                assert ok, (a, b, rep.stage, rep.message)


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(0, 3))
def test_redundancy_region_losses(seed, which):
    # cuts that land inside markers and packets are the hard cases
    r = random.Random(seed)
    p = BrcParams(3, 8, 8)
    w = random_bits(r, p.k)
    start = p.packet_offsets()[min(which, 2)] - p.mu_len
    cuts = sorted({start + r.randrange(p.mu_len + p.packet_len) for _ in range(r.randint(1, 3))})
    cuts = [c for c in cuts if 0 < c < p.n]
    ok, rep, out = check_plan(p, w, BreakPlan(cuts), encode_trace(w, p))
    if budget_ok(p, out.t, out.s):
        assert ok


def test_over_budget_does_not_crash(rng):
    w = random_bits(rng, 11)
    cw = encode(w, P1)
    bounds = [0, 13, 48, 61, 74]
    pieces = [cw[bounds[i]:bounds[i + 1]] for i in range(4)]
    rep = decode_report(pieces[:1] + pieces[2:3], P1)
    assert rep.word is None or len(rep.word) == P1.k
