"""alpha-BRC encoder, fragment preprocessing and decoder.

Codeword layout::

    MU(u_0) RLL(d_0) ... MU(u_{a-1}) RLL(d_{a-1}) MU(u_a) ... MU(u_{l-1})

``u_0..u_{a-1}`` are the markers ``binary(i, m)``; the ordering of the
distinct strings is stored as the map ``next`` and protected by
``4*alpha`` Reed-Solomon parity symbols carried in the packets ``d_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .constrained import MuHit, mu_encode, mu_scan, rll_decode, rll_encode
from .distinct import DistinctError, d_decode, d_encode
from .params import BrcParams
from .rs import ReedSolomonError


@dataclass(frozen=True)
class Fragment:
    """A run of bits read from one physical piece.

    ``start``/``end`` record where the piece came from in the codeword; they
    exist for simulation bookkeeping and are never read by the decoder.
    """

    bits: str
    start: Optional[int] = None
    end: Optional[int] = None


FragmentLike = Union[Fragment, str]


def _bits_of(frag: FragmentLike) -> str:
    return frag.bits if isinstance(frag, Fragment) else frag


# -- next map ---------------------------------------------------------------

def build_next(dstrings: Sequence[str], m: int) -> np.ndarray:
    """Dense next map over all 2^m keys; unused keys map to themselves."""
    nxt = np.arange(1 << m, dtype=np.int64)
    vals = [int(s, 2) for s in dstrings]
    for a, b in zip(vals, vals[1:]):
        nxt[a] = b
    return nxt


def next_to_dstrings(nxt: np.ndarray, l: int, m: int, head: int = 0) -> list[str]:
    """Walk the chain from ``head`` for exactly l strings."""
    chain = [head]
    seen = {head}
    cur = head
    for _ in range(l - 1):
        nx = int(nxt[cur])
        if nx == cur:
            raise DecodeError("chain", f"chain stops after {len(chain)} of {l} strings")
        if nx in seen:
            raise DecodeError("chain", "chain revisits a string")
        chain.append(nx)
        seen.add(nx)
        cur = nx
    if int(nxt[cur]) != cur:
        raise DecodeError("chain", f"chain continues past {l} strings")
    moved = int(np.count_nonzero(nxt != np.arange(len(nxt))))
    if moved != l - 1:
        raise DecodeError("chain", f"{moved} keys leave the identity, expected {l - 1}")
    return [format(v, f"0{m}b") for v in chain]


# -- encoding ---------------------------------------------------------------

@dataclass(frozen=True)
class EncodeTrace:
    codeword: str
    dstrings: list[str]
    next_map: np.ndarray = field(repr=False)
    parity: list[int] = field(repr=False)


def encode_trace(w: str, params: BrcParams) -> EncodeTrace:
    if len(w) != params.k or set(w) - {"0", "1"}:
        raise ValueError(f"information word must be {params.k} bits of 0/1, got {len(w)}")
    a, m = params.alpha, params.m
    u = "".join(params.marker(i) for i in range(a)) + w
    dstrings = d_encode(u, params.l, m)
    nxt = build_next(dstrings, m)
    parity = params.rs.encode(nxt << 1)
    rstr = [format(p, f"0{m + 1}b") for p in parity]
    parts = []
    for i in range(a):
        parts.append(mu_encode(dstrings[i], params.mu))
        parts.append(rll_encode("".join(rstr[4 * i : 4 * i + 4]), params.packet))
    parts.extend(mu_encode(s, params.mu) for s in dstrings[a:])
    cw = "".join(parts)
    assert len(cw) == params.n
    return EncodeTrace(cw, dstrings, nxt, parity)


def encode(w: str, params: BrcParams) -> str:
    """Encode a k-bit information word into an n-bit codeword."""
    return encode_trace(w, params).codeword


# -- preprocessing ----------------------------------------------------------

def _merge(a: str, oa: int, b: str, ob: int) -> Optional[str]:
    shift = oa - ob  # b[0] sits at a[shift]
    lo, hi = max(0, shift), min(len(a), shift + len(b))
    if a[lo:hi] != b[lo - shift : hi - shift]:
        return None
    left = b[: max(0, -shift)]
    right = b[len(a) - shift :] if shift + len(b) > len(a) else ""
    return left + a + right


def preprocess(fragments: Iterable[FragmentLike], params: BrcParams) -> list[str]:
    """Merge fragments that share a complete MU codeword, to a fixed point.

    Pairs whose aligned overlap disagrees anywhere are left alone.
    """
    frags = sorted(_bits_of(f) for f in fragments)
    refused: set[tuple[str, str]] = set()
    while True:
        seen: dict[str, tuple[int, int]] = {}
        merged = None
        for idx, bits in enumerate(frags):
            for hit in mu_scan(bits, params.mu):
                other = seen.get(hit.u)
                if other is None:
                    seen[hit.u] = (idx, hit.offset)
                    continue
                jdx, off = other
                if jdx == idx or (frags[jdx], bits) in refused:
                    continue
                union = _merge(frags[jdx], off, bits, hit.offset)
                if union is None:
                    refused.add((frags[jdx], bits))
                    continue
                merged = (jdx, idx, union)
                break
            if merged:
                break
        if not merged:
            return frags
        jdx, idx, union = merged
        frags = sorted([f for t, f in enumerate(frags) if t not in (jdx, idx)] + [union])


# -- decoding ---------------------------------------------------------------

class DecodeError(Exception):
    """Decoding failed at ``stage``; ``report`` carries the diagnostics."""

    def __init__(self, stage: str, message: str, report: "DecodeReport | None" = None):
        self.stage = stage
        self.detail = message
        self.report = report
        super().__init__(f"{stage}: {message}")


@dataclass
class DecodeReport:
    fragments_in: int = 0
    fragments_merged: int = 0
    mu_codewords: int = 0
    markers_found: int = 0
    packets_recovered: int = 0
    redundancy_erasures: int = 0
    links_observed: int = 0
    link_candidates: int = 0
    head_link: str = "unknown"  # certain | candidate | erased | unknown
    errors_corrected: int = 0
    info_erasures: int = 0
    stage: str = "ok"
    message: str = ""
    word: Optional[str] = None
    links: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return self.word is not None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "stage": self.stage,
            "message": self.message,
            "fingerprint": self.word,
            "fragments_in": self.fragments_in,
            "fragments_after_preprocess": self.fragments_merged,
            "mu_codewords": self.mu_codewords,
            "markers_found": self.markers_found,
            "packets_recovered": self.packets_recovered,
            "redundancy_erasures": self.redundancy_erasures,
            "links_observed": self.links_observed,
            "link_candidates": self.link_candidates,
            "head_link": self.head_link,
            "errors_corrected": self.errors_corrected,
            "info_erasures": self.info_erasures,
        }


@dataclass
class _Evidence:
    packets: dict = field(default_factory=dict)   # index -> packet bits, or None on conflict
    links: dict = field(default_factory=dict)     # key -> value, or None on conflict
    head: Optional[int] = None                    # certain successor of the last marker
    head_conflict: bool = False
    ambiguous: set = field(default_factory=set)   # first hits whose predecessor is unknown
    hits: int = 0
    markers: int = 0

    def put(self, store: dict, key, value):
        old = store.get(key, value)
        store[key] = value if old == value else None

    def set_head(self, value: int):
        if self.head is not None and self.head != value:
            self.head_conflict = True
        self.head = value


def _collect(frags: list[str], params: BrcParams) -> _Evidence:
    a, L, P = params.alpha, params.mu_len, params.packet_len
    ev = _Evidence()
    for bits in frags:
        hits: list[MuHit] = mu_scan(bits, params.mu)
        ev.hits += len(hits)
        prev = None
        for hit in hits:
            val = int(hit.u, 2)
            o = hit.offset
            if val < a:
                ev.markers += 1
                if o + L + P <= len(bits):
                    ev.put(ev.packets, val, bits[o + L : o + L + P])
                if val >= 1 and o >= P and (prev is None or prev.offset + L <= o - P):
                    ev.put(ev.packets, val - 1, bits[o - P : o])
            else:
                pval = int(prev.u, 2) if prev is not None else None
                if prev is not None and prev.offset + L == o and pval >= a:
                    ev.put(ev.links, pval, val)
                elif prev is not None and pval == a - 1 and prev.offset + L + P == o:
                    ev.set_head(val)
                elif o >= L and (prev is None or prev.offset + L != o):
                    # the unit before this one is fully inside the fragment and
                    # is not an MU codeword, so it is the last packet
                    ev.set_head(val)
                    if o >= P:
                        ev.put(ev.packets, a - 1, bits[o - P : o])
                elif prev is None:
                    ev.ambiguous.add(val)
            prev = hit
    return ev


def decode_report(fragments: Iterable[FragmentLike], params: BrcParams) -> DecodeReport:
    """Run the full decoder and return a report instead of raising."""
    fragments = list(fragments)
    rep = DecodeReport(fragments_in=len(fragments))
    try:
        rep.word = _decode(fragments, params, rep)
    except DecodeError as exc:
        rep.stage = exc.stage
        rep.message = exc.detail
    return rep


def decode(fragments: Iterable[FragmentLike], params: BrcParams) -> str:
    """Recover the k-bit information word from unordered fragments."""
    rep = decode_report(fragments, params)
    if rep.word is None:
        raise DecodeError(rep.stage, rep.message, rep)
    return rep.word


def _decode(fragments: list[FragmentLike], params: BrcParams, rep: DecodeReport) -> str:
    a, m, l = params.alpha, params.m, params.l
    frags = [b for b in preprocess(fragments, params) if len(b) >= params.mu_len]
    rep.fragments_merged = len(frags)
    ev = _collect(frags, params)
    rep.mu_codewords, rep.markers_found = ev.hits, ev.markers
    if ev.hits == 0:
        raise DecodeError("no MU codewords", "no complete MU codeword in any fragment")

    rs = params.rs
    size = 1 << m
    parity: list[Optional[int]] = [None] * params.parity_len
    for i, pkt in ev.packets.items():
        d = rll_decode(pkt, params.packet) if pkt is not None else None
        if d is None:
            continue
        rep.packets_recovered += 1
        for j in range(4):
            parity[4 * i + j] = int(d[j * (m + 1) : (j + 1) * (m + 1)], 2)
    rep.redundancy_erasures = sum(p is None for p in parity)

    approx = np.arange(size, dtype=np.int64)
    links = {k: v for k, v in ev.links.items() if v is not None}
    rep.links = dict(links)
    rep.links_observed = len(links)
    for key, val in links.items():
        approx[key] = val
    for i in range(a - 1):
        approx[i] = i + 1

    last_marker = a - 1
    if ev.head is not None and not ev.head_conflict:
        options: list[Optional[int]] = [ev.head]
        rep.head_link = "certain"
    else:
        targets = set(links.values())
        heads = sorted(h for h in ev.ambiguous if h not in targets and h not in links.values())
        options = [*heads, None]
        rep.link_candidates = len(heads)

    base = (approx << 1).tolist()
    best = None
    last_err: Optional[DecodeError] = None
    for opt in options:
        received: list[Optional[int]] = list(base)
        received[last_marker] = None if opt is None else opt << 1
        try:
            res = rs.decode_detail(received + parity)
            word = _finish(np.asarray(res.info, dtype=np.int64), params)
        except ReedSolomonError as exc:
            last_err = DecodeError("rs", str(exc))
            continue
        except DecodeError as exc:
            last_err = exc
            continue
        if best is None or res.n_errors < best[0]:
            best = (res.n_errors, word, opt)
        if rep.head_link == "certain":
            break
    if best is None:
        raise last_err or DecodeError("rs", "no decoding option succeeded")
    rep.errors_corrected = best[0]
    if rep.head_link != "certain":
        rep.head_link = "erased" if best[2] is None else "candidate"
        rep.info_erasures = int(best[2] is None)
    return best[1]


def _finish(info: np.ndarray, params: BrcParams) -> str:
    if np.any(info & 1):
        raise DecodeError("rs", "corrected symbol does not end in the 0 pad bit")
    nxt = info >> 1
    dstrings = next_to_dstrings(nxt, params.l, params.m)
    for i in range(params.alpha):
        if dstrings[i] != params.marker(i):
            raise DecodeError("chain", f"missing marker prefix at position {i}")
    try:
        u = d_decode(dstrings)
    except DistinctError as exc:
        raise DecodeError("d-decode", str(exc)) from exc
    head = "".join(params.marker(i) for i in range(params.alpha))
    if not u.startswith(head):
        raise DecodeError("d-decode", "decoded word lost its marker prefix")
    return u[len(head):]
