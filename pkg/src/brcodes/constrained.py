"""Run-length-limited payload coding and mutually uncorrelated framing.

The RLL maps are enumerative: a payload of ``in_len`` bits is read as a rank
and unranked into the lexicographically rank-th string of length ``out_len``
that starts with ``1`` (optionally) and has no zero-run longer than
``run_limit``.  An MU codeword is ``0^P 1`` followed by such a payload, where
``P = ceil(log2 m) + 1`` exceeds every zero-run a payload or redundancy
packet can contain, so ``0^P 1`` only ever appears where a codeword starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

CODER_VERSION = 1  # enumerative RLL, sync 0^P 1, leading-one payloads


class RllError(ValueError):
    pass


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("ceil_log2 needs a positive argument")
    return (x - 1).bit_length()


@lru_cache(maxsize=None)
def _completions(length: int, run_limit: int) -> tuple[tuple[int, ...], ...]:
    """table[r][z] = number of ways to append r more bits when the current
    trailing zero-run has length z, never exceeding ``run_limit``."""
    table = [tuple(1 for _ in range(run_limit + 1))]
    for _ in range(length):
        prev = table[-1]
        row = tuple(
            prev[0] + (prev[z + 1] if z < run_limit else 0) for z in range(run_limit + 1)
        )
        table.append(row)
    return tuple(table)


def rll_count(length: int, run_limit: int, leading_one: bool = True) -> int:
    """Exact number of binary strings of ``length`` with zero-runs of at most
    ``run_limit`` (and a leading 1 when ``leading_one``)."""
    if length < 1:
        raise ValueError("length must be positive")
    run_limit = min(run_limit, length)
    table = _completions(length, run_limit)
    if leading_one:
        return table[length - 1][0]
    # an empty prefix behaves like "just saw a 1"
    return table[length][0]


@dataclass(frozen=True)
class RllProfile:
    in_len: int
    out_len: int
    run_limit: int
    leading_one: bool = True

    def __post_init__(self):
        if self.in_len < 0 or self.out_len < 1 or self.run_limit < 0:
            raise RllError(f"invalid RLL profile {self}")
        have = rll_count(self.out_len, self.run_limit, self.leading_one)
        if have < 1 << self.in_len:
            raise RllError(
                f"RLL profile {self.in_len}->{self.out_len} with run limit {self.run_limit} "
                f"has only {have} valid words, needs {1 << self.in_len}"
            )

    @property
    def _table(self):
        return _completions(self.out_len, min(self.run_limit, self.out_len))

    def is_valid(self, word: str) -> bool:
        if len(word) != self.out_len or (self.leading_one and word[0] != "1"):
            return False
        return "0" * (self.run_limit + 1) not in word


def rll_encode(payload: str, profile: RllProfile) -> str:
    """Unrank ``payload`` (read as an integer) into a constrained word."""
    if len(payload) != profile.in_len:
        raise RllError(f"payload has {len(payload)} bits, profile expects {profile.in_len}")
    rank = int(payload, 2) if payload else 0
    table = profile._table
    limit = min(profile.run_limit, profile.out_len)
    out = []
    run = 0
    for pos in range(profile.out_len):
        remaining = profile.out_len - pos - 1
        if pos == 0 and profile.leading_one:
            out.append("1")
            continue
        zeros = table[remaining][run + 1] if run < limit else 0
        if rank < zeros:
            out.append("0")
            run += 1
        else:
            rank -= zeros
            out.append("1")
            run = 0
    return "".join(out)


def rll_decode(word: str, profile: RllProfile) -> Optional[str]:
    """Rank ``word``; ``None`` when it violates the constraint or its rank is
    outside the payload range (a garbled window)."""
    if not profile.is_valid(word):
        return None
    table = profile._table
    limit = min(profile.run_limit, profile.out_len)
    rank = 0
    run = 0
    for pos, bit in enumerate(word):
        remaining = profile.out_len - pos - 1
        if pos == 0 and profile.leading_one:
            continue
        if bit == "0":
            run += 1
        else:
            if run < limit:
                rank += table[remaining][run + 1]
            run = 0
    if rank >= 1 << profile.in_len:
        return None
    return format(rank, f"0{profile.in_len}b") if profile.in_len else ""


@dataclass(frozen=True)
class MuLayout:
    """Framing for m-bit strings: ``0^P 1`` then an (m -> m+2) RLL payload."""

    m: int
    sync_zeros: int = field(init=False)
    payload: RllProfile = field(init=False)

    def __post_init__(self):
        if self.m < 2:
            raise RllError("MU layout needs m >= 2")
        lg = ceil_log2(self.m)
        object.__setattr__(self, "sync_zeros", lg + 1)
        object.__setattr__(self, "payload", RllProfile(self.m, self.m + 2, lg))

    @property
    def total_len(self) -> int:
        return self.sync_zeros + 1 + self.payload.out_len

    @property
    def sync(self) -> str:
        return "0" * self.sync_zeros + "1"


def packet_profile(m: int) -> RllProfile:
    """Redundancy packets: four (m+1)-bit strings -> 4m+11 constrained bits."""
    return RllProfile(4 * m + 4, 4 * m + 11, ceil_log2(m))


def mu_encode(u: str, layout: MuLayout) -> str:
    if len(u) != layout.m:
        raise RllError(f"MU input must have {layout.m} bits")
    return layout.sync + rll_encode(u, layout.payload)


def mu_decode(word: str, layout: MuLayout) -> Optional[str]:
    if len(word) != layout.total_len or not word.startswith(layout.sync):
        return None
    return rll_decode(word[layout.sync_zeros + 1 :], layout.payload)


class MuHit(NamedTuple):
    offset: int
    u: str


def mu_scan(bits: str, layout: MuLayout) -> list[MuHit]:
    """Every complete MU codeword in ``bits`` as ``(offset, u)``.

    Each maximal zero-run of length >= P followed by a 1 anchors a candidate
    starting P bits before that 1; candidates that run past the end or whose
    payload does not decode are dropped.
    """
    p = layout.sync_zeros
    total = layout.total_len
    hits = []
    run = 0
    for pos, bit in enumerate(bits):
        if bit == "0":
            run += 1
            continue
        if run >= p:
            start = pos - p
            if start + total <= len(bits):
                u = rll_decode(bits[pos + 1 : start + total], layout.payload)
                if u is not None:
                    hits.append(MuHit(start, u))
        run = 0
    return hits
