"""Breakage channel: cut a codeword, drop some pieces, shuffle the rest.

Losses are scored by what the decoder actually faces.  Survivors are
grouped when they overlap on a complete MU codeword (the decoder merges
those); then every boundary of a group that is not the codeword edge costs
one break, a gap between groups costs two, and ``s`` counts the bits no
survivor covers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .codec import Fragment
from .params import BrcParams, budget_ok


@dataclass
class BreakPlan:
    """Cut positions (bit offsets strictly inside the codeword), indices of
    pieces to hide, and extensions that make neighbouring pieces overlap:
    one integer for every side of every piece, or per-piece ``(left, right)``
    pairs."""

    cuts: list[int]
    hidden: list[int] = field(default_factory=list)
    overlap: Union[int, list[tuple[int, int]]] = 0
    seed: Optional[int] = None

    def extensions(self, count: int) -> list[tuple[int, int]]:
        if isinstance(self.overlap, int):
            if self.overlap < 0:
                raise ValueError("overlap must be non-negative")
            return [(self.overlap, self.overlap)] * count
        ext = [tuple(o) for o in self.overlap] + [(0, 0)] * max(0, count - len(self.overlap))
        if any(a < 0 or b < 0 for a, b in ext):
            raise ValueError("overlap must be non-negative")
        return ext[:count]

    def pieces(self, n: int) -> list[tuple[int, int]]:
        cuts = sorted(set(self.cuts))
        if any(not 0 < c < n for c in cuts):
            raise ValueError(f"cuts must lie strictly inside 0..{n}")
        bounds = [0, *cuts, n]
        ext = self.extensions(len(bounds) - 1)
        return [
            (max(0, bounds[i] - ext[i][0]), min(n, bounds[i + 1] + ext[i][1]))
            for i in range(len(bounds) - 1)
        ]

    def to_json(self) -> str:
        return json.dumps(
            {"cuts": sorted(self.cuts), "hidden": sorted(self.hidden),
             "overlap": self.overlap if isinstance(self.overlap, int) else [list(o) for o in self.overlap],
             "seed": self.seed},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "BreakPlan":
        d = json.loads(text)
        return cls(
            cuts=[int(c) for c in d["cuts"]],
            hidden=[int(h) for h in d.get("hidden", [])],
            overlap=ov if isinstance(ov := d.get("overlap", 0), int) else [(int(a), int(b)) for a, b in ov],
            seed=d.get("seed"),
        )


@dataclass
class ChannelOutput:
    fragments: list[Fragment]
    t: int
    s: int


def realized_losses(intervals: list[tuple[int, int]], params: BrcParams) -> tuple[int, int]:
    """(t, s) for surviving codeword intervals ``[start, end)``."""
    n = params.n
    ivs = sorted((lo, hi) for lo, hi in intervals if hi > lo)
    if not ivs:
        return 0, n
    L = params.mu_len
    mu_offs = params.mu_offsets()

    def shares_mu(a, b):
        lo, hi = max(a[0], b[0]), min(a[1], b[1])
        return any(lo <= o and o + L <= hi for o in mu_offs)

    groups: list[list[tuple[int, int]]] = []
    for iv in ivs:
        target = None
        for g in groups:
            if any(shares_mu(iv, other) for other in g):
                target = g
                break
        if target is None:
            groups.append([iv])
        else:
            target.append(iv)
    # a new interval can bridge two earlier groups
    changed = True
    while changed:
        changed = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if any(shares_mu(a, b) for a in groups[i] for b in groups[j]):
                    groups[i] += groups.pop(j)
                    changed = True
                    break
            if changed:
                break
    spans = sorted((min(a for a, _ in g), max(b for _, b in g)) for g in groups)

    covered = np.zeros(n, dtype=bool)
    for lo, hi in ivs:
        covered[lo:hi] = True
    s = int(n - covered.sum())

    t = int(spans[0][0] > 0) + int(max(hi for _, hi in spans) < n)
    reach = spans[0][1]
    for lo, hi in spans[1:]:
        t += 1 if lo <= reach else 2
        reach = max(reach, hi)
    return t, s


def apply_channel(codeword: str, plan: BreakPlan, params: BrcParams, rng=None) -> ChannelOutput:
    """Cut, hide and shuffle according to ``plan``."""
    pieces = plan.pieces(len(codeword))
    keep = [iv for i, iv in enumerate(pieces) if i not in set(plan.hidden)]
    t, s = realized_losses(keep, params)
    frags = [Fragment(codeword[lo:hi], lo, hi) for lo, hi in keep if hi > lo]
    rng = rng if rng is not None else np.random.default_rng(plan.seed)
    order = rng.permutation(len(frags))
    return ChannelOutput([frags[i] for i in order], t, s)


def random_adversary(params: BrcParams, t: int, s: int, seed: int = 0,
                     overlap_extension: int = 0) -> BreakPlan:
    """A random plan whose realized losses stay within ``(t, s)``.

    Places ``t`` distinct cuts, then hides pieces in random order as long as
    the realized losses stay inside the requested ones.
    """
    if not budget_ok(params, t, s):
        raise ValueError(f"(t={t}, s={s}) exceeds the correction budget")
    n = params.n
    rng = np.random.default_rng(seed)
    t_eff = min(t, n - 1)
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, n), size=t_eff, replace=False))
    overlap: list[tuple[int, int]] = []
    if overlap_extension > 0:
        overlap = [(int(rng.integers(0, overlap_extension + 1)), int(rng.integers(0, overlap_extension + 1)))
                   for _ in range(t_eff + 1)]
    plan = BreakPlan(cuts, [], overlap, seed)
    pieces = plan.pieces(n)
    base_t, _ = realized_losses(pieces, params)
    if base_t > t:
        # overlaps only ever lower t; without them t cuts give exactly t
        plan.overlap = []
        pieces = plan.pieces(n)
    for idx in rng.permutation(len(pieces)):
        trial = plan.hidden + [int(idx)]
        keep = [iv for i, iv in enumerate(pieces) if i not in trial]
        if not keep:
            continue
        tt, ss = realized_losses(keep, params)
        if tt <= t and ss <= s:
            plan.hidden = trial
    return plan


def greedy_adversary(params: BrcParams, t: int, s: int) -> BreakPlan:
    """Cut at the last bit of the redundancy packets, last packet first, so
    each break erases a whole packet; with ``s > 0`` the final break instead
    hides an s-bit suffix.  The budget keeps t <= alpha, so the packets
    always suffice."""
    if not budget_ok(params, t, s):
        raise ValueError(f"(t={t}, s={s}) exceeds the correction budget")
    n = params.n
    if t == 0:
        return BreakPlan([])
    ends = [o + params.packet_len - 1 for o in reversed(params.packet_offsets())]
    cuts = []
    for c in ends:
        if len(cuts) >= t - (1 if s > 0 else 0):
            break
        cuts.append(c)
    hidden = []
    if s > 0:
        cuts.append(n - s)
    cuts = sorted(set(cuts))
    if s > 0:
        hidden = [len(cuts)]
    return BreakPlan(cuts, hidden)
