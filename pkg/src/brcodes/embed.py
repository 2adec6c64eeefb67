"""Bits as layer thicknesses.

Normal mode: 0 -> (x, 2x), 1 -> (3x).  Stealthy mode: 0 -> (y-e, y+e),
1 -> (y, y).  Reading the object upside down reverses the layers; the
asymmetric 0 pattern tells the parser which way round it is.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

import numpy as np


@dataclass(frozen=True)
class EmbedParams:
    mode: str = "normal"
    x: float = 0.08
    y: float = 0.12
    eps: float = 0.02

    def __post_init__(self):
        if self.mode not in ("normal", "stealthy"):
            raise ValueError(f"mode must be 'normal' or 'stealthy', got {self.mode!r}")
        if self.mode == "normal" and self.x <= 0:
            raise ValueError("x must be positive")
        if self.mode == "stealthy" and not 0 < self.eps < self.y:
            raise ValueError("stealthy mode needs 0 < eps < y")

    @property
    def pitch(self) -> float:
        """Height consumed per bit, mm."""
        return 3 * self.x if self.mode == "normal" else 2 * self.y


class ParseFailure(NamedTuple):
    """Returned by parse_bits when the layers cannot be read."""

    layer: int
    reason: str

    def __bool__(self):
        return False


def embed_bits(bits: str, params: EmbedParams) -> list[float]:
    if set(bits) - {"0", "1"}:
        raise ValueError("bits must be a 0/1 string")
    if params.mode == "normal":
        zero, one = (params.x, 2 * params.x), (3 * params.x,)
    else:
        y, e = params.y, params.eps
        zero, one = (round(y - e, 9), round(y + e, 9)), (y, y)
    out: list[float] = []
    for b in bits:
        out.extend(one if b == "1" else zero)
    return out


def apply_imperfection(seq: Sequence[float], delta: float, seed: int = 0) -> list[float]:
    """Scale each layer by an independent uniform factor in [1-delta, 1+delta]."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0:
        return list(seq)
    rng = np.random.default_rng(seed)
    factors = rng.uniform(1 - delta, 1 + delta, size=len(seq))
    return (np.asarray(seq, dtype=float) * factors).tolist()


def interval_disjoint(delta) -> bool:
    """Exact check that the noisy ranges of x, 2x and 3x never meet."""
    d = Fraction(str(delta))
    if d < 0:
        raise ValueError("delta must be non-negative")
    return (1 + d) * 1 < (1 - d) * 2 and (1 + d) * 2 < (1 - d) * 3


def _classify(seq: Sequence[float], x: float) -> list[int]:
    # nearest of x, 2x, 3x by relative distance; the cut points 4x/3 and
    # 12x/5 sit exactly where the noisy ranges meet at the tolerance limit
    out = []
    for v in seq:
        r = v / x
        out.append(1 if r < Fraction(4, 3) else 2 if r < Fraction(12, 5) else 3)
    return out


def _parse_normal(units: list[int]) -> Union[str, ParseFailure]:
    bits = []
    i = 0
    while i < len(units):
        u = units[i]
        if u == 3:
            bits.append("1")
            i += 1
        elif u == 1 and i + 1 < len(units) and units[i + 1] == 2:
            bits.append("0")
            i += 2
        else:
            return ParseFailure(i, f"unexpected {u}x layer")
    return "".join(bits)


def _parse_stealthy(seq: Sequence[float], params: EmbedParams) -> Union[str, ParseFailure]:
    if len(seq) % 2:
        return ParseFailure(len(seq) - 1, "odd number of layers")
    thr = params.eps / 2
    bits = []
    direction = 0
    for i in range(0, len(seq), 2):
        half = (seq[i + 1] - seq[i]) / 2
        if abs(half) < thr:
            bits.append("1")
            continue
        sign = 1 if half > 0 else -1
        if direction and sign != direction:
            return ParseFailure(i, "zero pairs point both ways")
        direction = sign
        bits.append("0")
    out = "".join(bits)
    return out[::-1] if direction < 0 else out


def parse_bits(seq: Sequence[float], params: EmbedParams) -> Union[str, ParseFailure]:
    """Bits in embedding order, whichever way up ``seq`` was read."""
    if any(v <= 0 for v in seq):
        bad = next(i for i, v in enumerate(seq) if v <= 0)
        return ParseFailure(bad, "non-positive thickness")
    if params.mode == "stealthy":
        return _parse_stealthy(seq, params)
    units = _classify(seq, params.x)
    fwd = _parse_normal(units)
    if not isinstance(fwd, ParseFailure):
        return fwd
    # read upside down: the reversed layers are in embedding order
    back = _parse_normal(units[::-1])
    if not isinstance(back, ParseFailure):
        return back
    return fwd


# -- CSV in integer micrometres ---------------------------------------------

def layers_to_csv(seq: Sequence[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["thickness_um"])
    for v in seq:
        w.writerow([int(round(v * 1000))])
    return buf.getvalue()


def layers_from_csv(text: str) -> list[float]:
    rows = list(csv.reader(io.StringIO(text)))
    if rows and rows[0] and not rows[0][0].strip().lstrip("-").isdigit():
        rows = rows[1:]
    return [int(r[0]) / 1000 for r in rows if r]
