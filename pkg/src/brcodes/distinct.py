"""Bijection between (l*m - 1)-bit strings and l pairwise-distinct m-bit blocks.

Encoding appends a 1, cuts the word into l blocks, and repeatedly removes
the later copy of any duplicate pair.  Each removal appends a replacement
block ``binary(j', b+1) + binary(i, b) + 0...0`` (``b = ceil(log2 l)``) that
records the pair: ``i`` is the surviving copy and ``j'`` is the j-th free
"slot", a slot s >= 1 being taken when some block starts with
``binary(s, b+1)``.  Replacement blocks end in 0 while the final original
block ends in the appended 1, which is how decoding knows when to stop.
"""

from __future__ import annotations

from .constrained import ceil_log2


class DistinctError(ValueError):
    pass


def _check_params(l: int, m: int) -> int:
    if l < 2:
        raise DistinctError(f"need at least two blocks, got l={l}")
    b = ceil_log2(l)
    # replacement blocks must end with at least one 0 bit
    if m < 2 * b + 2:
        raise DistinctError(f"m={m} too small for l={l}: need m >= {2 * b + 2}")
    return b


def _occupied(blocks: list[str], b: int) -> set[int]:
    return {int(s[: b + 1], 2) for s in blocks}


def d_encode(u: str, l: int, m: int) -> list[str]:
    b = _check_params(l, m)
    if len(u) != l * m - 1:
        raise DistinctError(f"input has {len(u)} bits, expected {l * m - 1}")
    w = u + "1"
    blocks = [w[a * m : (a + 1) * m] for a in range(l)]
    i, i_end = 0, l - 1
    while i < i_end:
        j = i + 1
        while j <= i_end:
            if blocks[i] != blocks[j]:
                j += 1
                continue
            del blocks[j]
            taken = _occupied(blocks, b)
            slot, free = 0, 0
            while free < j:
                slot += 1
                if slot not in taken:
                    free += 1
            new = format(slot, f"0{b + 1}b") + format(i, f"0{b}b") + "0" * (m - 2 * b - 1)
            assert new not in blocks, "replacement collides with an existing block"
            blocks.append(new)
            i_end -= 1
        i += 1
    return blocks


def d_decode(blocks: list[str]) -> str:
    l = len(blocks)
    if l < 2:
        raise DistinctError("need at least two blocks")
    m = len(blocks[0])
    if any(len(s) != m for s in blocks):
        raise DistinctError("blocks have unequal lengths")
    b = _check_params(l, m)
    blocks = list(blocks)
    # each replacement undone shrinks nothing, so bound the loop by l
    for _ in range(l):
        if blocks[-1][-1] != "0":
            break
        last = blocks.pop()
        slot = int(last[: b + 1], 2)
        i = int(last[b + 1 : 2 * b + 1], 2)
        taken = _occupied(blocks, b)
        j = slot - sum(1 for s in range(1, slot) if s in taken)
        if not (0 <= i < len(blocks) and i < j <= len(blocks)) or slot in taken:
            raise DistinctError(f"malformed replacement block {last!r}")
        blocks.insert(j, blocks[i])
    else:
        raise DistinctError("no original blocks left")
    return "".join(blocks)[:-1]
