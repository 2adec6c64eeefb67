"""File formats.

Codeword container (all integers big-endian)::

    magic   4s  b"BRCW"
    version B   container format version (1)
    alpha   H
    l       H
    m       B
    coder   B   constrained-coder version the codeword was built with
    pad     H   zero bits appended to the fingerprint before encoding
    nbits   I   codeword length in bits
    payload     codeword bits packed MSB first, last byte zero-filled

Fragments are JSON: ``{"format": "brc-fragments", "version": 1, "alpha",
"l", "m", "pad", "fragments": [{"bits", "start"?, "end"?}, ...]}`` with
optional ``plan``, ``t`` and ``s`` keys written by the break command.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .codec import Fragment
from .constrained import CODER_VERSION
from .params import BrcParams

MAGIC = b"BRCW"
CONTAINER_VERSION = 1
_HEADER = struct.Struct(">4sBHHBBHI")


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class Container:
    params: BrcParams
    bits: str
    pad: int = 0


def bits_to_bytes(bits: str) -> bytes:
    if not bits:
        return b""
    arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    return np.packbits(arr).tobytes()


def bytes_to_bits(data: bytes, nbits: int) -> str:
    arr = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:nbits]
    return (arr + ord("0")).astype(np.uint8).tobytes().decode("ascii")


def pack_codeword(c: Container) -> bytes:
    p = c.params
    head = _HEADER.pack(MAGIC, CONTAINER_VERSION, p.alpha, p.l, p.m, CODER_VERSION, c.pad, len(c.bits))
    return head + bits_to_bytes(c.bits)


def unpack_codeword(data: bytes) -> Container:
    if len(data) < _HEADER.size:
        raise FormatError("file too short for a codeword header")
    magic, ver, alpha, l, m, coder, pad, nbits = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if ver != CONTAINER_VERSION:
        raise FormatError(f"unsupported container version {ver}")
    if coder != CODER_VERSION:
        raise FormatError(f"codeword built with constrained coder v{coder}, this build has v{CODER_VERSION}")
    body = data[_HEADER.size:]
    if len(body) != (nbits + 7) // 8:
        raise FormatError(f"payload has {len(body)} bytes, header promises {nbits} bits")
    params = BrcParams(alpha, l, m)
    if nbits != params.n:
        raise FormatError(f"payload length {nbits} does not match n={params.n}")
    return Container(params, bytes_to_bits(body, nbits), pad)


def fragments_to_json(params: BrcParams, frags: list[Fragment], pad: int = 0,
                      extra: Optional[dict] = None) -> str:
    doc = {
        "format": "brc-fragments",
        "version": 1,
        "alpha": params.alpha,
        "l": params.l,
        "m": params.m,
        "pad": pad,
        "fragments": [
            {"bits": f.bits, **({"start": f.start, "end": f.end} if f.start is not None else {})}
            for f in frags
        ],
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def fragments_from_json(text: str) -> tuple[BrcParams, list[Fragment], int]:
    try:
        doc = json.loads(text)
        params = BrcParams(int(doc["alpha"]), int(doc["l"]), int(doc["m"]))
        frags = []
        for item in doc["fragments"]:
            bits = item["bits"] if isinstance(item, dict) else item
            if set(bits) - {"0", "1"}:
                raise FormatError("fragment bits must be 0/1")
            start = item.get("start") if isinstance(item, dict) else None
            end = item.get("end") if isinstance(item, dict) else None
            frags.append(Fragment(bits, start, end))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise FormatError(f"malformed fragments file: {exc}") from exc
    return params, frags, int(doc.get("pad", 0))
