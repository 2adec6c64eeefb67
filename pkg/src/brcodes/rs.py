"""Systematic, shortened, narrow-sense Reed-Solomon codes over GF(2^z).

Generator polynomial ``g(X) = prod_{j=1..p} (X - a^j)`` with ``a`` the
primitive element.  Codeword symbol ``c[i]`` is the coefficient of
``X^(N-1-i)``; the information symbols come first, parity last.

Decoding corrects ``x`` errors and ``y`` erasures whenever ``2x + y <= p``
(syndromes, erasure-initialised Berlekamp-Massey, Chien search, Forney).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .gf import Field, field_new


class ReedSolomonError(Exception):
    """Decoding failed: the received word is beyond the correction radius."""


@dataclass(frozen=True)
class DecodeResult:
    info: list[int]
    codeword: list[int]
    error_positions: tuple[int, ...]
    erasure_positions: tuple[int, ...]

    @property
    def n_errors(self) -> int:
        return len(self.error_positions)


def _poly_mul(f: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] ^= f.mul(ai, bj)
    return out


def _poly_eval(f: Field, poly: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = f.mul(acc, x) ^ c
    return acc


def generator_poly(f: Field, parity_len: int) -> list[int]:
    """Coefficients of g(X), lowest degree first; monic."""
    g = [1]
    for j in range(1, parity_len + 1):
        g = _poly_mul(f, g, [f.alpha_pow(j), 1])
    return g


@dataclass(frozen=True)
class RsCode:
    field: Field
    info_len: int
    parity_len: int

    def __post_init__(self):
        if self.parity_len < 1:
            raise ValueError("parity_len must be at least 1")
        if self.info_len < 1:
            raise ValueError("info_len must be at least 1")
        if self.length > self.field.generator_order:
            raise ValueError(
                f"RS length {self.length} exceeds 2^{self.field.degree} - 1; field too small"
            )

    @property
    def length(self) -> int:
        return self.info_len + self.parity_len

    # -- encoding ---------------------------------------------------------
    def encode(self, info: Sequence[int]) -> list[int]:
        """Parity symbols for ``info``."""
        info = np.asarray(info, dtype=np.int64)
        if info.shape != (self.info_len,):
            raise ValueError(f"expected {self.info_len} information symbols, got {info.shape[0]}")
        if info.size and (info.min() < 0 or info.max() >= self.field.order):
            raise ValueError("information symbol outside the field")
        rem = _remainder_matrix(self.field, self.info_len, self.parity_len)
        p = self.parity_len
        parity = [0] * p
        nz = info != 0
        if not nz.any():
            return parity
        vals = info[nz]
        for d in range(p):
            prod = self.field.mul_vec(vals, rem[nz, d])
            # coefficient of X^d sits at parity index p-1-d
            parity[p - 1 - d] = int(np.bitwise_xor.reduce(prod))
        return parity

    def codeword(self, info: Sequence[int]) -> list[int]:
        return list(info) + self.encode(info)

    # -- decoding ---------------------------------------------------------
    def syndromes(self, word: np.ndarray) -> list[int]:
        n = self.length
        powers = np.arange(n - 1, -1, -1, dtype=np.int64)
        nz = word != 0
        vals, pw = word[nz], powers[nz]
        out = []
        for j in range(1, self.parity_len + 1):
            terms = self.field.mul_alpha_pow_vec(vals, j * pw)
            out.append(int(np.bitwise_xor.reduce(terms)) if terms.size else 0)
        return out

    def decode_detail(
        self, received: Sequence[Optional[int]], erasures: Sequence[int] = ()
    ) -> DecodeResult:
        """Correct ``received``; ``None`` entries and ``erasures`` are erased."""
        f = self.field
        n, p = self.length, self.parity_len
        if len(received) != n:
            raise ValueError(f"received word has length {len(received)}, expected {n}")
        eras = sorted({*erasures, *(i for i, s in enumerate(received) if s is None)})
        if any(not 0 <= e < n for e in eras):
            raise ValueError("erasure position out of range")
        word = np.array([0 if s is None else s for s in received], dtype=np.int64)
        if eras:
            word[eras] = 0
        if len(eras) > p:
            raise ReedSolomonError(f"{len(eras)} erasures exceed {p} parity symbols")

        synd = self.syndromes(word)
        if not any(synd):
            return DecodeResult(word[: self.info_len].tolist(), word.tolist(), (), tuple(eras))

        # erasure locator Gamma(X) = prod (1 + X_k X), X_k = a^(n-1-pos)
        gamma = [1]
        for pos in eras:
            gamma = _poly_mul(f, gamma, [1, f.alpha_pow(n - 1 - pos)])
        y = len(eras)

        lam, b, big_l = list(gamma), list(gamma), y
        for r in range(y + 1, p + 1):
            delta = 0
            for j, lj in enumerate(lam):
                if lj and r - j >= 1:
                    delta ^= f.mul(lj, synd[r - j - 1])
            xb = [0] + b
            if delta == 0:
                b = xb
                continue
            t = [a ^ f.mul(delta, c) for a, c in _zip_pad(lam, xb)]
            if 2 * big_l <= r + y - 1:
                dinv = f.inv(delta)
                b = [f.mul(dinv, c) for c in lam]
                big_l = r + y - big_l
            else:
                b = xb
            lam = t
        while len(lam) > 1 and lam[-1] == 0:
            lam.pop()
        deg = len(lam) - 1
        n_err = big_l - y
        if deg != big_l or 2 * n_err + y > p:
            raise ReedSolomonError("errata locator inconsistent with correction radius")

        # Chien search over the shortened positions
        powers = np.arange(n - 1, -1, -1, dtype=np.int64)
        acc = np.zeros(n, dtype=np.int64)
        for d, c in enumerate(lam):
            if c:
                acc ^= f.mul_alpha_pow_vec(np.full(n, c, dtype=np.int64), -d * powers)
        roots = np.flatnonzero(acc == 0)
        if len(roots) != deg:
            raise ReedSolomonError(f"locator has {len(roots)} roots in range, degree {deg}")

        # Forney: e_k = Omega(X_k^-1) / Lambda'(X_k^-1)
        omega = _poly_mul(f, synd, lam)[:p]
        dlam = [lam[d] if d % 2 == 1 else 0 for d in range(1, len(lam))]
        for pos in roots:
            xinv = f.alpha_pow(-(n - 1 - int(pos)))
            den = _poly_eval(f, dlam, xinv)
            if den == 0:
                raise ReedSolomonError("zero derivative in Forney step")
            word[pos] ^= f.div(_poly_eval(f, omega, xinv), den)

        if any(self.syndromes(word)):
            raise ReedSolomonError("residual syndrome after correction")
        eset = set(eras)
        errs = tuple(int(p_) for p_ in roots if int(p_) not in eset)
        return DecodeResult(word[: self.info_len].tolist(), word.tolist(), errs, tuple(eras))

    def decode(self, received: Sequence[Optional[int]], erasures: Sequence[int] = ()) -> list[int]:
        return self.decode_detail(received, erasures).info


def _zip_pad(a: list[int], b: list[int]):
    size = max(len(a), len(b))
    return zip(a + [0] * (size - len(a)), b + [0] * (size - len(b)))


@lru_cache(maxsize=32)
def _remainder_matrix(f: Field, info_len: int, parity_len: int) -> np.ndarray:
    """Row i holds X^(p + info_len - 1 - i) mod g(X), lowest degree first."""
    p = parity_len
    g_low = np.array(generator_poly(f, p)[:p], dtype=np.int64)
    rows = np.zeros((info_len, p), dtype=np.int64)
    cur = g_low.copy()  # X^p mod g
    for e in range(info_len):
        rows[info_len - 1 - e] = cur
        top = int(cur[-1])
        cur = np.concatenate(([0], cur[:-1]))
        if top:
            cur ^= f.mul_vec(g_low, top)
    rows.flags.writeable = False
    return rows


def rs_encode(info: Sequence[int], parity_len: int, field: Field | None = None) -> list[int]:
    """Parity symbols of the systematic codeword ``info + parity``."""
    field = field or _smallest_field(len(info) + parity_len)
    return RsCode(field, len(info), parity_len).encode(info)


def rs_decode(
    received: Sequence[Optional[int]], parity_len: int, field: Field | None = None
) -> list[int]:
    """Information symbols of ``received`` (``None`` marks an erasure)."""
    field = field or _smallest_field(len(received))
    return RsCode(field, len(received) - parity_len, parity_len).decode(received)


def _smallest_field(length: int) -> Field:
    z = 3
    while (1 << z) - 1 < length:
        z += 1
    return field_new(z)
