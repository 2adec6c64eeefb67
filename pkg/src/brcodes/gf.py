"""Arithmetic in binary extension fields GF(2^z), 3 <= z <= 17.

Elements are plain integers whose bits are polynomial coefficients over
GF(2).  Multiplication goes through log/antilog tables built once per
field; :func:`clmul_mod` is the table-free reference used to check them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MIN_DEGREE = 3
MAX_DEGREE = 17

# Default primitive polynomials (bit masks including the x^z term).  This
# table is part of the codeword wire format: changing an entry changes every
# parity symbol produced over that field.
PRIMITIVE_POLYS: dict[int, int] = {
    3: 0b1011,                 # x^3 + x + 1
    4: 0b10011,                # x^4 + x + 1
    5: 0b100101,               # x^5 + x^2 + 1
    6: 0b1000011,              # x^6 + x + 1
    7: 0b10001001,             # x^7 + x^3 + 1
    8: 0b100011101,            # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,           # x^9 + x^4 + 1
    10: 0b10000001001,         # x^10 + x^3 + 1
    11: 0b100000000101,        # x^11 + x^2 + 1
    12: 0b1000001010011,       # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,      # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,     # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,    # x^15 + x + 1
    16: 0b10001000000001011,   # x^16 + x^12 + x^3 + x + 1
    17: 0b100000000000001001,  # x^17 + x^3 + 1
}
POLY_TABLE_VERSION = 1


class FieldError(ValueError):
    pass


def poly_str(mask: int) -> str:
    """Render a GF(2) polynomial bit mask as ``x^3 + x + 1``."""
    terms = []
    for e in range(mask.bit_length() - 1, -1, -1):
        if mask >> e & 1:
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
    return " + ".join(terms) or "0"


def clmul_mod(a: int, b: int, modulus: int) -> int:
    """Carry-less product of ``a`` and ``b`` reduced modulo ``modulus``."""
    deg = modulus.bit_length() - 1
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a >> deg & 1:
            a ^= modulus
    return result


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(modulus: int) -> bool:
    """Trial division by every polynomial of degree <= deg/2."""
    deg = modulus.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(1 << d):
            if _poly_mod(modulus, (1 << d) | low) == 0:
                return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _pow_mod(a: int, e: int, modulus: int) -> int:
    result = 1
    while e:
        if e & 1:
            result = clmul_mod(result, a, modulus)
        a = clmul_mod(a, a, modulus)
        e >>= 1
    return result


def is_primitive(modulus: int) -> bool:
    """True iff ``x`` has multiplicative order 2^deg - 1 modulo ``modulus``."""
    deg = modulus.bit_length() - 1
    if not is_irreducible(modulus):
        return False
    order = (1 << deg) - 1
    if _pow_mod(2, order, modulus) != 1:
        return False
    return all(_pow_mod(2, order // p, modulus) != 1 for p in _prime_factors(order))


@dataclass(frozen=True)
class Field:
    """GF(2^degree) defined by a primitive ``modulus``.

    Build instances with :func:`field_new`, which validates the modulus and
    shares the tables between equal fields.
    """

    degree: int
    modulus: int
    exp: np.ndarray = field(repr=False, compare=False)
    log: np.ndarray = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return 1 << self.degree

    @property
    def generator_order(self) -> int:
        return (1 << self.degree) - 1

    def _check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element of GF(2^{self.degree})")
        return a

    def add(self, a: int, b: int) -> int:
        return self._check(a) ^ self._check(b)

    sub = add

    def mul(self, a: int, b: int) -> int:
        if not (0 <= a < self.order and 0 <= b < self.order):
            raise FieldError(f"operand outside GF(2^{self.degree}): {a}, {b}")
        if a == 0 or b == 0:
            return 0
        return int(self.exp[int(self.log[a]) + int(self.log[b])])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        self._check(a)
        return int(self.exp[self.generator_order - int(self.log[a])])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0")
        self._check(b)
        if self._check(a) == 0:
            return 0
        return int(self.exp[(int(self.log[a]) - int(self.log[b])) % self.generator_order])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def alpha_pow(self, e: int) -> int:
        """The primitive element x raised to ``e``."""
        return int(self.exp[e % self.generator_order])

    # -- vectorized helpers ---------------------------------------------
    def mul_vec(self, a: np.ndarray, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape)
        out = self.exp[(self.log[a] + self.log[b]) % self.generator_order]
        return np.where((a == 0) | (b == 0), 0, out)

    def mul_alpha_pow_vec(self, a: np.ndarray, e: np.ndarray) -> np.ndarray:
        """``a[i] * x^e[i]`` elementwise."""
        a = np.asarray(a, dtype=np.int64)
        out = self.exp[(self.log[a] + np.asarray(e, dtype=np.int64)) % self.generator_order]
        return np.where(a == 0, 0, out)


@lru_cache(maxsize=None)
def _build(degree: int, modulus: int) -> Field:
    size = (1 << degree) - 1
    exp = np.zeros(2 * size, dtype=np.int64)
    log = np.zeros(1 << degree, dtype=np.int64)
    x = 1
    for i in range(size):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x >> degree & 1:
            x ^= modulus
    exp[size:] = exp[:size]
    exp.flags.writeable = False
    log.flags.writeable = False
    return Field(degree, modulus, exp, log)


def field_new(degree: int, modulus: int | None = None) -> Field:
    """Return GF(2^degree), over the default primitive polynomial unless
    ``modulus`` is given.  Reducible or non-primitive moduli are rejected."""
    if not MIN_DEGREE <= degree <= MAX_DEGREE:
        raise FieldError(f"degree must be in [{MIN_DEGREE}, {MAX_DEGREE}], got {degree}")
    if modulus is None:
        modulus = PRIMITIVE_POLYS[degree]
    if modulus.bit_length() - 1 != degree:
        raise FieldError(f"modulus {poly_str(modulus)} does not have degree {degree}")
    if not is_irreducible(modulus):
        raise FieldError(f"modulus {poly_str(modulus)} is reducible over GF(2)")
    if not is_primitive(modulus):
        raise FieldError(f"modulus {poly_str(modulus)} is irreducible but not primitive")
    return _build(degree, modulus)


def field_table() -> list[tuple[int, int, str]]:
    """(degree, modulus mask, rendered polynomial) for every default entry."""
    return [(d, m, poly_str(m)) for d, m in sorted(PRIMITIVE_POLYS.items())]
