"""Parameter bundles for alpha-BRC and the closed-form analytics around them
(code length, rate, loss budget, minimum printed dimension)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from decimal import Decimal
from fractions import Fraction

from .constrained import MuLayout, RllError, RllProfile, ceil_log2, packet_profile
from .gf import MAX_DEGREE, field_new
from .rs import RsCode

# Largest symbol width search_params considers; keeps the RS code over
# GF(2^13) with 4096 information symbols.
DEFAULT_MAX_M = 12


class ParameterError(ValueError):
    """One or more constraints on (alpha, l, m) are violated."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


def min_m_for(l: int) -> int:
    """Smallest admissible m for l strings.

    ``ceil(2 log2 l) + 2`` is the published constraint; replacement blocks
    of the distinct transform additionally need ``m >= 2 ceil(log2 l) + 2``
    so they end in a 0 bit.  The two differ only when l^2 <= 2^(2b-1).
    """
    return max(ceil_log2(l * l) + 2, 2 * ceil_log2(l) + 2)


@dataclass(frozen=True)
class BrcParams:
    alpha: int
    l: int
    m: int
    mu: MuLayout = field(init=False, repr=False, compare=False)
    packet: RllProfile = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        problems = _violations(self.alpha, self.l, self.m)
        if problems:
            raise ParameterError(problems)
        object.__setattr__(self, "mu", MuLayout(self.m))
        object.__setattr__(self, "packet", packet_profile(self.m))

    @property
    def k(self) -> int:
        return (self.l - self.alpha) * self.m - 1

    @property
    def mu_len(self) -> int:
        return self.m + ceil_log2(self.m) + 4

    @property
    def packet_len(self) -> int:
        return 4 * self.m + 11

    @property
    def n(self) -> int:
        return self.l * self.mu_len + self.alpha * self.packet_len

    @property
    def redundancy_len(self) -> int:
        """Bits taken by the marker/packet pairs at the front of a codeword."""
        return self.alpha * (self.mu_len + self.packet_len)

    @property
    def parity_len(self) -> int:
        return 4 * self.alpha

    @cached_property
    def rs(self) -> RsCode:
        return RsCode(field_new(self.m + 1), 1 << self.m, self.parity_len)

    def mu_offsets(self) -> list[int]:
        """Codeword offsets of the l MU codewords."""
        step = self.mu_len + self.packet_len
        offs = [i * step for i in range(self.alpha)]
        offs += [self.redundancy_len + j * self.mu_len for j in range(self.l - self.alpha)]
        return offs

    def packet_offsets(self) -> list[int]:
        step = self.mu_len + self.packet_len
        return [i * step + self.mu_len for i in range(self.alpha)]

    def marker(self, i: int) -> str:
        return format(i, f"0{self.m}b")


def _violations(alpha: int, l: int, m: int) -> list[str]:
    out = []
    if alpha < 1:
        out.append(f"alpha must be >= 1 (got {alpha})")
    if m < 2:
        out.append(f"m must be >= 2 (got {m})")
    if l <= alpha + 1:
        out.append(f"l must exceed alpha+1: l={l} <= {alpha + 1}")
    if out:
        return out
    need = min_m_for(l)
    if m < need:
        out.append(f"m={m} < {need} required for l={l} (m >= ceil(2 log l)+2)")
    if m + 1 > MAX_DEGREE:
        out.append(f"m={m} needs GF(2^{m + 1}); largest supported field is GF(2^{MAX_DEGREE})")
    elif (1 << m) + 4 * alpha > (1 << (m + 1)) - 1:
        out.append(f"RS length 2^{m}+{4 * alpha} does not fit GF(2^{m + 1})")
    for what, args in (("MU payload", (m, m + 2)), ("redundancy packet", (4 * m + 4, 4 * m + 11))):
        try:
            RllProfile(*args, ceil_log2(m))
        except RllError as exc:
            out.append(f"{what} RLL infeasible: {exc}")
    return out


def derive_params(alpha: int, l: int, m: int) -> BrcParams:
    return BrcParams(alpha, l, m)


def factorizations(k: int, alpha: int, max_m: int = DEFAULT_MAX_M) -> list[BrcParams]:
    """All valid parameter sets with (l - alpha) * m = k + 1."""
    out = []
    for m in range(2, max_m + 1):
        if (k + 1) % m:
            continue
        l = (k + 1) // m + alpha
        if not _violations(alpha, l, m):
            out.append(BrcParams(alpha, l, m))
    return out


def search_params(k: int, alpha: int, max_m: int = DEFAULT_MAX_M) -> BrcParams:
    """The shortest-codeword parameter set carrying exactly k bits; ties go
    to the smaller m."""
    if k < 1:
        raise ParameterError([f"k must be >= 1 (got {k})"])
    options = factorizations(k, alpha, max_m)
    if not options:
        hint = nearest_feasible_k(k, alpha, max_m)
        raise ParameterError([f"no feasible (l, m) for k={k}, alpha={alpha}; nearest feasible k is {hint}"])
    return min(options, key=lambda p: (p.n, p.m))


def nearest_feasible_k(k: int, alpha: int, max_m: int = DEFAULT_MAX_M) -> int | None:
    for d in range(0, 4 * k + 64):
        for cand in (k + d, k - d):
            if cand >= 1 and factorizations(cand, alpha, max_m):
                return cand
    return None


def smallest_feasible_k(k: int, alpha: int, max_m: int = DEFAULT_MAX_M) -> int:
    """Smallest k' >= k with a feasible parameter set (fingerprints get
    zero-padded up to it)."""
    cand = max(k, 1)
    while not factorizations(cand, alpha, max_m):
        cand += 1
        if cand > 64 * max(k, 16):
            raise ParameterError([f"no feasible k >= {k} for alpha={alpha}"])
    return cand


def code_rate(params: BrcParams) -> Fraction:
    return Fraction(params.k, params.n)


def cpc_rate_bound(t: int) -> Fraction:
    """Rate ceiling of cyclically permutable codes tolerating t breaks."""
    return Fraction(1, t + 1)


def min_dimension(k: int, alpha: int, pitch_mm, max_m: int = DEFAULT_MAX_M) -> Decimal:
    """Object height in millimetres needed to carry a k-bit fingerprint."""
    pitch = Decimal(str(pitch_mm))
    if pitch <= 0:
        raise ParameterError([f"pitch must be positive (got {pitch_mm})"])
    return search_params(k, alpha, max_m).n * pitch


def budget_ok(params: BrcParams, t: int, s: int) -> bool:
    """Whether t unresolved breaks and s lost bits fit the correction budget."""
    if t < 0 or s < 0:
        raise ValueError("t and s must be non-negative")
    return 4 * t + Fraction(2 * s, params.mu_len) <= 4 * params.alpha
