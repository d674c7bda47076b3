"""Arithmetic progressions in [n] = {1, ..., n}: types, enumeration, exact counts.

All counts are Python integers, checked against a signed 128-bit range so that
results stay portable to fixed-width consumers (CSV readers, other tools).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Union

INT128_MAX = (1 << 127) - 1

Probability = Union[Fraction, float]


class DomainError(ValueError):
    """Raised when arguments fall outside an operation's domain."""


class ResourceError(RuntimeError):
    """Raised when a computation would exceed its configured budget."""


def checked_int128(value: int, what: str = "count") -> int:
    """Return ``value`` unchanged, raising OverflowError outside signed 128-bit."""
    if not -INT128_MAX - 1 <= value <= INT128_MAX:
        raise OverflowError(f"{what} = {value} exceeds the signed 128-bit range")
    return value


@dataclass(frozen=True)
class Progression:
    """One ell-AP ``(start, start + diff, ..., start + (length - 1) * diff)``."""

    start: int
    diff: int
    length: int

    def __post_init__(self):
        if self.start < 1 or self.diff < 1 or self.length < 3:
            raise DomainError(
                f"invalid progression start={self.start} diff={self.diff} "
                f"length={self.length}"
            )

    def element(self, i: int) -> int:
        """The i-th element, 1-based."""
        return self.start + (i - 1) * self.diff

    @property
    def last(self) -> int:
        return self.start + (self.length - 1) * self.diff

    def elements(self) -> range:
        return range(self.start, self.last + 1, self.diff)

    def fits(self, n: int) -> bool:
        return self.last <= n

    def mask(self) -> int:
        """Bitmask with bit ``m - 1`` set for every element m."""
        bits = 0
        for m in self.elements():
            bits |= 1 << (m - 1)
        return bits

    def sort_key(self):
        return (self.diff, self.start, self.length)

    def __len__(self):
        return self.length

    def __iter__(self):
        return iter(self.elements())

    def __contains__(self, m) -> bool:
        return (
            isinstance(m, int)
            and self.start <= m <= self.last
            and (m - self.start) % self.diff == 0
        )


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the random model: [n]_p and two lengths ell2 <= ell1."""

    n: int
    p: Probability
    ell1: int
    ell2: int

    def __post_init__(self):
        check_lengths(self.n, self.ell1)
        check_lengths(self.n, self.ell2)
        if self.ell2 > self.ell1:
            raise DomainError(f"need ell2 <= ell1, got ell1={self.ell1} ell2={self.ell2}")
        check_probability(self.p)


def check_lengths(n: int, ell: int) -> None:
    if not isinstance(n, int) or not isinstance(ell, int):
        raise DomainError("n and ell must be integers")
    if ell < 3 or ell > n:
        raise DomainError(f"need 3 <= ell <= n, got n={n} ell={ell}")


def check_probability(p) -> None:
    if not 0 <= p <= 1:
        raise DomainError(f"probability must lie in [0, 1], got {p}")


def parse_probability(text: str) -> Probability:
    """Parse ``"a/b"`` as an exact Fraction and plain decimals as floats."""
    text = text.strip()
    try:
        p = Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"malformed probability {text!r}") from exc
    check_probability(p)
    return p


def max_diff(n: int, ell: int) -> int:
    """Largest common difference of an ell-AP inside [n]."""
    return (n - 1) // (ell - 1)


def enumerate_aps(n: int, ell: int) -> List[Progression]:
    """Every ell-AP in [n], sorted by (diff, start)."""
    check_lengths(n, ell)
    return [
        Progression(start, diff, ell)
        for diff in range(1, max_diff(n, ell) + 1)
        for start in range(1, n - (ell - 1) * diff + 1)
    ]


def count_aps(n: int, ell: int) -> int:
    """Number of ell-APs in [n]: D*n - (ell-1)*C(D+1, 2) with D = floor((n-1)/(ell-1))."""
    check_lengths(n, ell)
    d = max_diff(n, ell)
    return checked_int128(d * n - (ell - 1) * (d * (d + 1) // 2))


def count_aps_closed_form(n: int, ell: int) -> Fraction:
    """The same count as n(n-ell+1)/(2(ell-1)) + f(R, ell), in exact rationals."""
    check_lengths(n, ell)
    r = (n - 1) % (ell - 1)
    f = Fraction((r + 1) * (ell - 1) - (r + 1) ** 2, 2 * (ell - 1))
    return Fraction(n * (n - ell + 1), 2 * (ell - 1)) + f


def expected_count(n: int, ell: int, p: Probability) -> Probability:
    """E X_ell = A_ell * p^ell (exact when p is a Fraction)."""
    check_probability(p)
    return count_aps(n, ell) * p**ell


def double_factorial(k: int) -> int:
    """k!! with the convention (-1)!! = 0!! = 1."""
    return math.prod(range(k, 0, -2)) if k > 0 else 1
