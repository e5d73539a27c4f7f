"""Exact arithmetic and combinatorial primitives.

Everything downstream runs on arbitrary-precision rationals
(``fractions.Fraction``) and three small encodings over the ground set
[m] = {1, ..., m}:

* permutations of [m] as tuples of ints,
* ordered failure prefixes (i_1, ..., i_k) as tuples of distinct ints,
* subsets of [m] as :class:`SubsetMask` bit masks.

Indices are 1-based throughout, including every file format. Enumeration
order is always lexicographic so that outputs are reproducible
byte-for-byte. The dimension m is capped at 8 by default (8! = 40320
permutations); the cap can be raised with the ``PRECEDENCE_MAX_M``
environment variable, with a warning above 8.
"""

from __future__ import annotations

import itertools
import os
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DomainError, RationalParseError

Rational = Fraction

DEFAULT_MAX_M = 8

ZERO = Fraction(0)
ONE = Fraction(1)

# Grammar: "<int>" or "<int>/<posint>". Stricter than Fraction(str), which
# would also accept decimals and exponents.
_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def rational_parse(text: str) -> Fraction:
    """Parse ``"n"`` or ``"n/d"`` into an exact rational in lowest terms."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise RationalParseError(f"not a rational literal: {text!r}")
    if "/" in text and text.split("/")[1].lstrip("0") == "":
        raise RationalParseError(f"zero denominator: {text!r}")
    return Fraction(text)


def rational_format(value: Fraction | int) -> str:
    """Canonical text form: lowest terms, ``"n/d"``, plain ``"n"`` for integers."""
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def max_dimension() -> int:
    """Current cap on m, from ``PRECEDENCE_MAX_M`` or the default of 8."""
    raw = os.environ.get("PRECEDENCE_MAX_M")
    if raw is None:
        return DEFAULT_MAX_M
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"PRECEDENCE_MAX_M must be an integer, got {raw!r}")
    if cap < 1:
        raise DomainError(f"PRECEDENCE_MAX_M must be >= 1, got {cap}")
    return cap


def check_dimension(m: int) -> int:
    """Validate a dimension m against the cap; warn when running above 8."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise DomainError(f"dimension must be a positive integer, got {m!r}")
    cap = max_dimension()
    if m > cap:
        raise DomainError(
            f"dimension m={m} exceeds the cap of {cap}; "
            "set PRECEDENCE_MAX_M to raise it"
        )
    if m > DEFAULT_MAX_M:
        warnings.warn(
            f"dimension m={m} above {DEFAULT_MAX_M}: exhaustive operations "
            f"touch up to {m}! permutations",
            RuntimeWarning,
            stacklevel=2,
        )
    return m


@dataclass(frozen=True)
class SubsetMask:
    """A subset of [m] encoded as an m-bit mask (bit i-1 set iff i is a member)."""

    m: int
    mask: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError(f"dimension must be >= 1, got {self.m}")
        if not 0 <= self.mask < (1 << self.m):
            raise DomainError(f"mask {self.mask:#x} out of range for m={self.m}")

    @classmethod
    def of(cls, m: int, members: Iterable[int]) -> "SubsetMask":
        mask = 0
        for x in members:
            if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= m:
                raise DomainError(f"element {x!r} outside [{m}]")
            mask |= 1 << (x - 1)
        return cls(m, mask)

    @classmethod
    def full(cls, m: int) -> "SubsetMask":
        return cls(m, (1 << m) - 1)

    @classmethod
    def empty(cls, m: int) -> "SubsetMask":
        return cls(m, 0)

    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.m + 1) if self.mask >> (i - 1) & 1)

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.m, self.mask ^ ((1 << self.m) - 1))

    def __contains__(self, x: int) -> bool:
        return isinstance(x, int) and 1 <= x <= self.m and bool(self.mask >> (x - 1) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())


def subset_members(m: int, subset: "SubsetMask | Iterable[int]") -> tuple[int, ...]:
    """Coerce a subset given as a mask or iterable into a sorted member tuple."""
    if isinstance(subset, SubsetMask):
        if subset.m != m:
            raise DomainError(f"subset over [{subset.m}] used with m={m}")
        return subset.members()
    members = tuple(sorted(subset))
    if len(set(members)) != len(members):
        raise DomainError(f"repeated elements in subset {members}")
    for x in members:
        if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= m:
            raise DomainError(f"element {x!r} outside [{m}]")
    return members


def subsets_of_size_at_least(m: int, k: int) -> list[SubsetMask]:
    """All subsets of [m] with at least k members, in lexicographic member order."""
    out = [
        SubsetMask.of(m, combo)
        for size in range(k, m + 1)
        for combo in itertools.combinations(range(1, m + 1), size)
    ]
    out.sort(key=lambda s: s.members())
    return out


def validate_permutation(m: int, seq: Iterable[int]) -> tuple[int, ...]:
    perm = tuple(seq)
    if sorted(perm) != list(range(1, m + 1)):
        raise DomainError(f"{perm} is not a permutation of [{m}]")
    return perm


def validate_prefix(m: int, seq: Iterable[int]) -> tuple[int, ...]:
    prefix = tuple(seq)
    seen = set()
    for x in prefix:
        if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= m:
            raise DomainError(f"prefix element {x!r} outside [{m}]")
        if x in seen:
            raise DomainError(f"repeated element {x} in prefix {prefix}")
        seen.add(x)
    return prefix


def all_permutations(m: int) -> Iterator[tuple[int, ...]]:
    """The m! permutations of [m], lexicographically."""
    return itertools.permutations(range(1, m + 1))


def enumerate_d(b: SubsetMask, k: int) -> Iterator[tuple[int, ...]]:
    """Ordered samples, without replacement, of size k drawn outside ``b``.

    Yields exactly (m-|b|)!/(m-|b|-k)! tuples, each disjoint from ``b``,
    in lexicographic order. With ``b`` empty and k = m this is the set of
    all permutations of [m].
    """
    free = b.m - len(b)
    if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k <= free:
        raise DomainError(
            f"sample size k={k!r} out of range [0, {free}] for |B|={len(b)}, m={b.m}"
        )
    return itertools.permutations(b.complement().members(), k)
