"""Ranking patterns: one (possibly tied) ranking per subset of [m].

A ranking function on a subset A maps each member to a rank so that the
image is exactly {1, ..., w} for some w <= |A| (dense ranks: ties share a
rank and the next rank is consecutive). A ranking pattern assigns one
ranking function to every subset with at least two members; it is *weak*
when any of its functions has a tie. Patterns generalize majority graphs:
the pair functions are exactly the arcs.

This module derives patterns from winning probabilities, checks
concordance (ranks must strictly mirror the probability order, ties
included), generates the classic paradoxical patterns, and enumerates or
samples pattern space for exhaustive testing.

Generators must rank the subsets the paradox leaves unconstrained
somehow; the filler used everywhere here is ascending by element index,
which keeps the output non-weak and deterministic.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from .core import SubsetMask, check_dimension, subset_members, subsets_of_size_at_least
from .errors import DomainError, InputFormatError
from .permdist import WinningProbabilityFamily


@dataclass(frozen=True)
class RankingFunction:
    """Dense ranks of the members of one subset; hashable and immutable.

    ``ranks`` is stored as ((element, rank), ...) sorted by element.
    """

    members: tuple[int, ...]
    ranks: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if len(members) < 2 or list(members) != sorted(set(members)):
            raise DomainError(f"invalid subset {members} for a ranking function")
        pairs = tuple(sorted(self.ranks))
        if tuple(e for e, _ in pairs) != members:
            raise DomainError(f"ranks {pairs} do not cover subset {members} exactly")
        image = {r for _, r in pairs}
        w = max(image)
        if image != set(range(1, w + 1)):
            raise DomainError(
                f"rank image {sorted(image)} over {members} is not dense {{1..w}}"
            )
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "ranks", pairs)

    @classmethod
    def of(cls, members: Iterable[int], ranks: Mapping[int, int]) -> "RankingFunction":
        members = tuple(sorted(members))
        missing = [e for e in members if e not in ranks]
        if missing:
            raise DomainError(f"no rank assigned to {missing} in subset {members}")
        return cls(members, tuple((e, ranks[e]) for e in members))

    def rank(self, j: int) -> int:
        for e, r in self.ranks:
            if e == j:
                return r
        raise DomainError(f"element {j} not in subset {self.members}")

    @property
    def is_weak(self) -> bool:
        return len({r for _, r in self.ranks}) < len(self.members)

    def as_dict(self) -> dict[int, int]:
        return dict(self.ranks)


@dataclass(frozen=True)
class RankingPattern:
    """One ranking function for every subset of [m] with >= 2 members."""

    m: int
    functions: tuple[RankingFunction, ...]

    def __post_init__(self) -> None:
        check_dimension(self.m)
        expected = [s.members() for s in subsets_of_size_at_least(self.m, 2)]
        by_set = {}
        for fn in self.functions:
            if fn.members in by_set:
                raise DomainError(f"duplicate ranking function for subset {fn.members}")
            for x in fn.members:
                if not 1 <= x <= self.m:
                    raise DomainError(f"element {x} outside [{self.m}]")
            by_set[fn.members] = fn
        missing = [s for s in expected if s not in by_set]
        if missing:
            raise DomainError(f"pattern is missing subsets, first: {missing[0]}")
        if len(by_set) != len(expected):
            extra = sorted(set(by_set) - set(expected))
            raise DomainError(f"pattern has unexpected subsets: {extra}")
        object.__setattr__(self, "functions", tuple(by_set[s] for s in expected))

    def function(self, subset: SubsetMask | Iterable[int]) -> RankingFunction:
        members = subset_members(self.m, subset)
        for fn in self.functions:
            if fn.members == members:
                return fn
        raise DomainError(f"no ranking function for subset {members}")

    def rank(self, subset: SubsetMask | Iterable[int], j: int) -> int:
        return self.function(subset).rank(j)

    @property
    def is_weak(self) -> bool:
        return any(fn.is_weak for fn in self.functions)

    def weak_subsets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(fn.members for fn in self.functions if fn.is_weak)

    # --- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "functions": [
                {
                    "set": list(fn.members),
                    "ranks": {str(e): r for e, r in fn.ranks},
                }
                for fn in self.functions
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "RankingPattern":
        if not isinstance(doc, dict) or "m" not in doc or "functions" not in doc:
            raise InputFormatError("pattern document needs fields 'm' and 'functions'")
        m = doc["m"]
        if not isinstance(doc["functions"], list):
            raise InputFormatError("field 'functions' must be a list")
        fns = []
        for idx, entry in enumerate(doc["functions"]):
            where = f"functions[{idx}]"
            if not isinstance(entry, dict) or "set" not in entry or "ranks" not in entry:
                raise InputFormatError(f"{where} needs fields 'set' and 'ranks'")
            try:
                members = tuple(sorted(entry["set"]))
                ranks = {int(k): int(v) for k, v in entry["ranks"].items()}
                fns.append(RankingFunction.of(members, ranks))
            except (DomainError, KeyError, TypeError, ValueError) as ex:
                raise InputFormatError(f"{where}: {ex}") from ex
        try:
            return cls(m, tuple(fns))
        except DomainError as ex:
            raise InputFormatError(str(ex)) from ex


@dataclass(frozen=True)
class ConcordanceViolation:
    subset: tuple[int, ...]
    i: int
    j: int
    rank_relation: str
    score_relation: str

    def to_json_dict(self) -> dict:
        return {
            "set": list(self.subset),
            "i": self.i,
            "j": self.j,
            "ranks": f"sigma(A,{self.i}) {self.rank_relation} sigma(A,{self.j})",
            "scores": f"score({self.i}) {self.score_relation} score({self.j})",
        }


@dataclass(frozen=True)
class ConcordanceReport:
    passed: bool
    violations: tuple[ConcordanceViolation, ...]

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "violations": [v.to_json_dict() for v in self.violations],
        }


def _relation(a, b) -> str:
    return "<" if a < b else (">" if a > b else "=")


_OPPOSITE = {"<": ">", ">": "<", "=": "="}


def score_concordance(
    sigma: RankingPattern, score: Callable[[tuple[int, ...], int], object]
) -> ConcordanceReport:
    """Check that lower rank means strictly higher score, ties matching ties.

    ``score(members, j)`` may return any totally ordered value (exact
    rationals for winning probabilities, integers for vote tallies).
    """
    violations = []
    for fn in sigma.functions:
        members = fn.members
        for i, j in itertools.combinations(members, 2):
            rank_rel = _relation(fn.rank(i), fn.rank(j))
            score_rel = _relation(score(members, i), score(members, j))
            if score_rel != _OPPOSITE[rank_rel]:
                violations.append(
                    ConcordanceViolation(members, i, j, rank_rel, score_rel)
                )
    return ConcordanceReport(not violations, tuple(violations))


def induced_pattern(fam: WinningProbabilityFamily) -> RankingPattern:
    """The ranking pattern read off a complete winning-probability family.

    Within each subset, members are ranked by descending alpha with dense
    ranks: exact ties share a rank, and rank values form {1, ..., w}.
    """
    if not fam.is_complete():
        raise DomainError("winning-probability family does not cover every subset")
    functions = []
    for subset in subsets_of_size_at_least(fam.m, 2):
        members = subset.members()
        values = {j: fam.alpha(members, j) for j in members}
        distinct = sorted(set(values.values()), reverse=True)
        ranks = {j: distinct.index(v) + 1 for j, v in values.items()}
        functions.append(RankingFunction.of(members, ranks))
    return RankingPattern(fam.m, tuple(functions))


def check_p_concordance(
    sigma: RankingPattern, fam: WinningProbabilityFamily
) -> ConcordanceReport:
    """PASS iff ranks strictly mirror winning probabilities on every subset."""
    if sigma.m != fam.m:
        raise DomainError(f"pattern has m={sigma.m} but family has m={fam.m}")
    if not fam.is_complete():
        raise DomainError("winning-probability family does not cover every subset")
    return score_concordance(sigma, lambda members, j: fam.alpha(members, j))


def _ascending_ranks(members: tuple[int, ...]) -> dict[int, int]:
    return {x: pos + 1 for pos, x in enumerate(members)}


def pattern_very_paradox(m: int) -> RankingPattern:
    """Element 1 wins every pairwise comparison yet comes last in every
    larger subset containing it.

    Subsets not containing 1 are ranked ascending by index (filler rule).
    """
    check_dimension(m)
    if m < 3:
        raise DomainError(f"the paradox needs m >= 3, got {m}")
    functions = []
    for subset in subsets_of_size_at_least(m, 2):
        members = subset.members()
        if 1 not in members:
            ranks = _ascending_ranks(members)
        elif len(members) == 2:
            other = members[1]
            ranks = {1: 1, other: 2}
        else:
            rest = [x for x in members if x != 1]
            ranks = {x: pos + 1 for pos, x in enumerate(rest)}
            ranks[1] = len(members)
        functions.append(RankingFunction.of(members, ranks))
    return RankingPattern(m, tuple(functions))


def pattern_cyclic(m: int) -> RankingPattern:
    """Pairwise precedence forms the cycle 1 < 2, 2 < 3, ..., m < 1.

    Cyclically adjacent pairs realize the cycle; every other subset is
    ranked ascending by index (filler rule).
    """
    check_dimension(m)
    if m < 3:
        raise DomainError(f"a precedence cycle needs m >= 3, got {m}")
    cycle_wins = {(i, i + 1): i for i in range(1, m)}
    cycle_wins[(1, m)] = m
    functions = []
    for subset in subsets_of_size_at_least(m, 2):
        members = subset.members()
        if len(members) == 2 and members in cycle_wins:
            winner = cycle_wins[members]
            loser = members[0] if winner == members[1] else members[1]
            ranks = {winner: 1, loser: 2}
        else:
            ranks = _ascending_ranks(members)
        functions.append(RankingFunction.of(members, ranks))
    return RankingPattern(m, tuple(functions))


def fubini(n: int) -> int:
    """Number of ordered set partitions of n elements (= ranking functions)."""
    a = [1] + [0] * n
    for k in range(1, n + 1):
        a[k] = sum(math.comb(k, i) * a[k - i] for i in range(1, k + 1))
    return a[n]


def pattern_count(m: int, non_weak_only: bool) -> int:
    """How many ranking patterns exist over [m]."""
    total = 1
    for size in range(2, m + 1):
        per_subset = math.factorial(size) if non_weak_only else fubini(size)
        total *= per_subset ** math.comb(m, size)
    return total


def _ranking_functions_of(members: tuple[int, ...], non_weak_only: bool):
    """All ranking functions on one subset, in deterministic rank-tuple order."""
    size = len(members)
    out = []
    if non_weak_only:
        for order in itertools.permutations(members):
            out.append(RankingFunction.of(members, {x: order.index(x) + 1 for x in members}))
    else:
        for values in itertools.product(range(1, size + 1), repeat=size):
            image = set(values)
            if image == set(range(1, max(image) + 1)):
                out.append(RankingFunction.of(members, dict(zip(members, values))))
    out.sort(key=lambda fn: tuple(r for _, r in fn.ranks))
    return out


def _compress_dense(values: dict[int, int]) -> dict[int, int]:
    distinct = sorted(set(values.values()))
    return {j: distinct.index(v) + 1 for j, v in values.items()}


def enumerate_patterns(
    m: int,
    non_weak_only: bool = False,
    *,
    seed: int | None = None,
    limit: int | None = None,
) -> Iterator[RankingPattern]:
    """Exhaustive pattern stream for m <= 3, or a seeded sampling stream.

    Without ``seed``: yields every pattern exactly once (refused for
    m >= 4, where the count is astronomical; the error reports it).
    With ``seed``: an endless deterministic stream of patterns; strict
    rankings are drawn uniformly per subset when ``non_weak_only``. Pass
    ``limit`` to stop after that many.
    """
    check_dimension(m)
    if m < 2:
        raise DomainError("patterns need m >= 2")
    subsets = [s.members() for s in subsets_of_size_at_least(m, 2)]

    if seed is None:
        if m > 3:
            raise DomainError(
                f"exhaustive enumeration refused for m={m}: "
                f"{pattern_count(m, non_weak_only)} patterns; use a sampling seed"
            )
        choices = [_ranking_functions_of(members, non_weak_only) for members in subsets]
        stream: Iterator[RankingPattern] = (
            RankingPattern(m, combo) for combo in itertools.product(*choices)
        )
        if limit is not None:
            stream = itertools.islice(stream, limit)
        yield from stream
        return

    rng = random.Random(seed)

    def draw() -> RankingPattern:
        functions = []
        for members in subsets:
            if non_weak_only:
                order = rng.sample(members, len(members))
                ranks = {x: order.index(x) + 1 for x in members}
            else:
                # Dense-compressed random ranks: a valid, deterministic
                # stream; the distribution over weak patterns is unspecified.
                ranks = _compress_dense({x: rng.randint(1, len(members)) for x in members})
            functions.append(RankingFunction.of(members, ranks))
        return RankingPattern(m, tuple(functions))

    count = 0
    while limit is None or count < limit:
        yield draw()
        count += 1
