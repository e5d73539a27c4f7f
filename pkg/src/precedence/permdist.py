"""Distributions over failure orders and the winning probabilities they induce.

A :class:`PermutationDistribution` is the joint law of the failure-order
indices (J_1, ..., J_m) over the permutations of [m]: J_r = i exactly when
component i is the r-th to fail. From it everything else follows exactly:

* prefix marginals  p_k(j_1, ..., j_k) = P(J_1 = j_1, ..., J_k = j_k),
* conditional next-failure probabilities,
* the family of winning probabilities  alpha_j(A) = P(component j fails
  first among A), for every subset A with |A| >= 2,
* the majority digraph of pairwise precedence.

``alpha_family`` computes the winning probabilities by summing prefix
marginals over orderings of A-complement elements;
``alpha_family_bruteforce`` scans every support permutation directly. The
two take genuinely different routes and must agree bit-for-bit; the brute
force scanner is kept as the cross-checking oracle (CLI ``oracle``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import (
    ONE,
    ZERO,
    SubsetMask,
    all_permutations,
    check_dimension,
    enumerate_d,
    rational_format,
    rational_parse,
    subset_members,
    subsets_of_size_at_least,
    validate_permutation,
    validate_prefix,
)
from .errors import DomainError, InputFormatError


@dataclass(frozen=True, eq=False)
class PermutationDistribution:
    """Probability weights over the permutations of [m]; weights sum exactly to 1.

    Zero-weight permutations are not stored; a missing permutation means
    weight 0. Instances are immutable and safe to share.
    """

    m: int
    weights: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self) -> None:
        check_dimension(self.m)
        clean: dict[tuple[int, ...], Fraction] = {}
        for perm, value in self.weights.items():
            perm = validate_permutation(self.m, perm)
            q = Fraction(value)
            if q < 0:
                raise DomainError(f"negative weight {q} for permutation {perm}")
            if q:
                clean[perm] = q
        total = sum(clean.values(), ZERO)
        if total != 1:
            raise DomainError(f"weights sum to {total}, expected exactly 1")
        object.__setattr__(self, "weights", clean)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermutationDistribution):
            return NotImplemented
        return self.m == other.m and dict(self.weights) == dict(other.weights)

    def weight(self, perm: Iterable[int]) -> Fraction:
        return self.weights.get(validate_permutation(self.m, perm), ZERO)

    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self.weights))

    @classmethod
    def uniform(cls, m: int) -> "PermutationDistribution":
        check_dimension(m)
        import math

        w = Fraction(1, math.factorial(m))
        return cls(m, {perm: w for perm in all_permutations(m)})

    @classmethod
    def point_mass(cls, perm: Iterable[int]) -> "PermutationDistribution":
        perm = tuple(perm)
        return cls(len(perm), {perm: ONE})

    def prefix_marginals(self) -> dict[tuple[int, ...], Fraction]:
        """p_k for every prefix of every support permutation, k = 1..m."""
        table: dict[tuple[int, ...], Fraction] = {}
        for perm, p in self.weights.items():
            for k in range(1, self.m + 1):
                key = perm[:k]
                table[key] = table.get(key, ZERO) + p
        return table

    # --- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "weights": [
                {"perm": list(perm), "p": rational_format(self.weights[perm])}
                for perm in self.support()
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PermutationDistribution":
        if not isinstance(doc, dict) or "m" not in doc or "weights" not in doc:
            raise InputFormatError("distribution document needs fields 'm' and 'weights'")
        m = doc["m"]
        entries = doc["weights"]
        if not isinstance(entries, list):
            raise InputFormatError("field 'weights' must be a list")
        weights: dict[tuple[int, ...], Fraction] = {}
        for idx, entry in enumerate(entries):
            where = f"weights[{idx}]"
            if not isinstance(entry, dict) or "perm" not in entry or "p" not in entry:
                raise InputFormatError(f"{where} needs fields 'perm' and 'p'")
            try:
                perm = validate_permutation(m, entry["perm"])
            except DomainError as ex:
                raise InputFormatError(f"{where}.perm: {ex}") from ex
            if perm in weights:
                raise InputFormatError(f"{where}.perm: duplicate permutation {list(perm)}")
            try:
                weights[perm] = rational_parse(entry["p"])
            except Exception as ex:
                raise InputFormatError(f"{where}.p: {ex}") from ex
        try:
            return cls(m, weights)
        except DomainError as ex:
            raise InputFormatError(str(ex)) from ex


@dataclass(frozen=True, eq=False)
class WinningProbabilityFamily:
    """The winning probabilities alpha_j(A), keyed by (sorted subset, j).

    Not required to cover every subset of [m]: hand-built families over a
    few pairs are legal. For every subset that is present, all of its
    members must be present and their alphas must sum exactly to 1.
    """

    m: int
    alphas: Mapping[tuple[tuple[int, ...], int], Fraction]

    def __post_init__(self) -> None:
        check_dimension(self.m)
        clean: dict[tuple[tuple[int, ...], int], Fraction] = {}
        groups: dict[tuple[int, ...], Fraction] = {}
        seen: dict[tuple[int, ...], set[int]] = {}
        for (subset, j), value in self.alphas.items():
            members = subset_members(self.m, subset)
            if len(members) < 2:
                raise DomainError(f"subset {members} has fewer than two members")
            if j not in members:
                raise DomainError(f"index {j} not in subset {members}")
            q = Fraction(value)
            if not 0 <= q <= 1:
                raise DomainError(f"alpha_{j}({members}) = {q} outside [0, 1]")
            clean[(members, j)] = q
            groups[members] = groups.get(members, ZERO) + q
            seen.setdefault(members, set()).add(j)
        for members, total in groups.items():
            if seen[members] != set(members):
                raise DomainError(f"incomplete entries for subset {members}")
            if total != 1:
                raise DomainError(f"alphas over {members} sum to {total}, expected 1")
        object.__setattr__(self, "alphas", clean)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WinningProbabilityFamily):
            return NotImplemented
        return self.m == other.m and dict(self.alphas) == dict(other.alphas)

    def alpha(self, subset: SubsetMask | Iterable[int], j: int) -> Fraction:
        members = subset_members(self.m, subset)
        try:
            return self.alphas[(members, j)]
        except KeyError:
            raise DomainError(f"no entry for alpha_{j}({members})") from None

    def sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted({members for members, _ in self.alphas}))

    def is_complete(self) -> bool:
        expected = {s.members() for s in subsets_of_size_at_least(self.m, 2)}
        return {members for members, _ in self.alphas} == expected

    def to_json_list(self) -> list[dict]:
        return [
            {
                "set": list(members),
                "alpha": {str(j): rational_format(self.alphas[(members, j)]) for j in members},
            }
            for members in self.sets()
        ]


@dataclass(frozen=True)
class MajorityDigraph:
    """Digraph on [m] with arc (i, j) when i beats-or-ties j pairwise."""

    m: int
    edges: frozenset[tuple[int, int]]

    def to_json_dict(self) -> dict:
        return {"m": self.m, "edges": [list(e) for e in sorted(self.edges)]}


def pk_marginal(rho: PermutationDistribution, prefix: Iterable[int]) -> Fraction:
    """Probability that the failure order starts with exactly ``prefix``."""
    prefix = validate_prefix(rho.m, prefix)
    if not prefix:
        raise DomainError("prefix must be non-empty")
    k = len(prefix)
    total = ZERO
    for perm, p in rho.weights.items():
        if perm[:k] == prefix:
            total += p
    return total


def conditional_next(
    rho: PermutationDistribution, prefix: Iterable[int], j: int
) -> Fraction:
    """P(J_{k+1} = j | the first k failures were ``prefix``), with 0/0 := 0."""
    prefix = validate_prefix(rho.m, prefix)
    if j in prefix:
        raise DomainError(f"index {j} already in prefix {prefix}")
    validate_prefix(rho.m, prefix + (j,))
    denom = pk_marginal(rho, prefix) if prefix else ONE
    if denom == 0:
        return ZERO
    return pk_marginal(rho, prefix + (j,)) / denom


def alpha_family(rho: PermutationDistribution) -> WinningProbabilityFamily:
    """All winning probabilities of ``rho``, via prefix-marginal summation.

    alpha_j(A) = P(J_1 = j) + sum over k = 1..m-|A| and over ordered
    samples (i_1, ..., i_k) from outside A of p_{k+1}(i_1, ..., i_k, j).
    """
    m = rho.m
    table = rho.prefix_marginals()
    alphas: dict[tuple[tuple[int, ...], int], Fraction] = {}
    for subset in subsets_of_size_at_least(m, 2):
        members = subset.members()
        for j in members:
            total = table.get((j,), ZERO)
            for k in range(1, m - len(members) + 1):
                for outside in enumerate_d(subset, k):
                    total += table.get(outside + (j,), ZERO)
            alphas[(members, j)] = total
    return WinningProbabilityFamily(m, alphas)


def alpha_family_bruteforce(rho: PermutationDistribution) -> WinningProbabilityFamily:
    """Winning probabilities by scanning every support permutation directly.

    Independent oracle for :func:`alpha_family`: for each permutation the
    winner in A is simply the earliest-listed member of A.
    """
    m = rho.m
    subsets = [s.members() for s in subsets_of_size_at_least(m, 2)]
    alphas: dict[tuple[tuple[int, ...], int], Fraction] = {
        (members, j): ZERO for members in subsets for j in members
    }
    for perm, p in rho.weights.items():
        for members in subsets:
            inside = set(members)
            winner = next(x for x in perm if x in inside)
            alphas[(members, winner)] += p
    return WinningProbabilityFamily(m, alphas)


def majority_digraph(fam: WinningProbabilityFamily) -> MajorityDigraph:
    """Arcs (i, j) with alpha_i({i,j}) >= alpha_j({i,j}); ties keep both arcs."""
    edges = set()
    for i in range(1, fam.m + 1):
        for j in range(i + 1, fam.m + 1):
            ai = fam.alpha((i, j), i)
            aj = fam.alpha((i, j), j)
            if ai >= aj:
                edges.add((i, j))
            if aj >= ai:
                edges.add((j, i))
    return MajorityDigraph(fam.m, frozenset(edges))
