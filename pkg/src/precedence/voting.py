"""Voting situations: integer electorates over linear preference rankings.

A voting situation counts, for each permutation of the m candidates, how
many voters hold exactly that preference ranking. In any election among a
subset A of candidates every voter supports their top-ranked member of A
(plurality with sincere voting), so the tallies n_i(A) are the
integer-valued analogue of winning probabilities, and dividing the counts
by the electorate size turns the situation into a permutation
distribution with n_i(A) = n * alpha_i(A) exactly.

A ranking pattern is N-concordant with a situation when lower rank means
strictly more votes, ties matching tied tallies, on every subset.
:func:`synthesize_voting_situation` manufactures such an electorate for
any tie-free pattern by building the schedule model, clearing
denominators of its induced distribution with one lcm, and reading the
numerators as voter counts. The counts are exact big integers; they grow
astronomically with m, and minimizing the electorate is out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import check_dimension, subsets_of_size_at_least, validate_permutation
from .errors import DomainError, InputFormatError
from .loadsharing import EpsilonSchedule, distribution_of
from .permdist import PermutationDistribution
from .ranking import ConcordanceReport, RankingPattern, score_concordance


@dataclass(frozen=True, eq=False)
class VotingSituation:
    """Non-negative voter counts per preference ranking; total n > 0."""

    m: int
    counts: Mapping[tuple[int, ...], int]

    def __post_init__(self) -> None:
        check_dimension(self.m)
        clean: dict[tuple[int, ...], int] = {}
        for perm, count in self.counts.items():
            perm = validate_permutation(self.m, perm)
            if not isinstance(count, int) or isinstance(count, bool) or count < 0:
                raise DomainError(f"count for {perm} must be a non-negative integer")
            if count:
                clean[perm] = count
        if not clean:
            raise DomainError("a voting situation needs at least one voter")
        object.__setattr__(self, "counts", clean)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VotingSituation):
            return NotImplemented
        return self.m == other.m and dict(self.counts) == dict(other.counts)

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    def count(self, perm: Iterable[int]) -> int:
        return self.counts.get(validate_permutation(self.m, perm), 0)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "counts": [
                {"perm": list(perm), "n": str(self.counts[perm])}
                for perm in sorted(self.counts)
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "VotingSituation":
        if not isinstance(doc, dict) or "m" not in doc or "counts" not in doc:
            raise InputFormatError("voting document needs fields 'm' and 'counts'")
        counts: dict[tuple[int, ...], int] = {}
        for idx, entry in enumerate(doc["counts"]):
            where = f"counts[{idx}]"
            if not isinstance(entry, dict) or "perm" not in entry or "n" not in entry:
                raise InputFormatError(f"{where} needs fields 'perm' and 'n'")
            try:
                perm = validate_permutation(doc["m"], entry["perm"])
                if perm in counts:
                    raise InputFormatError(f"{where}.perm: duplicate permutation")
                counts[perm] = int(entry["n"])
            except InputFormatError:
                raise
            except (DomainError, TypeError, ValueError) as ex:
                raise InputFormatError(f"{where}: {ex}") from ex
        try:
            return cls(doc["m"], counts)
        except DomainError as ex:
            raise InputFormatError(str(ex)) from ex


@dataclass(frozen=True, eq=False)
class TallyTable:
    """Plurality tallies n_i(A) for every election subset A."""

    m: int
    n: int
    tallies: Mapping[tuple[tuple[int, ...], int], int]

    def votes(self, subset: Iterable[int], i: int) -> int:
        from .core import subset_members

        members = subset_members(self.m, subset)
        try:
            return self.tallies[(members, i)]
        except KeyError:
            raise DomainError(f"no tally for candidate {i} in election {members}") from None

    def to_json_dict(self) -> dict:
        sets = sorted({members for members, _ in self.tallies})
        return {
            "m": self.m,
            "n": str(self.n),
            "tallies": [
                {
                    "set": list(members),
                    "votes": {str(i): str(self.tallies[(members, i)]) for i in members},
                }
                for members in sets
            ],
        }


def rho_from_voting(vs: VotingSituation) -> PermutationDistribution:
    """The permutation distribution N(perm) / n."""
    n = vs.n
    return PermutationDistribution(
        vs.m, {perm: Fraction(c, n) for perm, c in vs.counts.items()}
    )


def tally(vs: VotingSituation) -> TallyTable:
    """Count, per election subset, each candidate's plurality support.

    A voter supports the earliest member of A in their ranking; integer
    arithmetic throughout, and the votes over A always sum to n.
    """
    tallies: dict[tuple[tuple[int, ...], int], int] = {}
    subsets = [s.members() for s in subsets_of_size_at_least(vs.m, 2)]
    for members in subsets:
        for i in members:
            tallies[(members, i)] = 0
    for perm, count in vs.counts.items():
        for members in subsets:
            inside = set(members)
            winner = next(x for x in perm if x in inside)
            tallies[(members, winner)] += count
    return TallyTable(vs.m, vs.n, tallies)


def check_n_concordance(tau: RankingPattern, vs: VotingSituation) -> ConcordanceReport:
    """PASS iff lower rank means strictly more votes, ties matching, every subset."""
    if tau.m != vs.m:
        raise DomainError(f"pattern has m={tau.m} but situation has m={vs.m}")
    table = tally(vs)
    return score_concordance(tau, lambda members, j: table.tallies[(members, j)])


def synthesize_voting_situation(
    sigma: RankingPattern, eps: EpsilonSchedule | None = None
) -> VotingSituation:
    """An integer electorate whose tallies are N-concordant with ``sigma``.

    Builds the schedule model, takes its exact failure-order law, and
    scales by the least common multiple of the weight denominators.
    """
    from .construction import build_ls_epsilon, epsilon_schedule

    if eps is None:
        eps = epsilon_schedule(sigma.m)
    model = build_ls_epsilon(sigma, eps)
    rho = distribution_of(model)
    scale = math.lcm(*(w.denominator for w in rho.weights.values()))
    counts = {
        perm: w.numerator * (scale // w.denominator) for perm, w in rho.weights.items()
    }
    return VotingSituation(sigma.m, counts)
