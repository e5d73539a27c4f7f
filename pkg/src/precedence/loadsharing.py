"""Order-dependent load-sharing models over exact rational rates.

A load-sharing model assigns each surviving component j a constant failure
rate that depends only on which components have already failed and, in the
order-dependent variant, in which order: ``mu_j(i_1, ..., i_k)`` for every
ordered failure prefix. The failure-order law then factorizes into a
product of rate ratios,

    P(J_1 = i_1, ..., J_k = i_k)
        = prod_r  mu_{i_r}(i_1, ..., i_{r-1}) / M(i_1, ..., i_{r-1}),

where M(prefix) is the total rate of the survivors, with the convention
0/0 := 0 so that prefixes with zero-mass ancestors get probability 0
instead of raising. The probability of a full permutation equals that of
its (m-1)-prefix: the last surviving component's rate never matters.

Two representations are provided:

* :class:`OrderDependentLSModel`: sparse ``(prefix, j) -> rate`` table
  with a default-value slot (needed because set-invariant models assign
  one rate to exponentially many prefixes).
* :class:`SetInvariantLSModel`: rates keyed by the *survivor set*, i.e.
  order-independent by construction. These embed losslessly into the
  order-dependent representation via :func:`as_order_dependent`.

Winning probabilities are computed directly from the rate table
(:func:`alpha_family_ls`) and must agree exactly with the two-step route
through :func:`distribution_of`; the set-invariant path memoizes partial
prefix sums by failed-set, which collapses the k! orderings of each set.

For models built from an epsilon schedule the total rate of h survivors
closes to h - h*(h-1)/2 * eps(h) when the subset's ranking is tie-free:
the per-survivor discounts (rank - 1) * eps(h) sum over a full rank
permutation. Totals are nevertheless always computed by direct summation,
never from that closed form, so tied or hand-built rate tables need no
special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import (
    ONE,
    ZERO,
    SubsetMask,
    check_dimension,
    rational_format,
    rational_parse,
    subset_members,
    subsets_of_size_at_least,
    validate_prefix,
)
from .errors import DomainError, InputFormatError, InvalidModelError, ScheduleError
from .permdist import PermutationDistribution, WinningProbabilityFamily


@dataclass(frozen=True)
class EpsilonSchedule:
    """Per-cardinality tie-breaking magnitudes eps(1), ..., eps(m).

    eps(1) is identically 0 (singleton survivor sets always get rate 1).
    Positivity of all rates built from the schedule requires
    (l - 1) * eps(l) < 1 for every l.
    """

    m: int
    eps: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        check_dimension(self.m)
        values = tuple(Fraction(e) for e in self.eps)
        if len(values) != self.m:
            raise ScheduleError(f"schedule needs {self.m} entries, got {len(values)}")
        if values[0] != 0:
            raise ScheduleError(f"eps(1) must be 0, got {values[0]}")
        for level, e in enumerate(values[1:], start=2):
            if e <= 0:
                raise ScheduleError(f"eps({level}) must be positive, got {e}")
            if (level - 1) * e >= 1:
                raise ScheduleError(
                    f"(l-1)*eps(l) must stay below 1; eps({level}) = {e} breaks it"
                )
        object.__setattr__(self, "eps", values)

    def value(self, level: int) -> Fraction:
        if not 1 <= level <= self.m:
            raise DomainError(f"level {level} outside [1, {self.m}]")
        return self.eps[level - 1]

    def rho(self, level: int) -> Fraction:
        """Reparametrized magnitude rho(u) = eps(u) * (u - 1) / 2."""
        return self.value(level) * (level - 1) / 2

    def satisfies_decay(self) -> bool:
        """rho(2) < 1/8 and 2*rho(u) < rho(u-1) for u = 3..m.

        Implies sum_{u=k..m} rho(u) < 2*rho(k), the geometric-domination
        fact behind the prefix-probability bounds.
        """
        if self.m >= 2 and self.rho(2) >= Fraction(1, 8):
            return False
        return all(2 * self.rho(u) < self.rho(u - 1) for u in range(3, self.m + 1))

    def to_json_list(self) -> list[str]:
        return [rational_format(e) for e in self.eps]

    @classmethod
    def from_json_list(cls, m: int, entries: list) -> "EpsilonSchedule":
        try:
            values = tuple(rational_parse(e) for e in entries)
        except Exception as ex:
            raise InputFormatError(f"epsilon schedule: {ex}") from ex
        return cls(m, values)


@dataclass(frozen=True, eq=False)
class OrderDependentLSModel:
    """Sparse rate table ``(prefix, j) -> mu`` plus a default rate.

    The table is complete by construction: any (prefix, j) pair not stored
    explicitly has the default rate. All rates are non-negative exact
    rationals; prefixes run up to length m-1.
    """

    m: int
    rates: Mapping[tuple[tuple[int, ...], int], Fraction]
    default: Fraction = ZERO

    def __post_init__(self) -> None:
        check_dimension(self.m)
        default = Fraction(self.default)
        if default < 0:
            raise DomainError(f"negative default rate {default}")
        clean: dict[tuple[tuple[int, ...], int], Fraction] = {}
        for (prefix, j), value in self.rates.items():
            prefix = validate_prefix(self.m, prefix)
            if len(prefix) > self.m - 1:
                raise DomainError(f"prefix {prefix} too long for m={self.m}")
            if not 1 <= j <= self.m or j in prefix:
                raise DomainError(f"invalid survivor {j} for prefix {prefix}")
            q = Fraction(value)
            if q < 0:
                raise DomainError(f"negative rate {q} for mu_{j}{prefix}")
            clean[(prefix, j)] = q
        object.__setattr__(self, "rates", clean)
        object.__setattr__(self, "default", default)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrderDependentLSModel):
            return NotImplemented
        return (
            self.m == other.m
            and self.default == other.default
            and dict(self.rates) == dict(other.rates)
        )

    def rate(self, prefix: tuple[int, ...], j: int) -> Fraction:
        return self.rates.get((prefix, j), self.default)

    @classmethod
    def constant(cls, m: int, rate: Fraction | int = 1) -> "OrderDependentLSModel":
        """All rates equal; induces the uniform failure-order law."""
        return cls(m, {}, Fraction(rate))

    def to_json_dict(self) -> dict:
        entries = sorted(self.rates)
        return {
            "m": self.m,
            "rates": [
                {"prefix": list(p), "j": j, "mu": rational_format(self.rates[(p, j)])}
                for p, j in entries
            ],
            "default": rational_format(self.default),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "OrderDependentLSModel":
        if not isinstance(doc, dict) or "m" not in doc or "rates" not in doc:
            raise InputFormatError("model document needs fields 'm' and 'rates'")
        rates: dict[tuple[tuple[int, ...], int], Fraction] = {}
        for idx, entry in enumerate(doc["rates"]):
            where = f"rates[{idx}]"
            if not isinstance(entry, dict) or not {"prefix", "j", "mu"} <= set(entry):
                raise InputFormatError(f"{where} needs fields 'prefix', 'j' and 'mu'")
            try:
                key = (tuple(entry["prefix"]), entry["j"])
                if key in rates:
                    raise InputFormatError(f"{where}: duplicate rate entry")
                rates[key] = rational_parse(entry["mu"])
            except InputFormatError:
                raise
            except Exception as ex:
                raise InputFormatError(f"{where}: {ex}") from ex
        try:
            default = rational_parse(doc.get("default", "0"))
            return cls(doc["m"], rates, default)
        except DomainError as ex:
            raise InputFormatError(str(ex)) from ex


@dataclass(frozen=True, eq=False)
class SetInvariantLSModel:
    """Rates keyed by survivor set: ``mu_j([m] \\ A)`` stored under (A, j).

    Order-independence is structural. When built from an epsilon schedule
    the schedule travels with the model (``epsilon``) so that bound checks
    can recover the rho magnitudes.
    """

    m: int
    mu_by_survivors: Mapping[tuple[tuple[int, ...], int], Fraction]
    epsilon: EpsilonSchedule | None = None

    def __post_init__(self) -> None:
        check_dimension(self.m)
        clean: dict[tuple[tuple[int, ...], int], Fraction] = {}
        for (survivors, j), value in self.mu_by_survivors.items():
            members = subset_members(self.m, survivors)
            if j not in members:
                raise DomainError(f"survivor {j} not in survivor set {members}")
            q = Fraction(value)
            if q < 0:
                raise DomainError(f"negative rate {q} for mu_{j} with survivors {members}")
            clean[(members, j)] = q
        for subset in subsets_of_size_at_least(self.m, 1):
            members = subset.members()
            total = ZERO
            for j in members:
                if (members, j) not in clean:
                    raise DomainError(f"missing rate for survivor {j} of set {members}")
                total += clean[(members, j)]
            if total <= 0:
                raise DomainError(f"survivor set {members} has zero total rate")
        object.__setattr__(self, "mu_by_survivors", clean)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetInvariantLSModel):
            return NotImplemented
        return self.m == other.m and dict(self.mu_by_survivors) == dict(
            other.mu_by_survivors
        )

    def survivors_after(self, prefix: tuple[int, ...]) -> tuple[int, ...]:
        failed = set(prefix)
        return tuple(i for i in range(1, self.m + 1) if i not in failed)

    def rate(self, prefix: tuple[int, ...], j: int) -> Fraction:
        survivors = self.survivors_after(prefix)
        if j not in survivors:
            raise DomainError(f"{j} is not a survivor after prefix {prefix}")
        return self.mu_by_survivors[(survivors, j)]

    def to_json_dict(self) -> dict:
        entries = sorted(self.mu_by_survivors)
        doc = {
            "m": self.m,
            "rates": [
                {
                    "survivors": list(s),
                    "j": j,
                    "mu": rational_format(self.mu_by_survivors[(s, j)]),
                }
                for s, j in entries
            ],
        }
        if self.epsilon is not None:
            doc["epsilon"] = self.epsilon.to_json_list()
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SetInvariantLSModel":
        if not isinstance(doc, dict) or "m" not in doc or "rates" not in doc:
            raise InputFormatError("model document needs fields 'm' and 'rates'")
        mu: dict[tuple[tuple[int, ...], int], Fraction] = {}
        for idx, entry in enumerate(doc["rates"]):
            where = f"rates[{idx}]"
            if not isinstance(entry, dict) or not {"survivors", "j", "mu"} <= set(entry):
                raise InputFormatError(f"{where} needs fields 'survivors', 'j' and 'mu'")
            try:
                key = (tuple(sorted(entry["survivors"])), entry["j"])
                if key in mu:
                    raise InputFormatError(f"{where}: duplicate rate entry")
                mu[key] = rational_parse(entry["mu"])
            except InputFormatError:
                raise
            except Exception as ex:
                raise InputFormatError(f"{where}: {ex}") from ex
        eps = None
        if "epsilon" in doc:
            eps = EpsilonSchedule.from_json_list(doc["m"], doc["epsilon"])
        try:
            return cls(doc["m"], mu, eps)
        except DomainError as ex:
            raise InputFormatError(str(ex)) from ex


LoadSharingModel = OrderDependentLSModel | SetInvariantLSModel


def model_from_json_dict(doc: dict) -> LoadSharingModel:
    """Load either model flavor, sniffing the rate-entry key."""
    if not isinstance(doc, dict):
        raise InputFormatError("model document must be a JSON object")
    entries = doc.get("rates")
    if isinstance(entries, list) and entries and "survivors" in entries[0]:
        return SetInvariantLSModel.from_json_dict(doc)
    return OrderDependentLSModel.from_json_dict(doc)


def total_rate(model: LoadSharingModel, prefix: Iterable[int]) -> Fraction:
    """M(prefix): total rate of the components still alive after ``prefix``."""
    prefix = validate_prefix(model.m, prefix)
    failed = set(prefix)
    total = ZERO
    for j in range(1, model.m + 1):
        if j not in failed:
            total += model.rate(prefix, j)
    return total


def prefix_probability(model: LoadSharingModel, prefix: Iterable[int]) -> Fraction:
    """P(the failure order starts with ``prefix``), as a product of rate ratios."""
    prefix = validate_prefix(model.m, prefix)
    prob = ONE
    for r, victim in enumerate(prefix):
        head = prefix[:r]
        total = total_rate(model, head)
        if total == 0:
            return ZERO
        prob *= model.rate(head, victim) / total
        if prob == 0:
            return ZERO
    return prob


def distribution_of(model: LoadSharingModel) -> PermutationDistribution:
    """The exact failure-order law induced by the rate table.

    Each permutation's weight is the probability of its (m-1)-prefix; the
    last surviving component fails with certainty. Raises
    InvalidModelError when a reachable prefix has zero total rate, since
    the collected weights then sum below 1.
    """
    m = model.m
    weights: dict[tuple[int, ...], Fraction] = {}

    def walk(prefix: tuple[int, ...], prob: Fraction) -> None:
        if len(prefix) == m - 1:
            (last,) = (j for j in range(1, m + 1) if j not in prefix)
            weights[prefix + (last,)] = prob
            return
        total = total_rate(model, prefix)
        if total == 0:
            return
        failed = set(prefix)
        for j in range(1, m + 1):
            if j in failed:
                continue
            mu = model.rate(prefix, j)
            if mu:
                walk(prefix + (j,), prob * mu / total)

    walk((), ONE)
    mass = sum(weights.values(), ZERO)
    if mass != 1:
        raise InvalidModelError(
            f"reachable total rate vanished before exhaustion: mass {mass} != 1"
        )
    return PermutationDistribution(m, weights)


def _alpha_terms_direct(
    model: LoadSharingModel, outside: tuple[int, ...], j: int, max_depth: int
) -> Fraction:
    """Sum of prefix_probability(prefix + (j,)) over prefixes from ``outside``.

    Walks every ordered sample of the complement up to ``max_depth`` with a
    running product, adding the step-to-j term at each node (depth 0
    contributes mu_j(empty)/M(empty)).
    """
    total = ZERO

    def walk(prefix: tuple[int, ...], prob: Fraction, remaining: tuple[int, ...]) -> None:
        nonlocal total
        m_here = total_rate(model, prefix)
        if m_here == 0 or prob == 0:
            return
        total += prob * model.rate(prefix, j) / m_here
        if len(prefix) == max_depth:
            return
        for pos, nxt in enumerate(remaining):
            mu = model.rate(prefix, nxt)
            if mu:
                walk(prefix + (nxt,), prob * mu / m_here, remaining[:pos] + remaining[pos + 1 :])

    walk((), ONE, outside)
    return total


def _failed_set_weights(model: SetInvariantLSModel, max_size: int) -> dict[int, Fraction]:
    """g[S] = P(the first |S| failures are exactly the set S), keyed by mask.

    Valid for set-invariant models only: the product along a prefix then
    depends on the sequence solely through its intermediate sets, so the
    orderings of S can be summed with one pass over submasks.
    """
    m = model.m
    g: dict[int, Fraction] = {0: ONE}
    by_size: dict[int, list[int]] = {0: [0]}
    for size in range(1, max_size + 1):
        by_size[size] = []
        for smaller in by_size[size - 1]:
            for bit in range(m):
                if smaller >> bit & 1:
                    continue
                mask = smaller | (1 << bit)
                if mask in g:
                    continue
                prefix_set = tuple(i for i in range(1, m + 1) if mask >> (i - 1) & 1)
                total = ZERO
                for i in prefix_set:
                    prev_mask = mask ^ (1 << (i - 1))
                    prev_set = tuple(x for x in prefix_set if x != i)
                    m_prev = total_rate(model, prev_set)
                    if m_prev == 0:
                        continue
                    total += g[prev_mask] * model.rate(prev_set, i) / m_prev
                g[mask] = total
                by_size[size].append(mask)
    return g


def alpha_family_ls(model: LoadSharingModel) -> WinningProbabilityFamily:
    """Winning probabilities straight from the rates, no distribution detour.

    alpha_j(A) accumulates, over every ordered sample (i_1, ..., i_k) of
    A-complement elements (k = 0..m-|A|), the product of rate ratios along
    the sample times mu_j / M at its end. Equals
    ``alpha_family(distribution_of(model))`` exactly.
    """
    m = model.m
    alphas: dict[tuple[tuple[int, ...], int], Fraction] = {}
    if isinstance(model, SetInvariantLSModel):
        g = _failed_set_weights(model, max_size=max(m - 2, 0))
        for subset in subsets_of_size_at_least(m, 2):
            members = subset.members()
            comp_mask = subset.complement().mask
            for j in members:
                total = ZERO
                s = comp_mask
                while True:
                    failed = tuple(i for i in range(1, m + 1) if s >> (i - 1) & 1)
                    m_here = total_rate(model, failed)
                    if m_here != 0:
                        total += g[s] * model.rate(failed, j) / m_here
                    if s == 0:
                        break
                    s = (s - 1) & comp_mask
                alphas[(members, j)] = total
    else:
        for subset in subsets_of_size_at_least(m, 2):
            members = subset.members()
            outside = subset.complement().members()
            for j in members:
                alphas[(members, j)] = _alpha_terms_direct(
                    model, outside, j, max_depth=m - len(members)
                )
    return WinningProbabilityFamily(m, alphas)


def beta_gamma_split(
    model: LoadSharingModel, subset: SubsetMask | Iterable[int], i: int
) -> tuple[Fraction, Fraction]:
    """Split alpha_i(A) by whether the whole complement fails before i.

    beta collects the orderings in which i wins A while some member of the
    complement is still alive (complement prefixes of length < m - |A|);
    gamma collects the orderings where every element outside A fails
    first. beta + gamma = alpha_i(A) exactly. Defined for 2 <= |A| <= m-1.
    """
    members = subset_members(model.m, subset)
    ell = len(members)
    if i not in members:
        raise DomainError(f"index {i} not in subset {members}")
    if ell < 2 or ell > model.m - 1:
        raise DomainError(
            f"split defined for 2 <= |A| <= m-1, got |A|={ell} with m={model.m}"
        )
    outside = tuple(x for x in range(1, model.m + 1) if x not in members)
    depth = model.m - ell

    beta = ZERO
    gamma = ZERO

    def walk(prefix: tuple[int, ...], prob: Fraction, remaining: tuple[int, ...]) -> None:
        nonlocal beta, gamma
        m_here = total_rate(model, prefix)
        if m_here == 0 or prob == 0:
            return
        term = prob * model.rate(prefix, i) / m_here
        if len(prefix) == depth:
            gamma += term
            return
        beta += term
        for pos, nxt in enumerate(remaining):
            mu = model.rate(prefix, nxt)
            if mu:
                walk(prefix + (nxt,), prob * mu / m_here, remaining[:pos] + remaining[pos + 1 :])

    walk((), ONE, outside)
    return beta, gamma


@dataclass(frozen=True)
class PrefixBoundsReport:
    """Exact two-sided envelope for one prefix probability."""

    prefix: tuple[int, ...]
    probability: Fraction
    lower: Fraction
    upper: Fraction

    @property
    def passed(self) -> bool:
        return self.lower <= self.probability <= self.upper

    @property
    def margin_lower(self) -> Fraction:
        return self.probability - self.lower

    @property
    def margin_upper(self) -> Fraction:
        return self.upper - self.probability

    def to_json_dict(self) -> dict:
        return {
            "prefix": list(self.prefix),
            "probability": rational_format(self.probability),
            "lower": rational_format(self.lower),
            "upper": rational_format(self.upper),
            "verdict": "PASS" if self.passed else "FAIL",
            "margin_lower": rational_format(self.margin_lower),
            "margin_upper": rational_format(self.margin_upper),
        }


def check_prefix_bounds(
    model: SetInvariantLSModel,
    prefix: Iterable[int],
    eps: EpsilonSchedule | None = None,
) -> PrefixBoundsReport:
    """Verify the near-uniformity envelope of a schedule-built model.

    For a model with rates 1 - (rank - 1) * eps(|A|) and a schedule whose
    rho magnitudes decay geometrically, every length-k prefix probability
    lies within

        (m-k)!/m! * (1 -/+ 2 * sum_{u=m-k+1..m} rho(u)).

    The schedule is taken from the model when not supplied explicitly.
    """
    prefix = validate_prefix(model.m, prefix)
    if eps is None:
        eps = model.epsilon
    if eps is None:
        raise DomainError("model carries no epsilon schedule; pass one explicitly")
    if eps.m != model.m:
        raise DomainError(f"schedule has m={eps.m} but model has m={model.m}")
    if not eps.satisfies_decay():
        raise ScheduleError("epsilon schedule violates the rho decay conditions")
    m, k = model.m, len(prefix)
    if k < 1:
        raise DomainError("prefix must be non-empty")
    spread = 2 * sum((eps.rho(u) for u in range(max(2, m - k + 1), m + 1)), ZERO)
    base = Fraction(math.factorial(m - k), math.factorial(m))
    return PrefixBoundsReport(
        prefix=prefix,
        probability=prefix_probability(model, prefix),
        lower=base * (1 - spread),
        upper=base * (1 + spread),
    )


def as_order_dependent(model: SetInvariantLSModel) -> OrderDependentLSModel:
    """Canonical injection: spell out the set-keyed rates for every prefix."""
    import itertools

    m = model.m
    rates: dict[tuple[tuple[int, ...], int], Fraction] = {}
    for k in range(m):
        for prefix in itertools.permutations(range(1, m + 1), k):
            for j in model.survivors_after(prefix):
                rates[(prefix, j)] = model.rate(prefix, j)
    return OrderDependentLSModel(m, rates)
