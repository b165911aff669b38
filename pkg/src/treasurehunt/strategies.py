"""Hider and searcher strategies as immutable objects.

Searcher strategies expose two faces: an exact action distribution per
observable history (what the solver consumes) and a cheap seeded sampler
(what the simulator consumes). Hider strategies are explicit finite
distributions over allocations.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Iterable, Mapping, Sequence

from .combinatorics import MULTI, SINGLE, Allocation, enumerate_allocations
from .errors import DoorBudgetError, MissingDiagramError
from .game import GameConfig, History, discovery_counts, guessed_doors
from .jsonio import fraction_from_json, fraction_to_json
from .staytables import StayTable, scaled_stay_table

GuessDistribution = list[tuple[frozenset[int], Fraction]]


# ---------------------------------------------------------------------------
# Hider side
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HiderStrategy:
    """A finite distribution over allocations, with exact probabilities."""

    config: GameConfig
    distribution: tuple[tuple[Allocation, Fraction], ...]
    name: str = "custom"

    def __post_init__(self):
        total = Fraction(0)
        seen: set[Allocation] = set()
        for allocation, p in self.distribution:
            if not self.config.is_valid_allocation(allocation):
                raise ValueError(f"allocation {allocation} invalid for {self.config}")
            if allocation in seen:
                raise ValueError(f"duplicate allocation {allocation}")
            if p <= 0:
                raise ValueError("hider probabilities must be positive")
            seen.add(allocation)
            total += p
        if total != 1:
            raise ValueError(f"hider probabilities sum to {total}, not 1")

    def support(self) -> list[Allocation]:
        return [allocation for allocation, _ in self.distribution]

    def sampler(self, rng) -> "_HiderSampler":
        return _HiderSampler(self.distribution, rng)


class _HiderSampler:
    """Exact integer-arithmetic sampling from a fixed hider distribution."""

    def __init__(self, distribution, rng):
        denom = 1
        for _, p in distribution:
            denom = denom * p.denominator // gcd(denom, p.denominator)
        bounds = []
        allocations = []
        running = 0
        for allocation, p in distribution:
            running += p.numerator * (denom // p.denominator)
            bounds.append(running)
            allocations.append(allocation)
        self._den = denom
        self._bounds = bounds
        self._allocations = allocations
        self._rng = rng

    def sample(self) -> Allocation:
        r = self._rng.randrange(self._den)
        return self._allocations[bisect_right(self._bounds, r)]


def uniform_hider(config: GameConfig) -> HiderStrategy:
    """Hide uniformly over every allocation of the configured variant."""
    allocations = enumerate_allocations(config.n, config.d, config.occupancy)
    p = Fraction(1, len(allocations))
    return HiderStrategy(config, tuple((a, p) for a in allocations), name="uniform")


def all_in_one_hider(config: GameConfig) -> HiderStrategy:
    """Hide every treasure behind one door chosen uniformly at random."""
    if config.occupancy == SINGLE and config.d > 1:
        raise ValueError("all-in-one hiding needs multi occupancy when d > 1")
    p = Fraction(1, config.n)
    allocations = []
    for door in range(config.n):
        counts = [0] * config.n
        counts[door] = config.d
        allocations.append((tuple(counts), p))
    return HiderStrategy(config, tuple(allocations), name="all-in-one")


def hider_from_entries(config: GameConfig, entries: Iterable[tuple[Sequence[int], Fraction]],
                       name: str = "custom") -> HiderStrategy:
    return HiderStrategy(config, tuple((tuple(a), Fraction(p)) for a, p in entries), name=name)


def load_hider_json(config: GameConfig, path) -> HiderStrategy:
    """Read a hider file: n, d, and entries of allocation plus exact p."""
    with open(path, "r", encoding="utf-8") as handle:
        obj = json.load(handle)
    if int(obj.get("n", config.n)) != config.n or int(obj.get("d", config.d)) != config.d:
        raise ValueError("hider file was written for a different game size")
    entries = [(tuple(item["allocation"]), fraction_from_json(item["p"])) for item in obj["entries"]]
    return hider_from_entries(config, entries, name="file")


def hider_to_json(hider: HiderStrategy) -> dict:
    return {
        "n": hider.config.n,
        "d": hider.config.d,
        "entries": [
            {"allocation": list(a), "p": fraction_to_json(p)} for a, p in hider.distribution
        ],
    }


# ---------------------------------------------------------------------------
# Searcher side
# ---------------------------------------------------------------------------

class SearcherStrategy:
    """Base class: a behavioral rule over observable histories.

    door_symmetric marks strategies invariant under door relabeling, which
    lets the solver share work across symmetric positions. Set it only when
    the rule genuinely ignores door identities.
    """

    config: GameConfig
    name: str = "searcher"
    door_symmetric: bool = False

    def guess_distribution(self, history: History) -> GuessDistribution:
        raise NotImplementedError

    def sampler(self, rng) -> "SearcherSampler":
        return _DistributionSampler(self, rng)


class SearcherSampler:
    """Per-game cursor: alternate next_guess() and observe()."""

    def next_guess(self) -> frozenset[int]:
        raise NotImplementedError

    def observe(self, guess: frozenset[int], revealed: int | None) -> None:
        raise NotImplementedError


class _DistributionSampler(SearcherSampler):
    """Fallback sampler that draws from the exact distribution. Correct for
    any strategy, slower than the bespoke samplers below."""

    def __init__(self, strategy: SearcherStrategy, rng):
        self._strategy = strategy
        self._rng = rng
        self._history: History = ()

    def next_guess(self) -> frozenset[int]:
        dist = self._strategy.guess_distribution(self._history)
        denom = 1
        for _, p in dist:
            denom = denom * p.denominator // gcd(denom, p.denominator)
        r = self._rng.randrange(denom)
        running = 0
        for guess, p in dist:
            running += p.numerator * (denom // p.denominator)
            if r < running:
                return guess
        raise AssertionError("distribution does not sum to 1")

    def observe(self, guess, revealed):
        self._history = self._history + ((guess, revealed),)


def guess_distribution(strategy: SearcherStrategy, history: History) -> GuessDistribution:
    """Uniform access point for a strategy's exact distribution."""
    return strategy.guess_distribution(history)


@dataclass(frozen=True)
class FreshDoorsSearcher(SearcherStrategy):
    """Guess k never-guessed doors uniformly at random, every round."""

    config: GameConfig
    name: str = "fresh-k"
    door_symmetric: bool = True

    def __post_init__(self):
        if self.config.n < self.config.d * self.config.k:
            raise DoorBudgetError(
                f"fresh-door play needs n >= d*k, got n={self.config.n} < {self.config.d * self.config.k}"
            )

    def guess_distribution(self, history: History) -> GuessDistribution:
        k = self.config.k
        fresh = sorted(set(range(self.config.n)) - guessed_doors(history))
        if len(fresh) < k:
            raise DoorBudgetError("ran out of fresh doors")
        p = Fraction(1, comb(len(fresh), k))
        return [(frozenset(c), p) for c in combinations(fresh, k)]

    def sampler(self, rng) -> SearcherSampler:
        return _FreshSampler(self.config, rng)


class _FreshSampler(SearcherSampler):
    def __init__(self, config: GameConfig, rng):
        self._pool = list(range(config.n))
        self._k = config.k
        self._rng = rng

    def next_guess(self) -> frozenset[int]:
        picked = self._rng.sample(self._pool, self._k)
        for door in picked:
            self._pool.remove(door)
        return frozenset(picked)

    def observe(self, guess, revealed):
        pass


def fresh_doors_searcher(config: GameConfig) -> FreshDoorsSearcher:
    return FreshDoorsSearcher(config)


@dataclass(frozen=True)
class StayTableSearcher(SearcherStrategy):
    """Table-driven searcher for the multi-occupancy game.

    Round one guesses k fresh doors uniformly. After a find with diagram
    lambda, it guesses the current door plus k-1 fresh doors with the
    table's stay probability, and k fresh doors otherwise; fresh subsets
    are uniform, and fresh means never guessed in any round.
    """

    config: GameConfig
    table: StayTable
    name: str = "ptable"
    door_symmetric: bool = True

    def __post_init__(self):
        if self.config.occupancy != MULTI:
            raise ValueError("stay-table play is defined for the multi-occupancy game")
        if (self.table.n, self.table.d, self.table.k) != (self.config.n, self.config.d, self.config.k):
            raise ValueError(
                f"table built for (n={self.table.n}, d={self.table.d}, k={self.table.k}), "
                f"config wants (n={self.config.n}, d={self.config.d}, k={self.config.k})"
            )
        _validate_reachable(self.config, self.table)

    def guess_distribution(self, history: History) -> GuessDistribution:
        n, k = self.config.n, self.config.k
        if not history:
            p = Fraction(1, comb(n, k))
            return [(frozenset(c), p) for c in combinations(range(n), k)]
        counts = discovery_counts(history)
        if sum(counts) >= self.config.d:
            raise ValueError("game already won, no further guess")
        if any(revealed is None for _, revealed in history):
            raise ValueError("game already lost, no further guess")
        current = next(r for _, r in reversed(history) if r is not None)
        stay = self.table.stay(counts)
        fresh = sorted(set(range(n)) - guessed_doors(history))
        entries: GuessDistribution = []
        if stay > 0:
            if len(fresh) < k - 1:
                raise DoorBudgetError("ran out of fresh doors on the stay branch")
            share = stay / comb(len(fresh), k - 1)
            for c in combinations(fresh, k - 1):
                entries.append((frozenset((current,) + c), share))
        if stay < 1:
            if len(fresh) < k:
                raise DoorBudgetError("ran out of fresh doors on the move branch")
            share = (1 - stay) / comb(len(fresh), k)
            for c in combinations(fresh, k):
                entries.append((frozenset(c), share))
        return entries

    def sampler(self, rng) -> SearcherSampler:
        return _StaySampler(self.config, self.table, rng)


class _StaySampler(SearcherSampler):
    def __init__(self, config: GameConfig, table: StayTable, rng):
        self._k = config.k
        self._table = table
        self._rng = rng
        self._fresh = list(range(config.n))
        self._counts: list[int] = []
        self._doors: list[int] = []

    def next_guess(self) -> frozenset[int]:
        rng, k = self._rng, self._k
        if not self._doors:
            picked = rng.sample(self._fresh, k)
        else:
            p = self._table.stay(tuple(self._counts))
            if p == 1 or (p > 0 and rng.randrange(p.denominator) < p.numerator):
                picked = rng.sample(self._fresh, k - 1)
                picked.append(self._doors[-1])
            else:
                picked = rng.sample(self._fresh, k)
        for door in picked:
            if door in self._fresh:
                self._fresh.remove(door)
        return frozenset(picked)

    def observe(self, guess, revealed):
        if revealed is None:
            return
        if self._doors and revealed == self._doors[-1]:
            self._counts[-1] += 1
        elif revealed in self._doors:
            self._counts[self._doors.index(revealed)] += 1
        else:
            self._doors.append(revealed)
            self._counts.append(1)


def _validate_reachable(config: GameConfig, table: StayTable) -> None:
    """Walk every diagram state the table can reach and check it is playable.

    Each state pairs the discovery-order counts with the number of doors
    guessed so far; a branch with positive probability must find enough
    fresh doors, and every reachable decision state must have an entry.
    """
    n, d, k = config.n, config.d, config.k
    start = ((1,), k)
    seen = {start}
    stack = [start]
    while stack:
        counts, used = stack.pop()
        if sum(counts) >= d:
            continue
        if any(counts[i] < counts[i + 1] for i in range(len(counts) - 1)):
            # Discovery counts stopped being a diagram, so no partition key
            # can cover this state; only tables that stay at a flat diagram
            # with two rounds left can reach it.
            raise MissingDiagramError(counts)
        stay = table.stay(counts)  # raises MissingDiagramError when absent
        successors: list[tuple[tuple[int, ...], int]] = []
        if stay > 0:
            if used + (k - 1) > n:
                raise DoorBudgetError(
                    f"stay branch at {counts} needs {k - 1} fresh doors, only {n - used} left"
                )
            grown = counts[:-1] + (counts[-1] + 1,)
            successors.append((grown, used + k - 1))
            if k > 1:
                successors.append((counts + (1,), used + k - 1))
        if stay < 1:
            if used + k > n:
                raise DoorBudgetError(
                    f"move branch at {counts} needs {k} fresh doors, only {n - used} left"
                )
            successors.append((counts + (1,), used + k))
        for state in successors:
            if state not in seen:
                seen.add(state)
                stack.append(state)


def stay_table_searcher(config: GameConfig, table: StayTable) -> StayTableSearcher:
    return StayTableSearcher(config, table)


def scaled_searcher(config: GameConfig) -> StayTableSearcher:
    """The k-scaled table strategy for the config's size."""
    table = scaled_stay_table(config.n, config.d, config.k)
    return StayTableSearcher(config, table, name="ptable-scaled")


def mimic_searcher(config: GameConfig) -> StayTableSearcher:
    """The guess-one reference strategy: shadow a uniformly sampled plan.

    Behaviorally it stays on the current door with the base stay
    probability and otherwise moves to a uniform fresh door, which is the
    k=1 table strategy.
    """
    if config.k != 1:
        raise ValueError("the mimic strategy is defined for k = 1")
    if config.occupancy != MULTI:
        raise ValueError("the mimic strategy is defined for the multi-occupancy game")
    table = scaled_stay_table(config.n, config.d, 1)
    return StayTableSearcher(config, table, name="mu-mimic")


@dataclass(frozen=True)
class TabularSearcher(SearcherStrategy):
    """Explicit per-history distributions, for tests and custom play."""

    config: GameConfig
    rules: Mapping[History, tuple[tuple[frozenset[int], Fraction], ...]]
    name: str = "tabular"
    door_symmetric: bool = field(default=False)

    def guess_distribution(self, history: History) -> GuessDistribution:
        try:
            return list(self.rules[history])
        except KeyError:
            raise ValueError(f"no rule for history {history}") from None
