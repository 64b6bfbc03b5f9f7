"""Independent brute-force ground truth for tests and benchmarks.

Nothing here shares logic with the constructor: day slates are enumerated
directly and feasibility is enforced game by game, so agreement between
this module and the scheduler is meaningful evidence.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional

from .analysis import total_travel
from .blocks import Fixture
from .errors import MatchingError, OracleBudgetError, TTP2Error
from .instance import Instance
from .matching import PairMatching, _validated_weights
from .scheduler import Schedule

BRUTE_FORCE_MATCHING_MAX = 12
DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class OracleResult:
    optimum: float
    schedule: Schedule
    explored: int          # complete schedules examined
    optimal: bool = True   # False when a node budget cut the search short


def _all_pairings(teams: tuple[int, ...]) -> list[tuple[tuple[int, int], ...]]:
    if not teams:
        return [()]
    v, rest = teams[0], teams[1:]
    out = []
    for i, u in enumerate(rest):
        remainder = rest[:i] + rest[i + 1:]
        for tail in _all_pairings(remainder):
            out.append(((v, u),) + tail)
    return out


def _day_slates(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Every possible day: a perfect pairing of the teams with venues chosen.
    Slates are canonicalized (games sorted) and listed in lexicographic
    order, so exploration order is reproducible."""
    slates = set()
    for pairing in _all_pairings(tuple(range(n))):
        for venues in itertools.product((0, 1), repeat=len(pairing)):
            games = []
            for (i, j), flip in zip(pairing, venues):
                games.append((i, j) if flip == 0 else (j, i))  # (away, home)
            slates.add(tuple(sorted(games)))
    return sorted(slates)


class _Search:
    """Day-by-day DFS over slates with feasibility and cost pruning."""

    def __init__(self, inst: Instance, slate_order=None, node_budget: Optional[int] = None):
        self.inst = inst
        self.n = inst.n
        self.n_days = 2 * self.n - 2
        self.slates = _day_slates(self.n)
        self.order = slate_order or (lambda day, slates: slates)
        self.node_budget = node_budget
        self.nodes = 0
        self.explored = 0
        self.best_cost = math.inf
        self.best_days: Optional[list] = None
        self.exhausted = True

    def run(self, stop_after: Optional[int] = None) -> None:
        """DFS; ``stop_after`` ends the search after that many leaves."""
        self.stop_after = stop_after
        used = set()                      # ordered (away, home) already played
        venue = list(range(self.n))      # current location per team
        runs = [("", 0)] * self.n        # (home/away symbol, run length)
        try:
            self._dfs(0, used, (), venue, runs, 0.0, [])
        except _Stop:
            self.exhausted = False

    def _dfs(self, day, used, prev_pairs, venue, runs, cost, days_acc):
        if day == self.n_days:
            legs = cost
            for t in range(self.n):
                legs = legs + self.inst.dist[venue[t], t]
            self.explored += 1
            if legs < self.best_cost:
                self.best_cost = legs
                self.best_days = list(days_acc)
            if self.stop_after is not None and self.explored >= self.stop_after:
                raise _Stop
            return
        for slate in self.order(day, self.slates):
            self.nodes += 1
            if self.node_budget is not None and self.nodes > self.node_budget:
                raise _Stop
            ok = True
            pairs = []
            for away, home in slate:
                pair = (away, home) if away < home else (home, away)
                if (away, home) in used or pair in prev_pairs:
                    ok = False
                    break
                pairs.append(pair)
            if not ok:
                continue
            step = 0.0
            new_runs = list(runs)
            for away, home in slate:
                sym, length = runs[away]
                if sym == "a" and length >= 2:
                    ok = False
                    break
                new_runs[away] = ("a", length + 1 if sym == "a" else 1)
                sym, length = runs[home]
                if sym == "h" and length >= 2:
                    ok = False
                    break
                new_runs[home] = ("h", length + 1 if sym == "h" else 1)
                step = step + self.inst.dist[venue[away], home]
                step = step + self.inst.dist[venue[home], home]
            if not ok:
                continue
            new_cost = cost + step
            if new_cost >= self.best_cost:
                continue
            new_venue = list(venue)
            for away, home in slate:
                new_venue[away] = home
                new_venue[home] = home
            for away, home in slate:
                used.add((away, home))
            days_acc.append(slate)
            self._dfs(day + 1, used, frozenset(pairs), new_venue, new_runs,
                      new_cost, days_acc)
            days_acc.pop()
            for away, home in slate:
                used.discard((away, home))


class _Stop(Exception):
    pass


def _to_schedule(n: int, slate_days) -> Schedule:
    days = tuple(
        tuple(Fixture(away=a, home=h, day=d) for a, h in day)
        for d, day in enumerate(slate_days))
    return Schedule(n=n, days=days)


def brute_force_optimal(inst: Instance) -> OracleResult:
    """Exhaustive search at n=4: every constraint-feasible schedule is
    enumerated (with running-cost pruning), so the result is the certified
    global optimum."""
    if inst.n != 4:
        raise TTP2Error(f"exhaustive oracle supports n=4 only, got n={inst.n}")
    search = _Search(inst)
    search.run()
    if search.best_days is None:
        raise TTP2Error("internal: no feasible schedule found at n=4")
    sched = _to_schedule(inst.n, search.best_days)
    return OracleResult(optimum=total_travel(sched, inst), schedule=sched,
                        explored=search.explored, optimal=True)


def best_effort_optimal(inst: Instance,
                        node_budget: int = DEFAULT_NODE_BUDGET) -> OracleResult:
    """Budgeted variant for n in {4, 6}: returns the incumbent plus an
    ``optimal`` flag telling whether the search ran to completion."""
    if inst.n not in (4, 6):
        raise TTP2Error(f"best-effort oracle supports n in {{4, 6}}, got n={inst.n}")
    search = _Search(inst, node_budget=node_budget)
    search.run()
    if search.best_days is None:
        raise OracleBudgetError(
            f"no feasible schedule found within {node_budget} nodes")
    sched = _to_schedule(inst.n, search.best_days)
    return OracleResult(optimum=total_travel(sched, inst), schedule=sched,
                        explored=search.explored, optimal=search.exhausted)


def sample_valid_schedules(inst: Instance, count: int, seed: int = 0,
                           node_budget: int = DEFAULT_NODE_BUDGET
                           ) -> list[tuple[Schedule, float]]:
    """Feasible schedules from randomized backtracking (n <= 8).

    Each sample restarts the DFS with a freshly seeded slate shuffle and
    keeps the first complete schedule it reaches.
    """
    if inst.n % 2 != 0 or inst.n > 8:
        raise TTP2Error(f"sampler supports even n <= 8, got n={inst.n}")
    out = []
    for k in range(count):
        rng = random.Random(f"{seed}:{k}")

        def shuffled(day, slates, _rng=rng):
            order = list(slates)
            _rng.shuffle(order)
            return order

        search = _Search(inst, slate_order=shuffled, node_budget=node_budget)
        search.run(stop_after=1)
        if search.best_days is None:
            raise OracleBudgetError(
                f"sample {k}: no feasible schedule within {node_budget} nodes")
        sched = _to_schedule(inst.n, search.best_days)
        out.append((sched, total_travel(sched, inst)))
    return out


def brute_force_matching(weights) -> PairMatching:
    """Minimum-weight perfect matching by full (m-1)!! enumeration, with the
    same canonical tie-break as the fast solvers: enumeration visits pair
    lists in lexicographic order and keeps the first strict improvement."""
    w = _validated_weights(weights)
    m = w.shape[0]
    if m > BRUTE_FORCE_MATCHING_MAX:
        raise MatchingError(
            f"enumeration oracle limited to m <= {BRUTE_FORCE_MATCHING_MAX}, got {m}")
    best_weight = math.inf
    best_pairs: Optional[tuple] = None

    def rec(mask: int, pairs: list) -> None:
        nonlocal best_weight, best_pairs
        if mask == 0:
            weight = math.fsum(float(w[i, j]) for i, j in pairs)
            if weight < best_weight:
                best_weight = weight
                best_pairs = tuple(pairs)
            return
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        probe = rest
        while probe:
            u = (probe & -probe).bit_length() - 1
            probe &= probe - 1
            pairs.append((v, u))
            rec(rest ^ (1 << u), pairs)
            pairs.pop()

    rec((1 << m) - 1, [])
    assert best_pairs is not None
    return PairMatching(pairs=best_pairs, weight=best_weight)
