"""Ground-truth feasibility checks for double round-robin schedules with
home-stand/away-trip cap 2.

The checker is deliberately independent of the construction code: it accepts
raw day lists, parsed JSON objects, or Schedule values, and re-derives every
verdict from the fixtures alone.  All violations are reported, not just the
first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ValidationError

C1 = "C1_double_round_robin"
C2 = "C2_repeater"
C4 = "C4_max_run"
S_DAY_COUNT = "structural_day_count"
S_ONE_GAME = "structural_one_game_per_day"


@dataclass(frozen=True)
class Violation:
    constraint: str
    day: Optional[int]
    teams: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class ViolationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_constraint(self, constraint: str) -> list[Violation]:
        return [v for v in self.violations if v.constraint == constraint]


def _fixture_ends(fx) -> tuple[int, int]:
    if hasattr(fx, "away"):
        away, home = fx.away, fx.home
    elif isinstance(fx, dict):
        away, home = fx["away"], fx["home"]
    else:
        away, home = fx
    try:
        return int(away), int(home)
    except (TypeError, ValueError):
        raise ValidationError(f"malformed fixture {fx!r}") from None


def _normalize(sched, n: Optional[int]) -> tuple[int, list[list[tuple[int, int]]]]:
    if isinstance(sched, str):
        days = parse_day_list(sched)
        sched_n = None
    elif isinstance(sched, dict):
        days = [[_fixture_ends(fx) for fx in day] for day in sched.get("days", [])]
        sched_n = sched.get("n")
    elif hasattr(sched, "days"):
        days = [[_fixture_ends(fx) for fx in day] for day in sched.days]
        sched_n = getattr(sched, "n", None)
    else:
        days = [[_fixture_ends(fx) for fx in day] for day in sched]
        sched_n = None
    if n is None:
        n = sched_n
    if n is None:
        indices = [t for day in days for fx in day for t in fx]
        if not indices:
            raise ValidationError("cannot infer team count from an empty schedule")
        n = max(indices) + 1
    return int(n), days


def parse_day_list(text: str) -> list[list[tuple[int, int]]]:
    """Parse the plain-text day format: lines of 'day k: a@h a@h ...'
    (the 'day k:' prefix is optional; teams are 0-based integers)."""
    days = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" in line:
            prefix, line = line.split(":", 1)
            if not prefix.strip().lower().startswith("day"):
                raise ValidationError(f"unrecognized day prefix {prefix!r}")
        games = []
        for token in line.split():
            if "@" not in token:
                raise ValidationError(f"malformed game token {token!r} (expected away@home)")
            away, home = token.split("@", 1)
            try:
                games.append((int(away), int(home)))
            except ValueError:
                raise ValidationError(f"non-integer team in token {token!r}") from None
        days.append(games)
    return days


def validate_schedule(sched, n: Optional[int] = None) -> ViolationReport:
    """Check structure plus the three feasibility constraints.

    Malformed input (team out of range, team playing itself) raises; rule
    violations are collected into the report.
    """
    n, days = _normalize(sched, n)
    if n < 2:
        raise ValidationError(f"team count must be at least 2, got {n}")
    for d, day in enumerate(days):
        for away, home in day:
            if away == home:
                raise ValidationError(f"team {away} plays itself on day {d}")
            for t in (away, home):
                if not 0 <= t < n:
                    raise ValidationError(f"team {t} out of range on day {d} (n={n})")

    violations: list[Violation] = []
    expected_days = 2 * n - 2
    if len(days) != expected_days:
        violations.append(Violation(
            constraint=S_DAY_COUNT, day=None, teams=(),
            detail=f"{len(days)} days, expected {expected_days}"))

    # one game per team per day
    for d, day in enumerate(days):
        count = {t: 0 for t in range(n)}
        for away, home in day:
            count[away] += 1
            count[home] += 1
        for t, c in sorted(count.items()):
            if c != 1:
                violations.append(Violation(
                    constraint=S_ONE_GAME, day=d, teams=(t,),
                    detail=f"team {t} plays {c} games on day {d}"))

    # C1: each ordered (away, home) pair exactly once
    seen: dict[tuple[int, int], int] = {}
    for day in days:
        for game in day:
            seen[game] = seen.get(game, 0) + 1
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            c = seen.get((i, j), 0)
            if c != 1:
                violations.append(Violation(
                    constraint=C1, day=None, teams=(i, j),
                    detail=f"{i}@{j} occurs {c} times (expected 1)"))

    # C2: no pair meets on consecutive days (venue-blind)
    prev_pairs: set[tuple[int, int]] = set()
    for d, day in enumerate(days):
        pairs = {(min(a, h), max(a, h)) for a, h in day}
        for pair in sorted(pairs & prev_pairs):
            violations.append(Violation(
                constraint=C2, day=d, teams=pair,
                detail=f"teams {pair[0]} and {pair[1]} meet on days {d - 1} and {d}"))
        prev_pairs = pairs

    # C4: no 3 consecutive home or away days; one violation per run
    for t in range(n):
        run_symbol = ""
        run_len = 0
        for d, day in enumerate(days):
            symbol = ""
            for away, home in day:
                if t == away:
                    symbol = "a"
                elif t == home:
                    symbol = "h"
                else:
                    continue
                break
            if symbol and symbol == run_symbol:
                run_len += 1
            else:
                run_symbol, run_len = symbol, 1 if symbol else 0
            if run_len == 3:
                kind = "away" if symbol == "a" else "home"
                violations.append(Violation(
                    constraint=C4, day=d, teams=(t,),
                    detail=f"team {t} has 3 consecutive {kind} games ending day {d}"))
    return ViolationReport(violations=tuple(violations))
