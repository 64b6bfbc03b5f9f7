"""Travel evaluation, the travel lower bound, flip budget, and factor math.

Travel semantics: a team leaves home, drives directly between consecutive
away venues, and returns home as soon as it has a home game (and at the end
of the tournament).  The lower bound 2*W_t + n*W_m combines every pair of
venues twice (W_t) with n traversals of the minimum matching (W_m).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import TTP2Error, ValidationError
from .instance import Instance
from .matching import PairMatching, min_weight_perfect_matching

BOUND_SLACK = 1e-9   # floating slack when checking the ratio bound


@dataclass(frozen=True)
class Itinerary:
    """Venue path of one team: home first, one venue per day, then the
    implicit return home folded into ``travel``."""

    team: int
    venues: tuple[int, ...]
    travel: float


@dataclass(frozen=True)
class EvaluationReport:
    n: int
    total_travel: float
    lower_bound: float
    ratio: Optional[float]          # None when the lower bound is zero
    flips: Optional[int]
    flip_budget: Optional[float]
    factor_ours: Optional[float]
    factor_xiao_kou: Optional[float]
    W_t: float
    W_m: float
    valid: bool
    bound_satisfied: Optional[bool]
    per_team: tuple[Itinerary, ...]


def _fixture_ends(fx) -> tuple[int, int]:
    if hasattr(fx, "away"):
        return fx.away, fx.home
    away, home = fx
    return int(away), int(home)


def _days_of(sched) -> Sequence:
    if isinstance(sched, dict):
        return sched.get("days", [])
    return sched.days if hasattr(sched, "days") else sched


def team_itinerary(sched, inst: Instance, team: int) -> Itinerary:
    """Venue sequence and travel for one team.

    A day where the team does not appear keeps it where it is (only
    relevant for partial schedules; complete schedules have no byes).
    """
    if not 0 <= team < inst.n:
        raise ValidationError(f"team {team} out of range for n={inst.n}")
    venues = [team]
    at = team
    for day in _days_of(sched):
        spot = None
        for fx in day:
            away, home = _fixture_ends(fx)
            if team == away:
                spot = home
            elif team == home:
                spot = team
            else:
                continue
            break
        if spot is not None:
            at = spot
        venues.append(at)
    dist = inst.dist
    legs = [dist[venues[i], venues[i + 1]] for i in range(len(venues) - 1)]
    legs.append(dist[venues[-1], team])   # final return home
    return Itinerary(team=team, venues=tuple(venues), travel=math.fsum(legs))


def total_travel(sched, inst: Instance) -> float:
    """Sum of all team travels; summed in team order for determinism."""
    sched_n = getattr(sched, "n", None)
    if sched_n is not None and sched_n != inst.n:
        raise ValidationError(f"schedule n={sched_n} does not match instance n={inst.n}")
    return math.fsum(team_itinerary(sched, inst, t).travel for t in range(inst.n))


def pairwise_sum(inst: Instance) -> float:
    """W_t: the sum of all inter-venue distances (each unordered pair once)."""
    n = inst.n
    return math.fsum(float(inst.dist[i, j]) for i in range(n) for j in range(i + 1, n))


def lower_bound(inst: Instance, team_matching: PairMatching) -> float:
    """2*W_t + n*W_m, the travel floor every feasible schedule obeys on
    metric instances."""
    w_t = pairwise_sum(inst)
    return 2.0 * w_t + inst.n * team_matching.weight


def _ceil_log2(x: int) -> int:
    if x < 1:
        raise TTP2Error(f"ceil_log2 needs a positive integer, got {x}")
    return (x - 1).bit_length()


def flip_budget(n: int) -> float:
    """F_n = (n/8) * ceil(log2(n/4)); schedules may use at most ceil(F_n)
    Type-2 blocks."""
    if n % 4 != 0 or n < 4:
        raise TTP2Error(f"flip budget needs 4 | n, got {n}")
    return n * _ceil_log2(n // 4) / 8.0


def factors_exact(n: int) -> tuple[Fraction, Fraction]:
    """Both approximation factors as exact rationals: this construction's
    and the benchmark (XK) it is compared against."""
    if n % 4 != 0 or n < 8:
        raise TTP2Error(f"factors need 4 | n and n >= 8, got {n}")
    ours = 1 + Fraction(_ceil_log2(n // 4) + 4, 2 * (n - 2))
    xk = 1 + Fraction(2, n - 2) + Fraction(2, n)
    return ours, xk


def factor_ours(n: int) -> float:
    return float(factors_exact(n)[0])


def factor_xiao_kou(n: int) -> float:
    return float(factors_exact(n)[1])


def evaluation_report(sched, inst: Instance) -> EvaluationReport:
    """All headline quantities for one schedule on one instance.

    The schedule may be invalid; the report then carries valid=False and the
    ratio loses its guarantee (it is still computed when the bound is > 0).
    """
    from .validator import validate_schedule   # local import keeps validator scheduler-free

    n = inst.n
    teams = min_weight_perfect_matching(inst.dist)
    per_team = tuple(team_itinerary(sched, inst, t) for t in range(n))
    total = math.fsum(it.travel for it in per_team)
    w_t = pairwise_sum(inst)
    lb = 2.0 * w_t + n * teams.weight
    ratio = (total / lb) if lb > 0 else None
    flips = getattr(sched, "flips", None)
    try:
        budget = flip_budget(n)
    except TTP2Error:
        budget = None
    if n % 4 == 0 and n >= 8:
        ours, xk = factors_exact(n)
        ours_f: Optional[float] = float(ours)
        xk_f: Optional[float] = float(xk)
    else:
        ours_f = xk_f = None
    valid = not validate_schedule(sched, n=n).violations
    bound_ok = None
    if ratio is not None and ours_f is not None:
        bound_ok = ratio <= ours_f + BOUND_SLACK
    return EvaluationReport(
        n=n, total_travel=total, lower_bound=lb, ratio=ratio, flips=flips,
        flip_budget=budget, factor_ours=ours_f, factor_xiao_kou=xk_f,
        W_t=w_t, W_m=teams.weight, valid=valid, bound_satisfied=bound_ok,
        per_team=per_team)


def report_to_dict(report: EvaluationReport) -> dict:
    return {
        "n": report.n,
        "total_travel": report.total_travel,
        "lower_bound": report.lower_bound,
        "ratio": report.ratio,
        "flips": report.flips,
        "flip_budget": report.flip_budget,
        "factor_ours": report.factor_ours,
        "factor_xiao_kou": report.factor_xiao_kou,
        "W_t": report.W_t,
        "W_m": report.W_m,
        "valid": report.valid,
        "bound_satisfied": report.bound_satisfied,
        "per_team": [{"team": it.team, "travel": it.travel} for it in report.per_team],
    }


def report_to_json(report: EvaluationReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def _fmt(x, width: int) -> str:
    if x is None:
        s = "n/a"
    elif isinstance(x, bool):
        s = "yes" if x else "no"
    elif isinstance(x, float):
        s = f"{x:.4f}"
    else:
        s = str(x)
    return s.rjust(width)


def format_report(report: EvaluationReport) -> str:
    """Aligned one-line summary table."""
    budget_ceil = None if report.flip_budget is None else math.ceil(report.flip_budget)
    cols = [
        ("n", report.n), ("LB", report.lower_bound), ("ALG", report.total_travel),
        ("ratio", report.ratio), ("flips", report.flips), ("ceilF", budget_ceil),
        ("factor_ours", report.factor_ours), ("factor_XK", report.factor_xiao_kou),
        ("valid", report.valid),
    ]
    widths = [max(len(name), len(_fmt(val, 0).strip())) for name, val in cols]
    header = "  ".join(name.rjust(w) for (name, _), w in zip(cols, widths))
    values = "  ".join(_fmt(val, w) for (_, val), w in zip(cols, widths))
    return header + "\n" + values + "\n"
