"""Travel accounting, bounds, factors, and the evaluation report."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from ttp2 import (
    Instance,
    PairMatching,
    SuperMatch,
    TTP2Error,
    ValidationError,
    build_schedule,
    evaluation_report,
    expand_block,
    factor_ours,
    factor_xiao_kou,
    factors_exact,
    flip_budget,
    format_report,
    generate_instance,
    lower_bound,
    min_weight_perfect_matching,
    pairwise_sum,
    report_to_json,
    team_itinerary,
    total_travel,
)
from ttp2.oracle import sample_valid_schedules

from helpers import block_as_days


UNIT4 = Instance(n=4, dist=np.ones((4, 4)) - np.eye(4))


def _t3_days():
    sm = SuperMatch(a_pair=0, b_pair=1, block_type=3)
    return block_as_days(expand_block(sm, [(0, 1), (2, 3)], start_day=0))


# --- itineraries -------------------------------------------------------------


def test_itinerary_of_a1_through_type3_block():
    it = team_itinerary(_t3_days(), UNIT4, 0)
    # pattern aahhah: away at B1, away at A2, two home days, away at B2, home
    assert it.venues == (0, 2, 1, 0, 0, 3, 0)
    assert it.travel == pytest.approx(5.0)


def test_itinerary_with_no_games_stays_home():
    it = team_itinerary([], UNIT4, 2)
    assert it.venues == (2,)
    assert it.travel == 0.0


def test_itinerary_team_range_check():
    with pytest.raises(ValidationError, match="out of range"):
        team_itinerary([], UNIT4, 4)


def test_total_travel_unit_blocks():
    assert total_travel(_t3_days(), UNIT4) == pytest.approx(20.0)


def test_total_travel_zero_matrix():
    zero = Instance(n=4, dist=np.zeros((4, 4)))
    assert total_travel(_t3_days(), zero) == 0.0


def test_total_travel_rejects_mismatched_n():
    s = build_schedule(generate_instance(8, kind="euclidean", seed=0))
    inst12 = generate_instance(12, kind="euclidean", seed=0)
    with pytest.raises(ValidationError, match="does not match"):
        total_travel(s, inst12)


def test_total_travel_permutation_invariant():
    inst = generate_instance(8, kind="euclidean", seed=5)
    s = build_schedule(inst)
    days = [[(f.away, f.home) for f in day] for day in s.days]
    perm = [3, 7, 1, 0, 6, 2, 5, 4]
    pdays = [[(perm[a], perm[h]) for a, h in day] for day in days]
    pdist = inst.dist[np.ix_(np.argsort(perm), np.argsort(perm))]
    pinst = Instance(n=8, dist=pdist)
    assert total_travel(pdays, pinst) == pytest.approx(
        total_travel(days, inst), rel=1e-12)


# --- bounds -------------------------------------------------------------------


def test_pairwise_sum_by_hand():
    d = np.array([[0.0, 1.0, 2.0, 3.0],
                  [1.0, 0.0, 4.0, 5.0],
                  [2.0, 4.0, 0.0, 6.0],
                  [3.0, 5.0, 6.0, 0.0]])
    assert pairwise_sum(Instance(n=4, dist=d)) == 21.0


def test_lower_bound_unit_n4():
    teams = min_weight_perfect_matching(UNIT4.dist)
    # W_t = 6 unit pairs, W_m = 2: bound = 2*6 + 4*2 = 20
    assert pairwise_sum(UNIT4) == 6.0
    assert teams.weight == 2.0
    assert lower_bound(UNIT4, teams) == pytest.approx(20.0)


def test_lower_bound_scales_linearly():
    inst = generate_instance(8, kind="euclidean", seed=1)
    teams = min_weight_perfect_matching(inst.dist)
    scaled = Instance(n=8, dist=inst.dist * 4.0)
    steams = min_weight_perfect_matching(scaled.dist)
    assert lower_bound(scaled, steams) == pytest.approx(
        4.0 * lower_bound(inst, teams), rel=1e-12)


# --- flip budget and approximation factors --------------------------------------


@pytest.mark.parametrize("n,budget", [
    (8, 1.0), (12, 3.0), (16, 4.0), (20, 7.5), (24, 9.0), (28, 10.5), (32, 12.0),
])
def test_flip_budget_values(n, budget):
    assert flip_budget(n) == budget


def test_flip_budget_rejects_bad_n():
    with pytest.raises(TTP2Error, match="flip budget"):
        flip_budget(6)
    with pytest.raises(TTP2Error, match="flip budget"):
        flip_budget(0)


def test_factors_exact_small():
    ours, xk = factors_exact(8)
    assert ours == 1 + Fraction(5, 12)
    assert xk == 1 + Fraction(1, 3) + Fraction(1, 4)
    assert ours < xk


def test_factor_crossover_at_36():
    # ours is the smaller factor up to n=32 and loses at n=36
    for n in range(8, 33, 4):
        ours, xk = factors_exact(n)
        assert ours <= xk, n
    ours36, xk36 = factors_exact(36)
    assert ours36 > xk36
    assert ours36 == 1 + Fraction(2, 17)
    assert xk36 == 1 + Fraction(35, 306)


def test_factor_floats_match_rationals():
    assert factor_ours(32) == pytest.approx(1 + 7 / 60)
    assert factor_xiao_kou(32) == pytest.approx(1 + 31 / 240)


def test_factors_reject_bad_n():
    with pytest.raises(TTP2Error, match="factors"):
        factors_exact(6)
    with pytest.raises(TTP2Error, match="factors"):
        factors_exact(4)


# --- evaluation report ------------------------------------------------------------


def test_evaluation_report_constructed_schedule():
    inst = generate_instance(16, kind="euclidean", seed=2)
    s = build_schedule(inst)
    rep = evaluation_report(s, inst)
    assert rep.n == 16
    assert rep.valid is True
    assert rep.flips == s.flips
    assert rep.W_t == pytest.approx(pairwise_sum(inst))
    assert rep.lower_bound == pytest.approx(2 * rep.W_t + 16 * rep.W_m)
    assert rep.ratio == pytest.approx(rep.total_travel / rep.lower_bound)
    assert rep.ratio <= rep.factor_ours + 1e-9
    assert rep.bound_satisfied is True
    assert rep.flip_budget == 4.0
    assert len(rep.per_team) == 16


def test_evaluation_report_zero_matrix():
    inst = Instance(n=8, dist=np.zeros((8, 8)))
    s = build_schedule(inst)
    rep = evaluation_report(s, inst)
    assert rep.total_travel == 0.0
    assert rep.lower_bound == 0.0
    assert rep.ratio is None
    assert rep.bound_satisfied is None
    assert rep.valid is True


def test_evaluation_report_sampled_n6():
    inst = generate_instance(6, kind="euclidean", seed=4)
    sched, total = sample_valid_schedules(inst, count=1, seed=1)[0]
    rep = evaluation_report(sched, inst)
    assert rep.valid is True
    assert rep.total_travel == pytest.approx(total)
    assert rep.flip_budget is None       # budget needs 4 | n
    assert rep.factor_ours is None
    assert rep.factor_xiao_kou is None
    assert rep.bound_satisfied is None
    assert rep.ratio is not None and rep.ratio >= 1.0 - 1e-12


def test_evaluation_report_flags_invalid():
    inst = generate_instance(8, kind="euclidean", seed=0)
    s = build_schedule(inst)
    days = [[(f.away, f.home) for f in day] for day in s.days][:-1]
    rep = evaluation_report({"n": 8, "days": days}, inst)
    assert rep.valid is False
    assert rep.flips is None             # raw dict carries no flip count


def test_report_json_round_trip():
    inst = generate_instance(8, kind="euclidean", seed=3)
    s = build_schedule(inst)
    obj = json.loads(report_to_json(evaluation_report(s, inst)))
    assert obj["n"] == 8
    assert obj["valid"] is True
    assert len(obj["per_team"]) == 8
    assert obj["ratio"] == pytest.approx(obj["total_travel"] / obj["lower_bound"])


def test_format_report_layout():
    inst = generate_instance(8, kind="euclidean", seed=3)
    s = build_schedule(inst)
    text = format_report(evaluation_report(s, inst))
    header, values = text.strip().splitlines()
    for col in ("n", "LB", "ALG", "ratio", "flips", "ceilF", "valid"):
        assert col in header.split()
    assert "yes" in values.split()
    assert len(header.split()) == len(values.split())


def test_format_report_handles_missing_fields():
    inst = Instance(n=8, dist=np.zeros((8, 8)))
    s = build_schedule(inst)
    text = format_report(evaluation_report(s, inst))
    assert "n/a" in text  # ratio has no value on the zero matrix
