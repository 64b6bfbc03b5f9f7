"""Feasibility checker: clean passes, surgical mutations, input formats."""

import pytest

from ttp2 import (
    ValidationError,
    build_schedule,
    generate_instance,
    parse_day_list,
    validate_schedule,
)
from ttp2.oracle import brute_force_optimal, sample_valid_schedules
from ttp2.validator import C1, C2, C4, S_DAY_COUNT, S_ONE_GAME


def _raw_days(sched):
    return [[(f.away, f.home) for f in day] for day in sched.days]


@pytest.fixture(scope="module")
def clean8():
    s = build_schedule(generate_instance(8, kind="euclidean", seed=0))
    return _raw_days(s)


# --- clean schedules pass -----------------------------------------------------


@pytest.mark.parametrize("n", [8, 12, 16])
def test_constructed_schedules_validate(n):
    s = build_schedule(generate_instance(n, kind="euclidean", seed=1))
    report = validate_schedule(s)
    assert report.ok
    assert report.violations == ()


def test_oracle_schedule_validates():
    inst = generate_instance(4, kind="euclidean", seed=2)
    res = brute_force_optimal(inst)
    assert validate_schedule(res.schedule).ok


def test_sampled_schedules_validate():
    inst = generate_instance(6, kind="euclidean", seed=3)
    for sched, _ in sample_valid_schedules(inst, count=3, seed=0):
        assert validate_schedule(sched).ok


# --- mutations are caught -------------------------------------------------------


def test_venue_flip_breaks_c1(clean8):
    days = [list(day) for day in clean8]
    a, h = days[0][0]
    days[0][0] = (h, a)
    report = validate_schedule(days, n=8)
    assert not report.ok
    c1 = report.by_constraint(C1)
    details = {v.teams: v.detail for v in c1}
    assert (h, a) in details and "2 times" in details[(h, a)]
    assert (a, h) in details and "0 times" in details[(a, h)]
    assert len(c1) == 2


def test_duplicated_day_breaks_c2(clean8):
    days = [list(day) for day in clean8]
    days[-1] = list(days[-2])
    report = validate_schedule(days, n=8)
    c2 = report.by_constraint(C2)
    assert len(c2) == 4  # all four pairings repeat
    assert all(v.day == len(days) - 1 for v in c2)
    assert report.by_constraint(C1)  # the displaced games are missing too


def test_three_day_run_breaks_c4():
    text = """
    day 1: 0@1
    day 2: 0@1
    day 3: 0@1
    """
    report = validate_schedule(text)
    c4 = report.by_constraint(C4)
    # team 0 away three straight days, team 1 home three straight days;
    # the violation is logged on the third day of the run, 0-based
    assert {(v.teams[0], v.day) for v in c4} == {(0, 2), (1, 2)}
    kinds = {v.teams[0]: v.detail for v in c4}
    assert "away" in kinds[0] and "home" in kinds[1]


def test_two_day_runs_are_fine():
    text = """
    0@1
    0@1
    """
    # repeated pair breaks C1/C2 but the two-day away stand is legal
    report = validate_schedule(text, n=2)
    assert report.by_constraint(C4) == []


def test_missing_day_breaks_day_count(clean8):
    days = [list(day) for day in clean8][:-1]
    report = validate_schedule(days, n=8)
    sd = report.by_constraint(S_DAY_COUNT)
    assert len(sd) == 1
    assert "13 days, expected 14" in sd[0].detail


def test_team_swap_breaks_one_game_per_day(clean8):
    days = [list(day) for day in clean8]
    (a, h) = days[0][0]
    (a2, h2) = days[0][1]
    days[0][1] = (a, h2)  # team a now plays twice on day 0, a2 not at all
    report = validate_schedule(days, n=8)
    og = report.by_constraint(S_ONE_GAME)
    by_team = {v.teams[0]: v.detail for v in og}
    assert f"team {a} plays 2 games" in by_team[a]
    assert f"team {a2} plays 0 games" in by_team[a2]
    assert all(v.day == 0 for v in og)


# --- input formats ----------------------------------------------------------------


def test_parse_day_list_formats():
    text = """
    # comment line
    day 1: 0@1 2@3

    Day 2: 1@0 3@2
    """
    days = parse_day_list(text)
    assert days == [[(0, 1), (2, 3)], [(1, 0), (3, 2)]]


def test_parse_day_list_without_prefix():
    assert parse_day_list("0@1 2@3\n1@0 3@2") == [
        [(0, 1), (2, 3)], [(1, 0), (3, 2)]]


def test_parse_day_list_bad_token():
    with pytest.raises(ValidationError, match="away@home"):
        parse_day_list("0-1")
    with pytest.raises(ValidationError, match="non-integer"):
        parse_day_list("a@b")
    with pytest.raises(ValidationError, match="prefix"):
        parse_day_list("row 1: 0@1")


def test_dict_form_accepted(clean8):
    obj = {"n": 8, "days": [[{"away": a, "home": h} for a, h in day]
                            for day in clean8]}
    assert validate_schedule(obj).ok


def test_n_inferred_from_teams(clean8):
    report = validate_schedule(clean8)  # no n given: max index + 1
    assert report.ok


def test_n_cross_check_mismatch(clean8):
    # declaring more teams makes every game involving them "missing"
    report = validate_schedule(clean8, n=10)
    assert not report.ok
    assert report.by_constraint(C1)


# --- malformed input raises ---------------------------------------------------------


def test_self_play_raises():
    with pytest.raises(ValidationError, match="plays itself"):
        validate_schedule([[(1, 1)]], n=4)


def test_out_of_range_raises():
    with pytest.raises(ValidationError, match="out of range"):
        validate_schedule([[(0, 9)]], n=4)


def test_tiny_n_raises():
    with pytest.raises(ValidationError, match="at least 2"):
        validate_schedule([[(0, 1)]], n=1)


def test_empty_schedule_needs_n():
    with pytest.raises(ValidationError, match="empty"):
        validate_schedule([])


def test_malformed_fixture_raises():
    with pytest.raises(ValidationError, match="malformed fixture"):
        validate_schedule([[("x", None)]], n=4)
