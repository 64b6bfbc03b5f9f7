"""Schedule construction: two-level matching, level planning, flip placement.

Construction outline for n teams (4 | n, n >= 8), m = n/2 pairs:

1. Match the n teams into m pairs M_0..M_{m-1} (minimum-weight matching,
   lexicographic order), then match the m pairs into m/2 super-pairs N_i
   on the cross-distance super graph.
2. Plan m-1 levels, each a perfect matching of the pairs, forming a single
   round robin on pairs whose final level is exactly the N_i pairing.
3. 2-color the pairs A/B per level.  Every super-match must pair an A with
   a B; a Type-2 block swaps both participants' colors for the next level.
   A forward DP over colorings picks flip sets per level that keep every
   level properly colored with the fewest total flips.
4. Expand levels to fixtures: level k starts on day 4k; non-final levels
   are 4-day blocks, the final level is the 6-day block with the intra-pair
   games.  Day count is 4(m-2) + 6 = 2n-2.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .analysis import flip_budget
from .blocks import Fixture, SuperMatch, block_days, expand_block
from .errors import SchedulingError
from .instance import Instance
from .matching import (PairMatching, build_super_graph,
                       min_weight_perfect_matching, super_pair_matching)


@dataclass(frozen=True)
class LevelPlan:
    """One level: n/4 super-matches, labeled (round, level) 1-based."""

    round: int
    level: int
    super_matches: tuple[SuperMatch, ...]


@dataclass(frozen=True)
class RoleState:
    """Roles the pairs hold entering one level (index = pair index)."""

    roles: tuple[str, ...]


@dataclass(frozen=True)
class Schedule:
    n: int
    days: tuple[tuple[Fixture, ...], ...]
    levels: tuple[LevelPlan, ...] = ()
    team_pairs: Optional[PairMatching] = None
    super_pairs: Optional[PairMatching] = None
    flips: int = 0


# --- level template on "slots" ---------------------------------------------
#
# Levels are planned on abstract slots 0..m-1 and only relabeled to the
# actual pair indices at the end.  The generator recursively schedules a
# group (X, Y) of two ordered slot lists of equal size q:
#
# * q even: q complete-bipartite levels (shift 0..q-1), then the group
#   splits in two: X's even positions against X's odd positions, and their
#   shift-(q-1) partners crossed; the sub-levels run in parallel.
# * q odd: q-1 bipartite levels (shifts 0..q-2, leaving shift q-1 unplayed),
#   then q levels each holding one odd-circle round inside X, one inside Y,
#   and one of the reserved shift-(q-1) cross pairs.
# * q = 1: the single cross pair; it becomes part of the final level.
#
# The last level produced this way is a perfect matching (the template's
# natural super-pairing); every other pair of slots meets exactly once
# earlier, so the sequence is a single round robin.

def _group_levels(X: list[int], Y: list[int]) -> list[list[tuple[int, int]]]:
    q = len(X)
    if q % 2 == 0:
        levels = [[(X[k], Y[(k + shift) % q]) for k in range(q)] for shift in range(q)]
        partner = {X[k]: Y[(k + q - 1) % q] for k in range(q)}
        sub1 = _group_levels(X[0::2], X[1::2])
        sub2 = _group_levels([partner[x] for x in X[1::2]],
                             [partner[x] for x in X[0::2]])
        for l1, l2 in zip(sub1, sub2):
            levels.append(l1 + l2)
        return levels
    levels = [[(X[k], Y[(k + shift) % q]) for k in range(q)] for shift in range(q - 1)]
    for j in range(q):
        r = (j - 1) % q
        rp = (r + q - 1) % q
        level = [(X[(r + i) % q], X[(r - i) % q]) for i in range(1, (q - 1) // 2 + 1)]
        level += [(Y[(rp + i) % q], Y[(rp - i) % q]) for i in range(1, (q - 1) // 2 + 1)]
        level.append((X[r], Y[rp]))
        levels.append(level)
    return levels


def _round_sizes(n: int) -> tuple[int, ...]:
    """Levels per round: round i has ceil((n/2^i - 1)/2) of the m-1 levels."""
    m = n // 2
    sizes: list[int] = []
    total = 0
    i = 1
    while total < m - 1:
        numer = n - (1 << i)
        if numer <= 0:
            break
        c = -(-numer // (1 << (i + 1)))
        sizes.append(c)
        total += c
        i += 1
    if total != m - 1:
        raise SchedulingError(f"internal: round sizes {sizes} do not cover {m - 1} levels")
    return tuple(sizes)


def _canon_level(level) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((min(i, j), max(i, j)) for i, j in level))


# --- flip assignment --------------------------------------------------------

def _transition_choices(level_k, level_next, coloring: int):
    """Per-cycle flip options turning a proper coloring of level_k into a
    proper coloring of level_next.

    The union of two perfect matchings splits into alternating cycles; in
    each cycle the flip indicators of the level_k edges are chained by XOR
    constraints, leaving exactly two complementary solutions per cycle.
    """
    pk: dict[int, int] = {}
    for i, j in level_k:
        pk[i] = j
        pk[j] = i
    pn: dict[int, int] = {}
    for i, j in level_next:
        pn[i] = j
        pn[j] = i
    seen: set[int] = set()
    cycles = []
    for start in sorted(pk):
        if start in seen:
            continue
        ones: list[tuple[int, int]] = []   # edges flipped in the x(start)=0 solution
        zeros: list[tuple[int, int]] = []  # its complement within the cycle
        v, x = start, 0
        while True:
            u = pk[v]
            seen.add(v)
            seen.add(u)
            (ones if x else zeros).append((v, u) if v < u else (u, v))
            w = pn[u]
            same = ((coloring >> u) & 1) == ((coloring >> w) & 1)
            if w == start:
                if x ^ (1 if same else 0):
                    raise SchedulingError("internal: flip parity violated")
                break
            x ^= 1 if same else 0
            v = w
        cycles.append((tuple(sorted(ones)), tuple(sorted(zeros))))
    return cycles


def _apply_flips(coloring: int, flips) -> int:
    for i, j in flips:
        coloring ^= (1 << i) | (1 << j)
    return coloring


def _min_flip_plan(levels: Sequence[tuple[tuple[int, int], ...]], c0: int,
                   budget: int) -> tuple[tuple[tuple[tuple[int, int], ...], ...], list[int]]:
    """Forward DP over colorings; returns (flip set per non-final level,
    coloring entering each level).  Ties between equal-flip plans resolve to
    the lexicographically larger flip-edge path, which keeps the smallest
    matches unflipped."""
    for i, j in levels[0]:
        if ((c0 >> i) & 1) == ((c0 >> j) & 1):
            raise SchedulingError(f"initial roles do not 2-color level 1 pair ({i}, {j})")
    states: dict[int, tuple[int, tuple]] = {c0: (0, ())}
    for k in range(len(levels) - 1):
        nxt: dict[int, tuple[int, tuple]] = {}
        for coloring, (cost, path) in sorted(states.items()):
            cycles = _transition_choices(levels[k], levels[k + 1], coloring)
            for choice in itertools.product(*cycles):
                flips = tuple(sorted(e for part in choice for e in part))
                new_cost = cost + len(flips)
                if new_cost > budget:
                    continue
                new_col = _apply_flips(coloring, flips)
                new_path = path + (flips,)
                held = nxt.get(new_col)
                if held is None or new_cost < held[0] or \
                        (new_cost == held[0] and new_path > held[1]):
                    nxt[new_col] = (new_cost, new_path)
        if not nxt:
            raise SchedulingError(
                f"no flip assignment within budget {budget} at level {k + 2}; "
                f"levels={list(levels)}")
        states = nxt
    best: Optional[tuple[int, tuple]] = None
    for _, (cost, path) in sorted(states.items()):
        if best is None or cost < best[0] or (cost == best[0] and path > best[1]):
            best = (cost, path)
    best_path = best[1]
    colorings = [c0]
    for flips in best_path:
        colorings.append(_apply_flips(colorings[-1], flips))
    return best_path, colorings


@lru_cache(maxsize=None)
def _template(m: int):
    """Instance-independent per-size plan: slot levels, the template's final
    pairing, round sizes, flip sets, and per-level colorings (bit set = A)."""
    levels = tuple(_canon_level(lv) for lv in
                   _group_levels(list(range(0, m, 2)), list(range(1, m, 2))))
    if len(levels) != m - 1:
        raise SchedulingError(f"internal: produced {len(levels)} levels for m={m}")
    n = 2 * m
    c0 = sum(1 << s for s in range(0, m, 2))
    budget = math.ceil(flip_budget(n))
    flips, colorings = _min_flip_plan(levels, c0, budget)
    return levels, levels[-1], _round_sizes(n), flips, colorings


def _relabel_map(star_pairs, actual_pairs) -> dict[int, int]:
    """Slot -> pair-index bijection mapping the template's final pairing onto
    the actual super-pairs: k-th sorted pair to k-th sorted pair, min to min."""
    sp = sorted(tuple(sorted(p)) for p in star_pairs)
    ap = sorted(tuple(sorted(p)) for p in actual_pairs)
    sigma: dict[int, int] = {}
    for (s1, s2), (a1, a2) in zip(sp, ap):
        sigma[s1] = a1
        sigma[s2] = a2
    return sigma


def _check_n(n: int) -> None:
    if n % 4 != 0:
        raise SchedulingError(f"n must be divisible by 4, got {n}")
    if n < 8:
        raise SchedulingError(f"n must be at least 8, got {n}")


def _round_labels(rounds: Sequence[int]):
    labels = []
    for r, size in enumerate(rounds, start=1):
        labels.extend((r, l) for l in range(1, size + 1))
    return labels


def plan_levels(n: int, super_pairs: PairMatching) -> list[LevelPlan]:
    """Level pairings only (no types, no orientation): a single round robin
    on the n/2 pairs whose final level is exactly ``super_pairs``."""
    _check_n(n)
    m = n // 2
    if not super_pairs.covers(m):
        raise SchedulingError(f"super pairs do not form a perfect matching on {m} items")
    levels, star, rounds, _, _ = _template(m)
    sigma = _relabel_map(star, super_pairs.pairs)
    labels = _round_labels(rounds)
    out = []
    for (r, l), level in zip(labels, levels):
        matches = tuple(SuperMatch(a_pair=min(sigma[i], sigma[j]),
                                   b_pair=max(sigma[i], sigma[j]))
                        for i, j in level)
        out.append(LevelPlan(round=r, level=l,
                             super_matches=tuple(sorted(matches, key=lambda s: s.key))))
    return out


def default_initial_roles(level1: LevelPlan, m: int) -> tuple[str, ...]:
    """The convention visible in the worked examples: within each first-level
    super-match the lower-numbered pair takes the A role."""
    roles = [""] * m
    for sm in level1.super_matches:
        lo, hi = sm.key
        roles[lo] = "A"
        roles[hi] = "B"
    if "" in roles:
        raise SchedulingError("level 1 does not cover every pair")
    return tuple(roles)


def assign_flips(levels: Sequence[LevelPlan], n: int,
                 initial_roles: Optional[Sequence[str]] = None
                 ) -> tuple[list[LevelPlan], list[RoleState]]:
    """Type every super-match (final level Type-3, flipped ones Type-2, rest
    Type-1) and orient it A-vs-B, keeping the total flip count minimal.

    Raises if no assignment fits the ceil(F_n) budget, which cannot happen
    for construction-produced plans with their natural initial roles but can
    for hand-built plans or adversarial role choices.
    """
    _check_n(n)
    m = n // 2
    plain = [tuple(sorted(sm.key for sm in lp.super_matches)) for lp in levels]
    if initial_roles is None:
        initial_roles = default_initial_roles(levels[0], m)
    if len(initial_roles) != m or set(initial_roles) - {"A", "B"}:
        raise SchedulingError(f"initial roles must be {m} 'A'/'B' entries")
    c0 = sum(1 << i for i, role in enumerate(initial_roles) if role == "A")
    budget = math.ceil(flip_budget(n))
    flips, colorings = _min_flip_plan(plain, c0, budget)
    return _typed_levels(levels, plain, flips, colorings)


def _typed_levels(levels, plain, flips, colorings):
    """Apply a flip plan: orientation from the level's entering coloring,
    Type-2 where flipped, Type-3 throughout the final level."""
    out = []
    trace = []
    last = len(levels) - 1
    m = max(max(p) for p in plain[0]) + 1
    for k, lp in enumerate(levels):
        coloring = colorings[k]
        flipped = set(flips[k]) if k < last else set()
        matches = []
        for i, j in plain[k]:
            bit_i = (coloring >> i) & 1
            if bit_i == ((coloring >> j) & 1):
                raise SchedulingError(f"internal: level {k + 1} pair ({i},{j}) monochrome")
            a, b = (i, j) if bit_i else (j, i)
            btype = 3 if k == last else (2 if (i, j) in flipped else 1)
            matches.append(SuperMatch(a_pair=a, b_pair=b, block_type=btype))
        out.append(LevelPlan(round=lp.round, level=lp.level,
                             super_matches=tuple(matches)))
        trace.append(RoleState(roles=tuple(
            "A" if (coloring >> s) & 1 else "B" for s in range(m))))
    return out, trace


def count_flips(sched: Schedule) -> int:
    """Recount Type-2 blocks from the level metadata."""
    return sum(1 for lp in sched.levels for sm in lp.super_matches
               if sm.block_type == 2)


def build_schedule(inst: Instance) -> Schedule:
    """Full construction; deterministic for a given instance."""
    _check_n(inst.n)
    n = inst.n
    m = n // 2
    teams = min_weight_perfect_matching(inst.dist)
    super_pairs = super_pair_matching(build_super_graph(inst, teams))
    slot_levels, star, rounds, slot_flips, slot_colorings = _template(m)
    sigma = _relabel_map(star, super_pairs.pairs)

    # transport levels, flips, and colorings from slots to pair indices;
    # the slot-space coloring must ride along: re-deriving roles from pair
    # numbering after relabeling can cost extra flips
    labels = _round_labels(rounds)
    plain = []
    raw_levels = []
    for (r, l), level in zip(labels, slot_levels):
        pairs = tuple(sorted((min(sigma[i], sigma[j]), max(sigma[i], sigma[j]))
                             for i, j in level))
        plain.append(pairs)
        raw_levels.append(LevelPlan(round=r, level=l, super_matches=()))
    flips = tuple(tuple(sorted((min(sigma[i], sigma[j]), max(sigma[i], sigma[j]))
                               for i, j in fs)) for fs in slot_flips)
    colorings = []
    for c in slot_colorings:
        colorings.append(sum(1 << sigma[s] for s in range(m) if (c >> s) & 1))
    typed, _ = _typed_levels(raw_levels, plain, flips, colorings)

    pair_teams = {i: teams.pairs[i] for i in range(m)}
    day_count = 2 * n - 2
    days: list[list[Fixture]] = [[] for _ in range(day_count)]
    offset = 0
    for lp in typed:
        for sm in lp.super_matches:
            for fx in expand_block(sm, pair_teams, offset):
                days[fx.day].append(fx)
        offset += block_days(lp.super_matches[0].block_type)
    if offset != day_count:
        raise SchedulingError(f"internal: laid out {offset} days, expected {day_count}")
    total_flips = sum(1 for lp in typed for sm in lp.super_matches if sm.block_type == 2)
    return Schedule(n=n, days=tuple(tuple(day) for day in days),
                    levels=tuple(typed), team_pairs=teams,
                    super_pairs=super_pairs, flips=total_flips)


# --- serialization ----------------------------------------------------------

def schedule_to_dict(sched: Schedule) -> dict:
    obj: dict = {
        "n": sched.n,
        "days": [[{"away": f.away, "home": f.home} for f in day] for day in sched.days],
        "levels": [{"round": lp.round, "level": lp.level,
                    "blocks": [{"a_pair": sm.a_pair, "b_pair": sm.b_pair,
                                "type": sm.block_type} for sm in lp.super_matches]}
                   for lp in sched.levels],
        "flips": sched.flips,
    }
    for key, pm in (("team_pairs", sched.team_pairs), ("super_pairs", sched.super_pairs)):
        obj[key] = None if pm is None else {
            "pairs": [list(p) for p in pm.pairs], "weight": pm.weight}
    return obj


def schedule_to_json(sched: Schedule) -> str:
    return json.dumps(schedule_to_dict(sched), indent=2) + "\n"


def _pairs_from_dict(obj) -> Optional[PairMatching]:
    if obj is None:
        return None
    return PairMatching(pairs=tuple(tuple(p) for p in obj["pairs"]),
                        weight=float(obj["weight"]))


def schedule_from_dict(obj: dict) -> Schedule:
    try:
        n = int(obj["n"])
        days = tuple(
            tuple(Fixture(away=int(f["away"]), home=int(f["home"]), day=d)
                  for f in day)
            for d, day in enumerate(obj["days"]))
        levels = tuple(
            LevelPlan(round=int(lv["round"]), level=int(lv["level"]),
                      super_matches=tuple(
                          SuperMatch(a_pair=int(b["a_pair"]), b_pair=int(b["b_pair"]),
                                     block_type=b["type"]) for b in lv["blocks"]))
            for lv in obj.get("levels", []))
        return Schedule(n=n, days=days, levels=levels,
                        team_pairs=_pairs_from_dict(obj.get("team_pairs")),
                        super_pairs=_pairs_from_dict(obj.get("super_pairs")),
                        flips=int(obj.get("flips", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchedulingError(f"malformed schedule JSON: {exc}") from None


def schedule_from_json(text: str) -> Schedule:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchedulingError(f"invalid schedule JSON: {exc}") from None
    return schedule_from_dict(obj)


def format_level_table(sched: Schedule) -> str:
    """Per-level rows in the style 'M_1 --Type-1--> M_2' (1-based pairs)."""
    lines = []
    for lp in sched.levels:
        lines.append(f"Round {lp.round} Level {lp.level}:")
        for sm in sorted(lp.super_matches, key=lambda s: s.key):
            lines.append(f"  M_{sm.a_pair + 1} --Type-{sm.block_type}--> M_{sm.b_pair + 1}")
    return "\n".join(lines) + "\n"
