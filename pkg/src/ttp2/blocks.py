"""The three building blocks a schedule is assembled from.

A super-match plays the four cross games between two matched pairs
A = {A1, A2} and B = {B1, B2} (plus, in the 6-day variant, both intra-pair
games of each side).  Three day layouts exist; "X@Y" below means X plays
away at Y's venue.  A1 is always the lower-numbered member of the A pair.

Type-1, 4 days, keeps both sides' roles:
    (A1@B1, A2@B2), (A1@B2, A2@B1), (B1@A1, B2@A2), (B1@A2, B2@A1)
Type-2, 4 days, swaps both sides' roles (a "flip"):
    (A1@B1, A2@B2), (B2@A1, B1@A2), (B1@A1, B2@A2), (A1@B2, A2@B1)
Type-3, 6 days, terminal (adds the intra-pair games):
    (A1@B1, A2@B2), (A1@A2, B2@B1), (B2@A1, B1@A2),
    (A2@A1, B1@B2), (A1@B2, A2@B1), (B1@A1, B2@A2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import SchedulingError

BLOCK_TYPES = (1, 2, 3)

# day layouts in slot indices 0=A1, 1=A2, 2=B1, 3=B2, as (away, home)
_A1, _A2, _B1, _B2 = 0, 1, 2, 3
_LAYOUT = {
    1: (
        ((_A1, _B1), (_A2, _B2)),
        ((_A1, _B2), (_A2, _B1)),
        ((_B1, _A1), (_B2, _A2)),
        ((_B1, _A2), (_B2, _A1)),
    ),
    2: (
        ((_A1, _B1), (_A2, _B2)),
        ((_B2, _A1), (_B1, _A2)),
        ((_B1, _A1), (_B2, _A2)),
        ((_A1, _B2), (_A2, _B1)),
    ),
    3: (
        ((_A1, _B1), (_A2, _B2)),
        ((_A1, _A2), (_B2, _B1)),
        ((_B2, _A1), (_B1, _A2)),
        ((_A2, _A1), (_B1, _B2)),
        ((_A1, _B2), (_A2, _B1)),
        ((_B1, _A1), (_B2, _A2)),
    ),
}

_SLOT_NAMES = ("A1", "A2", "B1", "B2")


def block_days(block_type: int) -> int:
    if block_type not in BLOCK_TYPES:
        raise SchedulingError(f"unknown block type {block_type!r}")
    return 6 if block_type == 3 else 4


@dataclass(frozen=True)
class SuperMatch:
    """One block: pair ``a_pair`` takes the away-first A role against
    ``b_pair``.  ``block_type`` is None while a plan is still untyped."""

    a_pair: int
    b_pair: int
    block_type: Optional[int] = None

    def __post_init__(self) -> None:
        if self.a_pair == self.b_pair:
            raise SchedulingError(f"super-match pairs a pair with itself: {self.a_pair}")
        if self.block_type is not None and self.block_type not in BLOCK_TYPES:
            raise SchedulingError(f"unknown block type {self.block_type!r}")

    @property
    def key(self) -> tuple[int, int]:
        """Orientation-free identity (lo, hi)."""
        return (self.a_pair, self.b_pair) if self.a_pair < self.b_pair else (self.b_pair, self.a_pair)


@dataclass(frozen=True)
class Fixture:
    away: int
    home: int
    day: int

    def __post_init__(self) -> None:
        if self.away == self.home:
            raise SchedulingError(f"team {self.away} cannot play itself (day {self.day})")


@dataclass(frozen=True)
class RoleProfile:
    """Home/away pattern of one slot inside a block."""

    slot: str                 # A1 / A2 / B1 / B2
    sequence: str             # e.g. "aahh"
    entry_requirement: str    # first symbol: the run the team must be free to start
    exit_role: str            # role carried into the next level ("A" or "B")


def expand_block(sm: SuperMatch, pairs: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
                 start_day: int) -> list[Fixture]:
    """Expand one super-match into fixtures on consecutive global days.

    ``pairs`` maps pair index -> its two team indices; the lower team of the
    A pair is A1, the lower team of the B pair is B1.
    """
    if sm.block_type is None:
        raise SchedulingError("cannot expand an untyped super-match")
    a = sorted(pairs[sm.a_pair])
    b = sorted(pairs[sm.b_pair])
    if len(a) != 2 or len(b) != 2:
        raise SchedulingError("each pair must hold exactly two teams")
    teams = (a[0], a[1], b[0], b[1])
    if len(set(teams)) != 4:
        raise SchedulingError(f"super-match pairs overlap: {a} vs {b}")
    out = []
    for offset, day_games in enumerate(_LAYOUT[sm.block_type]):
        for away_slot, home_slot in day_games:
            out.append(Fixture(away=teams[away_slot], home=teams[home_slot],
                               day=start_day + offset))
    return out


def block_profiles(block_type: int) -> dict[str, RoleProfile]:
    """Per-slot home/away strings, derived from the day layout."""
    days = _LAYOUT[block_type] if block_type in BLOCK_TYPES else None
    if days is None:
        raise SchedulingError(f"unknown block type {block_type!r}")
    out = {}
    for slot in range(4):
        seq = []
        for day_games in days:
            for away_slot, home_slot in day_games:
                if slot == away_slot:
                    seq.append("a")
                elif slot == home_slot:
                    seq.append("h")
        role_in = "A" if slot < 2 else "B"
        out[_SLOT_NAMES[slot]] = RoleProfile(
            slot=_SLOT_NAMES[slot],
            sequence="".join(seq),
            entry_requirement=seq[0],
            exit_role=block_role_transition(block_type, role_in),
        )
    return out


def block_role_transition(block_type: int, role_in: str) -> str:
    """Role carried to the next level: Type-1 keeps it, Type-2 swaps it,
    Type-3 is terminal (returned unchanged, never consumed)."""
    if role_in not in ("A", "B"):
        raise SchedulingError(f"unknown role {role_in!r}")
    if block_type == 1 or block_type == 3:
        return role_in
    if block_type == 2:
        return "B" if role_in == "A" else "A"
    raise SchedulingError(f"unknown block type {block_type!r}")


def block_travel(block_type: int, dists) -> float:
    """Total travel of all four teams through the block in isolation
    (each starts and ends at home).

    ``dists`` is a 4x4 symmetric matrix over slots (A1, A2, B1, B2), or any
    nested sequence indexable as dists[i][j].  Closed forms, verified against
    the itinerary trace:

    Type-3: 5 d(A1,B1) + 3 d(A2,B1) + 2 d(A1,A2) + 3 d(A1,B2) + 5 d(A2,B2) + 2 d(B1,B2)
    Type-2: 3 d(A1,B1) + 3 d(A2,B1) + 2 d(A1,A2) + 3 d(A1,B2) + 3 d(A2,B2)
    Type-1: twice the sum of all six pairwise distances
    """
    d = dists
    d01 = float(d[0][1]); d02 = float(d[0][2]); d03 = float(d[0][3])
    d12 = float(d[1][2]); d13 = float(d[1][3]); d23 = float(d[2][3])
    if block_type == 3:
        return math.fsum((5 * d02, 3 * d12, 2 * d01, 3 * d03, 5 * d13, 2 * d23))
    if block_type == 2:
        return math.fsum((3 * d02, 3 * d12, 2 * d01, 3 * d03, 3 * d13))
    if block_type == 1:
        return math.fsum((2 * d01, 2 * d02, 2 * d03, 2 * d12, 2 * d13, 2 * d23))
    raise SchedulingError(f"unknown block type {block_type!r}")
