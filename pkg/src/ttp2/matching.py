"""Exact minimum-weight perfect matching on small complete graphs.

Two exact strategies cover the supported range:

* subset dynamic programming over "still unmatched" vertex sets, and
* depth-first branch-and-bound with a 2-opt-polished greedy upper bound
  and a Lagrangian lower bound built from dual-feasible vertex potentials
  (w[u][v] >= pi[u] + pi[v] for every edge).

Both produce the same canonical answer: a perfect matching of globally
minimum total weight, ties broken by the lexicographically smallest sorted
pair list, with the reported weight recomputed as math.fsum over the
chosen pairs.  On a complete graph with an even vertex count a minimum
maximal matching is necessarily perfect, so this solves that problem too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MatchingError
from .instance import SYMMETRY_TOL, Instance

DP_MAX = 16   # auto strategy switch; subset DP time/memory grow as 2^m
DP_HARD_MAX = 22
SIZE_MAX = 32
DUAL_ASCENT_SWEEPS = 6


@dataclass(frozen=True)
class PairMatching:
    """A perfect matching: sorted (lo, hi) pairs, sorted by first member."""

    pairs: tuple[tuple[int, int], ...]
    weight: float

    @property
    def size(self) -> int:
        return 2 * len(self.pairs)

    def covers(self, m: int) -> bool:
        seen = sorted(v for pair in self.pairs for v in pair)
        return seen == list(range(m))


@dataclass(frozen=True)
class SuperGraph:
    """Complete graph on the matched pairs; entry (i, j) = sum of the four
    cross distances between the members of pair i and pair j."""

    m: int
    weight: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weight, dtype=float)
        if w.shape != (self.m, self.m):
            raise MatchingError(f"super graph weight must be {self.m}x{self.m}, got {w.shape}")
        w.flags.writeable = False
        object.__setattr__(self, "weight", w)


def _validated_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise MatchingError(f"weight matrix must be square, got shape {w.shape}")
    m = w.shape[0]
    if m % 2 != 0 or m < 2:
        raise MatchingError(f"vertex count must be even and >= 2, got {m}")
    if m > SIZE_MAX:
        raise MatchingError(f"vertex count {m} exceeds supported maximum {SIZE_MAX}")
    if not np.all(np.isfinite(w)):
        raise MatchingError("weight matrix contains non-finite entries")
    off = ~np.eye(m, dtype=bool)
    if np.any(w[off] < 0):
        raise MatchingError("weight matrix contains negative entries")
    if np.abs(w - w.T).max(initial=0.0) > SYMMETRY_TOL:
        raise MatchingError("weight matrix is not symmetric within tolerance")
    return (w + w.T) / 2.0


def min_weight_perfect_matching(weights, algorithm: str = "auto") -> PairMatching:
    """Globally minimum-weight perfect matching with deterministic tie-break.

    ``algorithm`` is ``auto`` (size-based choice), ``dp``, or ``bnb``;
    the explicit names exist so tests can force either path.
    """
    w = _validated_weights(weights)
    m = w.shape[0]
    if algorithm == "auto":
        algorithm = "dp" if m <= DP_MAX else "bnb"
    if algorithm == "dp":
        if m > DP_HARD_MAX:
            raise MatchingError(f"subset DP limited to m <= {DP_HARD_MAX}, got {m}")
        pairs = _solve_dp(w, m)
    elif algorithm == "bnb":
        pairs = _solve_bnb(w, m)
    else:
        raise MatchingError(f"unknown algorithm {algorithm!r}, expected auto/dp/bnb")
    weight = math.fsum(float(w[i, j]) for i, j in pairs)
    return PairMatching(pairs=tuple(pairs), weight=weight)


def build_super_graph(inst: Instance, teams: PairMatching) -> SuperGraph:
    """Collapse matched team pairs into super-teams; edge weight is the sum
    of the four cross distances (the quantity the final-level bound sums)."""
    if not teams.covers(inst.n):
        raise MatchingError(f"team matching does not cover all {inst.n} teams")
    m = inst.n // 2
    d = inst.dist
    w = np.zeros((m, m))
    for i in range(m):
        a1, a2 = teams.pairs[i]
        for j in range(i + 1, m):
            b1, b2 = teams.pairs[j]
            w[i, j] = w[j, i] = d[a1, b1] + d[a1, b2] + d[a2, b1] + d[a2, b2]
    return SuperGraph(m=m, weight=w)


def super_pair_matching(sg: SuperGraph) -> PairMatching:
    """Minimum-weight perfect matching on the super graph (m = n/2 <= 16,
    always on the DP path)."""
    if sg.m % 2 != 0:
        raise MatchingError(f"super graph has odd vertex count {sg.m}")
    return min_weight_perfect_matching(sg.weight)


# --- subset dynamic programming -------------------------------------------
#
# g[S] = minimum weight to perfectly match the vertex set S, where the
# transition always matches S's lowest vertex v against each other u in S.
# States with lowest set bit v depend only on states whose lowest set bit
# is larger, so batches run with v descending and stay fully vectorized.

def _solve_dp(w: np.ndarray, m: int) -> list[tuple[int, int]]:
    full = (1 << m) - 1
    g = np.full(1 << m, np.inf)
    g[0] = 0.0
    for v in range(m - 2, -1, -1):
        free = range(v + 1, m)
        k = np.arange(1 << (m - 1 - v), dtype=np.int64)
        masks = np.full(k.shape, 1 << v, dtype=np.int64)
        for t, b in enumerate(free):
            masks |= ((k >> t) & 1) << b
        for u in range(v + 1, m):
            with_u = masks[(masks >> u) & 1 == 1]
            rest = with_u ^ ((1 << v) | (1 << u))
            g[with_u] = np.minimum(g[with_u], w[v, u] + g[rest])
    if not np.isfinite(g[full]):
        raise MatchingError("internal: dp found no perfect matching")

    # Walk: v is forced (lowest unmatched); the smallest u whose candidate
    # value equals g[S] bit-for-bit extends a lex-smallest optimal matching.
    pairs: list[tuple[int, int]] = []
    S = full
    while S:
        v = (S & -S).bit_length() - 1
        rest = S & ~(1 << v)
        probe = rest
        while probe:
            u = (probe & -probe).bit_length() - 1
            probe &= probe - 1
            S2 = S ^ ((1 << v) | (1 << u))
            if g[S] == w[v, u] + g[S2]:
                pairs.append((v, u))
                S = S2
                break
        else:
            raise MatchingError("internal: dp reconstruction failed")
    return pairs


# --- branch and bound ------------------------------------------------------

def _dual_potentials(wl: list[list[float]], m: int) -> list[float]:
    """Vertex potentials with w[u][v] >= pi[u] + pi[v] on every edge.

    Seeded with half the cheapest incident edge (always feasible) and
    raised by coordinate ascent: pi[v] <- min over u of (w - pi[u]), which
    keeps feasibility and never decreases any coordinate.  The sum of
    potentials over any vertex subset lower-bounds the cost of perfectly
    matching that subset.
    """
    pi = [0.5 * min(wl[v][u] for u in range(m) if u != v) for v in range(m)]
    for _ in range(DUAL_ASCENT_SWEEPS):
        moved = False
        for v in range(m):
            slack = min(wl[v][u] - pi[u] for u in range(m) if u != v)
            if slack > pi[v]:
                pi[v] = slack
                moved = True
        if not moved:
            break
    return pi


def _solve_bnb(w: np.ndarray, m: int) -> list[tuple[int, int]]:
    wl = [[float(x) for x in row] for row in w]
    pi = _dual_potentials(wl, m)
    # reduced costs are nonnegative up to rounding; the bound for matching
    # the free set R is sum(pi over R) + half the sum of each free vertex's
    # cheapest reduced edge into R
    rl = [[wl[v][u] - pi[v] - pi[u] for u in range(m)] for v in range(m)]
    order = [sorted((u for u in range(m) if u != v), key=lambda u: (rl[v][u], u))
             for v in range(m)]
    full = (1 << m) - 1
    pi_full = math.fsum(pi)

    lower_memo: dict[int, float] = {}

    def lower(R: int, pi_free: float) -> float:
        cached = lower_memo.get(R)
        if cached is not None:
            return cached
        total = 0.0
        scan = R
        while scan:
            v = (scan & -scan).bit_length() - 1
            scan &= scan - 1
            for u in order[v]:
                if (R >> u) & 1:
                    total += rl[v][u]
                    break
        bound = pi_free + total * 0.5
        lower_memo[R] = bound
        return bound

    def canon_value(pairs: list[tuple[int, int]]) -> float:
        # reference accumulation order: pair weights added with the lower
        # endpoint increasing, which is exactly how any root-to-leaf path
        # in the lex phase accumulates
        total = 0.0
        for v, u in sorted(pairs):
            total = total + wl[v][u]
        return total

    # greedy seed, then 2-opt polish (re-pair two pairs when cheaper)
    seed: list[tuple[int, int]] = []
    R = full
    while R:
        v = (R & -R).bit_length() - 1
        u = next(u for u in order[v] if (R >> u) & 1)
        seed.append((v, u))
        R ^= (1 << v) | (1 << u)
    best = canon_value(seed)

    def polish_step() -> bool:
        # first improving re-pairing of two pairs, if any
        nonlocal best, seed
        for i in range(len(seed)):
            a, b = seed[i]
            for j in range(i + 1, len(seed)):
                c, d = seed[j]
                for p, q in (((a, c), (b, d)), ((a, d), (b, c))):
                    cand = list(seed)
                    cand[i] = tuple(sorted(p))
                    cand[j] = tuple(sorted(q))
                    val = canon_value(cand)
                    if val < best:
                        best, seed = val, cand
                        return True
        return False

    while polish_step():
        pass

    # phase 1: exact minimum weight.  Branch on the free vertex with the
    # largest regret (gap between its two cheapest reduced edges), children
    # in reduced-cost order; a subtree is dropped when it provably cannot
    # beat the incumbent, which is always an achieved matching value.
    def dfs_value(R: int, acc: float, pi_free: float,
                  chosen: list[tuple[int, int]]) -> None:
        nonlocal best
        if R == 0:
            val = canon_value(chosen)
            if val < best:
                best = val
            return
        # one scan yields both the bound term and the branch vertex
        branch_v, branch_gap = -1, -1.0
        total = 0.0
        scan = R
        while scan:
            v = (scan & -scan).bit_length() - 1
            scan &= scan - 1
            first = second = None
            for u in order[v]:
                if (R >> u) & 1:
                    if first is None:
                        first = rl[v][u]
                    else:
                        second = rl[v][u]
                        break
            total += first
            gap = math.inf if second is None else second - first
            if gap > branch_gap:
                branch_v, branch_gap = v, gap
        bound = pi_free + total * 0.5
        lower_memo.setdefault(R, bound)
        if acc + bound >= best:
            return
        v = branch_v
        base = R ^ (1 << v)
        for u in order[v]:
            if (base >> u) & 1:
                chosen.append((v, u) if v < u else (u, v))
                dfs_value(base ^ (1 << u), acc + wl[v][u],
                          pi_free - pi[v] - pi[u], chosen)
                chosen.pop()

    dfs_value(full, 0.0, pi_full, [])
    target = best

    # phase 2: first leaf, in lexicographic pair order, whose path value
    # equals the phase-1 optimum exactly.  Any root-to-leaf path adds pair
    # weights in increasing-v order, so equal pair sets accumulate to
    # bit-identical values across both phases.  The prune carries a tiny
    # margin because the bound can round a few ulps above a tight
    # completion, which would otherwise cut off the optimal path itself.
    found: list[tuple[int, int]] | None = None
    fuzz = 1e-12 * max(1.0, abs(target))

    def dfs_lex(R: int, acc: float, pi_free: float,
                chosen: list[tuple[int, int]]) -> bool:
        nonlocal found
        if R == 0:
            if acc == target:
                found = list(chosen)
                return True
            return False
        if acc + lower(R, pi_free) > target + fuzz:
            return False
        v = (R & -R).bit_length() - 1
        base = R ^ (1 << v)
        probe = base
        while probe:
            u = (probe & -probe).bit_length() - 1
            probe &= probe - 1
            chosen.append((v, u))
            if dfs_lex(base ^ (1 << u), acc + wl[v][u],
                       pi_free - pi[v] - pi[u], chosen):
                return True
            chosen.pop()
        return False

    if not dfs_lex(full, 0.0, pi_full, []):
        raise MatchingError("internal: tie-break search lost the optimum")
    return found
