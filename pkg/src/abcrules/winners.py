"""Winner determination for counting rules and greedy Thiele variants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Sequence

from .model import CapacityError, Committee, DomainError, Profile, committees, mask_of
from .scoring import CountingFunction

DEFAULT_ENUMERATION_CAP = 2_000_000
DEFAULT_NODE_BUDGET = 5_000_000


@dataclass(frozen=True)
class RankedTiers:
    """A weak order over committees as a list of score tiers, best first.

    ``score`` is a Fraction for counting rules; rules ranked by some other
    key (e.g. a lexicographic pair) store that key instead.
    """

    tiers: tuple[tuple[Any, tuple[Committee, ...]], ...]

    @property
    def winners(self) -> tuple[Committee, ...]:
        return self.tiers[0][1]

    @property
    def top_score(self):
        return self.tiers[0][0]

    def levels(self) -> dict[Committee, int]:
        """Committee to tier index; lower is better."""
        return {w: i for i, (_, ws) in enumerate(self.tiers) for w in ws}

    def score_of(self, w: Committee):
        for s, ws in self.tiers:
            if w in ws:
                return s
        raise KeyError(w)

    def __len__(self):
        return sum(len(ws) for _, ws in self.tiers)


@dataclass(frozen=True)
class WinnerSet:
    committees: tuple[Committee, ...]
    score: Fraction


def check_size(m: int, k: int, allow_full: bool = False):
    if k < 1:
        raise DomainError("committee size must be positive")
    if k > m or (k == m and not allow_full):
        raise DomainError(f"committee size k={k} must be smaller than m={m}")


@lru_cache(maxsize=64)
def committee_masks(m: int, k: int) -> tuple[tuple[Committee, int], ...]:
    return tuple((w, mask_of(w)) for w in committees(m, k))


def rank_by_key(m: int, k: int, key: Callable[[Committee, int], Any],
                cap: int = DEFAULT_ENUMERATION_CAP) -> RankedTiers:
    """Group all committees into tiers by ``key(committee, mask)``, largest first."""
    if math.comb(m, k) > cap:
        raise CapacityError(
            f"C({m},{k}) = {math.comb(m, k)} committees exceeds the enumeration cap {cap}; "
            "use bnb_winners for the winning committees"
        )
    groups: dict[Any, list[Committee]] = {}
    for w, wm in committee_masks(m, k):
        groups.setdefault(key(w, wm), []).append(w)
    return RankedTiers(tuple((s, tuple(groups[s])) for s in sorted(groups, reverse=True)))


def enumerate_tiers(f: CountingFunction, a: Profile, cap: int = DEFAULT_ENUMERATION_CAP,
                    allow_full: bool = False) -> RankedTiers:
    """Score every size-``k`` committee exactly and group them into tiers."""
    if f.m != a.m:
        raise DomainError(f"counting function is for m={f.m}, profile has m={a.m}")
    check_size(a.m, f.k, allow_full)
    table, denom = f.scaled_table()
    ballots = a.masks()

    def key(w, wm):
        return sum(n * table[(bm & wm).bit_count()][y] for bm, y, n in ballots)

    tiers = rank_by_key(a.m, f.k, key, cap)
    return RankedTiers(tuple((Fraction(s, denom), ws) for s, ws in tiers.tiers))


def winners(f: CountingFunction, a: Profile, engine: str = "enum") -> WinnerSet:
    if engine == "enum":
        tiers = enumerate_tiers(f, a)
        return WinnerSet(tiers.winners, tiers.top_score)
    if engine == "bnb":
        return bnb_winners(f, a)
    raise DomainError(f"unknown engine {engine!r}")


def bnb_winners(f: CountingFunction, a: Profile, node_budget: int = DEFAULT_NODE_BUDGET,
                allow_full: bool = False) -> WinnerSet:
    """All maximum-score committees via depth-first branch and bound.

    Candidates are branched on in order of decreasing approval count.  The
    bound adds, per ballot, the largest gain reachable by placing at most
    the remaining number of seats on that ballot's still-undecided approved
    candidates; it is admissible for any table, monotone or not.  Nodes are
    pruned only when the bound is strictly below the incumbent, so ties
    survive.
    """
    if f.m != a.m:
        raise DomainError(f"counting function is for m={f.m}, profile has m={a.m}")
    m, k = a.m, f.k
    check_size(m, k, allow_full)
    table, denom = f.scaled_table()
    counts = a.approval_counts()
    order = sorted(range(1, m + 1), key=lambda c: (-counts[c], c))
    ballots = [(bm, y, n) for bm, y, n in a.masks()]
    nb = len(ballots)

    # gain[x][y][t]: best increase from x approved members by adding at most t more
    gain = [[[0] * (k + 1) for _ in range(m + 1)] for _ in range(k + 1)]
    for x in range(k + 1):
        for y in range(m + 1):
            best = 0
            for t in range(k + 1):
                if x + t <= k:
                    best = max(best, table[x + t][y] - table[x][y])
                gain[x][y][t] = best

    xs = [0] * nb
    avail = [(bm).bit_count() for bm, _, _ in ballots]
    cand_ballots = [[i for i, (bm, _, _) in enumerate(ballots) if c and bm >> (c - 1) & 1]
                    for c in range(m + 1)]
    best_score = None
    found: list[Committee] = []
    chosen: list[int] = []
    nodes = 0

    def current():
        return sum(ballots[i][2] * table[xs[i]][ballots[i][1]] for i in range(nb))

    def bound(cur, r):
        return cur + sum(ballots[i][2] * gain[xs[i]][ballots[i][1]][min(r, avail[i])]
                         for i in range(nb))

    def visit(pos: int, cur: int):
        nonlocal best_score, found, nodes
        nodes += 1
        if nodes > node_budget:
            raise CapacityError(f"branch and bound exceeded {node_budget} nodes")
        r = k - len(chosen)
        if r == 0:
            if best_score is None or cur > best_score:
                best_score, found = cur, [tuple(sorted(chosen))]
            elif cur == best_score:
                found.append(tuple(sorted(chosen)))
            return
        if m - pos < r:
            return
        if best_score is not None and bound(cur, r) < best_score:
            return
        c = order[pos]
        touched = cand_ballots[c]
        for i in touched:
            avail[i] -= 1
        # include c
        delta = 0
        for i in touched:
            _, y, n = ballots[i]
            delta += n * (table[xs[i] + 1][y] - table[xs[i]][y])
            xs[i] += 1
        chosen.append(c)
        visit(pos + 1, cur + delta)
        chosen.pop()
        for i in touched:
            xs[i] -= 1
        # exclude c
        visit(pos + 1, cur)
        for i in touched:
            avail[i] += 1

    visit(0, current())
    return WinnerSet(tuple(sorted(found)), Fraction(best_score, denom))


def thiele_weights(name: str, n: int) -> list[Fraction]:
    """First ``n`` weights of a named Thiele sequence."""
    key = name.lower().replace("_", "-")
    if key == "av":
        return [Fraction(1)] * n
    if key == "pav":
        return [Fraction(1, j) for j in range(1, n + 1)]
    if key == "cc":
        return [Fraction(1)] + [Fraction(0)] * (n - 1)
    if key == "sainte-lague":
        return [Fraction(1, 2 * j - 1) for j in range(1, n + 1)]
    if key == "square-root":
        return [Fraction(1, j * j) for j in range(1, n + 1)]
    raise DomainError(f"no named Thiele sequence {name!r}")


def _thiele_scorer(weights: Sequence, a: Profile, depth: int) -> Callable[[int], int]:
    if len(weights) < depth:
        raise DomainError(f"need at least {depth} weights, got {len(weights)}")
    ws = [Fraction(w) for w in weights[:depth]]
    denom = math.lcm(*(w.denominator for w in ws)) if ws else 1
    prefix = [0]
    for w in ws:
        prefix.append(prefix[-1] + int(w * denom))
    ballots = a.masks()
    return lambda wm: sum(n * prefix[(bm & wm).bit_count()] for bm, y, n in ballots)


def _members(mask: int) -> Committee:
    out = []
    c = 1
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return tuple(out)


def sequential_thiele(weights: Sequence, a: Profile, k: int) -> tuple[Committee, ...]:
    """Greedy Thiele: grow from the empty set, each step adding a candidate
    that maximizes the weighted score.  Every tie is branched on and all
    reachable committees are returned."""
    m = a.m
    check_size(m, k)
    scorer = _thiele_scorer(weights, a, k)
    frontier = {0}
    for _ in range(k):
        nxt = set()
        for wm in frontier:
            options = [wm | (1 << i) for i in range(m) if not wm >> i & 1]
            values = [scorer(o) for o in options]
            top = max(values)
            nxt.update(o for o, v in zip(options, values) if v == top)
        frontier = nxt
    return tuple(sorted(_members(wm) for wm in frontier))


def reverse_sequential_thiele(weights: Sequence, a: Profile, k: int) -> tuple[Committee, ...]:
    """Start from all candidates and repeatedly drop one whose removal loses
    the least weighted score, branching on ties.  Needs ``m`` weights since
    intermediate committees are larger than ``k``."""
    m = a.m
    check_size(m, k)
    scorer = _thiele_scorer(weights, a, m)
    frontier = {(1 << m) - 1}
    for _ in range(m - k):
        nxt = set()
        for wm in frontier:
            options = [wm & ~(1 << i) for i in range(m) if wm >> i & 1]
            values = [scorer(o) for o in options]
            top = max(values)
            nxt.update(o for o, v in zip(options, values) if v == top)
        frontier = nxt
    return tuple(sorted(_members(wm) for wm in frontier))

