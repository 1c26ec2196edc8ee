"""Divisor apportionment, D'Hondt proportionality and lower quota.

Unapproved candidates (the ``remainder`` of a party list) are treated as a
party with zero supporters: a committee may seat them only once every real
party is fully seated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from typing import Sequence

from .model import Committee, DomainError, PartyList, Profile, committees, detect_party_list, party_list_profile
from .rules import Rule, counting_rule
from .scoring import CountingFunction, normalize, score
from .verdict import FAIL, NOT_APPLICABLE, PASS, AxiomVerdict

DIVISORS = {
    "dhondt": lambda seats: Fraction(seats + 1),
    "sainte-lague": lambda seats: Fraction(2 * seats + 1, 2),
}


def divisor_apportion(weights: Sequence[int], capacities: Sequence[int], k: int,
                      method: str = "dhondt") -> list[tuple[int, ...]]:
    """Every seat vector a highest-averages method can reach.

    Seats are handed out one at a time to a party of maximal
    ``weight / divisor(seats)`` that still has an unseated candidate.  All
    tie branches are followed; the result is sorted.
    """
    key = method.lower().replace("_", "-")
    if key not in DIVISORS:
        raise DomainError(f"unknown divisor method {method!r}")
    divisor = DIVISORS[key]
    if len(weights) != len(capacities):
        raise DomainError("weights and capacities differ in length")
    if any(w < 1 for w in weights) or any(c < 0 for c in capacities):
        raise DomainError("weights must be positive and capacities non-negative")
    if sum(capacities) < k:
        raise DomainError(f"only {sum(capacities)} candidates for {k} seats")
    states = {tuple(0 for _ in weights)}
    for _ in range(k):
        nxt = set()
        for seats in states:
            ratios = {i: Fraction(w) / divisor(seats[i])
                      for i, w in enumerate(weights) if seats[i] < capacities[i]}
            top = max(ratios.values())
            for i, r in ratios.items():
                if r == top:
                    nxt.add(seats[:i] + (seats[i] + 1,) + seats[i + 1:])
        states = nxt
    return sorted(states)


@dataclass(frozen=True)
class Proportionality:
    ok: bool
    violation: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_dhondt_proportional(w: Committee, pl: PartyList) -> Proportionality:
    """Pairwise D'Hondt conditions, with party indices into ``pl.parties``.

    For every pair ``(i, j)`` one of: party ``j`` fully seated, party ``i``
    unseated, or ``N_i / s_i >= N_j / (s_j + 1)``.
    """
    members = set(w)
    seats = pl.seats(w)
    caps = [len(p.candidates) for p in pl.parties]
    stray = members.intersection(pl.remainder)
    if stray:
        for j, party in enumerate(pl.parties):
            if seats[j] < caps[j]:
                return Proportionality(False, None,
                                       f"seats unapproved candidate(s) {sorted(stray)} "
                                       f"while party {j} has an unseated candidate")
    for i, pi in enumerate(pl.parties):
        if seats[i] == 0:
            continue
        for j, pj in enumerate(pl.parties):
            if seats[j] == caps[j]:
                continue
            if Fraction(pi.weight, seats[i]) < Fraction(pj.weight, seats[j] + 1):
                return Proportionality(False, (i, j),
                                       f"{pi.weight}/{seats[i]} < {pj.weight}/{seats[j] + 1}")
    return Proportionality(True)


def winning_seat_vectors(f: CountingFunction, a: Profile) -> tuple[list[tuple[int, ...]], Fraction]:
    """Seat vectors of the winning committees of ``f`` on a party-list profile.

    Candidates of one party are interchangeable, so a committee's score
    depends only on how many seats each party (and the unapproved
    remainder) gets.  Each seat vector is scored once through a
    representative committee, which makes huge tie sets such as every
    ``(4, 3, 2, 1)`` split of forty candidates cheap to describe.
    """
    pl = detect_party_list(a)
    if pl is None:
        raise DomainError("not a party-list profile")
    k = f.k
    caps = [len(p.candidates) for p in pl.parties]
    best, found = None, []
    for seats in product(*(range(min(c, k) + 1) for c in caps)):
        rest = k - sum(seats)
        if rest < 0 or rest > len(pl.remainder):
            continue
        members = [c for p, n in zip(pl.parties, seats) for c in p.candidates[:n]]
        members += pl.remainder[:rest]
        value = score(f, tuple(sorted(members)), a)
        if best is None or value > best:
            best, found = value, [seats]
        elif value == best:
            found.append(seats)
    return sorted(found), best


def dhondt_committees(pl: PartyList, k: int) -> list[Committee]:
    return [w for w in committees(pl.m, k) if is_dhondt_proportional(w, pl)]


def _as_rule(rule: Rule | CountingFunction):
    if isinstance(rule, CountingFunction):
        f = rule
        return counting_rule(lambda m, k: f, f.name), f.k
    return rule, None


def check_dhondt_axiom(rule: Rule | CountingFunction, a: Profile, k: int | None = None) -> AxiomVerdict:
    rule, fk = _as_rule(rule)
    k = k or fk
    pl = detect_party_list(a)
    if pl is None:
        return AxiomVerdict("dhondt", rule.name, NOT_APPLICABLE, reason="not a party-list profile")
    won = set(rule.winners(a, k))
    prop = set(dhondt_committees(pl, k))
    if won == prop:
        return AxiomVerdict("dhondt", rule.name, PASS, instances=1)
    diff = sorted(won ^ prop)
    w = diff[0]
    what = "winning but not D'Hondt proportional" if w in won else "D'Hondt proportional but not winning"
    return AxiomVerdict("dhondt", rule.name, FAIL,
                        witness={"profile": a, "k": k, "committee": w},
                        reason=f"{list(w)} is {what}", instances=1)


@dataclass(frozen=True)
class QuotaClause:
    party: int
    entitlement: Fraction
    floor: int
    seats: int
    capacity: int

    @property
    def satisfied(self) -> bool:
        return self.seats >= self.floor or self.capacity < self.floor


@dataclass(frozen=True)
class QuotaReport:
    applicable: bool
    committees: tuple[tuple[Committee, tuple[QuotaClause, ...]], ...] = ()

    @property
    def overall(self) -> bool:
        return all(c.satisfied for _, clauses in self.committees for c in clauses)

    def failures(self) -> list[tuple[Committee, QuotaClause]]:
        return [(w, c) for w, clauses in self.committees for c in clauses if not c.satisfied]


def quota_clauses(w: Committee, pl: PartyList, k: int) -> tuple[QuotaClause, ...]:
    total = pl.num_voters
    seats = pl.seats(w)
    out = []
    for i, party in enumerate(pl.parties):
        ent = Fraction(k * party.weight, total)
        out.append(QuotaClause(i, ent, floor(ent), seats[i], len(party.candidates)))
    return tuple(out)


def check_lower_quota(rule: Rule | CountingFunction, a: Profile, k: int | None = None) -> QuotaReport:
    """Lower quota for every winning committee of ``rule`` on ``a``."""
    rule, fk = _as_rule(rule)
    k = k or fk
    pl = detect_party_list(a)
    if pl is None:
        return QuotaReport(False)
    return QuotaReport(True, tuple((w, quota_clauses(w, pl, k)) for w in rule.winners(a, k)))


def lower_quota_verdict(rule: Rule, a: Profile, k: int) -> AxiomVerdict:
    report = check_lower_quota(rule, a, k)
    if not report.applicable:
        return AxiomVerdict("lower-quota", rule.name, NOT_APPLICABLE, reason="not a party-list profile")
    bad = report.failures()
    if not bad:
        return AxiomVerdict("lower-quota", rule.name, PASS, instances=1)
    w, clause = bad[0]
    return AxiomVerdict("lower-quota", rule.name, FAIL,
                        witness={"profile": a, "k": k, "committee": w},
                        reason=f"party {clause.party} gets {clause.seats} seat(s), "
                               f"lower quota {clause.floor}", instances=1)


@dataclass(frozen=True)
class BandViolation:
    x: int
    y: int
    bound: str  # "lower" or "upper"
    value: Fraction
    limit: Fraction


@dataclass(frozen=True)
class BandReport:
    violations: tuple[BandViolation, ...]
    checked: tuple[tuple[int, int], ...]
    in_scope: bool = True

    @property
    def inside(self) -> bool:
        return self.in_scope and not self.violations


def band_pairs(k: int, m: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(2, k + 1) for y in range(x, m + 1) if m >= y + k - x + 1]


def lower_quota_band(f: CountingFunction, k: int | None = None, m: int | None = None) -> BandReport:
    """Check the band that lower quota forces on a counting function.

    For ``x >= 2`` and ``m >= y + k - x + 1``, with ``f`` normalized::

        f(x-1,y) + f(1,1)/x * (k-x)/(k-x+1) <= f(x,y) <= f(x-1,y) + f(1,1)/(x-1)
    """
    k = f.k if k is None else k
    m = f.m if m is None else m
    if (k, m) != (f.k, f.m):
        raise DomainError("band parameters must match the counting function")
    g = normalize(f)
    unit = g(1, 1)
    if unit == 0:
        return BandReport((), (), in_scope=False)
    pairs = band_pairs(k, m)
    out = []
    for x, y in pairs:
        prev, cur = g(x - 1, y), g(x, y)
        low = prev + unit / x * Fraction(k - x, k - x + 1)
        high = prev + unit / (x - 1)
        if cur < low:
            out.append(BandViolation(x, y, "lower", cur, low))
        if cur > high:
            out.append(BandViolation(x, y, "upper", cur, high))
    return BandReport(tuple(out), tuple(pairs))


def band_witness_profile(k: int, x: int, y: int, bound: str, m: int | None = None) -> Profile:
    """Party-list profile on which a band violation turns into a lower-quota failure.

    One party of ``y`` candidates plus ``k-x+1`` single-candidate parties;
    any further candidates go unapproved.  For the lower bound the big party
    has ``x(k-x+1)`` voters and each singleton ``k-x``; for the upper bound
    ``x-1`` and ``1``.
    """
    m = y + k - x + 1 if m is None else m
    if m < y + k - x + 1 or not 2 <= x <= k or y < x:
        raise DomainError(f"no witness construction for x={x}, y={y}, k={k}, m={m}")
    if bound == "lower":
        if x == k:
            raise DomainError("the lower bound is vacuous at x = k")
        big, small = x * (k - x + 1), k - x
    elif bound == "upper":
        big, small = x - 1, 1
    else:
        raise DomainError(f"bound must be 'lower' or 'upper', got {bound!r}")
    parties = [(big, range(1, y + 1))] if big else []
    parties += [(small, [y + 1 + i]) for i in range(k - x + 1)]
    return party_list_profile(m, parties)
