"""Candidates, approval ballots, anonymous profiles and party-list structure.

Candidates are the integers ``1..m``.  A ballot is a sorted tuple of approved
candidates and a committee is a sorted tuple of ``k`` candidates, so both order
lexicographically with plain tuple comparison.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

Ballot = tuple[int, ...]
Committee = tuple[int, ...]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CapacityError(RuntimeError):
    """An enumeration or search exceeded its configured budget."""


def as_ballot(candidates: Iterable[int], m: int) -> Ballot:
    ballot = tuple(sorted(set(candidates)))
    if ballot and (ballot[0] < 1 or ballot[-1] > m):
        raise DomainError(f"ballot {ballot} is not a subset of [1, {m}]")
    return ballot


def as_committee(candidates: Iterable[int]) -> Committee:
    return tuple(sorted(set(candidates)))


def committees(m: int, k: int) -> Iterable[Committee]:
    """All size-``k`` committees over ``1..m`` in lexicographic order."""
    return combinations(range(1, m + 1), k)


def mask_of(candidates: Iterable[int]) -> int:
    mask = 0
    for c in candidates:
        mask |= 1 << (c - 1)
    return mask


@dataclass(frozen=True)
class Profile:
    """An anonymous approval profile: a multiset of ballots over ``m`` candidates.

    ``ballots`` is always canonical: sorted by ballot, equal ballots merged,
    every multiplicity positive.  Build profiles with :meth:`from_ballots` or
    :meth:`from_counts` rather than the raw constructor.
    """

    m: int
    ballots: tuple[tuple[Ballot, int], ...]
    _masks: tuple[tuple[int, int, int], ...] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        if self.m < 1:
            raise DomainError("a profile needs at least one candidate")
        previous = None
        for ballot, mult in self.ballots:
            if mult < 1:
                raise DomainError(f"multiplicity of {ballot} must be positive")
            if ballot != as_ballot(ballot, self.m):
                raise DomainError(f"ballot {ballot} is not canonical")
            if previous is not None and ballot <= previous:
                raise DomainError("ballots are not in canonical order")
            previous = ballot
        masks = tuple((mask_of(b), len(b), n) for b, n in self.ballots)
        object.__setattr__(self, "_masks", masks)

    @classmethod
    def from_counts(cls, m: int, counts: Mapping[Iterable[int], int] | Iterable[tuple[Iterable[int], int]],
                    allow_empty: bool = False) -> Profile:
        items = counts.items() if isinstance(counts, Mapping) else counts
        merged: Counter = Counter()
        for ballot, mult in items:
            if int(mult) != mult or mult < 0:
                raise DomainError(f"multiplicity must be a non-negative integer, got {mult!r}")
            if mult:
                merged[as_ballot(ballot, m)] += int(mult)
        profile = cls(m, tuple(sorted(merged.items())))
        if not allow_empty and profile.num_voters == 0:
            raise DomainError("a profile needs at least one voter")
        return profile

    @classmethod
    def from_ballots(cls, m: int, ballots: Iterable[Iterable[int]]) -> Profile:
        """Profile from one ballot per voter; voter order is discarded."""
        return cls.from_counts(m, Counter(as_ballot(b, m) for b in ballots).items())

    @property
    def num_voters(self) -> int:
        return sum(n for _, n in self.ballots)

    @property
    def is_empty(self) -> bool:
        return not self.ballots

    def voters(self) -> list[Ballot]:
        """One ballot per voter, in canonical order."""
        return [b for b, n in self.ballots for _ in range(n)]

    def masks(self) -> tuple[tuple[int, int, int], ...]:
        """``(bitmask, size, multiplicity)`` per distinct ballot."""
        return self._masks

    def approval_counts(self) -> list[int]:
        """Index ``c`` holds the number of voters approving candidate ``c``; index 0 unused."""
        counts = [0] * (self.m + 1)
        for ballot, n in self.ballots:
            for c in ballot:
                counts[c] += n
        return counts

    def approved_candidates(self) -> set[int]:
        return {c for b, _ in self.ballots for c in b}

    def __add__(self, other: Profile) -> Profile:
        return add_profiles(self, other)

    def __rmul__(self, n: int) -> Profile:
        return scale_profile(self, n)

    def __str__(self):
        body = ", ".join(f"{n}x{{{','.join(map(str, b))}}}" for b, n in self.ballots)
        return f"Profile(m={self.m}: {body})"


def add_profiles(a: Profile, b: Profile) -> Profile:
    if a.m != b.m:
        raise DomainError(f"cannot add profiles over {a.m} and {b.m} candidates")
    return Profile.from_counts(a.m, list(a.ballots) + list(b.ballots), allow_empty=True)


def scale_profile(a: Profile, n: int) -> Profile:
    if n < 1:
        raise DomainError("profiles can only be scaled by a positive integer")
    return Profile(a.m, tuple((b, mult * n) for b, mult in a.ballots))


def _check_permutation(sigma: Mapping[int, int] | Sequence[int], m: int) -> dict[int, int]:
    if isinstance(sigma, Mapping):
        mapping = dict(sigma)
    else:
        mapping = {i + 1: c for i, c in enumerate(sigma)}
    if sorted(mapping) != list(range(1, m + 1)) or sorted(mapping.values()) != list(range(1, m + 1)):
        raise DomainError(f"{sigma!r} is not a permutation of [1, {m}]")
    return mapping


def permute_profile(a: Profile, sigma: Mapping[int, int] | Sequence[int]) -> Profile:
    """Rename candidates by ``sigma`` (a mapping, or a sequence whose ``i``-th entry is the image of ``i+1``)."""
    mapping = _check_permutation(sigma, a.m)
    return Profile.from_counts(a.m, [([mapping[c] for c in b], n) for b, n in a.ballots],
                               allow_empty=True)


def permute_committee(w: Committee, sigma: Mapping[int, int] | Sequence[int], m: int) -> Committee:
    mapping = _check_permutation(sigma, m)
    return as_committee(mapping[c] for c in w)


@dataclass(frozen=True)
class Party:
    weight: int
    candidates: tuple[int, ...]


@dataclass(frozen=True)
class PartyList:
    """Party-list structure of a profile.

    Parties are ordered by descending weight, ties by candidate tuple.
    ``remainder`` holds the candidates nobody approves; ``abstentions``
    counts voters with an empty ballot.
    """

    m: int
    parties: tuple[Party, ...]
    remainder: tuple[int, ...]
    abstentions: int = 0

    @property
    def num_voters(self) -> int:
        return sum(p.weight for p in self.parties) + self.abstentions

    def party_of(self, candidate: int) -> int | None:
        for i, party in enumerate(self.parties):
            if candidate in party.candidates:
                return i
        return None

    def seats(self, w: Committee) -> tuple[int, ...]:
        members = set(w)
        return tuple(len(members.intersection(p.candidates)) for p in self.parties)

    def to_profile(self) -> Profile:
        counts = [(p.candidates, p.weight) for p in self.parties]
        if self.abstentions:
            counts.append(((), self.abstentions))
        return Profile.from_counts(self.m, counts)


def detect_party_list(a: Profile) -> PartyList | None:
    """Return the party-list structure of ``a``, or ``None`` if nonempty ballots overlap."""
    seen: set[int] = set()
    parties = []
    abstentions = 0
    for ballot, n in a.ballots:
        if not ballot:
            abstentions += n
            continue
        if seen.intersection(ballot):
            return None
        seen.update(ballot)
        parties.append(Party(n, ballot))
    parties.sort(key=lambda p: (-p.weight, p.candidates))
    remainder = tuple(c for c in range(1, a.m + 1) if c not in seen)
    return PartyList(a.m, tuple(parties), remainder, abstentions)


def party_list_profile(m: int, parties: Iterable[tuple[int, Iterable[int]]]) -> Profile:
    """Build a party-list profile from ``(weight, candidates)`` pairs."""
    parties = [(tuple(sorted(c)), w) for w, c in parties]
    seen: set[int] = set()
    for cands, _ in parties:
        if not cands or seen.intersection(cands):
            raise DomainError("party candidate sets must be nonempty and pairwise disjoint")
        seen.update(cands)
    return Profile.from_counts(m, parties)


def restrict(a: Profile, size: int, mode: str = "bounded") -> Profile:
    """Keep ballots with at most (``bounded``) or exactly (``regular``) ``size`` approvals.

    The result may have no voters at all; it is only meant for diagnostics.
    """
    if not 0 <= size <= a.m:
        raise DomainError(f"size {size} outside [0, {a.m}]")
    if mode == "bounded":
        kept = [(b, n) for b, n in a.ballots if len(b) <= size]
    elif mode == "regular":
        kept = [(b, n) for b, n in a.ballots if len(b) == size]
    else:
        raise DomainError(f"unknown restriction mode {mode!r}")
    return Profile(a.m, tuple(kept))
