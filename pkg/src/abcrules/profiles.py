"""Generators of canonical profiles for exhaustive and random searches.

Every generator yields each canonical profile at most once, in a fixed
order, so searches are reproducible.
"""

from __future__ import annotations

import random
from itertools import combinations, combinations_with_replacement, product
from typing import Iterator, Sequence

from .model import Ballot, DomainError, Profile


def all_ballots(m: int, include_empty: bool = True) -> list[Ballot]:
    """Every subset of ``1..m``, by size and then lexicographically."""
    out = []
    for size in range(0 if include_empty else 1, m + 1):
        out.extend(combinations(range(1, m + 1), size))
    return out


def all_profiles(m: int, max_voters: int, min_voters: int = 1,
                 ballots: Sequence[Ballot] | None = None) -> Iterator[Profile]:
    """All profiles on ``m`` candidates with ``min_voters..max_voters`` voters.

    Ballots are unrestricted (the empty ballot included) unless ``ballots``
    is given.
    """
    pool = list(ballots) if ballots is not None else all_ballots(m)
    for n in range(max(1, min_voters), max_voters + 1):
        for multiset in combinations_with_replacement(pool, n):
            yield Profile.from_ballots(m, multiset)


def disjoint_blocks(m: int) -> Iterator[tuple[Ballot, ...]]:
    """Every collection of pairwise disjoint nonempty subsets of ``1..m``.

    Blocks are listed by smallest member; candidates in no block stay
    unapproved.
    """
    def grow(rest: tuple[int, ...]) -> Iterator[tuple[Ballot, ...]]:
        if not rest:
            yield ()
            return
        head, tail = rest[0], rest[1:]
        yield from grow(tail)  # head unapproved
        for size in range(len(tail) + 1):
            for others in combinations(tail, size):
                block = (head,) + others
                left = tuple(c for c in tail if c not in others)
                for more in grow(left):
                    yield (block,) + more

    yield from grow(tuple(range(1, m + 1)))


def disjoint_profiles(m: int, min_approved: int = 1) -> Iterator[Profile]:
    """Profiles whose voters approve pairwise disjoint sets, one voter per set."""
    for blocks in disjoint_blocks(m):
        if sum(map(len, blocks)) >= min_approved:
            yield Profile.from_ballots(m, blocks)


def _weight_vectors(p: int, max_voters: int | None, max_weight: int | None) -> Iterator[tuple[int, ...]]:
    top = max_weight if max_weight is not None else max_voters
    if top is None:
        raise DomainError("need max_voters or max_weight")
    for ws in product(range(1, top + 1), repeat=p):
        if max_voters is None or sum(ws) <= max_voters:
            yield ws


def party_list_profiles(m: int, max_voters: int | None = None, max_weight: int | None = None,
                        min_parties: int = 1) -> Iterator[Profile]:
    """Every labeled party-list profile on ``m`` candidates.

    Bounded by the total number of voters, the weight of each party, or
    both.  Unapproved candidates are allowed.
    """
    for blocks in disjoint_blocks(m):
        if len(blocks) < min_parties:
            continue
        for ws in _weight_vectors(len(blocks), max_voters, max_weight):
            yield Profile.from_counts(m, zip(blocks, ws))


def party_shapes(m: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of party sizes with total at most ``m``."""
    def grow(room: int, cap: int) -> Iterator[tuple[int, ...]]:
        yield ()
        for s in range(min(room, cap), 0, -1):
            for more in grow(room - s, s):
                yield (s,) + more

    yield from (shape for shape in grow(m, m) if shape)


def party_list_profiles_unlabeled(m: int, max_voters: int | None = None, max_weight: int | None = None,
                                  min_parties: int = 1) -> Iterator[Profile]:
    """Party-list profiles up to relabeling of candidates.

    Parties take consecutive candidates.  Parties of equal size carry
    non-increasing weights, so each orbit under candidate permutations is
    produced exactly once.  Only sound for neutral rules.
    """
    for shape in party_shapes(m):
        if len(shape) < min_parties:
            continue
        blocks, start = [], 1
        for s in shape:
            blocks.append(tuple(range(start, start + s)))
            start += s
        for ws in _weight_vectors(len(shape), max_voters, max_weight):
            if any(shape[i] == shape[i + 1] and ws[i] < ws[i + 1] for i in range(len(shape) - 1)):
                continue
            yield Profile.from_counts(m, zip(blocks, ws))


def random_profile(rng: random.Random, m: int, max_voters: int,
                   max_multiplicity: int | None = None, p: float = 0.5) -> Profile:
    """Each voter approves each candidate independently with probability ``p``."""
    n = rng.randint(1, max_voters)
    counts: dict[Ballot, int] = {}
    for _ in range(n):
        ballot = tuple(c for c in range(1, m + 1) if rng.random() < p)
        if max_multiplicity is not None and counts.get(ballot, 0) >= max_multiplicity:
            continue
        counts[ballot] = counts.get(ballot, 0) + 1
    return Profile.from_counts(m, counts)


def random_party_list_profile(rng: random.Random, m: int, max_voters: int) -> Profile:
    cands = list(range(1, m + 1))
    rng.shuffle(cands)
    p = rng.randint(1, min(m, max_voters))
    cuts = sorted(rng.sample(range(1, m + 1), p))
    if cuts[-1] != m and rng.random() < 0.7:
        cuts[-1] = m
    blocks, start = [], 0
    for c in cuts:
        blocks.append(cands[start:c])
        start = c
    total = rng.randint(p, max_voters)
    # spread total voters over p parties, each at least one
    bars = sorted(rng.sample(range(1, total), p - 1)) if p > 1 else []
    weights = [b - a for a, b in zip([0] + bars, bars + [total])]
    return Profile.from_counts(m, zip(blocks, weights))
