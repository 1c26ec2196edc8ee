"""Counterexample search: drive the axiom checkers over generated profiles."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from itertools import permutations
from typing import Iterator

from .apportionment import band_witness_profile, lower_quota_band
from .axioms import CHECKERS, PAIR_AXIOMS
from .model import CapacityError, DomainError, Profile
from .profiles import (
    all_profiles,
    disjoint_profiles,
    party_list_profiles,
    party_list_profiles_unlabeled,
    random_party_list_profile,
    random_profile,
)
from .rules import Rule
from .verdict import EXHAUSTED, PASS, AxiomVerdict

# the profile space each axiom quantifies over
NATURAL_SPACE = {
    "dhondt": "party-list",
    "lower-quota": "party-list",
    "disjoint-diversity": "party-list",
    "disjoint-equality": "disjoint",
}

AXIOM_ALIASES = {"neutrality": "symmetry", "anonymity": "symmetry", "weak_efficiency": "weak-efficiency",
                 "disjoint_equality": "disjoint-equality", "disjoint_diversity": "disjoint-diversity",
                 "lower_quota": "lower-quota", "d'hondt": "dhondt"}


def axiom_key(axiom: str) -> str:
    key = axiom.strip().lower()
    key = AXIOM_ALIASES.get(key, key)
    if key not in CHECKERS:
        raise DomainError(f"unknown axiom {axiom!r}")
    return key


@dataclass
class SearchConfig:
    """Bounds of a counterexample search.

    ``space`` is ``auto`` (the axiom's natural domain), ``all``,
    ``party-list``, ``disjoint`` or ``band`` (the lower-quota witness family
    built from band violations of a counting rule).  ``relabel`` enumerates
    party-list profiles up to candidate relabeling, which is only sound for
    neutral rules.  ``max_weight`` bounds each party's weight instead of the
    total voter count.
    """

    max_m: int = 3
    max_k: int = 2
    max_voters: int = 4
    max_multiplicity: int | None = None
    mode: str = "exhaustive"
    seed: int = 0
    samples: int = 1000
    min_m: int = 2
    min_k: int = 1
    budget: int = 5_000_000
    space: str = "auto"
    max_weight: int | None = None
    relabel: bool = False
    n_max: int = 64

    def sizes(self) -> list[tuple[int, int]]:
        return [(m, k) for m in range(self.min_m, self.max_m + 1)
                for k in range(self.min_k, min(self.max_k, m - 1) + 1)]


def _space(axiom: str, cfg: SearchConfig) -> str:
    return NATURAL_SPACE.get(axiom, "all") if cfg.space == "auto" else cfg.space


def _exhaustive_profiles(space: str, m: int, k: int, cfg: SearchConfig, rule: Rule) -> Iterator[Profile]:
    if space == "all":
        for a in all_profiles(m, cfg.max_voters):
            if cfg.max_multiplicity is None or all(n <= cfg.max_multiplicity for _, n in a.ballots):
                yield a
    elif space == "party-list":
        gen = party_list_profiles_unlabeled if cfg.relabel else party_list_profiles
        yield from gen(m, max_voters=None if cfg.max_weight and not cfg.max_voters else cfg.max_voters,
                       max_weight=cfg.max_weight)
    elif space == "disjoint":
        yield from disjoint_profiles(m, min_approved=k)
    elif space == "band":
        f = rule.counting_function(m, k)
        report = lower_quota_band(f)
        seen = set()
        for v in report.violations:
            try:
                a = band_witness_profile(k, v.x, v.y, v.bound, m)
            except DomainError:
                continue
            if a not in seen:
                seen.add(a)
                yield a
    else:
        raise DomainError(f"unknown profile space {space!r}")


def _random_profile(space: str, rng: random.Random, m: int, cfg: SearchConfig) -> Profile:
    if space == "party-list":
        return random_party_list_profile(rng, m, cfg.max_voters)
    if space == "disjoint":
        blocks = random_party_list_profile(rng, m, m).ballots
        return Profile.from_ballots(m, [b for b, _ in blocks])
    return random_profile(rng, m, cfg.max_voters, cfg.max_multiplicity)


def _candidate_perms(m: int) -> list[list[int]]:
    if m <= 4:
        return [list(p) for p in permutations(range(1, m + 1))][1:]
    out = []
    for i in range(1, m):
        for j in range(i + 1, m + 1):
            p = list(range(1, m + 1))
            p[i - 1], p[j - 1] = j, i
            out.append(p)
    out.append(list(range(2, m + 1)) + [1])
    return out


def _instances(axiom: str, rule: Rule, cfg: SearchConfig) -> Iterator[tuple]:
    space = _space(axiom, cfg)
    pair = axiom in PAIR_AXIOMS
    if cfg.mode == "exhaustive":
        for m, k in cfg.sizes():
            pool = list(_exhaustive_profiles(space, m, k, cfg, rule))
            if pair:
                for a in pool:
                    for b in pool:
                        yield m, k, a, b
            else:
                for a in pool:
                    yield m, k, a, None
    elif cfg.mode == "random":
        rng = random.Random(cfg.seed)
        sizes = cfg.sizes()
        if not sizes:
            return
        for _ in range(cfg.samples):
            m, k = rng.choice(sizes)
            a = _random_profile(space, rng, m, cfg)
            b = _random_profile(space, rng, m, cfg) if pair else None
            yield m, k, a, b
    else:
        raise DomainError(f"unknown search mode {cfg.mode!r}")


def run_check(axiom: str, rule: Rule, a: Profile, b: Profile | None, k: int,
              cfg: SearchConfig | None = None, permutation=None, committees=None,
              voter_perm=None) -> AxiomVerdict:
    """Run one checker on one instance; symmetry tries candidate permutations."""
    axiom = axiom_key(axiom)
    check = CHECKERS[axiom]
    if axiom == "symmetry":
        perms = [permutation] if permutation is not None else _candidate_perms(a.m)
        voters = voter_perm if voter_perm is not None else list(range(a.num_voters))[::-1]
        verdict = check(rule, a, k, voter_perm=voters)
        for p in perms:
            if verdict.failed:
                break
            verdict = check(rule, a, k, cand_perm=p)
        return verdict
    if axiom == "continuity":
        pair = tuple(committees) if committees else None
        return check(rule, a, b, k, n_max=(cfg.n_max if cfg else 64), pair=pair)
    if axiom == "consistency":
        return check(rule, a, b, k)
    return check(rule, a, k)


def search_counterexample(axiom: str, rule: Rule, cfg: SearchConfig) -> AxiomVerdict:
    """Check ``axiom`` for ``rule`` on every instance within ``cfg``.

    Stops at the first failure in the deterministic iteration order (sizes,
    then profiles in generator order).  Otherwise the verdict is ``pass``
    within the searched bounds, or ``exhausted`` if some continuity instance
    stayed undecided.
    """
    axiom = axiom_key(axiom)
    bounds = asdict(cfg)
    count = unresolved = 0
    for m, k, a, b in _instances(axiom, rule, cfg):
        count += 1
        if count > cfg.budget:
            raise CapacityError(f"search exceeded its budget of {cfg.budget} instances")
        verdict = run_check(axiom, rule, a, b, k, cfg)
        if verdict.failed:
            verdict.bounds, verdict.instances, verdict.seed = bounds, count, cfg.seed
            verdict.witness.setdefault("k", k)
            return verdict
        if verdict.status == EXHAUSTED:
            unresolved += 1
    status = EXHAUSTED if unresolved else PASS
    reason = f"{count} instances" + (f", {unresolved} undecided" if unresolved else "")
    return AxiomVerdict(axiom, rule.name, status, reason=reason, bounds=bounds, instances=count,
                        seed=cfg.seed)


def replay(axiom: str, rule: Rule, witness: dict) -> AxiomVerdict:
    """Re-run a checker on a recorded witness."""
    return run_check(axiom, rule, witness["profile"], witness.get("profile_b"), witness["k"],
                     permutation=witness.get("permutation"), committees=witness.get("committees"),
                     voter_perm=witness.get("voter_permutation"))

