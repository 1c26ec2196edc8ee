from itertools import combinations, combinations_with_replacement, permutations, product
from math import comb

import pytest

from abcrules import CapacityError, DomainError, Profile, detect_party_list, resolve_rule
from abcrules.profiles import (
    all_ballots,
    all_profiles,
    disjoint_blocks,
    disjoint_profiles,
    party_list_profiles,
    party_list_profiles_unlabeled,
    party_shapes,
)
from abcrules.model import permute_profile
from abcrules.search import SearchConfig, axiom_key, replay, search_counterexample


def test_all_profiles_counts():
    for m in (1, 2, 3):
        for v in (1, 2, 3):
            got = list(all_profiles(m, v))
            assert len(got) == len(set(got))
            assert len(got) == sum(comb(2 ** m + n - 1, n) for n in range(1, v + 1))


def test_disjoint_blocks_brute():
    for m in range(1, 6):
        got = {frozenset(bs) for bs in disjoint_blocks(m)}
        subsets = [frozenset(s) for r in range(1, m + 1) for s in combinations(range(1, m + 1), r)]
        brute = set()
        for r in range(0, m + 1):
            for family in combinations(subsets, r):
                if sum(map(len, family)) == len(frozenset().union(*family)):
                    brute.add(frozenset(tuple(sorted(b)) for b in family))
        assert got == brute
        assert len(list(disjoint_blocks(m))) == len(got)


def test_party_list_generators():
    labeled = list(party_list_profiles(4, max_voters=3))
    assert len(labeled) == len(set(labeled))
    assert all(detect_party_list(a) is not None and a.num_voters <= 3 for a in labeled)
    brute = {a for a in all_profiles(4, 3)
             if detect_party_list(a) is not None and not any(not b for b, _ in a.ballots)}
    assert set(labeled) == brute


def test_unlabeled_covers_every_orbit():
    m, w = 4, 3
    labeled = set(party_list_profiles(m, max_weight=w))
    unlabeled = list(party_list_profiles_unlabeled(m, max_weight=w))
    assert len(unlabeled) == len(set(unlabeled))
    perms = list(permutations(range(1, m + 1)))

    def orbit(a):
        return frozenset(permute_profile(a, p) for p in perms)

    orbits = {orbit(a) for a in labeled}
    assert len(orbits) == len(unlabeled)
    assert {orbit(a) for a in unlabeled} == orbits


def test_party_shapes():
    assert sorted(party_shapes(3)) == [(1,), (1, 1), (1, 1, 1), (2,), (2, 1), (3,)]
    assert len(list(party_shapes(6))) == 1 + 2 + 3 + 5 + 7 + 11  # partition numbers p(1)..p(6)


def test_disjoint_profiles_have_unit_multiplicity():
    assert all(n == 1 for a in disjoint_profiles(4) for _, n in a.ballots)


def test_axiom_names():
    assert axiom_key("neutrality") == "symmetry"
    assert axiom_key("lower_quota") == "lower-quota"
    with pytest.raises(DomainError):
        axiom_key("monotonicity")


def test_search_pav_consistency_exhaustive():
    v = search_counterexample("consistency", resolve_rule("pav"), SearchConfig(max_m=3, max_k=2, max_voters=2))
    assert v.passed and v.instances > 0 and v.bounds["max_voters"] == 2


def test_search_budget():
    with pytest.raises(CapacityError):
        search_counterexample("consistency", resolve_rule("pav"),
                              SearchConfig(max_m=3, max_k=2, max_voters=3, budget=10))


def test_search_is_deterministic_and_replays():
    cfg = SearchConfig(max_m=4, min_k=2, max_k=2, max_voters=20, mode="random", seed=3, samples=3000)
    seq = resolve_rule("seqpav")
    v1 = search_counterexample("consistency", seq, cfg)
    v2 = search_counterexample("consistency", resolve_rule("seqpav"), cfg)
    assert v1.failed and v1.witness == v2.witness and v1.instances == v2.instances
    again = replay("consistency", resolve_rule("seqpav"), v1.witness)
    assert again.failed and again.witness == v1.witness


def test_search_av_lower_quota():
    v = search_counterexample("lower-quota", resolve_rule("av"), SearchConfig(max_m=8, max_k=6, max_voters=6))
    assert v.failed
    assert replay("lower-quota", resolve_rule("av"), v.witness).failed


def test_search_symmetry_witness_replays():
    rule = resolve_rule("doubled-candidate-av")
    v = search_counterexample("neutrality", rule, SearchConfig(max_m=3, max_k=2, max_voters=2))
    assert v.failed and "permutation" in v.witness
    assert replay("symmetry", rule, v.witness).witness == v.witness


def test_search_unknown_space_and_mode():
    with pytest.raises(DomainError):
        search_counterexample("consistency", resolve_rule("pav"), SearchConfig(space="weird"))
    with pytest.raises(DomainError):
        search_counterexample("consistency", resolve_rule("pav"), SearchConfig(mode="annealing"))
