from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcrules import (
    DomainError,
    Profile,
    alpha_profile,
    check_consistency,
    check_continuity,
    check_disjoint_diversity,
    check_disjoint_equality,
    check_efficiency,
    check_symmetry,
    check_weak_efficiency,
    detect_party_list,
    induced_comparison,
    party_list_profile,
    pathological_rule,
    resolve_rule,
    verify_two_nonimposition,
)
from abcrules.axioms import BOTH, W1_PREFERRED, W2_PREFERRED, strongest_party_selections
from abcrules.model import committees
from abcrules.rules import lexicographic_threshold, replicate
from conftest import instances, profiles

RULES = ["av", "pav", "cc", "sav", "ct:1", "sainte-lague", "square-root"]
A = Profile.from_ballots(3, [(3,)])
A2 = Profile.from_ballots(3, [(1, 2), (1, 2), (3,)])


def test_lexicographic_threshold():
    assert lexicographic_threshold((-5,), (2,)) == 3
    assert lexicographic_threshold((0, -1), (0, 1)) == 2
    assert lexicographic_threshold((1, -9), (0, 1)) == 1
    assert lexicographic_threshold((-1, 9), (0, 1)) is None
    with pytest.raises(DomainError):
        lexicographic_threshold((0,), (-1,))


def test_symmetry():
    pav = resolve_rule("pav")
    a = Profile.from_ballots(4, [(1, 2), (2,), (3, 4)])
    assert check_symmetry(pav, a, 2, cand_perm=[2, 3, 4, 1], voter_perm=[2, 0, 1]).passed
    assert check_symmetry(pav, a, 2, cand_perm=[1, 2, 3, 4]).passed
    doubled = pathological_rule("doubled-candidate-av:1")
    v = check_symmetry(doubled, Profile.from_ballots(2, [(1,), (2,)]), 1, cand_perm=[2, 1])
    assert v.failed and v.witness["permutation"] == [2, 1]
    with pytest.raises(DomainError):
        check_symmetry(pav, a, 2, voter_perm=[0, 0, 1])


def test_choice_symmetry_and_consistency():
    seq = resolve_rule("seqpav")
    a = Profile.from_ballots(3, [(1,), (2,)])
    assert check_symmetry(seq, a, 1, cand_perm=[2, 1, 3]).passed
    assert check_consistency(seq, a, a, 1).passed


def test_consistency_gallery():
    rule = pathological_rule("partylist-pav-else-trivial")
    a = Profile.from_ballots(3, [(1,), (1,), (2, 3)])
    b = Profile.from_ballots(3, [(1, 2), (3,)])
    v = check_consistency(rule, a, b, 1)
    assert v.failed
    empty = Profile.from_ballots(3, [()])
    assert check_consistency(resolve_rule("pav"), a, empty, 2).passed


def test_weak_efficiency():
    rev = pathological_rule("reversed-av")
    a = Profile.from_ballots(3, [(1,)])
    assert check_weak_efficiency(rev, a, 1).failed
    assert check_weak_efficiency(resolve_rule("pav"), a, 1).passed
    full = Profile.from_ballots(3, [(1, 2, 3)])
    assert check_weak_efficiency(rev, full, 2).passed
    assert check_weak_efficiency(resolve_rule("seqpav"), a, 2).passed


def test_efficiency():
    assert check_efficiency(resolve_rule("pav"), A2, 2).passed
    assert check_efficiency(pathological_rule("reversed-av"), Profile.from_ballots(3, [(1,)]), 2).failed
    assert check_efficiency(resolve_rule("seqpav"), A2, 2).status == "not-applicable"


def test_continuity_tiebreak_example():
    rule = pathological_rule("pav-av-tiebreak")
    v = check_continuity(rule, A, A2, 2, pair=((1, 2), (1, 3)))
    assert v.failed and v.witness["committees"] == [(1, 2), (1, 3)]
    # brute confirmation of the asymptotics: {a,c} beats {a,b} for every n
    for n in range(1, 40):
        lv = rule.ranking(replicate(A, A2, n), 2).levels()
        assert lv[(1, 3)] < lv[(1, 2)]


def test_continuity_pav_threshold():
    # PAV ties all of A2's committees, so only the tie-break rule separates them
    assert "no strict comparison" in check_continuity(resolve_rule("pav"), A, A2, 2).reason
    b = Profile.from_ballots(3, [(1, 2)])
    a = Profile.from_ballots(3, [(3,), (3,), (3,), (2, 3)])
    v = check_continuity(resolve_rule("pav"), a, b, 2)
    assert v.passed and v.bounds["n"] == 8
    # {1,2} vs {2,3}: gap -7/2 on a, +1/2 per copy of b
    pav = resolve_rule("pav")
    first = next(n for n in range(1, 30)
                 if pav.ranking(replicate(a, b, n), 2).levels()[(1, 2)] < pav.ranking(replicate(a, b, n), 2).levels()[(2, 3)])
    assert first == 8
    tied = Profile.from_ballots(3, [()])
    assert check_continuity(resolve_rule("pav"), A, tied, 2).passed


def test_continuity_black_box():
    seq = resolve_rule("seqpav")
    assert check_continuity(seq, A, A2, 2).passed


@settings(max_examples=40, deadline=None)
@given(instances(max_m=4, max_voters=4), st.sampled_from(RULES), st.data())
def test_counting_rules_pass_basic_axioms(inst, name, data):
    a, k = inst
    b = data.draw(profiles(m=a.m, max_voters=4))
    perm = data.draw(st.permutations(list(range(1, a.m + 1))))
    rule = resolve_rule(name)
    assert check_symmetry(rule, a, k, cand_perm=perm).passed
    assert check_consistency(rule, a, b, k).passed
    assert check_weak_efficiency(rule, a, k).passed
    assert check_efficiency(rule, a, k).passed
    assert check_continuity(rule, a, b, k).passed


def test_disjoint_equality():
    av = resolve_rule("av")
    a = Profile.from_ballots(3, [(1,), (2,), (3,)])
    assert check_disjoint_equality(av, a, 2).passed
    big = Profile.from_ballots(5, [(1, 2, 3)])
    assert resolve_rule("av").winners(big, 2) == ((1, 2), (1, 3), (2, 3))
    assert check_disjoint_equality(av, big, 2).passed
    assert check_disjoint_equality(av, Profile.from_ballots(3, [(1,), (1,)]), 1).status == "not-applicable"
    assert check_disjoint_equality(av, Profile.from_ballots(4, [(1,)]), 2).status == "not-applicable"


def test_disjoint_equality_proof_family():
    # one ballot of size y and k-x singletons; some member of the family separates PAV and CC from AV
    for name in ("pav", "cc"):
        rule = resolve_rule(name)
        found = False
        for k in (2, 3):
            for x in range(k + 1):
                for y in range(x, 5):
                    if y == 0 or y + k - x > 6:
                        continue
                    ballots = [tuple(range(1, y + 1))] + [(y + 1 + i,) for i in range(k - x)]
                    a = Profile.from_ballots(6, ballots)
                    found |= check_disjoint_equality(rule, a, k).failed
        assert found, name


def test_disjoint_diversity():
    a = party_list_profile(4, [(1000, [1, 2]), (1, [3])])
    assert check_disjoint_diversity(resolve_rule("cc"), a, 2).passed
    assert check_disjoint_diversity(resolve_rule("av"), a, 2).failed
    eq = party_list_profile(4, [(2, [1, 2]), (2, [3, 4])])
    for name in RULES:
        assert check_disjoint_diversity(resolve_rule(name), eq, 2).passed


def test_strongest_party_selections():
    assert strongest_party_selections([5, 3, 3, 1], 2) == [(0, 1), (0, 2)]
    assert strongest_party_selections([5, 3], 4) == [(0, 1)]


def test_alpha_profiles():
    pav, cc = resolve_rule("pav"), resolve_rule("cc")
    a = alpha_profile("pav", (1, 2), (3, 4), 4)
    assert set(pav.winners(a, 2)) == {(1, 2), (3, 4)}
    c = alpha_profile("cc", (1, 2), (1, 3), 3)
    assert set(cc.winners(c, 2)) == {(1, 2), (1, 3)}
    p1 = alpha_profile("pav", (1, 2), (1, 3), 3)
    assert {b for b, _ in p1.ballots} == {b for b, _ in c.ballots}
    with pytest.raises(DomainError):
        alpha_profile("pav", (1, 2), (1, 2), 3)
    with pytest.raises(DomainError):
        alpha_profile("av", (1, 2), (1, 3), 3)


def test_alpha_pav_structure_is_recorded():
    a = alpha_profile("pav", (1, 2), (3, 4), 4)
    assert detect_party_list(a) is None  # the cross ballots overlap
    single = alpha_profile("pav", (1,), (2,), 3)
    assert detect_party_list(single) is not None


def test_two_nonimposition():
    assert verify_two_nonimposition(resolve_rule("pav"), (1, 2), (3, 4), 4).passed
    assert verify_two_nonimposition(resolve_rule("cc"), (1, 2), (1, 3), 4).passed
    av = verify_two_nonimposition(resolve_rule("av"), (1, 2), (3, 4), 4, max_voters=3)
    assert av.status == "exhausted-refuted-within-bounds"
    assert verify_two_nonimposition(resolve_rule("av"), (1, 2), (1, 3), 3, max_voters=2).passed


def test_induced_comparison_examples():
    pav = resolve_rule("pav")
    w1, w2 = (1, 2), (3, 4)
    alpha = alpha_profile("pav", w1, w2, 4)
    a = Profile.from_ballots(4, [(1, 2)])
    assert induced_comparison(pav, alpha, a, w1, w2, 2) == W1_PREFERRED
    assert induced_comparison(pav, alpha, a, w2, w1, 2) == W2_PREFERRED
    sym = Profile.from_ballots(4, [(1,), (3,)])
    assert induced_comparison(pav, alpha, sym, w1, w2, 2) == BOTH
    with pytest.raises(DomainError):
        induced_comparison(pav, a, a, w1, w2, 2)


def test_induced_comparison_black_box_agrees():
    pav = resolve_rule("pav")
    seq_like = resolve_rule("pav")
    seq_like.keys = None  # force the sampling path on the same rule
    w1, w2 = (1, 2), (3, 4)
    alpha = alpha_profile("pav", w1, w2, 4)
    a = Profile.from_ballots(4, [(1, 2), (3,)])
    assert induced_comparison(seq_like, alpha, a, w1, w2, 2) == induced_comparison(pav, alpha, a, w1, w2, 2)


@settings(max_examples=30, deadline=None)
@given(profiles(m=4, max_voters=5), st.data())
def test_induced_comparison_matches_pav_ranking(a, data):
    pav = resolve_rule("pav")
    k = 2
    cs = list(committees(4, k))
    w1, w2, w3 = data.draw(st.permutations(cs))[:3]
    tiers = pav.ranking(a, k)

    def rel(u, v):
        return induced_comparison(pav, alpha_profile("pav", u, v, 4), a, u, v, k)

    r12 = rel(w1, w2)
    s1, s2 = tiers.score_of(w1), tiers.score_of(w2)
    assert r12 == (BOTH if s1 == s2 else W1_PREFERRED if s1 > s2 else W2_PREFERRED)
    # transitivity on the triple
    def geq(u, v):
        return rel(u, v) in (BOTH, W1_PREFERRED)
    if geq(w1, w2) and geq(w2, w3):
        assert geq(w1, w3)
