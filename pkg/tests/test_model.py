import pytest
from hypothesis import given
from hypothesis import strategies as st

from abcrules import (
    DomainError,
    Profile,
    add_profiles,
    detect_party_list,
    party_list_profile,
    permute_profile,
    restrict,
    scale_profile,
)
from abcrules.model import permute_committee
from conftest import profiles


def test_add_example():
    a = Profile.from_counts(3, [((1, 2), 1)])
    b = Profile.from_counts(3, [((3,), 2)])
    s = add_profiles(a, b)
    assert s.ballots == (((1, 2), 1), ((3,), 2))
    assert s.num_voters == 3


def test_add_gallery_profiles():
    # a=1, b=2, c=3
    a = Profile.from_ballots(3, [(3,)])
    a2 = Profile.from_ballots(3, [(1, 2), (1, 2), (3,)])
    assert (a + a2).ballots == (((1, 2), 2), ((3,), 2))


def test_add_mismatched_m():
    with pytest.raises(DomainError):
        add_profiles(Profile.from_ballots(2, [(1,)]), Profile.from_ballots(3, [(1,)]))


def test_scale():
    assert scale_profile(Profile.from_ballots(2, [(1,)]), 3).ballots == (((1,), 3),)
    with pytest.raises(DomainError):
        scale_profile(Profile.from_ballots(2, [(1,)]), 0)
    assert 2 * Profile.from_ballots(2, [(1,)]) == scale_profile(Profile.from_ballots(2, [(1,)]), 2)


@given(profiles())
def test_add_self_is_scale(a):
    assert a + a == scale_profile(a, 2)
    assert scale_profile(a, 1) == a


@given(profiles(m=4), profiles(m=4), profiles(m=4))
def test_addition_commutative_associative(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert (a + b).num_voters == a.num_voters + b.num_voters


@given(profiles())
def test_canonical_idempotent(a):
    again = Profile.from_counts(a.m, a.ballots)
    assert again == a and again.ballots == a.ballots
    assert Profile.from_ballots(a.m, reversed(a.voters())) == a


def test_non_canonical_rejected():
    with pytest.raises(DomainError):
        Profile(3, (((2,), 1), ((1,), 1)))
    with pytest.raises(DomainError):
        Profile(3, (((1,), 0),))
    with pytest.raises(DomainError):
        Profile.from_ballots(2, [(3,)])
    with pytest.raises(DomainError):
        Profile.from_counts(2, [((1,), 0)])


def test_permute():
    a = Profile.from_ballots(2, [(1,), (2,)])
    assert permute_profile(a, [2, 1]) == a
    assert permute_profile(a, {1: 1, 2: 2}) == a
    with pytest.raises(DomainError):
        permute_profile(a, [1, 1])
    assert permute_committee((1, 3), [3, 2, 1], 3) == (1, 3)


def test_party_list_example2():
    a = party_list_profile(40, [(9, range(1, 11)), (21, range(11, 21)), (28, range(21, 31)), (42, range(31, 41))])
    pl = detect_party_list(a)
    assert [p.weight for p in pl.parties] == [42, 28, 21, 9]
    assert pl.remainder == ()


def test_party_list_overlap_and_remainder():
    assert detect_party_list(Profile.from_ballots(3, [(1, 2), (2, 3)])) is None
    pl = detect_party_list(party_list_profile(6, [(4, [1, 2]), (2, [3])]))
    assert pl.remainder == (4, 5, 6)


def test_party_list_empty_ballots_are_abstentions():
    pl = detect_party_list(Profile.from_ballots(3, [(), (1,), (1,)]))
    assert pl.abstentions == 1 and pl.num_voters == 3 and len(pl.parties) == 1


@given(profiles(m=4), st.permutations([1, 2, 3, 4]))
def test_party_list_detection_is_neutral(a, perm):
    pl, pl2 = detect_party_list(a), detect_party_list(permute_profile(a, perm))
    assert (pl is None) == (pl2 is None)
    if pl is not None:
        assert sorted(p.weight for p in pl.parties) == sorted(p.weight for p in pl2.parties)
        moved = {tuple(sorted(perm[c - 1] for c in p.candidates)) for p in pl.parties}
        assert moved == {p.candidates for p in pl2.parties}


def test_restrict_examples():
    a = Profile.from_ballots(2, [(1,), (1, 2)])
    assert restrict(a, 1, "regular").ballots == (((1,), 1),)
    assert restrict(a, 2, "bounded") == a
    assert restrict(a, 0, "regular").is_empty
    with pytest.raises(DomainError):
        restrict(a, 3)


@given(profiles(), st.integers(0, 4))
def test_restrict_reassembles(a, size):
    size = min(size, a.m)
    bnd = restrict(a, size, "bounded")
    larger = [(b, n) for b, n in a.ballots if len(b) > size]
    assert bnd.num_voters + sum(n for _, n in larger) == a.num_voters
    if size + 1 <= a.m:
        reg = restrict(a, size + 1, "regular")
        rest = Profile.from_counts(a.m, [(b, n) for b, n in a.ballots if len(b) > size + 1], allow_empty=True)
        assert Profile.from_counts(a.m, bnd.ballots + reg.ballots + rest.ballots) == a
