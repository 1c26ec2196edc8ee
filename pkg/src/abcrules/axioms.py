"""Checkers for the axioms of approval-based committee rules.

Every checker takes a :class:`~abcrules.rules.Rule`, concrete profiles and a
committee size, and returns an :class:`~abcrules.verdict.AxiomVerdict`.
Ranking rules are checked in their ranking form; rules that only choose
winners are checked in the choice form where one exists.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Mapping, Sequence

from .apportionment import check_dhondt_axiom, lower_quota_verdict
from .profiles import all_profiles
from .model import (
    Committee,
    DomainError,
    Profile,
    add_profiles,
    as_committee,
    detect_party_list,
    permute_committee,
    permute_profile,
)
from .rules import Rule, replicate
from .verdict import EXHAUSTED, FAIL, NOT_APPLICABLE, PASS, REFUTED_WITHIN_BOUNDS, AxiomVerdict

DEFAULT_N_MAX = 64


def _fail(axiom, rule, reason, **witness):
    return AxiomVerdict(axiom, rule.name, FAIL, witness=witness, reason=reason, instances=1)


def _pass(axiom, rule, reason=""):
    return AxiomVerdict(axiom, rule.name, PASS, reason=reason, instances=1)


def _na(axiom, rule, reason):
    return AxiomVerdict(axiom, rule.name, NOT_APPLICABLE, reason=reason, instances=1)


def _weak_order(rule: Rule, a: Profile, k: int) -> dict[Committee, int]:
    return rule.ranking(a, k).levels()


def check_symmetry(rule: Rule, a: Profile, k: int,
                   cand_perm: Mapping[int, int] | Sequence[int] | None = None,
                   voter_perm: Sequence[int] | None = None) -> AxiomVerdict:
    """Anonymity under ``voter_perm`` and neutrality under ``cand_perm``.

    ``voter_perm[i]`` is the position, in :meth:`Profile.voters` order, of
    the voter placed at position ``i``.  Profiles are multisets, so the
    anonymity half re-reads the shuffled voter list and compares outputs.
    """
    output = rule.ranking if rule.is_ranking else rule.winners
    if voter_perm is not None:
        voters = a.voters()
        if sorted(voter_perm) != list(range(len(voters))):
            raise DomainError("voter_perm is not a permutation of the voters")
        shuffled = Profile.from_ballots(a.m, [voters[i] for i in voter_perm])
        if output(shuffled, k) != output(a, k):
            return _fail("symmetry", rule, "anonymity: output changed when voters were reordered",
                         profile=a, k=k, voter_permutation=list(voter_perm))
    if cand_perm is None:
        return _pass("symmetry", rule)
    sigma = dict(cand_perm) if isinstance(cand_perm, Mapping) else {i + 1: c for i, c in enumerate(cand_perm)}
    image = permute_profile(a, sigma)
    perm = [sigma[c] for c in range(1, a.m + 1)]
    if rule.is_ranking:
        before = _weak_order(rule, a, k)
        after = _weak_order(rule, image, k)
        ws = list(before)
        for w1, w2 in product(ws, ws):
            lhs = before[w1] <= before[w2]
            rhs = after[permute_committee(w1, sigma, a.m)] <= after[permute_committee(w2, sigma, a.m)]
            if lhs != rhs:
                return _fail("symmetry", rule,
                             f"neutrality: {list(w1)} vs {list(w2)} not preserved under the permutation",
                             profile=a, k=k, permutation=perm, committees=[w1, w2])
        return _pass("symmetry", rule)
    expected = sorted(permute_committee(w, sigma, a.m) for w in rule.winners(a, k))
    if sorted(rule.winners(image, k)) != expected:
        return _fail("symmetry", rule, "neutrality: winners do not commute with the permutation",
                     profile=a, k=k, permutation=perm)
    return _pass("symmetry", rule)


def check_consistency(rule: Rule, a: Profile, b: Profile, k: int, form: str | None = None) -> AxiomVerdict:
    if a.m != b.m:
        raise DomainError("profiles have different numbers of candidates")
    form = form or ("ranking" if rule.is_ranking else "choice")
    both = add_profiles(a, b)
    if form == "ranking":
        la, lb, lab = (_weak_order(rule, p, k) for p in (a, b, both))
        for w1, w2 in permutations(la, 2):
            if la[w1] <= la[w2] and lb[w1] <= lb[w2]:
                strict = la[w1] < la[w2] or lb[w1] < lb[w2]
                if lab[w1] > lab[w2] or (strict and lab[w1] == lab[w2]):
                    return _fail("consistency", rule,
                                 f"{list(w1)} {'>' if strict else '>='} {list(w2)} on both parts "
                                 "but not on their sum",
                                 profile=a, profile_b=b, k=k, committees=[w1, w2])
        return _pass("consistency", rule)
    ra, rb = set(rule.winners(a, k)), set(rule.winners(b, k))
    common = ra & rb
    if not common:
        return _pass("consistency", rule, "winner sets are disjoint")
    rab = set(rule.winners(both, k))
    if rab != common:
        return _fail("consistency", rule,
                     f"R(A+B) = {sorted(map(list, rab))} but R(A) & R(B) = {sorted(map(list, common))}",
                     profile=a, profile_b=b, k=k)
    return _pass("consistency", rule)


def _unapproved(a: Profile) -> set[int]:
    return set(range(1, a.m + 1)) - a.approved_candidates()


def check_weak_efficiency(rule: Rule, a: Profile, k: int) -> AxiomVerdict:
    idle = _unapproved(a)
    if rule.is_ranking:
        lv = _weak_order(rule, a, k)
        for w1, w2 in permutations(lv, 2):
            if set(w2).difference(w1) <= idle and lv[w1] > lv[w2]:
                return _fail("weak-efficiency", rule,
                             f"{list(w2)} ranked above {list(w1)} though only unapproved "
                             "candidates distinguish it",
                             profile=a, k=k, committees=[w1, w2])
        return _pass("weak-efficiency", rule)
    won = set(rule.winners(a, k))
    for w in sorted(won):
        for c in sorted(idle.intersection(w)):
            for c2 in range(1, a.m + 1):
                if c2 in w:
                    continue
                swapped = as_committee(set(w) - {c} | {c2})
                if swapped not in won:
                    return _fail("weak-efficiency", rule,
                                 f"replacing unapproved {c} by {c2} in winner {list(w)} loses",
                                 profile=a, k=k, committees=[w, swapped])
    return _pass("weak-efficiency", rule)


def check_efficiency(rule: Rule, a: Profile, k: int) -> AxiomVerdict:
    if not rule.is_ranking:
        return _na("efficiency", rule, "defined for ranking rules only")
    lv = _weak_order(rule, a, k)
    ballots = [set(b) for b, _ in a.ballots]
    for w1, w2 in permutations(lv, 2):
        s1, s2 = set(w1), set(w2)
        if all(len(b & s1) >= len(b & s2) for b in ballots) and lv[w1] > lv[w2]:
            return _fail("efficiency", rule,
                         f"{list(w2)} ranked above {list(w1)} though every voter weakly prefers {list(w1)}",
                         profile=a, k=k, committees=[w1, w2])
    return _pass("efficiency", rule)


def check_continuity(rule: Rule, a: Profile, b: Profile, k: int, n_max: int = DEFAULT_N_MAX,
                     pair: tuple[Committee, Committee] | None = None) -> AxiomVerdict:
    """For every ``W1`` strictly above ``W2`` on ``b``, find ``n`` with
    ``W1`` strictly above ``W2`` on ``a + n*b``.

    Rules with exact asymptotics are decided exactly, and the replication
    factor found is confirmed by evaluating the rule on ``a + n*b``.  Other
    rules are probed for ``n <= n_max``; if that settles nothing the verdict
    is ``exhausted``.
    """
    if a.m != b.m:
        raise DomainError("profiles have different numbers of candidates")
    if not rule.is_ranking:
        return _choice_continuity(rule, a, b, k, n_max)
    lb = _weak_order(rule, b, k)
    pairs = [pair] if pair else [(w1, w2) for w1, w2 in permutations(lb, 2) if lb[w1] < lb[w2]]
    pairs = [(w1, w2) for w1, w2 in pairs if lb[w1] < lb[w2]]
    if not pairs:
        return _pass("continuity", rule, "no strict comparison on the replicated profile")
    thresholds = {}
    open_pairs = []
    for w1, w2 in pairs:
        try:
            n = rule.continuity_threshold(a, b, k, w1, w2)
        except NotImplementedError:
            open_pairs.append((w1, w2))
            continue
        if n is None:
            return _fail("continuity", rule,
                         f"{list(w1)} > {list(w2)} on B but not on A + nB for any n",
                         profile=a, profile_b=b, k=k, committees=[w1, w2])
        thresholds[(w1, w2)] = n
    if thresholds:
        # past its threshold a comparison stays strict, so the largest one confirms all
        n = max(thresholds.values())
        lv = _weak_order(rule, replicate(a, b, n), k)
        for (w1, w2), t in thresholds.items():
            if not lv[w1] < lv[w2]:
                raise AssertionError(f"{rule.name}: continuity threshold {t} not confirmed at n={n}")
    for w1, w2 in open_pairs:
        for n in range(1, n_max + 1):
            lv = _weak_order(rule, replicate(a, b, n), k)
            if lv[w1] < lv[w2]:
                thresholds[(w1, w2)] = n
                break
        else:
            return AxiomVerdict("continuity", rule.name, EXHAUSTED,
                                witness={"profile": a, "profile_b": b, "k": k, "committees": [w1, w2]},
                                reason=f"no n <= {n_max} found", bounds={"n_max": n_max}, instances=1)
    verdict = _pass("continuity", rule, f"largest replication factor needed: {max(thresholds.values())}")
    verdict.bounds = {"n": max(thresholds.values())}
    return verdict


def _choice_continuity(rule: Rule, a: Profile, b: Profile, k: int, n_max: int) -> AxiomVerdict:
    ra, rb = set(rule.winners(a, k)), set(rule.winners(b, k))
    if ra & rb:
        return _pass("continuity", rule, "winner sets intersect")
    for n in range(1, n_max + 1):
        if set(rule.winners(replicate(a, b, n), k)) <= rb:
            return _pass("continuity", rule, f"n = {n}")
    return AxiomVerdict("continuity", rule.name, EXHAUSTED,
                        witness={"profile": a, "profile_b": b, "k": k},
                        reason=f"no n <= {n_max} found", bounds={"n_max": n_max}, instances=1)


def is_disjoint_profile(a: Profile) -> bool:
    seen: set[int] = set()
    for ballot, n in a.ballots:
        if not ballot:
            continue
        if n > 1 or seen.intersection(ballot):
            return False
        seen.update(ballot)
    return True


def check_disjoint_equality(rule: Rule, a: Profile, k: int) -> AxiomVerdict:
    if not is_disjoint_profile(a):
        return _na("disjoint-equality", rule, "some candidate is approved more than once")
    approved = sorted(a.approved_candidates())
    if len(approved) < k:
        return _na("disjoint-equality", rule, f"fewer than {k} approved candidates")
    expected = set(combinations(approved, k))
    won = set(rule.winners(a, k))
    if won == expected:
        return _pass("disjoint-equality", rule)
    w = sorted(won ^ expected)[0]
    what = "wins but seats an unapproved candidate" if w in won else "consists of approved candidates but loses"
    return _fail("disjoint-equality", rule, f"{list(w)} {what}", profile=a, k=k, committee=w)


def strongest_party_selections(weights: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """Every choice of ``min(p, k)`` parties of largest weight, ties included.

    ``weights`` must be sorted in descending order.
    """
    q = min(len(weights), k)
    if q == 0:
        return [()]
    cut = weights[q - 1]
    sure = [i for i, w in enumerate(weights) if w > cut]
    tied = [i for i, w in enumerate(weights) if w == cut]
    return [tuple(sure) + extra for extra in combinations(tied, q - len(sure))]


def check_disjoint_diversity(rule: Rule, a: Profile, k: int) -> AxiomVerdict:
    """Some winner must meet each of the ``min(p, k)`` largest parties.

    With weight ties at the cut, every tie-consistent choice of largest
    parties must be met by some winner.
    """
    pl = detect_party_list(a)
    if pl is None:
        return _na("disjoint-diversity", rule, "not a party-list profile")
    won = [set(w) for w in rule.winners(a, k)]
    for chosen in strongest_party_selections([p.weight for p in pl.parties], k):
        groups = [set(pl.parties[i].candidates) for i in chosen]
        if not any(all(w & g for g in groups) for w in won):
            return _fail("disjoint-diversity", rule,
                         f"no winner meets parties {[list(pl.parties[i].candidates) for i in chosen]}",
                         profile=a, k=k, parties=[list(pl.parties[i].candidates) for i in chosen])
    return _pass("disjoint-diversity", rule)


def check_dhondt(rule: Rule, a: Profile, k: int) -> AxiomVerdict:
    return check_dhondt_axiom(rule, a, k)


def check_lower_quota_axiom(rule: Rule, a: Profile, k: int) -> AxiomVerdict:
    return lower_quota_verdict(rule, a, k)


def alpha_profile(kind: str, w1: Committee, w2: Committee, m: int) -> Profile:
    """A profile whose PAV (``kind="pav"``) or CC (``kind="cc"``) winners are exactly ``{w1, w2}``.

    ``pav``: for every ``c1`` in ``w1 - w2`` and ``c2`` in ``w2 - w1``, one
    voter approving ``{c1, c2}`` and one singleton voter for each other
    member of ``w1 | w2``.  ``cc``: for every bijection ``g`` from ``w1 - w2``
    onto ``w2 - w1``, voters ``{c, g(c)}`` plus singletons for ``w1 & w2``.
    """
    w1, w2 = as_committee(w1), as_committee(w2)
    if len(w1) != len(w2):
        raise DomainError("committees differ in size")
    if w1 == w2:
        raise DomainError("alpha profile needs two different committees")
    only1 = [c for c in w1 if c not in w2]
    only2 = [c for c in w2 if c not in w1]
    union = sorted(set(w1) | set(w2))
    ballots: list[tuple[int, ...]] = []
    if kind == "pav":
        for c1, c2 in product(only1, only2):
            ballots.append((c1, c2))
            ballots.extend((c,) for c in union if c not in (c1, c2))
    elif kind == "cc":
        shared = [c for c in w1 if c in w2]
        for image in permutations(only2):
            ballots.extend(zip(only1, image))
            ballots.extend((c,) for c in shared)
    else:
        raise DomainError(f"alpha profile kind must be 'pav' or 'cc', got {kind!r}")
    return Profile.from_ballots(m, ballots)


def verify_two_nonimposition(rule: Rule, w1: Committee, w2: Committee, m: int,
                             max_voters: int = 5, construction: str | None = None,
                             budget: int = 2_000_000) -> AxiomVerdict:
    """Look for a profile whose winners are exactly ``{w1, w2}``.

    PAV and CC (or ``construction``) use :func:`alpha_profile`.  Otherwise
    every profile on ``m`` candidates with at most ``max_voters`` voters is
    tried; finding none is reported as refuted within those bounds only.
    """
    w1, w2 = as_committee(w1), as_committee(w2)
    k = len(w1)
    target = {w1, w2}
    kind = construction or (rule.name if rule.name in ("pav", "cc") else None)
    bounds = {"m": m, "max_voters": max_voters}
    if kind is not None:
        alpha = alpha_profile(kind, w1, w2, m)
        if set(rule.winners(alpha, k)) == target:
            return AxiomVerdict("two-nonimposition", rule.name, PASS, witness={"profile": alpha, "k": k},
                                reason=f"{kind} construction", instances=1)
    count = 0
    for a in all_profiles(m, max_voters):
        count += 1
        if count > budget:
            raise DomainError(f"more than {budget} profiles")
        if set(rule.winners(a, k)) == target:
            return AxiomVerdict("two-nonimposition", rule.name, PASS, witness={"profile": a, "k": k},
                                bounds=bounds, instances=count)
    return AxiomVerdict("two-nonimposition", rule.name, REFUTED_WITHIN_BOUNDS,
                        witness={"committees": [w1, w2], "k": k},
                        reason=f"no profile with at most {max_voters} voters has winners exactly "
                               f"{{{list(w1)}, {list(w2)}}}", bounds=bounds, instances=count)


W1_PREFERRED = "w1_weakly_preferred"
W2_PREFERRED = "w2_weakly_preferred"
BOTH = "both"


def induced_comparison(rule: Rule, alpha: Profile, a: Profile, w1: Committee, w2: Committee, k: int,
                       n_max: int = 32, window: int = 8) -> str:
    """Compare ``w1`` and ``w2`` through a choice rule.

    ``w1`` is weakly preferred iff it wins ``a + n*alpha`` for every large
    enough ``n``.  For counting rules this is decided from the linear score
    asymptotics and confirmed at the computed threshold.  Other rules are
    sampled at ``n_max .. n_max + window``.
    """
    w1, w2 = as_committee(w1), as_committee(w2)
    if set(rule.winners(alpha, k)) != {w1, w2}:
        raise DomainError(f"alpha profile does not have winners exactly {{{list(w1)}, {list(w2)}}}")
    if rule.keys is not None and len(next(iter(rule.keys(a, k).values()))) == 1:
        sa = {w: v[0] for w, v in rule.keys(a, k).items()}
        sx = {w: v[0] for w, v in rule.keys(alpha, k).items()}
        top = sx[w1]
        best = max(sa[w1], sa[w2])
        n0 = 1
        for w, s in sx.items():
            if w not in (w1, w2):
                gap = Fraction(sa[w] - best) / (top - s)
                n0 = max(n0, int(gap // 1) + 1)
        if sa[w1] > sa[w2]:
            answer, expected = W1_PREFERRED, {w1}
        elif sa[w2] > sa[w1]:
            answer, expected = W2_PREFERRED, {w2}
        else:
            answer, expected = BOTH, {w1, w2}
        for n in (n0, n0 + 1):
            got = set(rule.winners(replicate(a, alpha, n), k))
            if got != expected:
                raise AssertionError(f"asymptotic winners {expected} not confirmed at n={n}: {got}")
        return answer
    has1 = has2 = True
    for n in range(n_max, n_max + window + 1):
        got = set(rule.winners(replicate(a, alpha, n), k))
        has1 &= w1 in got
        has2 &= w2 in got
    if has1 and has2:
        return BOTH
    if has1:
        return W1_PREFERRED
    if has2:
        return W2_PREFERRED
    return EXHAUSTED


CHECKERS = {
    "symmetry": check_symmetry,
    "consistency": check_consistency,
    "continuity": check_continuity,
    "weak-efficiency": check_weak_efficiency,
    "efficiency": check_efficiency,
    "disjoint-equality": check_disjoint_equality,
    "disjoint-diversity": check_disjoint_diversity,
    "dhondt": check_dhondt,
    "lower-quota": check_lower_quota_axiom,
}

PAIR_AXIOMS = {"consistency", "continuity"}

