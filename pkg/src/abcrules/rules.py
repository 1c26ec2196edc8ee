"""Rules as black boxes for the axiom harness.

A :class:`Rule` maps ``(profile, k)`` to a ranking of committees, a set of
winning committees, or both.  Rules whose ranking is given by an additive
score vector compared lexicographically (every counting rule, and three of
the four independence-gallery rules) also expose that vector, which lets
continuity be decided exactly instead of by probing replication factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .model import Committee, DomainError, Profile, add_profiles, detect_party_list, scale_profile
from .scoring import BUILTIN, CountingFunction, from_function, make_counting_function, pav
from .winners import (
    RankedTiers,
    check_size,
    committee_masks,
    enumerate_tiers,
    rank_by_key,
    reverse_sequential_thiele,
    sequential_thiele,
    thiele_weights,
)

KeyFn = Callable[[Profile, int], dict[Committee, tuple]]
NEVER = None


@dataclass(eq=False)
class Rule:
    name: str
    kind: str
    ranker: Callable[[Profile, int], RankedTiers] | None = None
    chooser: Callable[[Profile, int], tuple[Committee, ...]] | None = None
    keys: KeyFn | None = None
    factory: Callable[[int, int], CountingFunction] | None = None
    asymptotic: Callable[..., int | None] | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_ranking(self) -> bool:
        return self.ranker is not None

    def ranking(self, a: Profile, k: int) -> RankedTiers:
        if self.ranker is None:
            raise DomainError(f"{self.name} is a choice rule and does not rank committees")
        key = ("rank", a, k)
        if key not in self._cache:
            if len(self._cache) > 200_000:
                self._cache.clear()
            self._cache[key] = self.ranker(a, k)
        return self._cache[key]

    def winners(self, a: Profile, k: int) -> tuple[Committee, ...]:
        if self.chooser is None:
            return self.ranking(a, k).winners
        key = ("win", a, k)
        if key not in self._cache:
            if len(self._cache) > 200_000:
                self._cache.clear()
            self._cache[key] = self.chooser(a, k)
        return self._cache[key]

    def score_keys(self, a: Profile, k: int) -> dict[Committee, tuple]:
        if self.keys is None:
            raise NotImplementedError(self.name)
        key = ("keys", a, k)
        if key not in self._cache:
            if len(self._cache) > 200_000:
                self._cache.clear()
            self._cache[key] = self.keys(a, k)
        return self._cache[key]

    def counting_function(self, m: int, k: int) -> CountingFunction:
        if self.factory is None:
            raise DomainError(f"{self.name} is not a counting rule")
        return self.factory(m, k)

    def continuity_threshold(self, a: Profile, b: Profile, k: int,
                             w1: Committee, w2: Committee) -> int | None:
        """Smallest ``n`` with ``w1`` strictly above ``w2`` on ``a + n*b``.

        Assumes ``w1`` is strictly above ``w2`` on ``b``.  Returns ``None``
        when no ``n`` works.  Raises :class:`NotImplementedError` for black
        boxes with no exact asymptotics.
        """
        if self.asymptotic is not None:
            return self.asymptotic(a, b, k, w1, w2)
        ka, kb = self.score_keys(a, k), self.score_keys(b, k)
        return lexicographic_threshold(_diff(ka[w1], ka[w2]), _diff(kb[w1], kb[w2]))


def _diff(u: tuple, v: tuple) -> tuple:
    return tuple(p - q for p, q in zip(u, v))


def lexicographic_threshold(base: tuple, step: tuple) -> int | None:
    """Smallest ``n >= 1`` with ``base + n*step`` lexicographically positive.

    ``step`` must itself be lexicographically positive.
    """
    for b, s in zip(base, step):
        if s == 0:
            if b > 0:
                return 1
            if b < 0:
                return NEVER
            continue
        if s < 0:
            raise DomainError("step vector is not lexicographically positive")
        # b + n*s > 0 for n > -b/s; later components are then irrelevant
        return max(1, math.floor(Fraction(-b) / s) + 1)
    raise DomainError("step vector is zero")


def _key_ranking(keys: KeyFn) -> Callable[[Profile, int], RankedTiers]:
    def ranker(a: Profile, k: int) -> RankedTiers:
        check_size(a.m, k)
        values = keys(a, k)
        return rank_by_key(a.m, k, lambda w, wm: values[w])
    return ranker


def counting_rule(spec: str | Callable[[int, int], CountingFunction], name: str | None = None,
                  kind: str = "counting") -> Rule:
    """Rule induced by a counting function.

    ``spec`` is a name accepted by :func:`make_counting_function` or a
    factory ``(m, k) -> CountingFunction``.
    """
    if isinstance(spec, str):
        label = name or spec
        factory = lambda m, k: make_counting_function(m, k, spec)  # noqa: E731
    else:
        label = name or getattr(spec, "__name__", "custom")
        factory = spec
    tables: dict[tuple[int, int], CountingFunction] = {}

    def table_for(m, k):
        if (m, k) not in tables:
            tables[(m, k)] = factory(m, k)
        return tables[(m, k)]

    def keys(a: Profile, k: int) -> dict[Committee, tuple]:
        table, denom = table_for(a.m, k).scaled_table()
        ballots = a.masks()
        return {w: (Fraction(sum(n * table[(bm & wm).bit_count()][y] for bm, y, n in ballots), denom),)
                for w, wm in committee_masks(a.m, k)}

    def ranker(a: Profile, k: int) -> RankedTiers:
        return enumerate_tiers(table_for(a.m, k), a)

    return Rule(label, kind, ranker=ranker, keys=keys, factory=table_for)


def sequential_rule(weights: str | list, name: str | None = None) -> Rule:
    label = name or (f"seq-{weights}" if isinstance(weights, str) else "seq-thiele")

    def chooser(a: Profile, k: int):
        ws = thiele_weights(weights, k) if isinstance(weights, str) else weights
        return sequential_thiele(ws, a, k)

    return Rule(label, "sequential", chooser=chooser)


def reverse_sequential_rule(weights: str | list, name: str | None = None) -> Rule:
    label = name or (f"revseq-{weights}" if isinstance(weights, str) else "revseq-thiele")

    def chooser(a: Profile, k: int):
        ws = thiele_weights(weights, a.m) if isinstance(weights, str) else weights
        return reverse_sequential_thiele(ws, a, k)

    return Rule(label, "reverse_sequential", chooser=chooser)


def _doubled_candidate_av(c: int) -> Rule:
    def keys(a: Profile, k: int):
        counts = a.approval_counts()
        out = {}
        for w, _ in committee_masks(a.m, k):
            s = sum(counts[x] for x in w)
            if c in w:
                s += counts[c]
            out[w] = (s,)
        return out

    return Rule(f"doubled-candidate-av:{c}", "pathological", ranker=_key_ranking(keys), keys=keys)


def _pav_av_tiebreak() -> Rule:
    def keys(a: Profile, k: int):
        table, denom = pav(a.m, k).scaled_table()
        ballots = a.masks()
        out = {}
        for w, wm in committee_masks(a.m, k):
            p = q = 0
            for bm, y, n in ballots:
                x = (bm & wm).bit_count()
                p += n * table[x][y]
                q += n * x
            out[w] = (Fraction(p, denom), q)
        return out

    return Rule("pav-av-tiebreak", "pathological", ranker=_key_ranking(keys), keys=keys)


def _partylist_pav_else_trivial() -> Rule:
    def ranker(a: Profile, k: int) -> RankedTiers:
        check_size(a.m, k)
        if detect_party_list(a) is not None:
            return enumerate_tiers(pav(a.m, k), a)
        return rank_by_key(a.m, k, lambda w, wm: 0)

    def asymptotic(a, b, k, w1, w2):
        # a + n*b has the same distinct ballots for every n >= 1
        if detect_party_list(add_profiles(a, b)) is None:
            return NEVER
        f = pav(a.m, k)
        ka = enumerate_tiers(f, a)
        kb = enumerate_tiers(f, b)
        return lexicographic_threshold((ka.score_of(w1) - ka.score_of(w2),),
                                       (kb.score_of(w1) - kb.score_of(w2),))

    return Rule("partylist-pav-else-trivial", "pathological", ranker=ranker, asymptotic=asymptotic)


def _reversed_av() -> Rule:
    def factory(m, k):
        return from_function(m, k, lambda x, y: -x, "reversed-av", validate=False)

    return counting_rule(factory, "reversed-av", kind="pathological")


GALLERY = ("doubled-candidate-av", "pav-av-tiebreak", "partylist-pav-else-trivial", "reversed-av")

# the single axiom each gallery rule is built to violate
DESIGNATED_FAILURE = {
    "doubled-candidate-av": "neutrality",
    "pav-av-tiebreak": "continuity",
    "partylist-pav-else-trivial": "consistency",
    "reversed-av": "weak-efficiency",
}


def pathological_rule(name: str) -> Rule:
    """One of the rules used to show the basic axioms are independent.

    ``doubled-candidate-av[:c]`` counts approvals of candidate ``c``
    (default 1) twice; ``pav-av-tiebreak`` ranks by PAV score, then AV
    score; ``partylist-pav-else-trivial`` is PAV on party-list profiles and
    ties everything otherwise; ``reversed-av`` uses ``f(x, y) = -x`` and
    skips the monotonicity check.
    """
    base, _, arg = name.partition(":")
    base = base.replace("_", "-")
    if base == "doubled-candidate-av":
        return _doubled_candidate_av(int(arg) if arg else 1)
    if base == "pav-av-tiebreak":
        return _pav_av_tiebreak()
    if base == "partylist-pav-else-trivial":
        return _partylist_pav_else_trivial()
    if base == "reversed-av":
        return _reversed_av()
    raise DomainError(f"unknown pathological rule {name!r}")


def resolve_rule(spec: str) -> Rule:
    """Rule from a command-line style name.

    Counting rules (``pav``, ``ct:2``, ``thiele:1,1/2``, ...), ``seqpav`` and
    ``seq-<name>``, ``revseq-<name>``, and the gallery rule names.
    """
    key = spec.strip().lower()
    if key == "seqpav":
        return sequential_rule("pav", "seqpav")
    if key.startswith("seq-"):
        return sequential_rule(key[4:])
    if key.startswith("revseq-"):
        return reverse_sequential_rule(key[7:])
    if key.replace("_", "-").partition(":")[0] in GALLERY:
        return pathological_rule(key)
    if key in BUILTIN or key.startswith(("ct:", "thiele:")):
        return counting_rule(key)
    raise DomainError(f"unknown rule {spec!r}")


def replicate(a: Profile, b: Profile, n: int) -> Profile:
    """``a + n*b``."""
    return add_profiles(a, scale_profile(b, n))
