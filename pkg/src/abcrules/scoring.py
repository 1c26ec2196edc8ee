"""Counting functions and the committee score they induce.

A counting function ``f(x, y)`` is the score a committee earns from a voter
who approves ``x`` of its members and ``y`` candidates overall.  Tables are
dense ``(k+1) x (m+1)`` grids of :class:`~fractions.Fraction`; scores are
exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .model import Committee, DomainError, Profile, mask_of

Rational = Fraction | int


class ValidationError(ValueError):
    """A counting-function table violates monotonicity in ``x``."""


@dataclass(frozen=True)
class CountingFunction:
    m: int
    k: int
    table: tuple[tuple[Fraction, ...], ...]
    name: str = "custom"
    _scaled: tuple[tuple[tuple[int, ...], ...], int] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        if len(self.table) != self.k + 1 or any(len(row) != self.m + 1 for row in self.table):
            raise DomainError(f"table must be {self.k + 1} x {self.m + 1}")
        denom = math.lcm(*(v.denominator for row in self.table for v in row))
        scaled = tuple(tuple(int(v * denom) for v in row) for row in self.table)
        object.__setattr__(self, "_scaled", (scaled, denom))

    def __call__(self, x: int, y: int) -> Fraction:
        return self.table[x][y]

    def scaled_table(self) -> tuple[tuple[tuple[int, ...], ...], int]:
        """Integer table ``T`` and denominator ``D`` with ``f(x, y) == T[x][y] / D``."""
        return self._scaled

    def monotonicity_violation(self) -> tuple[int, int, int] | None:
        """First ``(x, x', y)`` with ``x > x'`` but ``f(x, y) < f(x', y)``.

        Cells with ``x > y`` never occur (a voter cannot have more approved
        committee members than approved candidates) and are not checked.
        """
        for y in range(self.m + 1):
            for x in range(1, min(self.k, y) + 1):
                if self.table[x][y] < self.table[x - 1][y]:
                    return x, x - 1, y
        return None

    def validate(self) -> CountingFunction:
        bad = self.monotonicity_violation()
        if bad is not None:
            x, x2, y = bad
            raise ValidationError(
                f"{self.name}: f({x},{y}) = {self(x, y)} < f({x2},{y}) = {self(x2, y)}"
            )
        return self

    def with_name(self, name: str) -> CountingFunction:
        return CountingFunction(self.m, self.k, self.table, name)


def _check_dims(m: int, k: int):
    if not 1 <= k <= m:
        raise DomainError(f"need 1 <= k <= m, got m={m}, k={k}")


def from_function(m: int, k: int, fn: Callable[[int, int], Rational], name: str = "custom",
                  validate: bool = True) -> CountingFunction:
    _check_dims(m, k)
    table = tuple(tuple(Fraction(fn(x, y)) for y in range(m + 1)) for x in range(k + 1))
    f = CountingFunction(m, k, table, name)
    return f.validate() if validate else f


def from_table(m: int, k: int, values: Mapping[tuple[int, int], Rational] | Sequence[Sequence[Rational]],
               name: str = "custom", default: CountingFunction | None = None,
               validate: bool = True) -> CountingFunction:
    """Counting function from explicit entries.

    ``values`` is either a full ``[x][y]`` grid or a sparse ``{(x, y): value}``
    mapping whose missing entries come from ``default`` (or zero).
    """
    if isinstance(values, Mapping):
        for x, y in values:
            if not (0 <= x <= k and 0 <= y <= m):
                raise DomainError(f"entry ({x},{y}) outside [0,{k}] x [0,{m}]")

        def fn(x, y):
            if (x, y) in values:
                return values[(x, y)]
            return default(x, y) if default is not None else 0
    else:
        def fn(x, y):
            return values[x][y]
    return from_function(m, k, fn, name, validate)


def thiele(m: int, k: int, weights: Sequence[Rational], name: str = "thiele") -> CountingFunction:
    """``f(x, y) = w_1 + ... + w_x``; only the first ``k`` weights matter."""
    if len(weights) < k:
        raise DomainError(f"need {k} Thiele weights, got {len(weights)}")
    ws = [Fraction(w) for w in weights[:k]]
    if any(w < 0 for w in ws):
        raise DomainError("Thiele weights must be non-negative")
    prefix = [Fraction(0)]
    for w in ws:
        prefix.append(prefix[-1] + w)
    return from_function(m, k, lambda x, y: prefix[x], name)


def av(m: int, k: int) -> CountingFunction:
    return thiele(m, k, [1] * k, "av")


def pav(m: int, k: int) -> CountingFunction:
    return thiele(m, k, [Fraction(1, j) for j in range(1, k + 1)], "pav")


def cc(m: int, k: int) -> CountingFunction:
    return constant_threshold(m, k, 1, "cc")


def constant_threshold(m: int, k: int, t: int, name: str | None = None) -> CountingFunction:
    if not 1 <= t <= k:
        raise DomainError(f"threshold {t} outside [1, {k}]")
    return from_function(m, k, lambda x, y: int(x >= t), name or f"ct:{t}")


def sav(m: int, k: int) -> CountingFunction:
    return from_function(m, k, lambda x, y: Fraction(x, y) if y else 0, "sav")


def sainte_lague(m: int, k: int) -> CountingFunction:
    return thiele(m, k, [Fraction(1, 2 * j - 1) for j in range(1, k + 1)], "sainte-lague")


def square_root(m: int, k: int) -> CountingFunction:
    return thiele(m, k, [Fraction(1, j * j) for j in range(1, k + 1)], "square-root")


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


BUILTIN = {
    "av": av,
    "pav": pav,
    "cc": cc,
    "sav": sav,
    "sainte-lague": sainte_lague,
    "sainte_lague": sainte_lague,
    "square-root": square_root,
    "square_root": square_root,
}


def make_counting_function(m: int, k: int, spec: str) -> CountingFunction:
    """Build a counting function from a short name.

    Accepted: ``av``, ``pav``, ``cc``, ``sav``, ``sainte-lague``,
    ``square-root``, ``ct:T`` and ``thiele:w1,w2,...``.
    """
    _check_dims(m, k)
    key = spec.strip().lower()
    if key in BUILTIN:
        return BUILTIN[key](m, k)
    if key.startswith("ct:"):
        try:
            t = int(key[3:])
        except ValueError as exc:
            raise DomainError(f"bad threshold in {spec!r}") from exc
        return constant_threshold(m, k, t)
    if key.startswith("thiele:"):
        weights = [_parse_rational(w) for w in key[7:].split(",") if w.strip()]
        return thiele(m, k, weights, f"thiele:{key[7:]}")
    raise DomainError(f"unknown counting function {spec!r}")


def score(f: CountingFunction, w: Committee, a: Profile) -> Fraction:
    if f.m != a.m:
        raise DomainError(f"counting function is for m={f.m}, profile has m={a.m}")
    if len(w) != f.k or len(set(w)) != f.k:
        raise DomainError(f"committee {w} does not have {f.k} distinct members")
    table, denom = f.scaled_table()
    wm = mask_of(w)
    total = sum(n * table[(bm & wm).bit_count()][y] for bm, y, n in a.masks())
    return Fraction(total, denom)


def relevant_domain(m: int, k: int) -> frozenset[tuple[int, int]]:
    """Pairs ``(|ballot & W|, |ballot|)`` that actually occur for size-``k`` committees."""
    if not 1 <= k < m:
        raise DomainError(f"need 1 <= k < m, got m={m}, k={k}")
    pairs = {(x, y) for x in range(k + 1) for y in range(m) if x <= y and k - x <= m - y}
    pairs.add((k, m))
    return frozenset(pairs)


def _columns(m: int, k: int) -> dict[int, list[int]]:
    cols: dict[int, list[int]] = {}
    for x, y in sorted(relevant_domain(m, k), key=lambda p: (p[1], p[0])):
        cols.setdefault(y, []).append(x)
    return cols


@dataclass(frozen=True)
class Equivalence:
    """Outcome of looking for ``f = scale * g + offset(y)`` on the relevant domain.

    ``status`` is ``"yes"`` or ``"no-affine-relation"``.  The latter only
    says no affine relation exists; the two rules may still coincide.
    """

    status: str
    scale: Fraction | None = None
    offsets: dict[int, Fraction] | None = None
    separating: tuple[int, int] | None = None
    trivial: bool = False

    def __bool__(self):
        return self.status == "yes"


def equivalent(f: CountingFunction, g: CountingFunction) -> Equivalence:
    if (f.m, f.k) != (g.m, g.k):
        raise DomainError("counting functions have different dimensions")
    cols = _columns(f.m, f.k)
    diffs = []
    for y, xs in cols.items():
        x0 = xs[0]
        for x in xs[1:]:
            diffs.append(((x, y), f(x, y) - f(x0, y), g(x, y) - g(x0, y)))
    pivot = next((d for d in diffs if d[2] != 0), None)
    if pivot is None:
        moving = next((d for d in diffs if d[1] != 0), None)
        if moving is not None:
            return Equivalence("no-affine-relation", separating=moving[0])
        scale = Fraction(1)
        trivial = True
    else:
        scale = pivot[1] / pivot[2]
        trivial = False
        if scale <= 0:
            return Equivalence("no-affine-relation", separating=pivot[0])
        for pair, df, dg in diffs:
            if df != scale * dg:
                return Equivalence("no-affine-relation", separating=pair)
    offsets = {y: f(xs[0], y) - scale * g(xs[0], y) for y, xs in cols.items()}
    return Equivalence("yes", scale, offsets, trivial=trivial)


def normalize(f: CountingFunction) -> CountingFunction:
    """Equivalent counting function with ``f(0, y) = 0`` and unit first step.

    Subtracts ``f(0, y)`` from every column and divides by the absolute value
    of ``f(1,1) - f(0,1)`` (or of the first nonzero step on the relevant
    domain when that one is zero).  A function that is constant in ``x`` on
    the relevant domain normalizes to the zero table.
    """
    if f.k >= f.m:
        raise DomainError("normalization needs k < m")
    steps = [f(x, y) - f(x - 1, y) for y, xs in _columns(f.m, f.k).items() for x in xs[1:]]
    first = f(1, 1) - f(0, 1)
    if first == 0:
        first = next((s for s in steps if s != 0), Fraction(0))
    if first == 0:
        return from_function(f.m, f.k, lambda x, y: 0, f"normalized({f.name})", validate=False)
    unit = abs(first)
    return from_function(f.m, f.k, lambda x, y: (f(x, y) - f(0, y)) / unit,
                         f"normalized({f.name})", validate=False)


def affine(f: CountingFunction, scale: Rational, offset: Rational | Callable[[int], Rational] = 0,
           name: str | None = None) -> CountingFunction:
    """``scale * f(x, y) + offset(y)``."""
    off = offset if callable(offset) else (lambda y: offset)
    return from_function(f.m, f.k, lambda x, y: Fraction(scale) * f(x, y) + Fraction(off(y)),
                         name or f"affine({f.name})", validate=False)

