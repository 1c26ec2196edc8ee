"""Text formats for profiles and counting functions, and JSON audit reports.

Profile files::

    # comment
    candidates: 8
    k: 4
    75: 1 2 3 4
    25: 5 6 7 8

Counting-function files list ``x y value`` lines after an ``m``/``k``
header; ``base`` names a counting function supplying missing entries
(zero otherwise) and ``validate: false`` skips the monotonicity check::

    m: 3
    k: 2
    1 1 1
    2 2 11/10
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .model import Committee, Profile
from .scoring import CountingFunction, from_table, make_counting_function
from .verdict import AxiomVerdict

REPORT_SCHEMA = 1


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class ProfileFile:
    profile: Profile
    k: int | None = None
    names: tuple[str, ...] | None = None


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _int(text: str, what: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {text!r}", line) from None


def parse_profile_file(text: str) -> ProfileFile:
    m = k = None
    names = None
    counts: dict[tuple[int, ...], int] = {}
    for number, line in _lines(text):
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value' or 'MULT: candidates', got {line!r}", number)
        head = head.strip().lower()
        if head == "candidates":
            m = _int(rest.strip(), "candidates", number)
            if m < 1:
                raise ParseError("candidates must be positive", number)
        elif head == "k":
            k = _int(rest.strip(), "k", number)
        elif head == "names":
            names = tuple(rest.split())
        else:
            if m is None:
                raise ParseError("ballot line before the 'candidates:' header", number)
            mult = _int(head, "multiplicity", number)
            if mult < 1:
                raise ParseError("multiplicity must be positive", number)
            ballot = []
            for token in rest.split():
                c = _int(token, "candidate index", number)
                if not 1 <= c <= m:
                    raise ParseError(f"candidate {c} outside 1..{m}", number)
                ballot.append(c)
            key = tuple(sorted(set(ballot)))
            counts[key] = counts.get(key, 0) + mult
    if m is None:
        raise ParseError("missing 'candidates:' header")
    if not counts:
        raise ParseError("profile has no voters")
    if names is not None and len(names) != m:
        raise ParseError(f"{len(names)} names for {m} candidates")
    return ProfileFile(Profile.from_counts(m, counts), k, names)


def parse_profile(text: str) -> Profile:
    return parse_profile_file(text).profile


def serialize_profile(a: Profile, k: int | None = None, names=None) -> str:
    out = [f"candidates: {a.m}"]
    if k is not None:
        out.append(f"k: {k}")
    if names:
        out.append("names: " + " ".join(names))
    for ballot, n in a.ballots:
        out.append(f"{n}:" + "".join(f" {c}" for c in ballot))
    return "\n".join(out) + "\n"


def parse_counting_function(text: str, name: str = "file") -> CountingFunction:
    header: dict[str, str] = {}
    entries: dict[tuple[int, int], Fraction] = {}
    for number, line in _lines(text):
        if ":" in line:
            key, _, value = line.partition(":")
            header[key.strip().lower()] = value.strip()
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'x y value', got {line!r}", number)
        x, y = _int(parts[0], "x", number), _int(parts[1], "y", number)
        try:
            entries[(x, y)] = Fraction(parts[2])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {parts[2]!r}", number) from None
    for key in ("m", "k"):
        if key not in header:
            raise ParseError(f"missing '{key}:' header")
    m, k = _int(header["m"], "m", None), _int(header["k"], "k", None)
    base = make_counting_function(m, k, header["base"]) if "base" in header else None
    validate = header.get("validate", "true").lower() not in ("false", "no", "0")
    return from_table(m, k, entries, header.get("name", name), default=base, validate=validate)


def serialize_counting_function(f: CountingFunction) -> str:
    out = [f"m: {f.m}", f"k: {f.k}", f"name: {f.name}"]
    for x in range(f.k + 1):
        for y in range(f.m + 1):
            out.append(f"{x} {y} {f(x, y)}")
    return "\n".join(out) + "\n"


def rational(q) -> str:
    """Lowest-terms ``p/q`` text; integers print without a denominator."""
    return str(Fraction(q))


def decimal(q, places: int = 6) -> str:
    return f"~{float(Fraction(q)):.{places}f}"


def _encode(value: Any) -> Any:
    if isinstance(value, Profile):
        return {"candidates": value.m, "ballots": [[n, list(b)] for b, n in value.ballots]}
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {str(key): _encode(v) for key, v in value.items()}
    return value


def _decode_witness(data: dict) -> dict:
    out: dict[str, Any] = {}
    for key, value in data.items():
        if key in ("profile", "profile_b"):
            out[key] = Profile.from_counts(value["candidates"], [(b, n) for n, b in value["ballots"]])
        elif key == "committees":
            out[key] = [tuple(w) for w in value]
        elif key == "committee":
            out[key] = tuple(value)
        else:
            out[key] = value
    return out


def verdict_report(verdict: AxiomVerdict, rule_id: str, timing: float | None = None) -> dict:
    report = {
        "schema": REPORT_SCHEMA,
        "rule": rule_id,
        "axiom": verdict.axiom,
        "status": verdict.status,
        "reason": verdict.reason,
        "witness": _encode(verdict.witness) if verdict.witness else None,
        "bounds": _encode(verdict.bounds),
        "instances": verdict.instances,
        "seed": verdict.seed,
    }
    if timing is not None:
        report["timing_seconds"] = round(timing, 3)
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


REQUIRED_REPORT_KEYS = {"schema", "rule", "axiom", "status", "witness"}


def load_report(text: str) -> dict:
    try:
        report = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not valid JSON: {exc}") from None
    missing = REQUIRED_REPORT_KEYS - set(report)
    if missing:
        raise ParseError(f"report lacks {sorted(missing)}")
    if report["schema"] != REPORT_SCHEMA:
        raise ParseError(f"unsupported report schema {report['schema']!r}")
    return report


def report_witness(report: dict) -> dict | None:
    return _decode_witness(report["witness"]) if report.get("witness") else None


def format_committee(w: Committee, names=None) -> str:
    if names:
        return " ".join(names[c - 1] for c in w)
    return " ".join(map(str, w))

