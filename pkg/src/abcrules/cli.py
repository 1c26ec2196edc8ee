"""Command-line interface.

Exit codes: 0 computed or axiom satisfied, 1 axiom violated (witness
printed), 2 usage or parse error, 3 capacity exhausted or search
undecided.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import io
from .apportionment import divisor_apportion
from .axioms import alpha_profile
from .model import CapacityError, DomainError, Profile, as_committee
from .rules import Rule, counting_rule, resolve_rule
from .scoring import ValidationError, equivalent, make_counting_function, score
from .search import SearchConfig, axiom_key, replay, run_check, search_counterexample
from .verdict import EXHAUSTED, FAIL
from .winners import bnb_winners

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_rule(spec: str) -> Rule:
    """Rule names as accepted by :func:`resolve_rule`, plus ``file:PATH``."""
    if spec.startswith("file:"):
        f = io.parse_counting_function(_read(spec[5:]), name=spec)

        def factory(m, k):
            if (m, k) != (f.m, f.k):
                raise DomainError(f"{spec} is defined for m={f.m}, k={f.k}, not m={m}, k={k}")
            return f

        return counting_rule(factory, spec)
    return resolve_rule(spec)


def load_function(spec: str, m: int, k: int):
    if spec.startswith("file:"):
        f = io.parse_counting_function(_read(spec[5:]), name=spec)
        if (f.m, f.k) != (m, k):
            raise DomainError(f"{spec} is defined for m={f.m}, k={f.k}")
        return f
    return make_counting_function(m, k, spec)


def _profile_and_k(path: str, k: int | None) -> tuple[io.ProfileFile, int]:
    pf = io.parse_profile_file(_read(path))
    k = k if k is not None else pf.k
    if k is None:
        raise UsageError(f"no committee size: pass --k or add 'k:' to {path}")
    return pf, k


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a list of integers, got {text!r}") from None


class Printer:
    def __init__(self, decimal: bool, names=None):
        self.decimal = decimal
        self.names = names

    def q(self, value) -> str:
        if isinstance(value, tuple):
            return "(" + ", ".join(self.q(v) for v in value) + ")"
        text = io.rational(value)
        if self.decimal:
            text += f" ({io.decimal(value)})"
        return text

    def committee(self, w) -> str:
        return io.format_committee(w, self.names)


def cmd_score(args, out) -> int:
    pf, _ = _profile_and_k(args.profile, len(_ints(args.committee)))
    w = as_committee(_ints(args.committee))
    f = load_function(args.rule, pf.profile.m, len(w))
    print(Printer(args.decimal).q(score(f, w, pf.profile)), file=out)
    return EXIT_OK


def cmd_winners(args, out) -> int:
    pf, k = _profile_and_k(args.profile, args.k)
    p = Printer(args.decimal, pf.names)
    rule = load_rule(args.rule)
    a = pf.profile
    if args.engine == "bnb":
        if rule.factory is None:
            raise UsageError("--engine bnb needs a counting rule")
        result = bnb_winners(rule.counting_function(a.m, k), a)
        ws, top = result.committees, result.score
    elif rule.is_ranking:
        tiers = rule.ranking(a, k)
        ws, top = tiers.winners, tiers.top_score
    else:
        ws, top = rule.winners(a, k), None
    for w in ws:
        print(p.committee(w), file=out)
    if top is not None:
        print(f"score: {p.q(top)}", file=out)
    print(f"winning committees: {len(ws)}", file=out)
    return EXIT_OK


def cmd_rank(args, out) -> int:
    pf, k = _profile_and_k(args.profile, args.k)
    p = Printer(args.decimal, pf.names)
    rule = load_rule(args.rule)
    if not rule.is_ranking:
        raise UsageError(f"{args.rule} chooses winners but does not rank committees")
    tiers = rule.ranking(pf.profile, k).tiers
    for s, ws in tiers[: args.top] if args.top else tiers:
        print(f"{p.q(s)}: " + " | ".join(p.committee(w) for w in ws), file=out)
    return EXIT_OK


def cmd_apportion(args, out) -> int:
    weights = _ints(args.weights)
    caps = _ints(args.capacities) if args.capacities else [args.seats] * len(weights)
    for seats in divisor_apportion(weights, caps, args.seats, args.method):
        print(" ".join(map(str, seats)), file=out)
    return EXIT_OK


def _status_code(status: str) -> int:
    if status == FAIL:
        return EXIT_FAIL
    if status == EXHAUSTED:
        return EXIT_CAPACITY
    return EXIT_OK


def _print_verdict(report: dict, out):
    print(f"{report['axiom']} [{report['rule']}]: {report['status']}", file=out)
    if report.get("reason"):
        print(f"reason: {report['reason']}", file=out)
    if report.get("witness"):
        w = report["witness"]
        for key in sorted(w):
            value = w[key]
            if isinstance(value, dict) and "ballots" in value:
                print(f"{key}:", file=out)
                text = io.serialize_profile(Profile.from_counts(value["candidates"],
                                                                [(b, n) for n, b in value["ballots"]]))
                for line in text.splitlines():
                    print(f"  {line}", file=out)
            else:
                print(f"{key}: {value}", file=out)
    if report.get("instances"):
        print(f"instances: {report['instances']}", file=out)


def _write_report(report: dict, path: str | None):
    if path:
        Path(path).write_text(io.dump_report(report), encoding="utf-8")


def cmd_audit(args, out) -> int:
    if args.replay:
        old = io.load_report(_read(args.replay))
        rule = load_rule(old["rule"])
        witness = io.report_witness(old)
        if witness is None:
            raise UsageError("report has no witness to replay")
        verdict = replay(old["axiom"], rule, witness)
        new = io.verdict_report(verdict, old["rule"])
        same = new["status"] == old["status"] and new["witness"] == old["witness"]
        _print_verdict(new, out)
        print("replay: " + ("identical status and witness" if same else "DIFFERS from the report"), file=out)
        new.update(bounds=old.get("bounds", {}), instances=old.get("instances", 0), seed=old.get("seed"))
        _write_report(new, args.out)
        return _status_code(verdict.status) if same else EXIT_FAIL
    if not args.axiom or not args.rule:
        raise UsageError("audit needs --axiom and --rule (or --replay)")
    axiom = axiom_key(args.axiom)
    rule = load_rule(args.rule)
    start = time.perf_counter()
    if args.profile_a:
        pf, k = _profile_and_k(args.profile_a, args.k)
        b = io.parse_profile(_read(args.profile_b)) if args.profile_b else None
        if axiom in ("consistency", "continuity") and b is None:
            raise UsageError(f"{axiom} needs --profile-b")
        verdict = run_check(axiom, rule, pf.profile, b, k, SearchConfig(n_max=args.n_max))
        if verdict.witness is not None:
            verdict.witness.setdefault("k", k)
    else:
        cfg = SearchConfig(
            max_m=args.max_m, max_k=args.max_k, max_voters=args.max_voters,
            mode="random" if args.samples else "exhaustive",
            seed=args.seed, samples=args.samples or 0, min_m=args.min_m, min_k=args.min_k,
            space=args.space, budget=args.budget, n_max=args.n_max,
        )
        verdict = search_counterexample(axiom, rule, cfg)
    report = io.verdict_report(verdict, args.rule, time.perf_counter() - start)
    _print_verdict(report, out)
    _write_report(report, args.out)
    return _status_code(verdict.status)


def cmd_equiv(args, out) -> int:
    f = load_function(args.f, args.m, args.k)
    g = load_function(args.g, args.m, args.k)
    result = equivalent(f, g)
    p = Printer(args.decimal)
    if result.status == "yes":
        print(f"yes: f = {p.q(result.scale)} * g + d(y)" + (" (both trivial)" if result.trivial else ""),
              file=out)
        for y, d in sorted(result.offsets.items()):
            print(f"d({y}) = {p.q(d)}", file=out)
    else:
        print(f"{result.status}: separating pair {result.separating}", file=out)
    return EXIT_OK


def cmd_alpha(args, out) -> int:
    w1, w2 = as_committee(_ints(args.w1)), as_committee(_ints(args.w2))
    m = args.m or max(w1 + w2)
    a = alpha_profile(args.kind, w1, w2, m)
    out.write(io.serialize_profile(a, len(w1)))
    if args.check:
        won = set(counting_rule(args.kind).winners(a, len(w1)))
        ok = won == {w1, w2}
        print(f"# {args.kind} winners: " + " | ".join(" ".join(map(str, w)) for w in sorted(won)), file=out)
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abcrules", description="Approval-based committee elections.")
    parser.add_argument("--decimal", action="store_true", help="also show decimal approximations")
    # accept --decimal after the subcommand too
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--decimal", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("score", parents=[common], help="score of one committee")
    s.add_argument("--rule", required=True)
    s.add_argument("--profile", required=True)
    s.add_argument("--committee", required=True, help="e.g. 1,2,3")
    s.set_defaults(run=cmd_score)

    s = sub.add_parser("winners", parents=[common], help="winning committees")
    s.add_argument("--rule", required=True)
    s.add_argument("--profile", required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--engine", choices=["enum", "bnb"], default="enum")
    s.set_defaults(run=cmd_winners)

    s = sub.add_parser("rank", parents=[common], help="all committees in score tiers")
    s.add_argument("--rule", required=True)
    s.add_argument("--profile", required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--top", type=int, help="only the first TOP tiers")
    s.set_defaults(run=cmd_rank)

    s = sub.add_parser("apportion", parents=[common], help="divisor apportionment")
    s.add_argument("--method", choices=["dhondt", "sainte-lague"], default="dhondt")
    s.add_argument("--weights", required=True)
    s.add_argument("--capacities")
    s.add_argument("--seats", type=int, required=True)
    s.set_defaults(run=cmd_apportion)

    s = sub.add_parser("audit", parents=[common], help="check an axiom on given profiles or by search")
    s.add_argument("--axiom")
    s.add_argument("--rule")
    s.add_argument("--profile-a")
    s.add_argument("--profile-b")
    s.add_argument("--k", type=int)
    s.add_argument("--max-m", type=int, default=3)
    s.add_argument("--min-m", type=int, default=2)
    s.add_argument("--max-k", type=int, default=2)
    s.add_argument("--min-k", type=int, default=1)
    s.add_argument("--max-voters", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, help="random search with this many samples")
    s.add_argument("--space", default="auto", choices=["auto", "all", "party-list", "disjoint", "band"])
    s.add_argument("--budget", type=int, default=5_000_000)
    s.add_argument("--n-max", type=int, default=64)
    s.add_argument("--replay", help="re-run the witness of a saved report")
    s.add_argument("--out", help="write a JSON report")
    s.set_defaults(run=cmd_audit)

    s = sub.add_parser("equiv", parents=[common], help="affine equivalence of two counting functions")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(run=cmd_equiv)

    s = sub.add_parser("alpha", parents=[common], help="profile whose winners are exactly two given committees")
    s.add_argument("--kind", choices=["pav", "cc"], required=True)
    s.add_argument("--w1", required=True)
    s.add_argument("--w2", required=True)
    s.add_argument("--m", type=int)
    s.add_argument("--check", action="store_true", help="verify the winners and report them")
    s.set_defaults(run=cmd_alpha)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.run(args, out)
    except (UsageError, io.ParseError, DomainError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity exhausted: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
