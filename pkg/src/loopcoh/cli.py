"""Command-line interface: ``loopcoh <command> --builtin NAME | --space FILE``.

Exit codes: 0 success, 2 malformed space or arguments, 3 a required
hypothesis is not met, 4 an internal invariant failed (e.g. d o d != 0).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import __version__
from .basealg import Class
from .emss import (HypothesisError, Verdict, classify, e2_page, local_global,
                   loop_series, splitting_check)
from .grfield import DifferentialError
from .series import invert_generators
from .spaces import DEFAULT_PRIMES, SpaceSpec, SpecError, builtin_names, load_spec
from .thom import SphereClass, massey_consistency, massey_transform, sphere_mul, wu_class

REPORT_SCHEMA = "loopcoh-report/1"

EXIT_OK, EXIT_SCHEMA, EXIT_HYPOTHESIS, EXIT_INVARIANT = 0, 2, 3, 4

COMMANDS = ("classify", "e2", "series", "generators", "massey", "split-check",
            "local-global")


class StrictFailure(Exception):
    pass


def _class_json(c: Class) -> list:
    return c.serialize()


def _classification_record(p: int, c) -> dict:
    return {
        "prime": p,
        "verdict": c.verdict.value,
        "evidence": c.evidence.as_dict(),
        "generators": None if c.generator_counts is None else {
            "shape": c.generator_counts.shape.value,
            "counts": c.generator_counts.records(),
        },
    }


def cmd_classify(spec: SpaceSpec, p: int, args) -> dict:
    c = classify(spec.thom_module(p), spec.max_degree)
    if args.strict and c.verdict is Verdict.UNKNOWN:
        raise StrictFailure(f"p = {p}: verdict Unknown ({c.evidence.reason})")
    return _classification_record(p, c)


def cmd_e2(spec: SpaceSpec, p: int, args) -> dict:
    page = e2_page(spec.thom_module(p), spec.max_degree)
    cells = []
    for (s, t) in sorted(set(page.word_counts) | set(page.dims)):
        words = page.word_counts.get((s, t), 0)
        dim = page.dims.get((s, t), 0)
        if words or dim:
            cells.append({"s": -s, "t": t, "dim": dim, "words": words})
    return {"prime": p, "collapse": page.collapse, "bidegrees": cells,
            "total_dims": [{"degree": d, "dim": v} for d, v in enumerate(page.total_dims())]}


def cmd_series(spec: SpaceSpec, p: int, args) -> dict:
    return {"prime": p, "series": loop_series(spec.thom_module(p), spec.max_degree).records()}


def cmd_generators(spec: SpaceSpec, p: int, args) -> dict:
    T = spec.thom_module(p)
    c = classify(T, spec.max_degree)
    if c.verdict is Verdict.UNKNOWN:
        raise HypothesisError(f"p = {p}: no structure theorem applies ({c.evidence.reason})")
    counts = c.generator_counts
    # independent re-inversion from the loop series as a guard
    again = invert_generators(loop_series(T, spec.max_degree), counts.shape, counts.p)
    if again != counts:
        raise AssertionError("generator inversion is not reproducible")
    return {"prime": p, "verdict": c.verdict.value, "shape": counts.shape.value,
            "generators": counts.records()}


def cmd_massey(spec: SpaceSpec, p: int, args) -> dict:
    T = spec.thom_module(p)
    M = spec.massey_data(p)
    if M is None:
        raise HypothesisError(f"space {spec.name!r} declares no Massey relation")
    if not T.is_euler_zero():
        raise HypothesisError("hypothesis not met: u^2 = 0 is required for the "
                              "sphere-bundle exact sequence")
    n = T.n
    A = T.base
    v = SphereClass.v(A, n)
    square = sphere_mul(v, v, M)
    transforms = []
    if n - 1 <= A.truncation:
        for mono in A.monomial_basis(n - 1):
            w = A.monomial(mono)
            M2 = massey_transform(M, w)
            v2 = SphereClass(A.one(), w)
            lhs = sphere_mul(v2, v2, M)
            # (v+w)^2 should equal s' + t'(v+w)
            expected = SphereClass(M2.t, M2.s + M2.t * w)
            transforms.append({"w": _class_json(w), "s": _class_json(M2.s),
                               "t": _class_json(M2.t), "verified": lhs == expected})
    consistency = None
    wu = None
    if p == 2 and n % 2 == 1:
        consistency = massey_consistency(T, M)
        wu = _class_json(wu_class(T))
    return {"prime": p, "relation": {"s": _class_json(M.s), "t": _class_json(M.t),
                                     "text": M.relation()},
            "v_squared": {"a": _class_json(square.a), "b": _class_json(square.b)},
            "transforms": transforms, "wu_class": wu, "consistent": consistency}


def cmd_split_check(spec: SpaceSpec, p: int, args) -> dict:
    return {"prime": p, "holds": splitting_check(spec.thom_module(p), spec.max_degree)}


PER_PRIME = {
    "classify": cmd_classify,
    "e2": cmd_e2,
    "series": cmd_series,
    "generators": cmd_generators,
    "massey": cmd_massey,
    "split-check": cmd_split_check,
}


def cmd_local_global(spec: SpaceSpec, primes: list[int], args) -> dict:
    excluded = sorted(set(args.exclude or []))
    results, excluded_records = [], []
    for p in primes:
        c = classify(spec.thom_module(p), spec.max_degree)
        if p in excluded:
            excluded_records.append(_classification_record(p, c))
        else:
            results.append((p, c))
    if not results:
        raise HypothesisError("every sampled prime is excluded")
    lg = local_global(results, excluded)
    return {
        "polynomial": lg.polynomial,
        "ring": lg.ring,
        "verdict": f"polynomial over {lg.ring}" if lg.polynomial
        else f"not shown polynomial over {lg.ring}",
        "sampled": [_classification_record(p, c) for p, c in results],
        "excluded": excluded_records,
        "generators": None if lg.counts is None else lg.counts.records(),
        "disagreement": lg.disagreement,
    }


def build_report(command: str, spec: SpaceSpec, primes: list[int], args) -> dict:
    report: dict[str, Any] = {"schema": REPORT_SCHEMA, "command": command,
                              "space": spec.name, "max_degree": spec.max_degree,
                              "fiber_dim": spec.fiber_dim, "primes": primes}
    if command == "local-global":
        report["result"] = cmd_local_global(spec, primes, args)
    else:
        report["results"] = [PER_PRIME[command](spec, p, args) for p in primes]
    return report


# -- text rendering --------------------------------------------------------


def _fmt_class(raw: list, names: list[str]) -> str:
    if not raw:
        return "0"
    parts = []
    for exps, c in raw:
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e) or "1"
        parts.append(mono if c == 1 else (str(c) if mono == "1" else f"{c}{mono}"))
    return " + ".join(parts)


def _table(headers: list[str], rows: list[list]) -> list[str]:
    cols = [headers] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(headers))]
    return ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cols]


def render_text(report: dict, spec: SpaceSpec) -> str:
    names = [g.name for g in spec.generators]
    lines = [f"{report['command']}: {report['space']} (n = {report['fiber_dim']}, "
             f"max degree {report['max_degree']})"]
    cmd = report["command"]
    if cmd == "local-global":
        r = report["result"]
        lines.append(f"verdict: {r['verdict']}")
        for rec in r["sampled"]:
            lines.append(f"  p = {rec['prime']}: {rec['verdict']}")
        for rec in r["excluded"]:
            lines.append(f"  p = {rec['prime']} (excluded): {rec['verdict']}")
        if r["generators"]:
            lines += _table(["degree", "count"],
                            [[g["degree"], g["count"]] for g in r["generators"]])
        if r["disagreement"]:
            lines.append(f"disagreement: {r['disagreement']}")
        return "\n".join(lines) + "\n"
    for res in report["results"]:
        p = res["prime"]
        lines.append("")
        lines.append(f"p = {p}" if p else "p = 0 (rationals)")
        if cmd == "classify":
            lines.append(f"verdict: {res['verdict']}  ({res['evidence']['reason']})")
            if res["generators"]:
                lines.append(f"shape: {res['generators']['shape']}")
                lines += _table(["degree", "count", "factor"],
                                [[g["degree"], g["count"], g["factor"]]
                                 for g in res["generators"]["counts"]])
        elif cmd == "generators":
            lines.append(f"shape: {res['shape']}")
            lines += _table(["degree", "count", "factor"],
                            [[g["degree"], g["count"], g["factor"]]
                             for g in res["generators"]])
        elif cmd == "e2":
            lines.append(f"collapse: {res['collapse']}")
            lines += _table(["s", "t", "dim", "words"],
                            [[c["s"], c["t"], c["dim"], c["words"]] for c in res["bidegrees"]])
            lines.append("total: " + " ".join(str(d["dim"]) for d in res["total_dims"]))
        elif cmd == "series":
            lines += _table(["degree", "dim"], [[d["degree"], d["dim"]] for d in res["series"]])
        elif cmd == "massey":
            rel = res["relation"]
            lines.append(f"v^2 = {_fmt_class(rel['s'], names)} + "
                         f"({_fmt_class(rel['t'], names)})*v")
            for tr in res["transforms"]:
                lines.append(f"  v -> v + {_fmt_class(tr['w'], names)}: "
                             f"s' = {_fmt_class(tr['s'], names)}, "
                             f"t' = {_fmt_class(tr['t'], names)}"
                             f"{'' if tr['verified'] else '  (MISMATCH)'}")
            if res["consistent"] is not None:
                lines.append(f"t = w_(n-1): {res['consistent']} "
                             f"(w_(n-1) = {_fmt_class(res['wu_class'], names)})")
        elif cmd == "split-check":
            lines.append(f"splitting identity holds: {res['holds']}")
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# -- entry point -----------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopcoh",
        description="Cohomology of loop spaces of Thom spaces via the collapsed "
                    "Eilenberg-Moore spectral sequence.")
    parser.add_argument("--version", action="version", version=f"loopcoh {__version__}")
    parser.add_argument("command", choices=COMMANDS + ("list",))
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--builtin", metavar="NAME",
                     help="built-in space: " + ", ".join(builtin_names()) + ", sphere-<n>")
    src.add_argument("--space", metavar="FILE", help="JSON space document")
    parser.add_argument("--prime", type=int, action="append", metavar="P",
                        help="prime (repeatable); 0 selects the rationals")
    parser.add_argument("--max-degree", type=int, default=None, metavar="N",
                        help="truncation degree (default 24, or the document's value)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--out", metavar="FILE", help="write the report to FILE")
    parser.add_argument("--strict", action="store_true",
                        help="exit 3 when a verdict is Unknown")
    parser.add_argument("--exclude", type=int, action="append", metavar="P",
                        help="local-global: prime inverted in the coefficient ring")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "list":
        print("\n".join(builtin_names() + ["sphere-<n>"]))
        return EXIT_OK
    if not (args.builtin or args.space):
        parser.error("one of --builtin or --space is required")
    primes = args.prime or [2]
    if args.command == "local-global":
        primes = sorted(set(primes) | set(args.exclude or []))
    try:
        if args.builtin:
            spec = load_spec(args.builtin, primes=sorted(set(primes) | set(DEFAULT_PRIMES)),
                             max_degree=args.max_degree)
        else:
            spec = load_spec(args.space, max_degree=args.max_degree)
            missing = [p for p in primes if p not in spec.primes]
            if missing:
                raise SpecError(f"prime {missing[0]} not declared by the document", "primes")
        report = build_report(args.command, spec, primes, args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (HypothesisError, StrictFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (DifferentialError, AssertionError) as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    text = render_json(report) if args.format == "json" else render_text(report, spec)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
