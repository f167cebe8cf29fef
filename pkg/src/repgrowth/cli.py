"""Command-line front end: parse specs, run computations, export tables.

Exit codes: 0 ok, 2 parse error, 3 precondition violation, 4 budget
exhausted, 5 internal invariant failure.  Identical invocations produce
byte-identical output on the exact backend.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction
from typing import Optional

from . import char_tables, constructor, dirichlet, finite_groups, growth, lie_data
from .errors import BudgetExceededError, InvariantError, PreconditionError, SpecFormatError

EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4
EXIT_INVARIANT = 5


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational like 3/2: {text!r}")


def _load_spec(arg: str) -> growth.GroupSpec:
    if arg.strip().startswith("{"):
        text = arg
    elif arg == "-":
        text = sys.stdin.read()
    else:
        if not os.path.exists(arg):
            raise SpecFormatError(f"spec file not found: {arg}")
        with open(arg) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"invalid JSON: {e}")
    return growth.GroupSpec.from_jsonable(obj)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(args, obj) -> None:
    _emit(args, json.dumps(obj, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------


def _cmd_zeta(args) -> int:
    if args.group:
        if not args.q:
            raise PreconditionError("--group needs --q")
        table = (
            char_tables.sl2_table(args.q)
            if args.group == "SL2"
            else char_tables.psl2_table(args.q)
        )
        series = char_tables.zeta_series(table, args.N)
    else:
        spec = _load_spec(args.spec)
        series = growth.truncated_zeta(spec, args.N, args.J)
    if args.format == "csv":
        lines = ["dimension,multiplicity"]
        for d, m in series.items():
            lines.append(f"{d},{m}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, series.to_jsonable())
    return 0


def _cmd_abscissa(args) -> int:
    if args.example:
        if args.example != "sl2-primes":
            raise PreconditionError(f"unknown example {args.example!r}")
        spec = growth.sl2_over_primes_spec(args.d)
    else:
        spec = _load_spec(args.spec)
    if args.empirical:
        report = growth.empirical_slope(spec, args.N, args.J)
        if args.format == "csv":
            _emit(args, report.to_csv())
        else:
            _emit_json(
                args,
                {
                    "N": report.N,
                    "window": list(report.window),
                    "windowed_max": report.windowed_max,
                    "points": [[str(p.n), p.log10_R, p.slope] for p in report.points],
                },
            )
        return 0
    summary = growth.exact_abscissa(spec)
    if args.format == "csv":
        _emit(args, summary.to_csv())
    else:
        _emit_json(args, summary.to_jsonable())
    return 0


def _cmd_construct(args) -> int:
    if args.mode == "fixed":
        t = lie_data.LieType(args.family, args.rank, args.twisted)
        spec = constructor.build_fixed_type(args.rho, t, args.p, args.q)
        _emit_json(args, spec.to_jsonable())
        return 0
    targets = None
    if args.targets_json:
        with open(args.targets_json) as fh:
            raw = json.load(fh)
        targets = [
            (
                Fraction(item["rho_m"]),
                lie_data.LieType.from_jsonable(item["lie_type"]),
                int(item["p"]),
            )
            for item in raw
        ]
    else:
        targets = constructor.default_diagonal_targets(
            args.rho, args.stages, args.p, args.family
        )
    spec, cert = constructor.build_diagonal(args.rho, targets, args.budget)
    _emit_json(args, {"spec": spec.to_jsonable(), "certificate": cert.to_jsonable()})
    return 0


def _cmd_prg(args) -> int:
    spec = _load_spec(args.spec)
    _emit_json(args, growth.prg_verdict(spec).to_jsonable())
    return 0


def _cmd_gens(args) -> int:
    G = finite_groups.get_group(args.group)
    out = finite_groups.counts_jsonable(G, args.d or [2])
    if args.min_gens is not None:
        out["min_generators"] = {
            "k": str(args.min_gens),
            "d": finite_groups.min_generators_power(G, args.min_gens),
        }
    _emit_json(args, out)
    return 0


# ---------------------------------------------------------------------------
# the bundled invariant suite


def _check_char_tables(report) -> None:
    qs = [q for q in range(4, 82) if char_tables.prime_power(q)]
    for q in qs:
        sl2 = char_tables.sl2_table(q)  # constructors assert the mass identity
        psl2 = char_tables.psl2_table(q)
        expect = q + 4 if q % 2 else q + 1
        report(sl2.num_characters() == expect, f"SL2({q}) class number {expect}")
        report(char_tables.cover_degree_check(q), f"cover degree check q={q}")
        want = q - 1 if q % 2 == 0 else (q - 1) // 2
        report(
            char_tables.min_nontrivial_degree(sl2) == want,
            f"SL2({q}) minimal degree closed form",
        )
        del psl2


def _check_dirichlet(report) -> None:
    rng = random.Random(7)

    def rand_series(N=40):
        entries = {}
        for _ in range(rng.randint(1, 8)):
            entries[rng.randint(1, N)] = rng.randint(1, 50)
        return dirichlet.DirichletSeries(N, entries)

    ok = True
    for _ in range(100):
        a, b, c = rand_series(), rand_series(), rand_series()
        ab_c = dirichlet.convolve(dirichlet.convolve(a, b, 40), c, 40)
        a_bc = dirichlet.convolve(a, dirichlet.convolve(b, c, 40), 40)
        ok &= ab_c == a_bc
        ok &= dirichlet.convolve(a, b, 40) == dirichlet.convolve(b, a, 40)
    report(ok, "convolution associative and commutative (100 random cases)")

    ok = True
    base = dirichlet.DirichletSeries(64, {1: 1, 2: 1, 3: 2, 5: 1})
    for _ in range(50):
        m1, m2 = rng.randint(1, 40), rng.randint(1, 40)
        lhs = dirichlet.power_one_plus(base, m1 + m2, 64)
        rhs = dirichlet.convolve(
            dirichlet.power_one_plus(base, m1, 64),
            dirichlet.power_one_plus(base, m2, 64),
            64,
        )
        ok &= lhs == rhs
    report(ok, "power additivity (50 random cases)")

    ok = True
    for _ in range(20):
        M = rng.randint(2, 10 ** 6)
        exact = dirichlet.power_one_plus(base, M, 64)
        logd = dirichlet.power_one_plus(base.to_log(), M, 64)
        for d, m in exact.items():
            ok &= abs(math.exp(logd.mult_at(d)) - m) / m < 1e-9
    report(ok, "exact vs log backend agreement within 1e-9 (M <= 1e6)")


def _check_order_and_schedules(report) -> None:
    rng = random.Random(11)
    ok = True
    for _ in range(200):
        pairs = [(rng.randint(0, 6), rng.randint(1, 8)) for _ in range(rng.randint(2, 6))]
        rho = Fraction(rng.randint(1, 12), rng.randint(1, 6))
        for p1 in pairs:
            ok &= not constructor.prec_less(p1, p1, rho)
            for p2 in pairs:
                if p1 != p2:
                    ok &= constructor.prec_less(p1, p2, rho) != constructor.prec_less(
                        p2, p1, rho
                    )
                for p3 in pairs:
                    if (
                        constructor.prec_less(p1, p2, rho)
                        and constructor.prec_less(p2, p3, rho)
                    ):
                        ok &= constructor.prec_less(p1, p3, rho)
    report(ok, "schedule order axioms (200 random pair sets)")

    ok = True
    for t, rho in [
        (lie_data.LieType("A", 1), Fraction(2)),
        (lie_data.LieType("A", 2), Fraction(3, 2)),
        (lie_data.LieType("E8"), Fraction(1, 15) + Fraction(1, 100)),
    ]:
        sched = constructor.make_schedule(rho, t)
        ok &= all(sched.f(j) >= 0 for j in range(1, 10 ** 4 + 1))
    report(ok, "schedule nonnegativity f(j) >= 0 for j <= 10^4")

    rng = random.Random(13)
    ok = True
    families = [lie_data.LieType("A", r) for r in (1, 2, 3)] + [
        lie_data.LieType("B", 2),
        lie_data.LieType("G2"),
    ]
    for _ in range(10):
        t = rng.choice(families)
        rho = lie_data.rho0(t) + Fraction(rng.randint(1, 20), 4)
        spec = constructor.build_fixed_type(rho, t, rng.choice([5, 7, 11]))
        ok &= growth.exact_abscissa(spec).abscissa == rho
    report(ok, "fixed-type construction postcondition (10 random triples)")

    ok = True
    for d in (3, 4, 5):
        summary = growth.exact_abscissa(growth.sl2_over_primes_spec(d))
        ok &= summary.abscissa == Fraction(3 * d - 4)
    report(ok, "SL2-over-primes family abscissa 3d-4")


def _cmd_check(args) -> int:
    failures = []

    def report(ok: bool, name: str) -> None:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures.append(name)

    _check_char_tables(report)
    _check_dirichlet(report)
    _check_order_and_schedules(report)
    if failures:
        print(f"{len(failures)} invariant check(s) failed")
        return EXIT_INVARIANT
    print("all invariant checks passed")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="repgrowth")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", help="truncated zeta series of a group or spec")
    p.add_argument("--group", choices=["SL2", "PSL2"])
    p.add_argument("--q", type=int)
    p.add_argument("--spec", help="spec JSON path, inline JSON, or - for stdin")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--J", type=int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_zeta)

    p = sub.add_parser("abscissa", help="exact abscissa or empirical slope table")
    p.add_argument("--spec")
    p.add_argument("--example", help="canned family, e.g. sl2-primes")
    p.add_argument("--d", type=int, default=3, help="generator count for sl2-primes")
    p.add_argument("--empirical", action="store_true")
    p.add_argument("--N", type=int, default=10 ** 6)
    p.add_argument("--J", type=int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_abscissa)

    p = sub.add_parser("construct", help="build a spec of prescribed growth degree")
    p.add_argument("mode", choices=["fixed", "diagonal"])
    p.add_argument("--rho", type=_fraction_arg, required=True)
    p.add_argument("--family", default="A")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--twisted", action="store_true")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--stages", type=int, default=4)
    p.add_argument("--targets-json")
    p.add_argument("--budget", type=int, default=10 ** 9)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("prg", help="polynomial representation growth verdict")
    p.add_argument("--spec", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_prg)

    p = sub.add_parser("gens", help="generating-tuple and automorphism counts")
    p.add_argument("--group", required=True)
    p.add_argument("--d", type=int, action="append")
    p.add_argument("--min-gens", type=int, dest="min_gens")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gens)

    p = sub.add_parser("check", help="run the bundled invariant suite")
    p.set_defaults(func=_cmd_check)

    return ap


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_PARSE
    try:
        return args.func(args)
    except SpecFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.partial is not None and getattr(args, "out", None):
            with open(args.out, "w") as fh:
                json.dump({"partial_certificate": e.partial.to_jsonable()}, fh, indent=2)
        return EXIT_BUDGET
    except (PreconditionError,) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InvariantError as e:
        print(f"internal invariant failure: {e}", file=sys.stderr)
        return EXIT_INVARIANT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
