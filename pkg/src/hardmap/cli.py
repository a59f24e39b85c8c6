"""``hardmap`` command line.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Callable, TextIO

from . import census as census_mod
from .cutting import roundtrip_tree
from .phase import critical_line, growth_fit, richardson_at_zero, tricritical_points
from .series import format_zpoly
from .solver import (closed_formula, closed_formula_at, conjugation_checks, eqforP_residual,
                     free_energy, g_bmhp, g_qtising, hp_residuals, marking_operator,
                     free_energy_log_check, solve_hp_system)

SCHEMA = census_mod.SCHEMA
DEFAULT_MAX_VERTICES = 8
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def scan(text: str) -> list[Fraction]:
    """``z0:z1:steps`` -> ``steps + 1`` equally spaced rationals."""
    try:
        a, b, k = text.split(":")
        z0, z1, steps = Fraction(a), Fraction(b), int(k)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected z0:z1:steps, got {text!r}") from None
    if steps < 1:
        raise argparse.ArgumentTypeError("steps must be positive")
    return [z0 + (z1 - z0) * i / steps for i in range(steps + 1)]


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- output helpers -------------------------------------------------------------

def _emit_table(out: TextIO, fmt: str, header: list[str], rows: list[list], record: dict) -> None:
    if fmt == "json":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        for row in rows:
            out.write(" ".join(str(x) for x in row).rstrip() + "\n")


def _emit_checks(out: TextIO, fmt: str, kind: str, checks: list[tuple[str, bool, str]]) -> int:
    ok = all(passed for _, passed, _ in checks)
    if fmt == "json":
        out.write(json.dumps({"schema": SCHEMA, "kind": kind, "ok": ok, "checks": [
            {"name": n, "ok": p, "detail": d} for n, p, d in checks]}, sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "ok", "detail"])
        w.writerows([n, int(p), d] for n, p, d in checks)
        out.write(buf.getvalue())
    else:
        for n, p, d in checks:
            out.write(f"{'PASS' if p else 'FAIL'} {n}" + (f": {d}" if d else "") + "\n")
        out.write(f"{'ALL PASS' if ok else 'FAILURES'} ({sum(p for _, p, _ in checks)}/{len(checks)})\n")
    return EXIT_OK if ok else EXIT_FAIL


def _vertex_cap(args: argparse.Namespace, two_n: int) -> int:
    if two_n > args.max_vertices and not args.allow_large:
        raise UsageError(f"{two_n} vertices is above --max-vertices {args.max_vertices}; "
                         "pass --allow-large to proceed")
    return max(two_n, args.max_vertices)


# -- subcommands ----------------------------------------------------------------

def cmd_series(args: argparse.Namespace, out: TextIO) -> int:
    order = args.order
    if order < 2 or order % 2:
        raise UsageError("--order must be even and at least 2")
    G = g_bmhp(order)
    rows, record = [], {"schema": SCHEMA, "kind": "series", "order": order}
    if args.z is not None:
        values = {2 * n: G[2 * n](args.z) for n in range(1, order // 2 + 1)}
        rows = [[f"g^{k}:", _fmt(v)] for k, v in values.items()]
        record.update(z=_fmt(args.z), values={str(k): _fmt(v) for k, v in values.items()})
        if args.format == "csv":
            rows = [[k, _fmt(v)] for k, v in values.items()]
        _emit_table(out, args.format, ["g_power", "value"], rows, record)
        return EXIT_OK
    coeffs = {2 * n: G[2 * n].int_coeffs() for n in range(1, order // 2 + 1)}
    record["coefficients"] = {str(k): v for k, v in coeffs.items()}
    if args.format == "csv":
        rows = [[k, j, c] for k, cs in coeffs.items() for j, c in enumerate(cs)]
    else:
        rows = [[f"g^{k}:", format_zpoly(G[k])] for k in coeffs]
    _emit_table(out, args.format, ["g_power", "z_power", "count"], rows, record)
    return EXIT_OK


def cmd_formula(args: argparse.Namespace, out: TextIO) -> int:
    n = args.n
    if n < 1:
        raise UsageError("--n must be at least 1")
    record = {"schema": SCHEMA, "kind": "formula", "n": n}
    if args.scan is not None or args.z is not None:
        zs = args.scan if args.scan is not None else [args.z]
        values = [(z, closed_formula_at(n, z)) for z in zs]
        record["values"] = [[_fmt(z), _fmt(v)] for z, v in values]
        _emit_table(out, args.format, ["z", "value"],
                    [[_fmt(z), _fmt(v)] for z, v in values], record)
        return EXIT_OK
    poly = closed_formula(n)
    record["coefficients"] = poly.int_coeffs()
    if args.format == "csv":
        _emit_table(out, "csv", ["z_power", "count"], list(enumerate(poly.int_coeffs())), record)
    else:
        _emit_table(out, args.format, [], [[format_zpoly(poly)]], record)
    return EXIT_OK


def cmd_census(args: argparse.Namespace, out: TextIO) -> int:
    cap = _vertex_cap(args, args.vertices)
    try:
        rec = census_mod.census(args.vertices, args.mode, args.threads, cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [[rec.vertices, rec.mode, j, c] for j, c in enumerate(rec.coefficients)]
    if args.format == "plain":
        rows = [[f"{rec.vertices} vertices, {rec.mode}:", format_zpoly(rec.per_particle),
                 rec.coefficients]]
    _emit_table(out, args.format, ["vertices", "mode", "particles", "count"], rows, rec.to_json())
    return EXIT_OK


def _sizes(args: argparse.Namespace) -> list[int]:
    if args.vertices is not None:
        _vertex_cap(args, args.vertices)
        if args.vertices < 2 or args.vertices % 2:
            raise UsageError("--vertices must be even and at least 2")
        return [args.vertices]
    return list(range(2, args.max_vertices + 1, 2))


def _sumrule_checks(sizes: list[int]) -> list[tuple[str, bool, str]]:
    checks = []
    for two_n in sizes:
        classes = census_mod.admissible_classes(two_n - 1)
        failures, zero = [], 0
        for code, (m, trees) in sorted(classes.items()):
            res = census_mod.verify_class(m, expected_trees=trees)
            zero += res.m > 0
            if not res.ok:
                failures.append(res.failures[0])
        detail = f"{len(classes)} maps, {zero} with NHP edges"
        checks.append((f"sum rule, {two_n} vertices", not failures,
                       failures[0] if failures else detail))
    return checks


def cmd_sumrule(args: argparse.Namespace, out: TextIO) -> int:
    return _emit_checks(out, args.format, "sumrule", _sumrule_checks(_sizes(args)))


def _roundtrip_checks(sizes: list[int]) -> list[tuple[str, bool, str]]:
    checks = []
    for two_n in sizes:
        rep = census_mod.SweepReport()
        n_inner = two_n - 1
        for t in census_mod.rooted_admissible(n_inner):
            rep.record("roundtrip_tree", roundtrip_tree(t), t.serialized)
        census_mod.sweep_map_markings_at(n_inner, rep, with_classes=False)
        for name in sorted(rep.checked):
            bad = rep.failed[name]
            checks.append((f"{name}, {two_n} vertices", not bad,
                           rep.examples.get(name, f"{rep.checked[name]} cases")))
    return checks


def cmd_roundtrip(args: argparse.Namespace, out: TextIO) -> int:
    return _emit_checks(out, args.format, "roundtrip", _roundtrip_checks(_sizes(args)))


def cmd_ising(args: argparse.Namespace, out: TextIO) -> int:
    order = args.order
    if order < 2:
        raise UsageError("--order must be at least 2")
    res = eqforP_residual(order)
    G = g_qtising(order)
    if args.format == "plain":
        for k in range(1, order + 1):
            if not G[k].is_zero():
                out.write(f"g^{k}: {format_zpoly(G[k])}\n")
    elif args.format == "json":
        out.write(json.dumps({"schema": SCHEMA, "kind": "ising", "order": order,
                              "coefficients": {str(k): [_fmt(c) for c in G[k].coeffs]
                                               for k in range(order + 1)},
                              "eqforP_residual_zero": res.is_zero()}, sort_keys=True) + "\n")
        return EXIT_OK if res.is_zero() else EXIT_FAIL
    else:
        out.write("g_power,z_power,value\n")
        for k in range(order + 1):
            for j, c in enumerate(G[k].coeffs):
                out.write(f"{k},{j},{_fmt(c)}\n")
        return EXIT_OK if res.is_zero() else EXIT_FAIL
    return _emit_checks(out, "plain", "ising",
                        [(f"quartic relation for P through g^{order}", res.is_zero(), "")])


def cmd_critical(args: argparse.Namespace, out: TextIO) -> int:
    if args.z is None and args.scan is None:
        minus, plus = tricritical_points()
        rows = [["z_-", _fmt(minus.z), "g_-^2", _fmt(minus.g_c_squared)],
                ["z_+", _fmt(plus.z), "g_+^2", _fmt(plus.g_c_squared)]]
        record = {"schema": SCHEMA, "kind": "tricritical",
                  "z_minus": _fmt(minus.z), "g2_minus": _fmt(minus.g_c_squared),
                  "z_plus": _fmt(plus.z), "g2_plus": _fmt(plus.g_c_squared)}
        _emit_table(out, args.format, ["name", "z", "gname", "g_c_squared"], rows, record)
        return EXIT_OK
    zs = args.scan if args.scan is not None else [args.z]
    rows, points = [], []
    for z in zs:
        try:
            pt = critical_line(z)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        g2 = float(pt.g_c_squared)
        u = "" if pt.u is None else repr(float(pt.u))
        rows.append([_fmt(z), repr(g2), pt.branch, u])
        points.append({"z": _fmt(z), "g_c_squared": g2, "branch": pt.branch,
                       "u": None if pt.u is None else float(pt.u)})
    record: dict = {"schema": SCHEMA, "kind": "critical", "points": points}
    header = ["z", "g_c_squared", "branch", "u"]
    if args.n is not None:
        if args.z is None:
            raise UsageError("--n needs a single --z")
        try:
            fit = growth_fit(args.z, 8, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        record["fit"] = {"rows": [[m, s] for m, s in fit.rows],
                         "extrapolated": fit.extrapolated, "gamma": fit.gamma}
        if args.format != "json":
            # exponent report replaces the single-point line
            header = ["n", "running_slope", "extrapolated_gamma"]
            rows = [[m, repr(s), repr(x)] for (m, s), x in
                    zip(fit.rows, _running_extrapolation(fit.rows))]
            rows.append(["gamma", repr(fit.gamma), ""])
    _emit_table(out, args.format, header, rows, record)
    return EXIT_OK


def _running_extrapolation(rows: list[tuple[int, float]]) -> list[float]:
    """Best extrapolation using the first k rows, for k = 1..len(rows)."""
    xs = [1.0 / m for m, _ in rows]
    ys = [s for _, s in rows]
    return [richardson_at_zero(xs[:k], ys[:k])[-1] for k in range(1, len(rows) + 1)]


def _verify_all_checks(args: argparse.Namespace) -> list[tuple[str, bool, str]]:
    checks = []
    sizes = list(range(2, args.max_vertices + 1, 2))
    order = max(10, args.max_vertices)
    G = g_bmhp(2 * 15)
    sol = solve_hp_system(order)
    checks.append(("algebraic system residuals vanish",
                   all(r.is_zero() for r in hp_residuals(sol).values()), f"order {order}"))
    bad = [n for n in range(1, 16) if closed_formula(n) != G[2 * n]]
    checks.append(("closed formula equals series, n <= 15", not bad, f"mismatch at {bad}" if bad else ""))
    for two_n in sizes:
        want = G[two_n].int_coeffs()
        got = {mode: census_mod.census(two_n, mode, args.threads, two_n).coefficients
               for mode in census_mod.MODES}
        same = all(v == want for v in got.values())
        checks.append((f"three censuses equal the series, {two_n} vertices", same, str(want)))
    checks += _roundtrip_checks(sizes)
    checks += _sumrule_checks(sizes)
    Gs = g_bmhp(order)
    checks.append(("free energy marking round trip",
                   marking_operator(free_energy(Gs)) == Gs, f"order {order}"))
    lhs, rhs = free_energy_log_check(order)
    checks.append(("free energy log identity", lhs == rhs, f"order {order}"))
    checks.append(("conjugation relations", conjugation_checks(order), f"order {order}"))
    checks.append(("Ising quartic relation", eqforP_residual(order).is_zero(), f"order {order}"))
    minus, plus = tricritical_points()
    cont = abs(float(critical_line(Fraction(32)).g_c_squared) - float(plus.g_c_squared))
    checks.append(("critical line continuous at z_+", cont < 1e-12, f"{cont:.1e}"))
    return checks


def cmd_verify_all(args: argparse.Namespace, out: TextIO) -> int:
    if args.max_vertices > DEFAULT_MAX_VERTICES and not args.allow_large:
        raise UsageError("verify-all above 8 vertices needs --allow-large")
    return _emit_checks(out, args.format, "verify-all", _verify_all_checks(args))


COMMANDS: dict[str, Callable[[argparse.Namespace, TextIO], int]] = {
    "series": cmd_series, "formula": cmd_formula, "census": cmd_census,
    "sumrule": cmd_sumrule, "roundtrip": cmd_roundtrip, "ising": cmd_ising,
    "critical": cmd_critical, "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hardmap", description=(
        "Rooted planar bicubic maps with hard particles: series, closed formula, "
        "exhaustive censuses and bijection checks."))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--threads", type=int, default=1, help="worker processes for censuses")
    common.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES,
                        help="size cap for exhaustive work (default %(default)s)")
    common.add_argument("--allow-large", action="store_true", help="lift the size cap")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", parents=[common], help="coefficients of the generating function")
    s.add_argument("--order", type=int, default=10, help="even truncation order in g")
    s.add_argument("--z", type=rational, help="evaluate at this rational fugacity")

    s = sub.add_parser("formula", parents=[common], help="closed-form coefficient of g^(2n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--z", type=rational)
    s.add_argument("--scan", type=scan, metavar="z0:z1:steps")

    s = sub.add_parser("census", parents=[common], help="exhaustive count at fixed size")
    s.add_argument("--vertices", type=int, required=True, help="number of vertices 2n")
    s.add_argument("--mode", choices=census_mod.MODES, default="signed-admissible")

    for name, text in (("sumrule", "signed sum over NHP markings of every admissible map"),
                       ("roundtrip", "closing/cutting round trips")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("--vertices", type=int, help="single size (default: every size up to the cap)")

    s = sub.add_parser("ising", parents=[common], help="Ising series and the quartic relation")
    s.add_argument("--order", type=int, default=10)

    s = sub.add_parser("critical", parents=[common], help="critical line and tricritical points")
    s.add_argument("--z", type=rational)
    s.add_argument("--scan", type=scan, metavar="z0:z1:steps")
    s.add_argument("--n", type=int, help="with --z, also fit the growth exponent up to this n")

    sub.add_parser("verify-all", parents=[common], help="run every check up to --max-vertices")
    return p


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "threads", 1) < 1:
        parser.print_usage(sys.stderr)
        print("hardmap: error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hardmap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
