"""Command-line front end.

Subcommands: ``vol`` (genus-zero volumes by any of four routes), ``htc``
(half-tight volumes), ``gf`` (generating functions), ``trees`` (family
enumeration), ``verify identities`` (the exact cross-check battery) and
``verify mc`` (Monte Carlo validation).  Output is byte-stable: polynomials
render in canonical term order, floats print with 17 significant digits,
and a ``--threads`` value never changes the output.  Exit codes: 0 success,
1 verification failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .algebra import GradedSeries, Polynomial, lsq, mom, poly_to_json_terms
from .genfun import (
    MomentContext,
    f_from_trees,
    f_recursion,
    f_substituted,
    htc_genfun,
    mu_average,
    solve_r,
    symmetric_from_moments,
    z_residual,
    z_series,
)
from .montecarlo import (
    corner_markings,
    mc_full_volume,
    polytope_dimension,
)
from .trees import (
    FAMILIES,
    brute_force_enumerate,
    canonical_key,
    enumerate_family,
    tree_to_json,
)
from .volumes import (
    HTC_ASSUMPTION,
    V05_COEFFICIENT_NOTE,
    ell_integral,
    full_decomposition_v0n,
    htc_volume,
    is_homogeneous,
    is_symmetric,
    known_v0n,
    v0n_graph_sum,
    v0n_reduced,
)


def _parse_lengths(text: str, n: int) -> list[Fraction]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) != n:
        raise ValueError(f"expected {n} comma-separated lengths, got {len(parts)}")
    try:
        values = [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed length list {text!r}: {exc}") from None
    if any(v <= 0 for v in values):
        raise ValueError("lengths must be positive")
    return values


def _substitute_lengths(poly: Polynomial, lengths: list[Fraction]) -> Polynomial:
    mapping = {lsq(i + 1): Polynomial.const(v * v) for i, v in enumerate(lengths)}
    return poly.substitute(mapping)


def _print_poly(poly: Polynomial, fmt: str, meta: dict) -> None:
    if fmt == "text":
        print(poly.text())
    elif fmt == "latex":
        print(poly.latex())
    else:
        payload = dict(meta)
        payload["terms"] = poly_to_json_terms(poly, n_lengths=meta.pop("_n_lengths", None))
        print(json.dumps(payload))


def _cmd_vol(args) -> int:
    if args.n < 3:
        raise ValueError("need --n >= 3")
    route = {
        "tree": v0n_reduced,
        "graph-sum": v0n_graph_sum,
        "decomposition": full_decomposition_v0n,
        "recursion": lambda n: symmetric_from_moments(f_substituted(n), n),
    }[args.method]
    poly = route(args.n)
    if args.n == 5:
        print(V05_COEFFICIENT_NOTE, file=sys.stderr)
    meta = {"command": "vol", "n": args.n, "method": args.method,
            "_n_lengths": args.n}
    if args.lengths:
        lengths = _parse_lengths(args.lengths, args.n)
        poly = _substitute_lengths(poly, lengths)
        meta["lengths"] = [str(v) for v in lengths]
        meta["_n_lengths"] = 0
    _print_poly(poly, args.format, meta)
    return 0


def _cmd_htc(args) -> int:
    if args.n < 3:
        raise ValueError("need --n >= 3")
    poly = htc_volume(args.n)
    meta = {"command": "htc", "n": args.n, "assumption": HTC_ASSUMPTION,
            "_n_lengths": args.n}
    if args.lengths:
        lengths = _parse_lengths(args.lengths, args.n)
        if not lengths[0] < lengths[1]:
            raise ValueError(f"half-tight volumes assume {HTC_ASSUMPTION}")
        poly = _substitute_lengths(poly, lengths)
        meta["lengths"] = [str(v) for v in lengths]
        meta["_n_lengths"] = 0
    if args.format == "text":
        print(f"# assumes {HTC_ASSUMPTION}", file=sys.stderr)
    _print_poly(poly, args.format, meta)
    return 0


def _cmd_gf(args) -> int:
    if args.order < 1:
        raise ValueError("need --order >= 1")
    ctx = MomentContext(args.order)
    series = {
        "z": lambda: z_series(args.order, ctx),
        "r": lambda: solve_r(ctx),
        "h": lambda: htc_genfun(ctx),
    }[args.target]()
    if args.format == "text":
        print(series.body.text())
    elif args.format == "latex":
        print(series.body.latex())
    else:
        payload = {
            "command": "gf",
            "target": args.target,
            "grade_cap": series.grade_cap,
            "terms": poly_to_json_terms(series.body, with_grade=True),
        }
        print(json.dumps(payload))
    return 0


def _cmd_trees(args) -> int:
    if args.n < 3:
        raise ValueError("need --n >= 3")
    family = enumerate_family(args.family, args.n)
    if args.list:
        print(json.dumps([tree_to_json(t) for t in family]))
    else:
        print(len(family))
    return 0


# -- verification -----------------------------------------------------------

def _identity_checks(max_n: int):
    """(name, thunk) pairs for every exact cross-check."""
    checks = []
    table_n = range(3, min(max_n, 6) + 1)

    for n in table_n:
        checks.append((f"table-v0-{n}",
                       lambda n=n: v0n_reduced(n) == known_v0n(n)))
    for n in table_n:
        checks.append((f"route-graph-sum-{n}",
                       lambda n=n: v0n_graph_sum(n) == v0n_reduced(n)))
        checks.append((f"route-decomposition-{n}",
                       lambda n=n: full_decomposition_v0n(n) == v0n_reduced(n)))
    for n in range(3, max_n + 1):
        checks.append((
            f"homogeneity-{n}",
            lambda n=n: is_homogeneous(v0n_reduced(n), n - 3)
            and is_homogeneous(htc_volume(n), n - 3)))
        checks.append((f"symmetry-{n}",
                       lambda n=n: is_symmetric(v0n_reduced(n), n)))

    checks.append(("ell-integral-grid", lambda: all(
        ell_integral(a, b) == ell_integral(a, b, mode="integral")
        for a in range(-1, 4) for b in range(4))))

    def z_root(cap: int) -> bool:
        ctx = MomentContext(cap)
        return z_residual(solve_r(ctx), ctx).is_zero()

    checks.append(("z-root-through-grade-5",
                   lambda: all(z_root(cap) for cap in range(1, 6))))

    checks.append(("r-grade-2", _check_r_grade_2))
    checks.append(("h-genfun-matches-averages",
                   lambda: _check_h_genfun(min(3, max(1, max_n - 2)))))

    for n in range(3, min(max_n, 6) + 1):
        checks.append((f"f-trees-vs-recursion-{n}",
                       lambda n=n: f_from_trees(n) == f_recursion(n)))
    for n in range(3, min(max_n, 7) + 1):
        checks.append((f"recursion-vs-volume-{n}", lambda n=n: (
            f_substituted(n)
            == mu_average(v0n_reduced(n), range(1, n + 1), MomentContext(n)).body)))

    for n in range(3, min(max_n, 6) + 1):
        checks.append((f"enumerator-oracle-{n}", lambda n=n: (
            {canonical_key(t) for t in enumerate_family("two-three", n)}
            == {canonical_key(t) for t in brute_force_enumerate("two-three", n)})))

    for n in range(3, min(max_n, 5) + 1):
        checks.append((f"dimension-formula-{n}", lambda n=n: _check_dimensions(n)))
    return checks


def _check_r_grade_2() -> bool:
    from .algebra import PI2
    expected = (Polynomial.of_atom(mom(0))
                + Polynomial.monomial(Fraction(1, 2), [(mom(0), 1), (mom(1), 1)])
                + Polynomial.monomial(1, [(PI2, 1), (mom(0), 2)]))
    return solve_r(MomentContext(2)).body == expected


def _check_h_genfun(max_p: int) -> bool:
    ctx = MomentContext(max_p)
    h = htc_genfun(ctx)
    for p in range(1, max_p + 1):
        avg = mu_average(htc_volume(p + 2), range(3, p + 3), ctx)
        if h.grade_part(p) != avg.body * Fraction(1, math.factorial(p)):
            return False
    return True


def _check_dimensions(n: int) -> bool:
    for tree in enumerate_family("htc", n):
        top = all(d == 3 for v, d in tree.degrees().items() if v < 0)
        for marks in corner_markings(tree, 2):
            a = polytope_dimension(tree, marks, mode="formula")
            b = polytope_dimension(tree, marks, mode="rank")
            if a != b:
                return False
            if top and not marks and a != 2 * n - 6:
                return False
    return True


def _cmd_verify_identities(args) -> int:
    failures = 0
    for name, thunk in _identity_checks(args.max_n):
        ok = thunk()
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        failures += 0 if ok else 1
    print(f"{'OK' if failures == 0 else 'FAILED'}: "
          f"{failures} failing identity check(s)")
    return 0 if failures == 0 else 1


def _fmt_float(x: float) -> str:
    if math.isinf(x) or math.isnan(x):
        return f'"{x}"'
    return format(x, ".17g")


def _report_json(report) -> str:
    rows = ", ".join(
        "{" + f'"key": {json.dumps(row["key"])}, "kind": "{row["kind"]}", '
        f'"estimate": {_fmt_float(row["estimate"])}, '
        f'"std_error": {_fmt_float(row["std_error"])}, '
        f'"exact": {"true" if row["exact"] else "false"}' + "}"
        for row in report.per_tree)
    return (
        "{"
        f'"estimate": {_fmt_float(report.estimate)}, '
        f'"std_error": {_fmt_float(report.std_error)}, '
        f'"samples": {report.samples}, '
        f'"seed": {report.seed}, '
        f'"reference": {_fmt_float(report.reference)}, '
        f'"z_score": {_fmt_float(report.z_score)}, '
        f'"per_tree": [{rows}]'
        "}")


def _cmd_verify_mc(args) -> int:
    lengths = _parse_lengths(args.lengths, args.n)
    report = mc_full_volume(args.n, lengths, args.samples, args.seed,
                            threads=args.threads)
    print(_report_json(report))
    ok = abs(report.z_score) < args.sigma
    print(f"{'PASS' if ok else 'FAIL'} mc-z-score |z| < {args.sigma}")
    if args.ablation:
        off = mc_full_volume(args.n, lengths, args.samples, args.seed,
                             threads=args.threads, delaunay=False)
        print(_report_json(off))
        off_ok = abs(off.z_score) > args.ablation_sigma
        print(f"{'PASS' if off_ok else 'FAIL'} "
              f"mc-ablation |z| > {args.ablation_sigma}")
        ok = ok and off_ok
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wptrees",
        description="Exact genus-zero volumes from tree sums, with a "
                    "Monte Carlo polytope verifier.")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker-thread bound (never changes output)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_vol = sub.add_parser("vol", help="genus-zero volume V_{0,n}")
    p_vol.add_argument("--n", type=int, required=True)
    p_vol.add_argument("--lengths", type=str, default=None,
                       help="comma-separated decimal lengths (exact rationals)")
    p_vol.add_argument("--method", default="tree",
                       choices=["tree", "recursion", "graph-sum", "decomposition"])
    p_vol.add_argument("--format", default="text",
                       choices=["text", "json", "latex"])
    p_vol.set_defaults(func=_cmd_vol)

    p_htc = sub.add_parser("htc", help="half-tight volume H_n")
    p_htc.add_argument("--n", type=int, required=True)
    p_htc.add_argument("--lengths", type=str, default=None)
    p_htc.add_argument("--format", default="text",
                       choices=["text", "json", "latex"])
    p_htc.set_defaults(func=_cmd_htc)

    p_gf = sub.add_parser("gf", help="generating functions")
    p_gf.add_argument("--target", required=True, choices=["z", "r", "h"])
    p_gf.add_argument("--order", type=int, required=True,
                      help="moment grade cap (and series order for z)")
    p_gf.add_argument("--format", default="text",
                      choices=["text", "json", "latex"])
    p_gf.set_defaults(func=_cmd_gf)

    p_trees = sub.add_parser("trees", help="tree family enumeration")
    p_trees.add_argument("--family", required=True, choices=list(FAMILIES))
    p_trees.add_argument("--n", type=int, required=True)
    group = p_trees.add_mutually_exclusive_group()
    group.add_argument("--count", action="store_true", default=True)
    group.add_argument("--list", action="store_true", default=False)
    p_trees.set_defaults(func=_cmd_trees)

    p_verify = sub.add_parser("verify", help="verification suites")
    vsub = p_verify.add_subparsers(dest="suite", required=True)

    p_ident = vsub.add_parser("identities", help="exact cross-checks")
    p_ident.add_argument("--max-n", type=int, default=5, dest="max_n")
    p_ident.set_defaults(func=_cmd_verify_identities)

    p_mc = vsub.add_parser("mc", help="Monte Carlo validation")
    p_mc.add_argument("--n", type=int, required=True)
    p_mc.add_argument("--lengths", type=str, required=True)
    p_mc.add_argument("--samples", type=int, required=True)
    p_mc.add_argument("--seed", type=int, required=True)
    p_mc.add_argument("--sigma", type=float, default=3.0)
    p_mc.add_argument("--ablation", action="store_true")
    p_mc.add_argument("--ablation-sigma", type=float, default=5.0,
                      dest="ablation_sigma")
    p_mc.set_defaults(func=_cmd_verify_mc)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
