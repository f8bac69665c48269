"""Command-line surface: series queries, zeta computation, orbit counts,
and the reference verification suite."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import oracle
from .actions import (
    ActionModel,
    FULL_SHIFT,
    dinf_torus_action,
    fix_table,
    full_shift,
    pm_projected,
    projected_shift,
    toral_action,
    zx3_torus_action,
)
from .groups import (
    CATALOG,
    GroupModel,
    Subgroup,
    group_model,
    max_terms_cap,
    subgroups_of_index,
    zeta_counts,
)
from .lattice import build_slice, fix_from_orbits, main_term_diagnostic, orbit_counts_by_size, pi_alpha
from .series import (
    PowerSeries,
    binomial_factor,
    format_rational,
    is_integer_series,
    q_series,
)
from .zeta import (
    METHOD_DEFINITION,
    METHOD_FULL_SHIFT,
    METHOD_ISO_PRODUCT,
    METHOD_ORBIT_PRODUCT,
    ZetaResult,
    growth_estimate,
    integrality_report,
    rational_fit,
    zeta_by_method,
    zeta_def,
    zeta_full_shift,
)
from .groups import delta_series

USAGE_ERROR = 2
CHECK_FAILED = 1

_METHOD_FLAGS = {
    "def": METHOD_DEFINITION,
    "product": METHOD_ORBIT_PRODUCT,
    "full-shift": METHOD_FULL_SHIFT,
    "iso": METHOD_ISO_PRODUCT,
}


def _parse_group(name: str) -> GroupModel:
    try:
        return group_model(name)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"available groups: {', '.join(CATALOG)}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR) from exc


def _check_terms(n: int) -> int:
    cap = max_terms_cap()
    if n > cap:
        print(f"error: truncation order {n} exceeds ZETADYN_MAX_TERMS={cap}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    if n < 1:
        print("error: truncation order must be >= 1", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    return n


def _make_action(args) -> ActionModel:
    if args.action == "toral":
        if not args.config:
            print("error: --action toral needs --config FILE", file=sys.stderr)
            raise SystemExit(USAGE_ERROR)
        with open(args.config) as fh:
            cfg = json.load(fh)
        return toral_action(_parse_group(cfg["group"]), cfg["matrices"])
    if args.action == "pm-projected":
        return pm_projected(args.alphabet)
    group = _parse_group(args.group)
    if args.action == "full-shift":
        return full_shift(group, args.alphabet)
    if args.action == "projected":
        return projected_shift(group, args.alphabet)
    print(f"error: unknown action {args.action!r}", file=sys.stderr)
    raise SystemExit(USAGE_ERROR)


def cmd_delta(args) -> int:
    group = _parse_group(args.group)
    n = _check_terms(args.terms)
    b = delta_series(group, n)
    a = zeta_counts(group, n)
    ok, idx = is_integer_series(b)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "group": group.name,
                    "b": [format_rational(c) for c in b.coeffs],
                    "a": [format_rational(c) for c in a.coeffs],
                    "integer": ok,
                    "first_noninteger": idx,
                },
                sort_keys=True,
            )
        )
    else:
        print(f"group {group.name}")
        print("b(1..{}) = {}".format(n, ", ".join(format_rational(c) for c in b.coeffs)))
        print("a(1..{}) = {}".format(n, ", ".join(format_rational(c) for c in a.coeffs)))
        if ok:
            print("integer coefficients: yes")
        else:
            print(f"integer coefficients: no (first failure at n={idx}, b={format_rational(b[idx])})")
    return 0


def _zeta_methods_for(action: ActionModel, requested: str) -> list[str]:
    if requested != "all":
        return [_METHOD_FLAGS[requested]]
    methods = []
    if action.group.enumerable:
        methods += [METHOD_DEFINITION, METHOD_ORBIT_PRODUCT, METHOD_ISO_PRODUCT]
    if action.kind == FULL_SHIFT:
        methods.append(METHOD_FULL_SHIFT)
    return methods


def cmd_zeta(args) -> int:
    action = _make_action(args)
    order = _check_terms(args.terms)
    methods = _zeta_methods_for(action, args.method)
    if not methods:
        print("error: no applicable method", file=sys.stderr)
        return USAGE_ERROR
    results: list[ZetaResult] = []
    for m in methods:
        if m == METHOD_DEFINITION and not action.group.enumerable:
            print(f"error: method {m} requires an enumerable group", file=sys.stderr)
            return USAGE_ERROR
        results.append(zeta_by_method(action, order, m))
    first = results[0]
    if args.method == "all" and len(results) > 1:
        for other in results[1:]:
            if other.series != first.series:
                k = next(
                    i
                    for i in range(order + 1)
                    if first.series.coeffs[i] != other.series.coeffs[i]
                )
                print(f"FAIL: {first.method} and {other.method} differ first at z^{k}")
                return CHECK_FAILED
        print(f"PASS: {len(results)} methods agree through z^{order}")
    if args.format == "json":
        for r in results:
            print(r.to_json())
    else:
        for r in results:
            print(f"method {r.method}:")
            print("  " + ", ".join(format_rational(c) for c in r.series.coeffs))
            flag = "yes" if r.integer_coefficients else f"no (z^{r.first_noninteger})"
            print(f"  integer coefficients: {flag}; radius estimate {r.radius_estimate}")
    return 0


def cmd_orbits(args) -> int:
    action = _make_action(args)
    bound = _check_terms(args.max_size)
    if not action.group.enumerable:
        print("error: orbit counting needs an enumerable group", file=sys.stderr)
        return USAGE_ERROR
    table = fix_table(action, bound, jobs=args.jobs)
    sl = build_slice(action.group, bound)
    sizes = orbit_counts_by_size(sl, table)
    pi = pi_alpha(sl, table)
    report = main_term_diagnostic(sl, table)
    if args.format == "csv":
        print("size,orbits")
        for n, c in sizes.items():
            print(f"{n},{c}")
        print("N,pi,main_term,ratio")
        print(f"{bound},{pi},{format_rational(report.main_term)},{report.ratio}")
    elif args.format == "json":
        print(
            json.dumps(
                {
                    "per_size": sizes,
                    "pi": pi,
                    "diagnostic": report.to_dict(),
                },
                sort_keys=True,
            )
        )
    else:
        for n, c in sizes.items():
            print(f"orbits of size {n}: {c}")
        print(f"pi({bound}) = {pi}")
        print(
            f"main term {format_rational(report.main_term)}, error "
            f"{format_rational(report.error_term)}, ratio {report.ratio}"
        )
    return 0


def cmd_fix_table(args) -> int:
    action = _make_action(args)
    bound = _check_terms(args.max_index)
    table = fix_table(action, bound, jobs=args.jobs)
    print("handle,index,fix")
    for L, f in sorted(table.items(), key=lambda kv: (kv[0].index, kv[0])):
        print(f'"{L.to_json().replace(chr(34), chr(34) * 2)}",{L.index},{f}')
    return 0


def cmd_torus_orbits(args) -> int:
    action = _make_action(args)
    if action.kind != "toral":
        print("error: torus-orbits needs --action toral", file=sys.stderr)
        return USAGE_ERROR
    orbits = oracle.brute_toral_orbits(action, args.denominator)
    print("orbit,point,stabilizer,block")
    for i, orb in enumerate(orbits):
        blocks = {s: bi for bi, s in enumerate(sorted(orb.blocks))}
        for pt, stab in orb.stabilizers:
            coord = ",".join(f"{x}/{orb.denominator}" for x in pt)
            handle = orb.stabilizer_of(pt).to_json().replace('"', '""')
            print(f'{i},"{coord}","{handle}",{blocks[stab]}')
    return 0


# ---------------------------------------------------------------------------
# verification suite


def _fx_dinf_point_series(_seed) -> tuple[bool, str]:
    from .fixtures import DINF_TRIVIAL_SERIES

    order = len(DINF_TRIVIAL_SERIES) - 1
    by_def = zeta_def(full_shift(group_model("dinf"), 1), order).series
    closed = binomial_factor(1, 2, Fraction(-1, 2), order) * PowerSeries(
        [0] + [1] * order, order
    ).exp()
    expect = PowerSeries([Fraction(c) for c in DINF_TRIVIAL_SERIES], order)
    ok = by_def == closed == expect
    return ok, "definition and closed form both match the display"


def _fx_dinf_torus_orbits(_seed) -> tuple[bool, str]:
    from .fixtures import (
        DINF_TORUS_DENOMINATOR,
        dinf_table_orbit_points,
        dinf_table_stabilizers,
    )

    action = dinf_torus_action()
    orbits = oracle.brute_toral_orbits(action, DINF_TORUS_DENOMINATOR)
    by_point = {}
    for orb in orbits:
        for pt in orb.points:
            by_point[pt] = orb
    stabs = dinf_table_stabilizers()
    for want_points in dinf_table_orbit_points():
        orb = by_point[next(iter(want_points))]
        if set(orb.points) != want_points:
            return False, f"orbit through {min(want_points)} does not match"
        for pt in want_points:
            if orb.stabilizer_of(pt) != stabs[pt]:
                return False, f"stabilizer mismatch at {pt}"
        blocks = orb.blocks
        for stab, pts in blocks.items():
            want_block = tuple(sorted(p for p in want_points if stabs[p] == stab))
            if pts != want_block:
                return False, f"block mismatch for {stab}"
    return True, "all 7 displayed orbits, stabilizers and blocks reproduced"


def _fx_delta_catalog(_seed) -> tuple[bool, str]:
    from .fixtures import delta_reference

    for name in ("z", "z_d:2", "z_d:3", "pg", "pm", "cm", "heisenberg"):
        g = group_model(name)
        b = delta_series(g, 24)
        want = delta_reference(name, 24)
        if list(b.coeffs) != want:
            return False, f"closed form mismatch for {name}"
        ok, idx = is_integer_series(b)
        if not ok:
            return False, f"unexpected non-integer coefficient for {name} at {idx}"
    return True, "catalog coefficients match references and are integral"


def _fx_pm_subgroups(_seed) -> tuple[bool, str]:
    pm = group_model("pm")
    from .series import counts_from_delta

    a = counts_from_delta(delta_series(pm, 24))
    for n in range(1, 25):
        subs = subgroups_of_index(pm, n)
        if len(set(subs)) != len(subs):
            return False, f"duplicate handles at index {n}"
        if len(subs) != a[n]:
            return False, f"count mismatch at index {n}: {len(subs)} vs {a[n]}"
    return True, "enumeration matches the Dirichlet counts through n=24"


def _fx_pm_fix(_seed) -> tuple[bool, str]:
    from .actions import fix_count

    action = pm_projected(2)
    for n in range(1, 13):
        for L in subgroups_of_index(group_model("pm"), n):
            if oracle.pm_quotient_sample(L, 2) != fix_count(action, L):
                return False, f"sampler disagrees at {L}"
    return True, "closed-form fix values equal the coset sampler through index 12"


def _fx_pm_projected(_seed) -> tuple[bool, str]:
    A, order = 2, 20
    got = zeta_def(pm_projected(A), order).series
    want = (
        q_series((1, -1), (A, 2), order)
        * q_series((A, 0), (A, 2), order)
        * q_series((1, 0), (A, 2), order).pow_int(2)
    )
    if got != want:
        return False, "shifted-factorial product mismatch"
    return True, "projected planar shift equals the shifted-factorial product"


def _fx_rational_zetas(_seed) -> tuple[bool, str]:
    from .fixtures import rational_zeta_factors

    for name in ("z_x_cyclic:2", "z_x_cyclic:3", "z_x_cyclic:5", "z_x_d8", "z_x_ut33"):
        for A in (2, 3):
            got = zeta_full_shift(group_model(name), A, 24)
            want_factors = rational_zeta_factors(name, A)
            expect = PowerSeries.one(24)
            for c, m, e in want_factors:
                expect = expect * binomial_factor(c, m, e, 24)
            if got.series != expect:
                return False, f"product mismatch for {name}, A={A}"
            if rational_fit(got.series) != want_factors:
                return False, f"fit mismatch for {name}, A={A}"
    return True, "rational products and factor recovery agree for all five groups"


def _fx_zx3_torus(_seed) -> tuple[bool, str]:
    from . import intmat
    from .actions import ZX3_TORUS_MATRICES, toral_fix

    action = zx3_torus_action()
    for n in range(1, 25):
        want = 9 if n % 8 == 0 else 1
        if toral_fix(action, Subgroup("z_x_cyclic:3", "L", (n, 0))) != want:
            return False, f"fixed count pattern fails at n={n}"
    A = intmat.mat(ZX3_TORUS_MATRICES["a"])
    B = intmat.mat(ZX3_TORUS_MATRICES["b"])
    ts = []
    for j in range(1, 9):
        s = sum(
            abs(intmat.det(intmat.mat_sub(intmat.mat_pow(A, j), intmat.mat_pow(B, k))))
            for k in (1, 2, 3)
        )
        if s % 3 != 0 or s // 3 < 2:
            return False, f"power sum not integral at j={j}"
        ts.append(s // 3 - 2)
    order = 24
    tail = PowerSeries.from_terms(
        {3 * j: Fraction(ts[j - 1], j) for j in range(1, 9)}, order
    ).exp()
    closed = (
        binomial_factor(1, 1, -1, order)
        * binomial_factor(1, 8, -1, order)
        * binomial_factor(1, 3, -2, order)
        * tail
    )
    if zeta_def(action, order).series != closed:
        return False, "zeta does not match the closed rational form"
    return True, "fix pattern, integer power sums and rational zeta all verified"


def _fx_projected_shift(_seed) -> tuple[bool, str]:
    import math

    action = projected_shift(group_model("z_x_cyclic:3"), 2)
    got = zeta_def(action, 20).series
    want = binomial_factor(2, 1, -1, 20) * binomial_factor(2, 3, -1, 20)
    if got != want:
        return False, "zeta mismatch"
    est = growth_estimate(action, 30)
    if abs(est.value - math.log(2)) > 1e-9:
        return False, f"growth estimate {est.estimate} not at log 2"
    if action.declared_entropy != Fraction(1, 3):
        return False, "declared entropy metadata wrong"
    return True, "rational zeta, growth log 2, declared entropy (1/3) log 2"


def _fx_nonintegral(_seed) -> tuple[bool, str]:
    rep = integrality_report(group_model("dinf"), 12)
    if rep.delta_integer or rep.delta_first_noninteger != 3:
        return False, "dihedral exponents should first fail at n=3"
    if delta_series(group_model("dinf"), 3)[3] != Fraction(2, 3):
        return False, "dihedral failing value should be 2/3"
    rep2 = integrality_report(group_model("p2"), 12)
    if rep2.delta_integer or rep2.delta_first_noninteger != 3:
        return False, "p2 exponents should first fail at n=3"
    return True, "non-integrality flagged at n=3 for both groups"


def _fx_moebius(seed: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    sl = build_slice(group_model("z"), 100)
    mu = {}
    for n in range(1, 101):
        L = Subgroup("z", "cyclic", (n,))
        if sl.moebius(L, Subgroup("z", "cyclic", (1,))) != oracle.classical_moebius(n):
            return False, f"integer lattice Moebius mismatch at {n}"
    for gname, bound in (("dinf", 10), ("z_d:2", 8), ("z_x_cyclic:3", 12), ("pm", 8)):
        s = build_slice(group_model(gname), bound)
        pairs = [(L, K) for L in s.nodes for K in s.supergroups(L)]
        for L, K in rng.sample(pairs, min(50, len(pairs))):
            total = sum(s.moebius(L, M) for M in s.interval(L, K))
            if total != 0:
                return False, f"row sum nonzero on [{L}, {K}]"
        o = {}
        seen = set()
        from .groups import conjugacy_class

        for L in s.nodes:
            if L in seen:
                continue
            cls = conjugacy_class(group_model(gname), L)
            seen.update(cls)
            v = rng.randrange(4)
            for h in cls:
                o[h] = v
        from .lattice import orbit_counts_from_fix

        f = fix_from_orbits(s, o)
        if orbit_counts_from_fix(s, f) != o:
            return False, f"inversion round trip fails for {gname}"
    return True, "row sums, classical values and inversion round trips verified"


def _fx_method_agreement(seed: int) -> tuple[bool, str]:
    from .groups import conjugacy_class
    from .zeta import zeta_def_from_fix, zeta_iso_class_product, zeta_orbit_product

    rng = random.Random(seed)
    cases = 0
    for gname, bound in (("z", 10), ("dinf", 8), ("z_d:2", 8), ("z_x_cyclic:3", 9), ("pm", 8)):
        g = group_model(gname)
        sl = build_slice(g, bound)
        for _ in range(4):
            o = {}
            seen = set()
            for L in sl.nodes:
                if L in seen:
                    continue
                cls = conjugacy_class(g, L)
                seen.update(cls)
                v = rng.randrange(3)
                for h in cls:
                    o[h] = v
            f = fix_from_orbits(sl, o)
            zd = zeta_def_from_fix(g, f, bound).series
            zp = zeta_orbit_product(g, bound, f).series
            zi = zeta_iso_class_product(g, bound, f).series
            if not (zd == zp == zi):
                return False, f"methods differ on {gname} sample"
            cases += 1
    return True, f"three routes agree on {cases} randomized actions"


def _fx_dinf_fix_completeness(_seed) -> tuple[bool, str]:
    """Known-defective reference claim: the displayed twelve points are not
    the complete fixed-point set (they are not even a subgroup), so a correct
    enumerator must find more. Expected to fail; kept for documentation."""
    from .fixtures import DINF_TORUS_DENOMINATOR, dinf_table_fix_points

    action = dinf_torus_action()
    pts = oracle.brute_fix_points(
        action, DINF_TORUS_DENOMINATOR, Subgroup("dinf", "dihedral", (6, 0))
    )
    ok = set(pts) == dinf_table_fix_points() and len(pts) == 12
    return ok, f"enumerator finds {len(pts)} fixed points, table displays 12"


FIXTURES = {
    "dinf-point-series": _fx_dinf_point_series,
    "dinf-torus-orbits": _fx_dinf_torus_orbits,
    "delta-catalog": _fx_delta_catalog,
    "pm-subgroups": _fx_pm_subgroups,
    "pm-fix": _fx_pm_fix,
    "pm-projected": _fx_pm_projected,
    "rational-zetas": _fx_rational_zetas,
    "zx3-torus": _fx_zx3_torus,
    "projected-shift": _fx_projected_shift,
    "nonintegral": _fx_nonintegral,
    "moebius": _fx_moebius,
    "method-agreement": _fx_method_agreement,
}

EXPECTED_FAILURES = {
    "dinf-fix-completeness": _fx_dinf_fix_completeness,
}


def cmd_verify(args) -> int:
    if args.suite != "paper-tables":
        print(f"error: unknown suite {args.suite!r}", file=sys.stderr)
        return USAGE_ERROR
    names = list(FIXTURES)
    xnames = list(EXPECTED_FAILURES)
    if args.only:
        names = [n for n in names if n == args.only]
        xnames = [n for n in xnames if n == args.only]
        if not names and not xnames:
            print(f"error: unknown fixture {args.only!r}", file=sys.stderr)
            return USAGE_ERROR
    failed = 0
    for name in names:
        ok, detail = FIXTURES[name](args.seed)
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name}: {detail}")
        if not ok:
            failed += 1
    for name in xnames:
        ok, detail = EXPECTED_FAILURES[name](args.seed)
        if ok:
            print(f"FAIL {name}: unexpectedly passed; the defect analysis is stale")
            failed += 1
        else:
            print(f"XFAIL {name}: {detail} (documented upstream defect)")
    return CHECK_FAILED if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetadyn",
        description="Exact dynamical zeta functions of group actions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", help="Dirichlet exponent and subgroup-count data")
    p.add_argument("--group", required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("zeta", help="compute a dynamical zeta function")
    p.add_argument("--action", required=True,
                   choices=("full-shift", "projected", "toral", "pm-projected"))
    p.add_argument("--group", default="z")
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--method", choices=("def", "product", "full-shift", "iso", "all"),
                   default="def")
    p.add_argument("--config", help="JSON file with toral matrices")
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("orbits", help="orbit counts and the main-term split")
    p.add_argument("--action", required=True,
                   choices=("full-shift", "projected", "toral", "pm-projected"))
    p.add_argument("--group", default="z")
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--config")
    p.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("fix-table", help="fixed-point counts as CSV")
    p.add_argument("--action", required=True,
                   choices=("full-shift", "projected", "toral", "pm-projected"))
    p.add_argument("--group", default="z")
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--config")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_fix_table)

    p = sub.add_parser("torus-orbits", help="brute torus orbit table as CSV")
    p.add_argument("--action", required=True, choices=("toral",))
    p.add_argument("--config", required=True)
    p.add_argument("--denominator", type=int, required=True)
    p.set_defaults(func=cmd_torus_orbits)

    p = sub.add_parser("verify", help="run the reference verification suite")
    p.add_argument("--suite", default="paper-tables")
    p.add_argument("--only")
    p.add_argument("--seed", type=int, default=20260808)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
