"""Assembly of dynamical zeta functions by several independent routes.

Routes: the defining exponential sum over a subgroup slice, the orbit-wise
product with Dirichlet-coefficient exponents, the per-isomorphism-class
product of trivial-action zetas, and the full-shift product. On the same
action and truncation order all routes agree coefficientwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .actions import ActionModel, FULL_SHIFT, fix_table
from .groups import GroupModel, Subgroup, conjugacy_class, delta_series, iso_class, iso_delta
from .lattice import build_slice, orbit_counts_from_fix
from .series import (
    PowerSeries,
    binomial_factor,
    euler_product,
    format_rational,
    is_integer_series,
)

METHOD_DEFINITION = "definition"
METHOD_ORBIT_PRODUCT = "orbit_product"
METHOD_FULL_SHIFT = "full_shift_product"
METHOD_ISO_PRODUCT = "iso_class_product"


@dataclass(frozen=True)
class ZetaResult:
    series: PowerSeries
    method: str
    integer_coefficients: bool
    radius_estimate: str
    first_noninteger: int | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "method": self.method,
                "order": self.series.order,
                "coeffs": [format_rational(c) for c in self.series.coeffs],
                "integer": self.integer_coefficients,
                "radius_estimate": self.radius_estimate,
            },
            sort_keys=True,
        )


def _result(series: PowerSeries, method: str, radius: str) -> ZetaResult:
    ok, idx = is_integer_series(series)
    return ZetaResult(series, method, ok, radius, idx)


@dataclass(frozen=True)
class GrowthReport:
    """Finite-order surrogate for the upper growth rate of the fix counts.

    The estimate is the max of log F(L)/[L] over indices in a trailing
    window; it stands in for a limsup and is exact only when log F(L)/[L]
    is eventually constant. Decimal strings carry 12 significant digits and
    are display-only.
    """

    estimate: str
    radius: str
    window: tuple[int, int]

    @property
    def value(self) -> float:
        return float(self.estimate)


def growth_estimate(
    action: ActionModel, bound: int, window: tuple[int, int] | None = None
) -> GrowthReport:
    if window is None:
        window = (max(1, (bound + 1) // 2), bound)
    lo, hi = window
    table = fix_table(action, hi)
    best = None
    for L, f in table.items():
        if lo <= L.index <= hi and f > 0:
            v = math.log(f) / L.index
            if best is None or v > best:
                best = v
    if best is None:
        return GrowthReport("-inf", "inf", window)
    return GrowthReport(f"{best:.12g}", f"{math.exp(-best):.12g}", window)


def _radius_from_fix(group: GroupModel, fix: Mapping[Subgroup, int], bound: int) -> str:
    lo = max(1, (bound + 1) // 2)
    best = None
    for L, f in fix.items():
        if lo <= L.index <= bound and f > 0:
            v = math.log(f) / L.index
            if best is None or v > best:
                best = v
    if best is None:
        return "inf"
    return f"{math.exp(-best):.12g}"


def zeta_def_from_fix(
    group: GroupModel, fix: Mapping[Subgroup, int], order: int
) -> ZetaResult:
    """exp of sum F(L)/[L] z^[L] over the slice of index <= order, exactly."""
    log_terms: dict[int, Fraction] = {}
    for L, f in fix.items():
        if L.index <= order:
            log_terms[L.index] = log_terms.get(L.index, Fraction(0)) + Fraction(f, L.index)
    series = PowerSeries.from_terms(log_terms, order).exp()
    return _result(series, METHOD_DEFINITION, _radius_from_fix(group, fix, order))


def zeta_def(action: ActionModel, order: int) -> ZetaResult:
    return zeta_def_from_fix(action.group, fix_table(action, order), order)


def orbit_class_data(
    group: GroupModel, fix: Mapping[Subgroup, int], order: int
) -> list[tuple[Subgroup, str, int, int]]:
    """Conjugacy-class orbit multiplicities from fixed-point data.

    Returns (representative, iso tag, orbit size, multiplicity) per class
    with nonzero multiplicity; the representative is the least handle of the
    class. Orbit multiplicities must be constant on classes.
    """
    sl = build_slice(group, order)
    counts = orbit_counts_from_fix(sl, fix)
    out = []
    seen: set[Subgroup] = set()
    for L in sl.nodes:
        if L in seen:
            continue
        cls = conjugacy_class(group, L)
        seen.update(cls)
        vals = {counts[h] for h in cls}
        if len(vals) != 1:
            raise ValueError(f"inconsistent data: orbit counts differ on class of {L}")
        o = vals.pop()
        if o < 0:
            raise ValueError("inconsistent data: negative orbit multiplicity")
        if o:
            out.append((min(cls), iso_class(group, L), L.index, o))
    return out


def zeta_orbit_product(
    action_or_group, order: int, fix: Mapping[Subgroup, int] | None = None
) -> ZetaResult:
    """Product over finite orbits of (1 - z^(|Y| n))^(-multiplicity * b(n))."""
    group, fix = _group_and_fix(action_or_group, order, fix)
    exponents: dict[int, Fraction] = {}
    for _, tag, size, mult in orbit_class_data(group, fix, order):
        b = iso_delta(group, tag, max(1, order // size))
        for n in range(1, order // size + 1):
            if b[n]:
                deg = size * n
                exponents[deg] = exponents.get(deg, Fraction(0)) + mult * b[n]
    series = euler_product(
        [(1, deg, e) for deg, e in sorted(exponents.items())], order
    )
    return _result(series, METHOD_ORBIT_PRODUCT, _radius_from_fix(group, fix, order))


@lru_cache(maxsize=None)
def _trivial_action_zeta(group_name: str, param, tag: str, order: int) -> PowerSeries:
    """Zeta of the trivial action of the tagged subgroup type on a point."""
    g = GroupModel(group_name, param)
    b = iso_delta(g, tag, max(order, 1))
    return euler_product(
        [(1, n, b[n]) for n in range(1, order + 1) if b[n]], order
    )


def zeta_iso_class_product(
    action_or_group, order: int, fix: Mapping[Subgroup, int] | None = None
) -> ZetaResult:
    """Product over iso classes and orbits of the trivial-action zetas."""
    group, fix = _group_and_fix(action_or_group, order, fix)
    series = PowerSeries.one(order)
    for _, tag, size, mult in orbit_class_data(group, fix, order):
        tau = _trivial_action_zeta(group.family, group.param, tag, order // size)
        factor = PowerSeries(
            [tau.coeffs[k // size] if k % size == 0 else 0 for k in range(order + 1)],
            order,
        )
        series = series * factor.pow_int(mult)
    return _result(series, METHOD_ISO_PRODUCT, _radius_from_fix(group, fix, order))


def _group_and_fix(action_or_group, order, fix):
    if isinstance(action_or_group, ActionModel):
        if fix is None:
            fix = fix_table(action_or_group, order)
        return action_or_group.group, fix
    if fix is None:
        raise ValueError("fixed-point data required when no action is given")
    return action_or_group, fix


def zeta_full_shift(group: GroupModel, alphabet: int, order: int) -> ZetaResult:
    """Product (1 - A^n z^n)^(-b_G(n)) truncated at the given order."""
    if alphabet < 1:
        raise ValueError("alphabet size must be >= 1")
    b = delta_series(group, order)
    series = euler_product(
        [(Fraction(alphabet) ** n, n, b[n]) for n in range(1, order + 1) if b[n]],
        order,
    )
    radius = f"{1 / alphabet:.12g}"
    return _result(series, METHOD_FULL_SHIFT, radius)


def zeta_by_method(action: ActionModel, order: int, method: str) -> ZetaResult:
    if method == METHOD_DEFINITION:
        return zeta_def(action, order)
    if method == METHOD_ORBIT_PRODUCT:
        return zeta_orbit_product(action, order)
    if method == METHOD_ISO_PRODUCT:
        return zeta_iso_class_product(action, order)
    if method == METHOD_FULL_SHIFT:
        if action.kind != FULL_SHIFT:
            raise ValueError("full-shift product applies to full shifts only")
        return zeta_full_shift(action.group, action.alphabet, order)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# rational-form detection


def rational_fit(
    s: PowerSeries,
    max_factors: int = 12,
    max_exponent: int = 16,
    node_budget: int = 400,
) -> list[tuple[int, int, int]] | None:
    """Greedy factorization of s into integer binomial factors (1 - c z^m)^e.

    Repeatedly reads the lowest nonzero coefficient of log(residual), which
    for a single new factor equals -e*c at degree m, proposes integer (c, e)
    splits (preferring c that is a perfect m-th power, then small |e|),
    divides the factor out, and backtracks on dead ends. Returns the merged
    factor list on success and None on failure; a None only means no fit was
    found within the budgets, since rationality is undecidable from a
    truncation.
    """
    if s.coeffs[0] != 1:
        raise ValueError("fit requires constant term 1")
    budget = [node_budget]

    def is_mth_power(c: int, m: int) -> bool:
        if m == 1:
            return True
        lo, hi = 1, c
        while lo <= hi:
            mid = (lo + hi) // 2
            v = mid**m
            if v == c:
                return True
            if v < c:
                lo = mid + 1
            else:
                hi = mid - 1
        return False

    def candidates(m: int, t: int):
        # a pure alphabet-power factor has c = A^m; try those shapes first
        opts = []
        for e in range(1, max_exponent + 1):
            if abs(t) % e == 0:
                c = abs(t) // e
                sign_e = 1 if t > 0 else -1
                preferred = c > 1 and is_mth_power(c, m)
                opts.append((not preferred, e, -c, (c, sign_e * e)))
        opts.sort()
        return [pair for *_ignored, pair in opts]

    def search(residual: PowerSeries, depth: int):
        if residual.is_one():
            return []
        if depth >= max_factors:
            return None
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        logr = residual.log()
        m = logr.lowest_nonzero()
        if m is None:
            return []
        lam = logr.coeffs[m]
        if lam.denominator != 1:
            return None
        t = -int(lam)  # e*c for the new factor
        for c, e in candidates(m, t):
            peeled = residual * binomial_factor(c, m, -e, residual.order)
            found = search(peeled, depth + 1)
            if found is not None:
                return [(c, m, e)] + found
        return None

    raw = search(s, 0)
    if raw is None:
        return None
    merged: dict[tuple[int, int], int] = {}
    for c, m, e in raw:
        merged[(c, m)] = merged.get((c, m), 0) + e
    out = sorted((m, c, e) for (c, m), e in merged.items() if e)
    factors = [(c, m, e) for m, c, e in out]
    check = PowerSeries.one(s.order)
    for c, m, e in factors:
        check = check * binomial_factor(c, m, e, s.order)
    if check != s:
        return None
    return factors


# ---------------------------------------------------------------------------
# integrality reporting


@dataclass(frozen=True)
class IntegralityReport:
    group: str
    delta_integer: bool
    delta_first_noninteger: int | None
    tau_series_integer: bool
    tau_first_noninteger: int | None

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "delta_integer": self.delta_integer,
            "delta_first_noninteger": self.delta_first_noninteger,
            "tau_series_integer": self.tau_series_integer,
            "tau_first_noninteger": self.tau_first_noninteger,
        }


def integrality_report(group: GroupModel, order: int) -> IntegralityReport:
    """Integer-coefficient status of the group's Dirichlet exponents and of
    the trivial-action zeta power series (the two can differ)."""
    b = delta_series(group, order)
    d_ok, d_idx = is_integer_series(b)
    tau = euler_product(
        [(1, n, b[n]) for n in range(1, order + 1) if b[n]], order
    )
    t_ok, t_idx = is_integer_series(tau)
    return IntegralityReport(group.name, d_ok, d_idx, t_ok, t_idx)
