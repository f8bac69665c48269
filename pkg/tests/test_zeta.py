import json
import math
import random
from fractions import Fraction

import pytest

from zetadyn.actions import (
    dinf_torus_action,
    full_shift,
    pm_projected,
    projected_shift,
    zx3_torus_action,
)
from zetadyn.groups import Subgroup, group_model, iso_delta
from zetadyn.lattice import build_slice, fix_from_orbits
from zetadyn.oracle import classical_moebius
from zetadyn.series import PowerSeries, binomial_factor, p_series
from zetadyn.zeta import (
    GrowthReport,
    growth_estimate,
    integrality_report,
    orbit_class_data,
    rational_fit,
    zeta_def,
    zeta_def_from_fix,
    zeta_full_shift,
    zeta_iso_class_product,
    zeta_orbit_product,
)
from tests.test_lattice import random_action_fix

class TestDefinition:
    def test_binary_shift_is_geometric(self):
        r = zeta_def(full_shift(group_model("z"), 2), 8)
        assert [int(c) for c in r.series.coeffs] == [2 ** k for k in range(9)]
        assert r.integer_coefficients

    def test_trivial_dihedral_series(self):
        r = zeta_def(full_shift(group_model("dinf"), 1), 7)
        closed = binomial_factor(1, 2, Fraction(-1, 2), 7) * PowerSeries(
            [0] + [1] * 7, 7
        ).exp()
        assert r.series == closed
        assert not r.integer_coefficients and r.first_noninteger == 3

    def test_json_payload_round_trips(self):
        r = zeta_def(full_shift(group_model("z"), 2), 4)
        blob = r.to_json()
        data = json.loads(blob)
        assert data["method"] == "definition"
        assert json.dumps(data, sort_keys=True) == blob


class TestFullShiftProduct:
    def test_lattice_rank_two_partition_values(self):
        r = zeta_full_shift(group_model("z_d:2"), 2, 4)
        assert [int(c) for c in r.series.coeffs] == [1, 2, 8, 24, 80]

    def test_order_three_extension_rational(self):
        r = zeta_full_shift(group_model("z_x_cyclic:3"), 2, 9)
        expect = binomial_factor(2, 1, -1, 9) * binomial_factor(8, 3, -1, 9)
        assert r.series == expect

    def test_heisenberg_against_triple_product(self):
        order = 12
        got = zeta_full_shift(group_model("heisenberg"), 1, order).series
        expect = PowerSeries.one(order)
        l = 1
        while l * l <= order:
            m = 1
            while l * l * m * m <= order:
                n = 1
                while l * l * m * m * n ** 3 <= order:
                    w = l * l * m * m * n ** 3
                    e = m * classical_moebius(n)
                    if e:
                        expect = expect * p_series(order, (1, w)).pow_fraction(e)
                    n += 1
                m += 1
            l += 1
        assert got == expect

    def test_alphabet_scaling(self):
        for name in ("z", "dinf", "pm", "z_d:2"):
            g = group_model(name)
            base = zeta_full_shift(g, 1, 10).series
            assert zeta_full_shift(g, 3, 10).series == base.scale_argument(3)

    def test_radius_is_inverse_alphabet(self):
        for A in (2, 3, 5):
            r = zeta_full_shift(group_model("pm"), A, 8)
            assert float(r.radius_estimate) == pytest.approx(1 / A, abs=1e-12)
            est = growth_estimate(full_shift(group_model("pm"), A), 8)
            assert est.value == pytest.approx(math.log(A), abs=1e-11)

    def test_integer_coefficients_for_integral_catalog(self):
        names = (
            "pm", "pg", "cm", "z_d:2", "z_d:3", "heisenberg",
            "z_x_cyclic:2", "z_x_cyclic:3", "z_x_cyclic:5", "z_x_d8", "z_x_ut33",
        )
        for name in names:
            r = zeta_full_shift(group_model(name), 2, 24)
            assert r.integer_coefficients, name


class TestProductMethods:
    def test_necklace_product_matches_definition(self):
        a = full_shift(group_model("z"), 2)
        assert zeta_orbit_product(a, 6).series == zeta_def(a, 6).series

    def test_single_fixed_point_iso_product(self):
        g = group_model("z")
        sl = build_slice(g, 6)
        orbits = {h: 0 for h in sl.nodes}
        orbits[Subgroup("z", "cyclic", (1,))] = 1
        fix = fix_from_orbits(sl, orbits)
        r = zeta_iso_class_product(g, 6, fix)
        assert list(r.series.coeffs) == [1] * 7

    def test_pm_trivial_action_is_partition_product(self):
        # one-point alphabet: every subgroup fixes the single configuration
        a = full_shift(group_model("pm"), 1)
        got = zeta_def(a, 10).series
        expect = p_series(10) * p_series(10, (1, 2)).pow_int(2)
        assert got == expect
        assert zeta_orbit_product(a, 10).series == expect

    def test_method_agreement_on_catalog_actions(self):
        cases = [
            (full_shift(group_model("dinf"), 2), 20),
            (full_shift(group_model("z_x_cyclic:3"), 2), 20),
            (full_shift(group_model("z_d:2"), 2), 16),
            (projected_shift(group_model("z_x_cyclic:3"), 2), 20),
            (pm_projected(2), 20),
            (dinf_torus_action(), 12),
            (zx3_torus_action(), 12),
        ]
        for a, order in cases:
            zd = zeta_def(a, order).series
            assert zeta_orbit_product(a, order).series == zd
            assert zeta_iso_class_product(a, order).series == zd

    def test_representative_choice_does_not_matter(self):
        # rebuild the product using a random member of each class as its
        # representative; size and tag are class invariants so nothing moves
        from zetadyn.groups import conjugacy_class
        from zetadyn.series import euler_product

        rng = random.Random(5)
        a = dinf_torus_action()
        order = 8
        from zetadyn.actions import fix_table

        fix = fix_table(a, order)
        g = a.group
        data = orbit_class_data(g, fix, order)
        exponents = {}
        for rep, tag, size, mult in data:
            member = rng.choice(conjugacy_class(g, rep))
            from zetadyn.groups import iso_class

            assert iso_class(g, member) == tag and member.index == size
            b = iso_delta(g, iso_class(g, member), max(1, order // member.index))
            for n in range(1, order // member.index + 1):
                deg = member.index * n
                exponents[deg] = exponents.get(deg, Fraction(0)) + mult * b[n]
        rebuilt = euler_product([(1, d, e) for d, e in sorted(exponents.items())], order)
        assert rebuilt == zeta_orbit_product(a, order, fix).series

    def test_random_fix_data_agreement(self):
        rng = random.Random(99)
        for name, bound in (("z", 10), ("dinf", 8), ("pm", 6), ("z_x_cyclic:3", 9)):
            g = group_model(name)
            for _ in range(3):
                sl, _, fix = random_action_fix(name, bound, rng)
                series = {
                    zeta_def_from_fix(g, fix, bound).series,
                    zeta_orbit_product(g, bound, fix).series,
                    zeta_iso_class_product(g, bound, fix).series,
                }
                assert len(series) == 1


class TestGrowth:
    def test_full_shift_exact(self):
        est = growth_estimate(full_shift(group_model("z"), 2), 12)
        assert est.value == pytest.approx(math.log(2), abs=1e-11)

    def test_trivial_action_zero(self):
        est = growth_estimate(full_shift(group_model("z"), 1), 10)
        assert est.value == 0.0
        assert float(est.radius) == 1.0

    def test_projected_gap(self):
        a = projected_shift(group_model("z_x_cyclic:3"), 2)
        est = growth_estimate(a, 30)
        assert abs(est.value - math.log(2)) < 1e-9
        assert a.declared_entropy == Fraction(1, 3)

    def test_window_is_configurable(self):
        a = full_shift(group_model("z"), 3)
        est = growth_estimate(a, 10, window=(2, 5))
        assert est.window == (2, 5)
        assert isinstance(est, GrowthReport)


class TestRationalFit:
    def test_two_factor_product(self):
        s = binomial_factor(2, 1, -1, 20) * binomial_factor(8, 3, -1, 20)
        assert rational_fit(s) == [(2, 1, -1), (8, 3, -1)]

    def test_constant_series(self):
        assert rational_fit(PowerSeries.one(12)) == []

    def test_partition_series_fails_budget(self):
        assert rational_fit(p_series(24)) is None

    def test_positive_exponents(self):
        s = binomial_factor(4, 2, 2, 16)
        assert rational_fit(s) == [(4, 2, 2)]

    def test_requires_unit_constant(self):
        with pytest.raises(ValueError):
            rational_fit(PowerSeries([2, 1], 1))


class TestIntegralityReport:
    def test_planar_group_clean(self):
        rep = integrality_report(group_model("pm"), 12)
        assert rep.delta_integer and rep.tau_series_integer

    def test_p2_flagged(self):
        rep = integrality_report(group_model("p2"), 12)
        assert not rep.delta_integer and rep.delta_first_noninteger == 3

    def test_dihedral_flagged_both_ways(self):
        rep = integrality_report(group_model("dinf"), 12)
        assert rep.delta_first_noninteger == 3
        assert not rep.tau_series_integer and rep.tau_first_noninteger == 3
        assert rep.to_dict()["group"] == "dinf"


def test_dihedral_two_class_product_formula():
    """For a dihedral-group action the iso product collapses to two kinds of
    factor: the dihedral trivial-action zeta at z^|Y| for reflection-type
    stabilizers, and plain geometric factors for rotation-type ones."""
    from zetadyn.actions import fix_table
    from zetadyn.zeta import orbit_class_data

    action = dinf_torus_action()
    order = 10
    fix = fix_table(action, order)
    g = action.group
    expect = PowerSeries.one(order)
    for _, tag, size, mult in orbit_class_data(g, fix, order):
        sub = order // size
        if tag == "dinf":
            factor = binomial_factor(1, 2, Fraction(-1, 2), sub) * PowerSeries(
                [0] + [1] * sub, sub
            ).exp()
        else:
            factor = binomial_factor(1, 1, -1, sub)
        spread = PowerSeries(
            [factor.coeffs[k // size] if k % size == 0 else 0 for k in range(order + 1)],
            order,
        )
        expect = expect * spread.pow_int(mult)
    assert expect == zeta_def(action, order).series
    assert expect == zeta_iso_class_product(action, order).series
