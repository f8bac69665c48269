import json
from fractions import Fraction

import pytest

from zetadyn.fixtures import delta_reference
from zetadyn.groups import (
    Subgroup,
    conjugacy_class,
    contains,
    delta_series,
    group_model,
    iso_class,
    iso_delta,
    normalizer_index,
    subgroup_count,
    subgroup_from_dict,
    subgroups_of_index,
    zeta_counts,
)
from zetadyn.series import DirichletSeries, counts_from_delta, is_integer_series

DIH = lambda n, k: Subgroup("dinf", "dihedral", (n, k))
CYC = lambda m: Subgroup("dinf", "cyclic", (m,))

ENUMERABLE = ["z", "z_d:2", "z_d:3", "dinf", "z_x_cyclic:3", "pm"]


class TestGroupModel:
    def test_names_and_hirsch(self):
        assert group_model("z").hirsch_length == 1
        assert group_model("z_d:3").hirsch_length == 3
        assert group_model("dinf").hirsch_length == 1
        assert group_model("pm").hirsch_length == 2
        assert group_model("heisenberg").hirsch_length == 3

    def test_enumerable_flags(self):
        for name in ENUMERABLE:
            assert group_model(name).enumerable
        for name in ("heisenberg", "z_x_d8", "z_x_ut33", "p2", "pg", "cm"):
            assert not group_model(name).enumerable

    def test_composite_torsion_rejected(self):
        with pytest.raises(ValueError, match="prime"):
            group_model("z_x_cyclic:4")

    def test_unknown_group(self):
        with pytest.raises(ValueError):
            group_model("so3")


class TestEnumeration:
    def test_dinf_odd_index(self):
        got = subgroups_of_index(group_model("dinf"), 3)
        assert got == sorted([DIH(3, 0), DIH(3, 1), DIH(3, 2)])

    def test_dinf_even_index_has_rotation_subgroup(self):
        got = subgroups_of_index(group_model("dinf"), 2)
        assert set(got) == {DIH(2, 0), DIH(2, 1), CYC(1)}

    def test_dinf_count_formula_up_to_50(self):
        g = group_model("dinf")
        for n in range(1, 51):
            assert subgroup_count(g, n) == (n if n % 2 else n + 1)

    def test_order_three_extension_index_3(self):
        got = subgroups_of_index(group_model("z_x_cyclic:3"), 3)
        assert set(got) == {
            Subgroup("z_x_cyclic:3", "L", (3, 0)),
            Subgroup("z_x_cyclic:3", "L", (3, 1)),
            Subgroup("z_x_cyclic:3", "L", (3, 2)),
            Subgroup("z_x_cyclic:3", "kernel", (3,)),
        }

    def test_z_unique_subgroup(self):
        for n in (1, 5, 12):
            assert subgroup_count(group_model("z"), n) == 1

    def test_lattice_count_is_sigma(self):
        assert subgroup_count(group_model("z_d:2"), 4) == 7

    def test_nonenumerable_closed_form_count(self):
        # a(2) = b(1) + 2 b(2) = 1 + 2*3
        assert subgroup_count(group_model("z_x_d8"), 2) == 7

    def test_nonenumerable_enumeration_refused(self):
        with pytest.raises(ValueError, match="delta_closed_form"):
            subgroups_of_index(group_model("heisenberg"), 2)

    def test_indices_and_uniqueness(self):
        for name in ENUMERABLE:
            g = group_model(name)
            for n in range(1, 13):
                subs = subgroups_of_index(g, n)
                assert len(set(subs)) == len(subs)
                assert all(s.index == n for s in subs)

    def test_counts_match_delta_reconstruction(self):
        for name in ENUMERABLE:
            g = group_model(name)
            a = counts_from_delta(delta_series(g, 24))
            for n in range(1, 25):
                assert subgroup_count(g, n) == a[n], (name, n)


class TestDeltaSeries:
    def test_pm_values(self):
        b = delta_series(group_model("pm"), 6)
        assert [int(c) for c in b.coeffs] == [1, 3, 1, 3, 1, 3]

    def test_heisenberg_values(self):
        b = delta_series(group_model("heisenberg"), 4)
        assert [int(c) for c in b.coeffs] == [1, 1, 1, 4]

    def test_order_five_extension(self):
        b = delta_series(group_model("z_x_cyclic:5"), 6)
        assert b == DirichletSeries([1, 0, 0, 0, 1, 0])

    def test_closed_forms_against_references(self):
        for name in ("z", "z_d:2", "z_d:3", "pg", "pm", "cm", "heisenberg"):
            b = delta_series(group_model(name), 24)
            assert list(b.coeffs) == delta_reference(name, 24), name
            assert is_integer_series(b) == (True, None)

    def test_dihedral_noninteger(self):
        b = delta_series(group_model("dinf"), 6)
        assert b[3] == Fraction(2, 3)

    def test_zeta_counts_for_closed_form_group(self):
        a = zeta_counts(group_model("z_x_d8"), 8)
        assert a[1] == 1 and a[2] == 7

    def test_iso_delta_tags(self):
        assert iso_delta(group_model("pm"), "p1", 6) == DirichletSeries([1] * 6)
        assert iso_delta(group_model("pm"), "pg", 6) == DirichletSeries([1] * 6)
        assert iso_delta(group_model("dinf"), "z", 4) == DirichletSeries.unit(4)


class TestNormalizersAndConjugacy:
    def test_abelian_groups_normal(self):
        g = group_model("z_d:2")
        for L in subgroups_of_index(g, 4):
            assert normalizer_index(g, L) == 1
            assert conjugacy_class(g, L) == [L]

    def test_dihedral_class(self):
        g = group_model("dinf")
        assert normalizer_index(g, DIH(6, 0)) == 3
        assert conjugacy_class(g, DIH(6, 0)) == [DIH(6, 0), DIH(6, 2), DIH(6, 4)]

    def test_z_singleton(self):
        g = group_model("z")
        L = Subgroup("z", "cyclic", (5,))
        assert conjugacy_class(g, L) == [L]

    def test_pm_normalizers_match_families(self):
        g = group_model("pm")
        assert normalizer_index(g, Subgroup("pm", "pm1", (3, 4, 0))) == 4
        assert normalizer_index(g, Subgroup("pm", "pm3", (3, 4, 0))) == 7
        assert normalizer_index(g, Subgroup("pm", "p1", (2, 1, 1))) == 1
        assert conjugacy_class(g, Subgroup("pm", "p1", (2, 1, 1))) == [
            Subgroup("pm", "p1", (2, 1, 1))
        ]
        assert normalizer_index(g, Subgroup("pm", "p1", (5, 1, 2))) == 2

    def test_classes_partition_each_index(self):
        for name in ("dinf", "pm"):
            g = group_model(name)
            for n in range(1, 13):
                subs = subgroups_of_index(g, n)
                seen = []
                covered = set()
                for s in subs:
                    if s in covered:
                        continue
                    cls = conjugacy_class(g, s)
                    assert len(cls) == normalizer_index(g, s)
                    assert s in cls
                    covered.update(cls)
                    seen.extend(cls)
                assert sorted(seen) == sorted(subs)


class TestIsoClasses:
    def test_dinf_tags(self):
        g = group_model("dinf")
        assert iso_class(g, CYC(4)) == "z"
        assert iso_class(g, DIH(4, 1)) == "dinf"

    def test_pm_tags(self):
        g = group_model("pm")
        assert iso_class(g, Subgroup("pm", "pg2", (2, 3, 1))) == "pg"
        assert iso_class(g, Subgroup("pm", "cm1", (2, 3, 1))) == "cm"
        assert iso_class(g, Subgroup("pm", "p1", (2, 3, 1))) == "p1"

    def test_lattice_tag_is_group_itself(self):
        g = group_model("z_d:2")
        for L in subgroups_of_index(g, 6):
            assert iso_class(g, L) == "z_d:2"

    def test_order_three_extension_tags(self):
        # handles containing torsion keep the group tag; the rest are free
        g = group_model("z_x_cyclic:3")
        assert iso_class(g, Subgroup("z_x_cyclic:3", "L", (6, 0))) == "z_x_cyclic:3"
        assert iso_class(g, Subgroup("z_x_cyclic:3", "L", (6, 1))) == "z"
        assert iso_class(g, Subgroup("z_x_cyclic:3", "kernel", (6,))) == "z"

    def test_tags_constant_on_classes(self):
        g = group_model("pm")
        for n in range(1, 9):
            for L in subgroups_of_index(g, n):
                tags = {iso_class(g, h) for h in conjugacy_class(g, L)}
                assert len(tags) == 1


class TestContainment:
    def test_integers(self):
        g = group_model("z")
        c = lambda n: Subgroup("z", "cyclic", (n,))
        assert contains(g, c(6), c(3))
        assert not contains(g, c(6), c(4))

    def test_dihedral_rules(self):
        g = group_model("dinf")
        assert contains(g, DIH(6, 0), DIH(3, 0))
        assert contains(g, DIH(6, 0), DIH(2, 0))
        assert not contains(g, DIH(6, 0), DIH(3, 1))
        assert not contains(g, DIH(6, 0), CYC(3))
        assert contains(g, CYC(6), DIH(3, 0))
        assert not contains(g, CYC(5), DIH(3, 0))

    def test_lattice_membership(self):
        g = group_model("z_d:2")
        sub = Subgroup("z_d:2", "lattice", (2, 1, 0, 2))
        sup = Subgroup("z_d:2", "lattice", (1, 0, 0, 2))
        assert contains(g, sub, sup)

    def test_reflection_vs_translation(self):
        g = group_model("pm")
        refl = Subgroup("pm", "pm1", (1, 1, 0))  # contains the mirror
        latt = Subgroup("pm", "p1", (1, 1, 0))  # the full translation lattice
        assert contains(g, Subgroup("pm", "pm1", (2, 2, 0)), refl)
        assert not contains(g, refl, latt)

    def test_cross_group_error(self):
        with pytest.raises(ValueError):
            contains(group_model("z"), Subgroup("z", "cyclic", (2,)), CYC(1))

    def test_index_divides_through_containment(self):
        g = group_model("pm")
        for n in range(1, 9):
            for L in subgroups_of_index(g, n):
                for m in range(1, n):
                    if n % m:
                        continue
                    for K in subgroups_of_index(g, m):
                        if contains(g, L, K):
                            assert K.index * 2 <= L.index or K == L


class TestHandles:
    def test_json_round_trip(self):
        samples = [
            Subgroup("z", "cyclic", (4,)),
            Subgroup("z_d:2", "lattice", (2, 1, 0, 3)),
            DIH(6, 2),
            CYC(3),
            Subgroup("z_x_cyclic:3", "L", (6, 2)),
            Subgroup("z_x_cyclic:3", "kernel", (9,)),
            Subgroup("pm", "pg3", (2, 2, 1)),
            Subgroup("pm", "p1", (3, 2, 1)),
        ]
        for s in samples:
            blob = s.to_json()
            assert subgroup_from_dict(json.loads(blob)) == s

    def test_dinf_json_shape(self):
        assert json.loads(DIH(6, 0).to_json()) == {
            "group": "dinf", "type": "dihedral", "n": 6, "k": 0,
        }

    def test_lattice_json_row_major(self):
        s = Subgroup("z_d:2", "lattice", (2, 1, 0, 3))
        assert json.loads(s.to_json())["hnf"] == [[2, 1], [0, 3]]


class TestHandleSemanticsByQuotientClosure:
    """Validate handle membership data against brute subgroup closures in a
    finite quotient large enough to separate everything involved."""

    @staticmethod
    def _pm_closure(gens, K, M):
        # pm elements (x mod K, y mod M, e) with (x,y,e)(x',y',e') =
        # (x+x', y+(-1)^e y', e xor e'); the window subgroup is normal
        def mul(g, h):
            return ((g[0] + h[0]) % K, (g[1] + (-h[1] if g[2] else h[1])) % M, g[2] ^ h[2])

        # multiplicative closure suffices: the ambient group is finite
        closure = {(0, 0, 0)}
        frontier = [(0, 0, 0)]
        while frontier:
            new = []
            for h in frontier:
                for g in gens:
                    cand = mul(h, g)
                    if cand not in closure:
                        closure.add(cand)
                        new.append(cand)
            frontier = new
        return closure

    def test_pm_membership_matches_generated_subgroup(self):
        from zetadyn.groups import _pm_reflection, _pm_translation, _lattice_member

        g = group_model("pm")
        for n in range(1, 9):
            for L in subgroups_of_index(g, n):
                k, m, t = L.params
                d1, e, d2 = _pm_translation(L)
                K = M = 4 * d1 * d2
                if L.kind == "p1":
                    gens = [(k % K, 0, 0), (t % K, m % M, 0)]
                elif L.kind.startswith("pm"):
                    b_pow = 2 * m if L.kind in ("pm1", "pm2") else 2 * m - 1
                    u, v = _pm_reflection(L)
                    gens = [(k % K, 0, 0), (0, b_pow % M, 0), (u % K, v % M, 1)]
                elif L.kind.startswith("pg"):
                    b_pow = 2 * m if L.kind in ("pg1", "pg2") else 2 * m - 1
                    u, v = _pm_reflection(L)
                    gens = [((2 * k) % K, 0, 0), (0, b_pow % M, 0), (u % K, v % M, 1)]
                else:  # cm
                    u, v = _pm_reflection(L)
                    gens = [(k % K, m % M, 0), (0, (2 * m) % M, 0), (u % K, v % M, 1)]
                closure = self._pm_closure(gens, K, M)

                refl = _pm_reflection(L)
                predicted = set()
                for x in range(K):
                    for y in range(M):
                        if _lattice_member((d1, e, d2), x, y):
                            predicted.add((x, y, 0))
                        if refl is not None and _lattice_member(
                            (d1, e, d2), x - refl[0], y - refl[1]
                        ):
                            predicted.add((x, y, 1))
                assert closure == predicted, L

    def test_order_three_extension_membership_matches_closure(self):
        from zetadyn.groups import _zxc_generators, _zxc_member

        g = group_model("z_x_cyclic:3")
        for n in range(1, 13):
            for L in subgroups_of_index(g, n):
                C = 3 * n
                gens = [(u % C, v % 3) for u, v in _zxc_generators(3, L)]
                closure = {(0, 0)}
                frontier = [(0, 0)]
                while frontier:
                    new = []
                    for h in frontier:
                        for gen in gens:
                            cand = ((h[0] + gen[0]) % C, (h[1] + gen[1]) % 3)
                            if cand not in closure:
                                closure.add(cand)
                                new.append(cand)
                    frontier = new
                predicted = {
                    (u, v)
                    for u in range(C)
                    for v in range(3)
                    if _zxc_member(3, L, u, v)
                }
                assert closure == predicted, L
