"""Catalog constructions: relations, profiles, spec grammar."""

import pytest

from twistlab import catalog as cat
from twistlab import groups as gr
from twistlab.groups import UsageError


class TestTheoremAFamily:
    @pytest.mark.parametrize("n,p,order", [(2, 3, 243), (2, 5, 3125)])
    def test_orders(self, n, p, order):
        entry = cat.theorem_a_group(n, p)
        assert entry.group.order == order

    def test_profile_2_3(self):
        prof = cat.assert_profile(cat.theorem_a_group(2, 3))
        assert prof == {"order": 243, "nilpotency_class": 2,
                        "center_order": 9, "derived_order": 9}

    def test_conjugation_relation(self):
        entry = cat.theorem_a_group(2, 5)
        G = entry.group
        for name in ("a", "b"):
            c = entry.gen(name)
            assert G.conjugate(c, entry.gen("x")) == G.power(c, 6)

    def test_cyclic_subgroups_of_a_are_normal(self):
        entry = cat.theorem_a_group(2, 3)
        G = entry.group
        for c in G.a_part_indices()[:20]:
            sub = gr.subgroup_closure(G, [int(c)])
            assert sub.normal_in_parent()

    @pytest.mark.parametrize("n,p", [(1, 3), (2, 2), (2, 4), (0, 5)])
    def test_degenerate_parameters(self, n, p):
        with pytest.raises(UsageError):
            cat.theorem_a_group(n, p)


class TestTwoGroupFamily:
    @pytest.mark.parametrize("n,order", [(2, 32), (3, 256)])
    def test_orders(self, n, order):
        assert cat.two_group_family(n).group.order == order

    def test_action_relation(self):
        entry = cat.two_group_family(3)
        G = entry.group
        a, x = entry.gen("a"), entry.gen("x")
        assert G.conjugate(a, x) == G.power(a, 3)

    def test_rejects_small_n(self):
        with pytest.raises(UsageError):
            cat.two_group_family(1)


class TestSmallCatalog:
    def test_dihedral_relations(self):
        entry = cat.dihedral(16)
        G = entry.group
        a, x = entry.gen("a"), entry.gen("x")
        assert G.element_order(a) == 8
        assert G.element_order(x) == 2
        assert G.conjugate(a, x) == G.inv(a)

    def test_dihedral_rejects_small(self):
        with pytest.raises(UsageError):
            cat.dihedral(4)
        with pytest.raises(UsageError):
            cat.dihedral(12)

    def test_q8_relations(self):
        entry = cat.quaternion8()
        G = entry.group
        i, j = entry.gen("i"), entry.gen("j")
        minus_one = entry.gen("-1")
        assert G.mul(i, i) == minus_one == G.mul(j, j)
        assert G.conjugate(i, j) == G.inv(i)
        assert G.mul(i, j) == entry.gen("k")

    def test_heisenberg_relations(self):
        entry = cat.heisenberg(3)
        G = entry.group
        x, y, z = entry.gen("x"), entry.gen("y"), entry.gen("z")
        assert G.commutator(x, y) == z
        assert G.commutator(x, z) == 0 and G.commutator(y, z) == 0
        assert G.power(x, 3) == 0 and G.power(y, 3) == 0
        assert cat.assert_profile(entry)["center_order"] == 3

    def test_modular_relations(self):
        entry = cat.modular_p3(3)
        G = entry.group
        x, y = entry.gen("x"), entry.gen("y")
        assert G.element_order(x) == 9 and G.element_order(y) == 3
        assert G.conjugate(x, y) == G.power(x, 4)

    def test_heisenberg_and_modular_not_isomorphic_profiles(self):
        # same coarse profile but different exponent
        heis = cat.heisenberg(3).group
        mod = cat.modular_p3(3).group
        heis_orders = sorted(heis.element_orders().tolist())
        mod_orders = sorted(mod.element_orders().tolist())
        assert max(heis_orders) == 3 and max(mod_orders) == 9

    def test_symmetric_caps(self):
        with pytest.raises(UsageError):
            cat.symmetric(6)
        assert cat.symmetric(4).group.order == 24

    def test_symmetric_names(self):
        s3 = cat.symmetric(3)
        names = {s3.group.element_name(i) for i in range(6)}
        assert names == {"()", "(12)", "(13)", "(23)", "(123)", "(132)"}


class TestExtraspecial:
    def test_single_factor_is_heisenberg(self):
        entry = cat.extraspecial(3, 1, "heis")
        assert entry.group.order == 27

    def test_two_factor_odd(self):
        entry = cat.extraspecial(3, 2, "heis")
        prof = cat.assert_profile(entry)
        assert prof["order"] == 243 and prof["center_order"] == 3
        # derived subgroup equals the center
        derived = gr.lower_central_series(entry.group)[1]
        assert set(derived.members) == set(gr.center(entry.group).members)

    def test_quotient_by_center_elementary_abelian(self):
        entry = cat.extraspecial(3, 2, "heis")
        Q = gr.quotient(entry.group, gr.center(entry.group))
        assert Q.is_abelian()
        assert all(Q.element_order(g) in (1, 3) for g in range(Q.order))

    @pytest.mark.parametrize("kind", ["d8", "q8"])
    def test_two_factor_even(self, kind):
        entry = cat.extraspecial(2, 2, kind)
        prof = cat.assert_profile(entry)
        assert prof["order"] == 32 and prof["center_order"] == 2

    def test_kind_validation(self):
        with pytest.raises(UsageError):
            cat.extraspecial(3, 2, "d8")
        with pytest.raises(UsageError):
            cat.extraspecial(2, 2, "heis")
        with pytest.raises(UsageError):
            cat.extraspecial(3, 2, "nope")


class TestSpecGrammar:
    @pytest.mark.parametrize("spec", list(cat.DEFAULT_CATALOG) + [
        "two_group:n=3",
        "extraspecial:p=3,m=2,kind=heis",
        "product:sym:3|cyclic:5",
    ])
    def test_round_trip(self, spec):
        entry = cat.parse_spec(spec)
        assert entry.group.order >= 1
        cat.assert_profile(entry)

    def test_product_order(self):
        entry = cat.parse_spec("product:theorem_a:n=2,p=3|theorem_a:n=2,p=5")
        assert entry.group.order == 243 * 3125

    @pytest.mark.parametrize("spec", ["", "wat", "theorem_a:n=x,p=3",
                                      "abelian:9", "product:sym:3"])
    def test_rejects_malformed(self, spec):
        with pytest.raises(UsageError):
            cat.parse_spec(spec)

    def test_profile_mismatch_detected(self):
        entry = cat.cyclic(6)
        entry.expected_profile["center_order"] = 3
        with pytest.raises(gr.ConstructionError):
            cat.assert_profile(entry)
