"""Generator-map extension, enumeration, named maps, lifts, the cache."""

import json

import numpy as np
import pytest

from twistlab import automorphisms as am
from twistlab import catalog as cat
from twistlab import groups as gr
from twistlab.automorphisms import CacheCorrupt, ExtensionFailure
from twistlab.groups import BudgetError, UsageError


@pytest.fixture(scope="module")
def s3():
    return cat.symmetric(3)


@pytest.fixture(scope="module")
def q8():
    return cat.quaternion8()


class TestExtension:
    def test_identity_map(self, s3):
        res = am.extend_generator_map(s3.group, list(s3.group.generators))
        assert res.is_identity()

    def test_q8_named_images(self, q8):
        res = am.extend_generator_map(
            q8.group, {"i": q8.gen("i"), "j": q8.gen("k")})
        assert not isinstance(res, ExtensionFailure)
        assert res(q8.gen("j")) == q8.gen("k")

    def test_order_mismatch_fails(self, s3):
        t = cat.element_by_name(s3.group, "(12)")
        res = am.extend_generator_map(s3.group, {"t": t, "c": t})
        assert isinstance(res, ExtensionFailure)
        assert res.reason == "not_homomorphism"

    def test_collapse_detected(self):
        # mapping every generator of an abelian group onto one cyclic part
        ab = cat.abelian_product(3, 3)
        a = ab.gen("a")
        res = am.extend_generator_map(ab.group, {"a": a, "b": a})
        assert isinstance(res, ExtensionFailure)
        assert res.reason in ("not_homomorphism", "not_surjective")

    def test_non_generating_detected(self, q8):
        minus_one = q8.gen("-1")
        res = am.extend_generator_map(
            q8.group, {minus_one: minus_one}, generators=None)
        assert isinstance(res, ExtensionFailure)
        assert res.reason == "not_generating"

    def test_exhaustive_pair_validation(self, q8):
        res = am.extend_generator_map(
            q8.group, {"i": q8.gen("i"), "j": q8.gen("k")})
        t = q8.group.table()
        perm = res.perm
        assert np.array_equal(perm[t], t[perm[:, None], perm[None, :]])


class TestInner:
    def test_central_element_gives_identity(self, q8):
        phi = am.inner(q8.group, q8.gen("-1"))
        assert phi.is_identity()

    def test_s3_conjugation(self, s3):
        g = cat.element_by_name(s3.group, "(123)")
        phi = am.inner(s3.group, g)
        t12 = cat.element_by_name(s3.group, "(12)")
        assert phi(t12) == cat.element_by_name(s3.group, "(23)")

    def test_composition_law(self, s3):
        G = s3.group
        rng = np.random.default_rng(0)
        for _ in range(20):
            g, h = (int(v) for v in rng.integers(0, 6, 2))
            lhs = am.inner(G, g).compose(am.inner(G, h))
            assert np.array_equal(lhs.perm, am.inner(G, G.mul(g, h)).perm)


def naive_automorphism_search(G):
    """Reference enumeration: all index permutations, filtered directly.

    Only usable for tiny groups; this is the ground-truth oracle for the
    batched enumerator.
    """
    import itertools
    n = G.order
    table = G.table()
    found = []
    for perm in itertools.permutations(range(1, n)):
        p = np.array((0,) + perm)
        if np.array_equal(p[table], table[p[:, None], p[None, :]]):
            found.append(tuple(p))
    return sorted(found)


class TestBruteForce:
    def test_z3(self):
        z3 = cat.cyclic(3)
        autos = am.enumerate_automorphisms_bruteforce(z3.group)
        assert len(autos) == 2

    def test_s3_all_inner(self, s3):
        autos = am.enumerate_automorphisms_bruteforce(s3.group)
        assert len(autos) == 6
        inner_keys = {am.inner(s3.group, g).key() for g in range(6)}
        assert {a.key() for a in autos} == inner_keys

    def test_q8_count(self, q8):
        assert len(am.enumerate_automorphisms_bruteforce(q8.group)) == 24

    @pytest.mark.parametrize("spec,count", [("cyclic:6", 2),
                                            ("abelian:4x2", 8)])
    def test_against_permutation_oracle(self, spec, count):
        entry = cat.parse_spec(spec)
        autos = am.enumerate_automorphisms_bruteforce(entry.group)
        oracle = naive_automorphism_search(entry.group)
        assert sorted(tuple(int(v) for v in a.perm) for a in autos) == oracle
        assert len(autos) == count

    def test_lexicographic_order_and_dedup(self, s3):
        autos = am.enumerate_automorphisms_bruteforce(s3.group)
        perms = [tuple(int(v) for v in a.perm) for a in autos]
        assert perms == sorted(set(perms))

    def test_inner_group_size(self):
        for spec in ("sym:3", "q8", "dihedral:8", "heisenberg:3"):
            entry = cat.parse_spec(spec)
            G = entry.group
            autos = am.enumerate_automorphisms_bruteforce(G)
            keys = {a.key() for a in autos}
            inner_keys = {am.inner(G, g).key() for g in range(G.order)}
            assert inner_keys <= keys
            assert len(inner_keys) == G.order // len(gr.center(G))

    def test_composition_closure_spot_check(self, q8):
        autos = am.enumerate_automorphisms_bruteforce(q8.group)
        keys = {a.key() for a in autos}
        rng = np.random.default_rng(0)
        for _ in range(200):
            f, g = (autos[int(v)] for v in rng.integers(0, len(autos), 2))
            assert f.compose(g).key() in keys
            assert f.inverse().key() in keys

    def test_order_preservation(self, q8):
        orders = q8.group.element_orders()
        for a in am.enumerate_automorphisms_bruteforce(q8.group):
            assert np.array_equal(orders[a.perm], orders)

    def test_budget_error(self):
        entry = cat.theorem_a_group(2, 3)
        with pytest.raises(BudgetError):
            am.enumerate_automorphisms_bruteforce(entry.group, budget=50)


class TestStructured:
    def test_candidate_counts_2_3(self):
        entry = cat.theorem_a_group(2, 3)
        mats = am.invertible_matrices(9)
        ts = am.structured_t_candidates(entry.group)
        assert mats.shape[0] == 3888
        assert ts.shape[0] == 9

    def test_every_candidate_is_validated_2_3(self):
        entry = cat.theorem_a_group(2, 3)
        autos = am.enumerate_automorphisms_structured(entry, gate=False)
        assert len(autos) == 34992
        G = entry.group
        a_idx = G.a_part_indices()
        sample = autos[:: len(autos) // 37]
        for phi in sample:
            assert all(int(phi.perm[c]) in set(a_idx.tolist())
                       for c in a_idx[:9])
            i, j, k = G.decode(int(phi.perm[entry.gen("x")]))
            assert k == 1

    def test_materialization_guard(self):
        entry = cat.theorem_a_group(2, 5)
        with pytest.raises(BudgetError):
            am.enumerate_automorphisms_structured(entry, gate=False)

    def test_wrong_family_rejected(self):
        with pytest.raises(UsageError):
            am.structured_gen_images(cat.quaternion8())


class TestNamed:
    def test_labels_validate(self):
        cases = [
            (cat.two_group_family(2), "two_group_phi"),
            (cat.dihedral(16), "dihedral_phi"),
            (cat.quaternion8(), "q8_phi"),
            (cat.heisenberg(3), "heisenberg_phi"),
            (cat.modular_p3(3), "modular_phi"),
        ]
        for entry, label in cases:
            phi = am.named_automorphism(entry, label)
            assert phi.provenance == f"named:{label}"

    def test_q8_phi_fixes_center(self, q8):
        phi = am.named_automorphism(q8, "q8_phi")
        assert am.fixes_center_pointwise(q8.group, phi)

    def test_heisenberg_phi_fixes_z(self):
        h = cat.heisenberg(3)
        phi = am.named_automorphism(h, "heisenberg_phi")
        assert phi(h.gen("z")) == h.gen("z")

    def test_two_group_displacement_choice(self):
        entry = cat.two_group_family(2)
        G = entry.group
        b = entry.gen("b")
        phi = am.named_automorphism(entry, "two_group_phi", displacement=b)
        assert phi(entry.gen("x")) == G.mul(entry.gen("x"), b)
        with pytest.raises(UsageError):
            am.named_automorphism(entry, "two_group_phi",
                                  displacement=G.power(b, 2))

    def test_family_mismatch(self, q8):
        with pytest.raises(UsageError):
            am.named_automorphism(q8, "dihedral_phi")


class TestCentralAutomorphisms:
    def test_identity_is_central(self, q8):
        phi = am.identity_automorphism(q8.group)
        assert am.is_central_automorphism(q8.group, phi)
        assert am.fixes_center_pointwise(q8.group, phi)

    def test_inner_on_class_two_group_is_central(self):
        h = cat.heisenberg(3)
        for g in (h.gen("x"), h.gen("y")):
            assert am.is_central_automorphism(h.group, am.inner(h.group, g))

    def test_q8_phi_centrality_computed(self, q8):
        # fixes the center pointwise, yet its displacement {1, -i} leaves
        # the center, so the map is not central
        phi = am.named_automorphism(q8, "q8_phi")
        assert am.fixes_center_pointwise(q8.group, phi)
        assert not am.is_central_automorphism(q8.group, phi)


class TestLift:
    def test_lift_identity(self):
        h = cat.heisenberg(3)
        z = h.gen("z")
        info = gr.central_product(
            h.group, h.group, gr.cyclic_identification(h.group, z, h.group, z))
        lifted = am.lift_central_product(
            info, am.identity_automorphism(h.group))
        assert lifted.is_identity()

    def test_lift_heisenberg_phi(self):
        h = cat.heisenberg(3)
        z = h.gen("z")
        info = gr.central_product(
            h.group, h.group, gr.cyclic_identification(h.group, z, h.group, z))
        phi = am.named_automorphism(h, "heisenberg_phi")
        lifted = am.lift_central_product(info, phi)
        assert lifted.group.order == 243
        # displacement of the lift is the embedded factor displacement
        from twistlab import twisted as tw
        base = tw.displacement_set(h.group, phi)
        top = tw.displacement_set(info.group, lifted)
        embedded = sorted(int(info.embed_left[m]) for m in base.members)
        assert list(top.members) == embedded

    def test_lift_rejects_wrong_group(self):
        q8 = cat.quaternion8()
        d8 = cat.dihedral(8)
        theta = gr.cyclic_identification(
            q8.group, q8.gen("-1"), d8.group, d8.group.power(d8.gen("a"), 2))
        info = gr.central_product(q8.group, d8.group, theta)
        with pytest.raises(UsageError):
            am.lift_central_product(info, am.identity_automorphism(d8.group))

    def test_lift_rejects_center_mover(self):
        # identify two copies of Z4 along themselves; inversion moves the
        # identified center, violating the lift hypothesis
        c4 = cat.cyclic(4)
        a = c4.gen("a")
        theta = gr.cyclic_identification(c4.group, a, c4.group, a)
        info = gr.central_product(c4.group, c4.group, theta)
        inversion = next(
            phi for phi in am.enumerate_automorphisms_bruteforce(c4.group)
            if not phi.is_identity())
        with pytest.raises(UsageError):
            am.lift_central_product(info, inversion)


class TestCache:
    def test_round_trip(self, tmp_path):
        entry = cat.symmetric(3)
        autos = am.enumerate_automorphisms_bruteforce(entry.group)
        path = am.cache_path(tmp_path, entry.spec)
        am.save_enumeration(path, entry.spec, entry.group, autos)
        loaded = am.load_enumeration(path, entry.spec, entry.group)
        assert [a.key() for a in loaded] == [a.key() for a in autos]

    def test_get_automorphisms_uses_cache(self, tmp_path):
        am.clear_session_cache()
        entry = cat.quaternion8()
        first = am.get_automorphisms(entry, cache_dir=tmp_path)
        assert am.cache_path(tmp_path, entry.spec).exists()
        am.clear_session_cache()
        second = am.get_automorphisms(entry, cache_dir=tmp_path)
        assert [a.key() for a in first] == [a.key() for a in second]

    def test_corruption_quarantined(self, tmp_path):
        entry = cat.symmetric(3)
        autos = am.enumerate_automorphisms_bruteforce(entry.group)
        path = am.cache_path(tmp_path, entry.spec)
        am.save_enumeration(path, entry.spec, entry.group, autos)
        lines = path.read_text().splitlines()
        # flip one generator image to an invalid value
        row = json.loads(lines[3])
        row[0] = (row[0] + 1) % entry.group.order
        lines[3] = json.dumps(row)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(CacheCorrupt):
            am.load_enumeration(path, entry.spec, entry.group)
        assert not path.exists()
        assert path.with_suffix(path.suffix + ".quarantined").exists()

    def test_header_mismatch_quarantined(self, tmp_path):
        entry = cat.symmetric(3)
        autos = am.enumerate_automorphisms_bruteforce(entry.group)
        path = am.cache_path(tmp_path, entry.spec)
        am.save_enumeration(path, entry.spec, entry.group, autos)
        with pytest.raises(CacheCorrupt):
            am.load_enumeration(path, "sym:4", entry.group)
