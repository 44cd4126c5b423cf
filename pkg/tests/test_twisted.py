"""Displacement sets, partitions, congruence, the B·V factorization."""

import numpy as np
import pytest

from twistlab import automorphisms as am
from twistlab import catalog as cat
from twistlab import groups as gr
from twistlab import twisted as tw


def naive_displacement(G, phi):
    return sorted({G.mul(G.inv(g), phi(g)) for g in range(G.order)})


def naive_twisted_classes(G, phi):
    """Direct orbit computation from the defining relation."""
    remaining = set(range(G.order))
    classes = []
    while remaining:
        x = min(remaining)
        orbit = {G.mul(G.mul(G.inv(z), x), phi(z)) for z in range(G.order)}
        classes.append(tuple(sorted(orbit)))
        remaining -= orbit
    return sorted(classes, key=lambda c: c[0])


@pytest.fixture(scope="module")
def s3():
    return cat.symmetric(3)


@pytest.fixture(scope="module")
def q8():
    return cat.quaternion8()


class TestDisplacement:
    def test_identity_gives_trivial(self, s3):
        disp = tw.displacement_set(s3.group, am.identity_automorphism(s3.group))
        assert disp.members == (0,)
        assert disp.is_subgroup and disp.is_normal

    def test_s3_inner_example(self, s3):
        g = cat.element_by_name(s3.group, "(123)")
        disp = tw.displacement_set(s3.group, am.inner(s3.group, g))
        expected = (0, cat.element_by_name(s3.group, "(132)"))
        assert disp.members == tuple(sorted(expected))
        assert not disp.is_subgroup
        assert disp.witness is not None

    def test_q8_named(self, q8):
        phi = am.named_automorphism(q8, "q8_phi")
        disp = tw.displacement_set(q8.group, phi)
        assert set(disp.names()) == {"1", "-i"}
        assert not disp.is_subgroup

    def test_dihedral_named(self):
        d16 = cat.dihedral(16)
        phi = am.named_automorphism(d16, "dihedral_phi")
        disp = tw.displacement_set(d16.group, phi)
        a = d16.gen("a")
        assert set(disp.members) == {0, d16.group.inv(a)}
        assert not disp.is_subgroup
        assert d16.group.element_order(d16.group.inv(a)) == 8

    def test_matches_naive_oracle(self, q8):
        for phi in am.enumerate_automorphisms_bruteforce(q8.group)[:12]:
            disp = tw.displacement_set(q8.group, phi)
            assert list(disp.members) == naive_displacement(q8.group, phi)

    def test_wrong_group_rejected(self, s3, q8):
        with pytest.raises(gr.UsageError):
            tw.displacement_set(s3.group, am.identity_automorphism(q8.group))


class TestPartition:
    def test_identity_partition_is_conjugacy(self, s3):
        part = tw.twisted_partition(s3.group, am.identity_automorphism(s3.group))
        assert part.reidemeister_number == 3

    def test_matches_naive_orbits(self, q8):
        for phi in am.enumerate_automorphisms_bruteforce(q8.group)[:8]:
            part = tw.twisted_partition(q8.group, phi)
            assert list(part.classes) == naive_twisted_classes(q8.group, phi)

    def test_partition_covers_group(self, s3):
        g = cat.element_by_name(s3.group, "(123)")
        part = tw.twisted_partition(s3.group, am.inner(s3.group, g))
        all_elems = sorted(e for c in part.classes for e in c)
        assert all_elems == list(range(6))

    def test_identity_class_is_displacement(self, q8):
        phi = am.named_automorphism(q8, "q8_phi")
        part = tw.twisted_partition(q8.group, phi)
        disp = tw.displacement_set(q8.group, phi)
        cls = next(c for c in part.classes if 0 in c)
        assert cls == disp.members

    def test_abelian_classes_are_cosets(self):
        ab = cat.abelian_product(9, 9)
        autos = am.enumerate_automorphisms_bruteforce(ab.group)
        phi = autos[17]
        part = tw.twisted_partition(ab.group, phi)
        disp = tw.displacement_set(ab.group, phi)
        assert all(len(c) == disp.cardinality for c in part.classes)
        G = ab.group
        for c in part.classes[:5]:
            x = c[0]
            coset = sorted(G.mul(x, d) for d in disp.members)
            assert list(c) == coset


class TestFixedSubgroup:
    def test_identity(self, s3):
        fixed = tw.fixed_subgroup(s3.group, am.identity_automorphism(s3.group))
        assert len(fixed) == 6

    def test_q8_fixed_is_i_subgroup(self, q8):
        phi = am.named_automorphism(q8, "q8_phi")
        fixed = tw.fixed_subgroup(q8.group, phi)
        assert set(fixed.members) == set(
            gr.subgroup_closure(q8.group, [q8.gen("i")]).members)
        assert len(fixed) == 4

    def test_index_identity(self):
        for spec in ("sym:3", "q8", "dihedral:8", "heisenberg:3"):
            entry = cat.parse_spec(spec)
            G = entry.group
            for phi in am.enumerate_automorphisms_bruteforce(G)[:10]:
                disp = tw.displacement_set(G, phi)
                fixed = tw.fixed_subgroup(G, phi)
                assert disp.cardinality * len(fixed) == G.order


class TestCongruence:
    def test_abelian_always(self):
        ab = cat.abelian_product(4, 2)
        for phi in am.enumerate_automorphisms_bruteforce(ab.group):
            assert tw.is_congruence(ab.group, phi)

    def test_s3_inner_not(self, s3):
        g = cat.element_by_name(s3.group, "(123)")
        assert not tw.is_congruence(s3.group, am.inner(s3.group, g))

    def test_nonabelian_identity_not(self, q8):
        assert not tw.is_congruence(q8.group, am.identity_automorphism(q8.group))


class TestBVDecomposition:
    def test_identity_trivial(self):
        entry = cat.theorem_a_group(2, 3)
        bv = tw.bv_decomposition(entry, am.identity_automorphism(entry.group))
        assert len(bv.b_set) == 1 and len(bv.v_set) == 1
        assert bv.matches and bv.b_is_subgroup and bv.x_orbit_matches

    def test_named_sample(self):
        entry = cat.theorem_a_group(2, 3)
        G = entry.group
        rng = np.random.default_rng(5)
        mats = am.invertible_matrices(9)
        ts = am.structured_t_candidates(G)
        for _ in range(25):
            mrow = mats[int(rng.integers(0, mats.shape[0]))]
            trow = ts[int(rng.integers(0, ts.shape[0]))]
            images = [G.encode(mrow[0], mrow[2], 0),
                      G.encode(mrow[1], mrow[3], 0),
                      G.encode(trow[0], trow[1], 1)]
            phi = am.extend_generator_map(G, images)
            disp = tw.displacement_set(G, phi)
            bv = tw.bv_decomposition(entry, phi, disp)
            assert bv.matches and bv.b_is_subgroup and bv.x_orbit_matches
            assert disp.is_subgroup
            c = G.mul(G.inv(entry.gen("x")), phi(entry.gen("x")))
            assert len(bv.v_set) == G.element_order(c)

    def test_wrong_family(self, q8):
        with pytest.raises(gr.UsageError):
            tw.bv_decomposition(q8, am.identity_automorphism(q8.group))
