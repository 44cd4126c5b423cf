"""The compiled candidate scan against its numpy reference and the
generic permutation route."""

import numpy as np
import pytest

from twistlab import _structured as st
from twistlab import automorphisms as am
from twistlab import catalog as cat
from twistlab import twisted as tw


@pytest.fixture(scope="module")
def entry23():
    return cat.theorem_a_group(2, 3)


def paired(mats, ts, lo, hi):
    pm = np.repeat(mats[lo:hi], ts.shape[0], axis=0)
    pt = np.tile(ts, (hi - lo, 1))
    return pm, pt


class TestAgreement:
    def test_numpy_equals_numba(self, entry23):
        mats = am.invertible_matrices(9)
        ts = am.structured_t_candidates(entry23.group)
        pm, pt = paired(mats, ts, 0, 120)
        ref = st.scan_chunk_numpy(entry23.group, pm, pt)
        if st.HAVE_NUMBA:
            fast = st.scan_chunk(entry23.group, pm, pt, use_numba=True)
            assert np.array_equal(ref, fast)

    def test_scan_equals_generic_route(self, entry23):
        G = entry23.group
        mats = am.invertible_matrices(9)
        ts = am.structured_t_candidates(G)
        rng = np.random.default_rng(11)
        picks = rng.integers(0, mats.shape[0], 30)
        pm = mats[picks]
        pt = ts[rng.integers(0, ts.shape[0], 30)]
        rec = st.scan_chunk(G, pm, pt)
        for row in range(30):
            images = [G.encode(pm[row, 0], pm[row, 2], 0),
                      G.encode(pm[row, 1], pm[row, 3], 0),
                      G.encode(pt[row, 0], pt[row, 1], 1)]
            phi = am.extend_generator_map(G, images)
            valid = not isinstance(phi, am.ExtensionFailure)
            assert valid == bool(rec[row, 0])
            if not valid:
                continue
            disp = tw.displacement_set(G, phi)
            fixed = tw.fixed_subgroup(G, phi)
            bv = tw.bv_decomposition(entry23, phi, disp)
            assert disp.cardinality == rec[row, 6]
            assert len(fixed) == rec[row, 7]
            assert disp.is_subgroup == bool(rec[row, 1])
            assert bv.b_is_subgroup == bool(rec[row, 2])
            assert bv.matches == bool(rec[row, 3])
            assert bv.x_orbit_matches == bool(rec[row, 4])

    def test_invalid_candidates_detected(self, entry23):
        # a singular matrix must fail validation
        G = entry23.group
        mats = np.array([[1, 0, 0, 1], [3, 0, 0, 3], [1, 3, 3, 0]],
                        dtype=np.int64)
        ts = np.zeros((3, 2), dtype=np.int64)
        rec = st.scan_chunk(G, mats, ts)
        assert rec[0, 0] == 1
        assert rec[1, 0] == 0 and rec[2, 0] == 0

    def test_bad_t_detected(self, entry23):
        # t outside the valid displacement family breaks the wrap edge
        G = entry23.group
        mats = np.array([[1, 0, 0, 1]], dtype=np.int64)
        ts = np.array([[1, 0]], dtype=np.int64)   # order(t) = 9, t^3 != 1
        rec = st.scan_chunk(G, mats, ts)
        assert rec[0, 0] == 0


class TestFullScan:
    def test_full_2_3_scan(self, entry23):
        G = entry23.group
        mats = am.invertible_matrices(9)
        ts = am.structured_t_candidates(G)
        result = st.scan_all(G, mats, ts)
        assert result.candidates == 34992
        assert result.validated == 34992
        assert result.all_pass()
        assert result.disp_size_min == 1 and result.disp_size_max == 81

    def test_sampled_reproducible(self, entry23):
        G = entry23.group
        mats = am.invertible_matrices(9)
        ts = am.structured_t_candidates(G)
        one = st.scan_sampled(G, mats, ts, samples=500, seed=7)
        two = st.scan_sampled(G, mats, ts, samples=500, seed=7)
        assert one.validated == two.validated
        assert one.disp_size_max == two.disp_size_max
