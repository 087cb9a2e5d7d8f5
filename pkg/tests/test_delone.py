"""Point sets, cluster enumeration, locator sets, and bump smoothing."""

import numpy as np
import pytest

from diffspec.delone import (
    BumpFunction,
    Cluster,
    PointSet1D,
    cluster_frequency,
    enumerate_k_clusters,
    locator_set,
    smooth_comb,
    tent_ft,
)
from diffspec.errors import DiffspecError, EmptyInterior, IncompatibleCluster
from diffspec.modelset import silver_mean_chain


class TestPointSet:
    def test_rejects_unsorted_coords(self):
        with pytest.raises(ValueError):
            PointSet1D(np.array([0.0, 2.0, 1.0]))

    def test_rejects_duplicate_coords(self):
        with pytest.raises(ValueError):
            PointSet1D(np.array([0.0, 1.0, 1.0]))

    def test_extent_gaps_packing_radius(self):
        ps = PointSet1D(np.array([0.0, 1.0, 3.5]))
        assert ps.extent == 3.5
        assert ps.gaps().tolist() == [1.0, 2.5]
        assert ps.packing_radius == 0.5

    def test_distinct_gaps_merges_near_equal(self):
        ps = PointSet1D(np.array([0.0, 1.0, 2.0 + 1e-12, 4.0]))
        assert len(ps.distinct_gaps()) == 2

    def test_restrict_keeps_weights(self):
        ps = PointSet1D(np.arange(6.0), weights=np.arange(6.0) + 0j)
        sub = ps.restrict(1.5, 4.5)
        assert sub.coords.tolist() == [2.0, 3.0, 4.0]
        assert sub.weights.real.tolist() == [2.0, 3.0, 4.0]

    def test_serialize_parse_float_round_trip(self):
        ps = PointSet1D(np.array([0.0, 1.25]), weights=np.array([1.0, 0.5 - 2j]))
        back = PointSet1D.parse(ps.serialize())
        np.testing.assert_array_equal(back.coords, ps.coords)
        np.testing.assert_array_equal(back.weights, ps.weights)
        assert back.exact is None

    def test_serialize_parse_exact_round_trip(self):
        ps = silver_mean_chain(20)
        back = PointSet1D.parse(ps.serialize())
        assert back.exact == ps.exact
        np.testing.assert_array_equal(back.coords, ps.coords)

    def test_parse_rejects_missing_header(self):
        with pytest.raises(ValueError):
            PointSet1D.parse("0 1 0\n")


class TestClusters:
    def test_cluster_must_contain_center(self):
        with pytest.raises(IncompatibleCluster):
            Cluster(1.0, (0.5, 1.0))

    def test_cluster_offsets_bounded_by_radius(self):
        with pytest.raises(IncompatibleCluster):
            Cluster(1.0, (0.0, 2.0))

    def test_lattice_has_one_cluster(self):
        ps = PointSet1D(np.arange(50.0))
        found = enumerate_k_clusters(ps, 1.1)
        assert len(found) == 1
        cluster, count = found[0]
        assert cluster.offsets == (-1.0, 0.0, 1.0)
        # interior = points whose K-ball fits in the sample: 2 .. 47
        assert count == 46

    def test_silver_chain_has_three_clusters(self):
        ps = silver_mean_chain(2000)
        found = enumerate_k_clusters(ps, 1.1)
        offsets = [c.offsets for c, _ in found]
        assert offsets == [(-1.0, 0.0), (0.0,), (0.0, 1.0)]
        assert sum(n for _, n in found) == len(ps) - 2  # all interior points

    def test_exact_and_float_enumeration_agree(self):
        exact = silver_mean_chain(500)
        floats = PointSet1D(exact.coords.copy())
        a = [(c.offsets, n) for c, n in enumerate_k_clusters(exact, 1.1)]
        b = [(c.offsets, n) for c, n in enumerate_k_clusters(floats, 1.1)]
        assert a == b

    def test_locator_set_of_lattice_is_interior(self):
        ps = PointSet1D(np.arange(10.0))
        cluster = enumerate_k_clusters(ps, 1.1)[0][0]
        t = locator_set(ps, cluster)
        assert t.coords.tolist() == list(range(2, 8))

    def test_locator_of_absent_cluster_is_empty(self):
        ps = PointSet1D(np.arange(10.0))
        ghost = Cluster(1.1, (0.0,))
        assert len(locator_set(ps, ghost)) == 0

    def test_empty_interior(self):
        with pytest.raises(EmptyInterior):
            enumerate_k_clusters(PointSet1D(np.array([0.0, 1.0])), 5.0)

    def test_relative_frequencies_sum_to_one(self):
        ps = silver_mean_chain(5000)
        found = enumerate_k_clusters(ps, 1.1)
        total = sum(cluster_frequency(ps, c).relative for c, _ in found)
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_absolute_frequency_of_lattice(self):
        ps = PointSet1D(np.arange(101.0))
        cluster = enumerate_k_clusters(ps, 1.1)[0][0]
        fr = cluster_frequency(ps, cluster)
        assert fr.count == 97
        assert fr.absolute == pytest.approx(97 / 96.0)  # interior spans 2 .. 98


class TestBumps:
    def test_tent_values(self):
        phi = BumpFunction("tent", 0.5)
        assert phi.value(0.0) == 1.0
        assert phi.value(0.25) == 0.5
        assert phi.value(0.5) == 0.0
        assert phi.value(-10.0) == 0.0

    def test_tent_ft_at_zero_is_area(self):
        assert tent_ft(0.25, 0.0) == pytest.approx(0.25)
        assert BumpFunction("tent", 0.4).ft(0.0) == pytest.approx(0.4)

    def test_tent_ft_vanishes_at_inverse_width(self):
        assert tent_ft(0.5, 2.0) == pytest.approx(0.0, abs=1e-15)

    def test_identity_ft_is_one(self):
        phi = BumpFunction("identity")
        assert phi.ft(3.7) == 1.0
        with pytest.raises(ValueError):
            phi.value(0.0)

    def test_custom_bump_interpolates_but_has_no_ft(self):
        phi = BumpFunction(
            "custom", samples=(np.array([-1.0, 0.0, 1.0]), np.array([0.0, 2.0, 0.0]))
        )
        assert phi.value(0.5) == pytest.approx(1.0)
        with pytest.raises(DiffspecError):
            phi.ft(0.0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            BumpFunction("gaussian")

    def test_smooth_comb_reproduces_isolated_tents(self):
        ps = PointSet1D(np.array([0.0, 3.0]))
        phi = BumpFunction("tent", 0.5)
        t = np.array([-0.25, 0.0, 0.25, 1.5, 3.0])
        f = smooth_comb(ps, phi, t)
        np.testing.assert_allclose(f.real, [0.5, 1.0, 0.5, 0.0, 1.0])

    def test_smooth_comb_carries_weights(self):
        ps = PointSet1D(np.array([0.0, 3.0]), weights=np.array([2.0, -1.0 + 0j]))
        f = smooth_comb(ps, BumpFunction("tent", 0.5), np.array([0.0, 3.0]))
        np.testing.assert_allclose(f.real, [2.0, -1.0])
