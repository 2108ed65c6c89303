# randfem - Sampling Tests
# Streams, simplex samplers and full-mesh draws

"""
Tests for the sampling package:
- stream derivation and reproducibility
- uniform fold sampler and hat-density rejection sampler statistics
- uniform and hat draws over a mesh, and single-point resampling
"""

import numpy as np
import pytest
from scipy import stats

from randfem.engine.mesh import Point2
from randfem.engine.sampling import (
    DrawKind,
    RngStream,
    StreamPurpose,
    accept_hat_proposal,
    derive_stream_id,
    draw_hat,
    draw_uniform,
    fold_to_simplex,
    hat_density_reference,
    hat_rejection_sample,
    resample_point,
    resample_stream_id,
    sample_hat_reference,
    sample_uniform_simplex,
    sample_uniform_triangle,
    sample_Y_Tj,
)
from randfem.engine.utils.errors import ParameterError, SamplingError


def _subtriangle_counts(points: np.ndarray) -> np.ndarray:
    """Counts in the midpoint subtriangles of S2: three corners, then the center."""
    a, b = points[:, 0], points[:, 1]
    near_a = a >= 0.5
    near_b = b >= 0.5
    near_origin = (a + b <= 0.5) & ~near_a & ~near_b
    center = ~(near_a | near_b | near_origin)
    return np.array([near_a.sum(), near_b.sum(), near_origin.sum(), center.sum()])


class TestStreams:
    """Test suite for stream ids and generators."""

    def test_same_stream_same_variates(self):
        first = RngStream(7, 12345).generator().random(5)
        second = RngStream(7, 12345).generator().random(5)
        np.testing.assert_array_equal(first, second)

    def test_different_streams_differ(self):
        first = RngStream(7, 1).generator().random(5)
        second = RngStream(7, 2).generator().random(5)
        third = RngStream(8, 1).generator().random(5)
        assert not np.array_equal(first, second)
        assert not np.array_equal(first, third)

    def test_stream_ids_are_deterministic_and_distinct(self):
        ids = {derive_stream_id(0, purpose) for purpose in StreamPurpose}
        assert len(ids) == len(StreamPurpose)
        load = derive_stream_id(3, StreamPurpose.LOAD)
        assert load == derive_stream_id(3, StreamPurpose.LOAD)
        assert load != derive_stream_id(4, StreamPurpose.LOAD)
        assert all(0 <= i < 2**64 for i in ids)

    def test_derive(self):
        stream = RngStream.derive(11, 2, StreamPurpose.HAT)
        assert stream.seed == 11
        assert stream.stream_id == derive_stream_id(2, StreamPurpose.HAT)

    def test_resample_ids_depend_on_the_point(self):
        parent = derive_stream_id(0, StreamPurpose.LOAD)
        assert resample_stream_id(parent, 3) != resample_stream_id(parent, 4)
        assert resample_stream_id(parent, 3, 0) != resample_stream_id(parent, 3, 1)

    @pytest.mark.parametrize("seed, stream_id", [(-1, 0), (0, 2**64), (2**64, 0)])
    def test_rejects_out_of_range(self, seed, stream_id):
        with pytest.raises(ParameterError):
            RngStream(seed, stream_id)


class TestUniformSampler:
    """Test suite for the fold sampler on S2."""

    def test_fold_keeps_points_inside(self):
        np.testing.assert_allclose(fold_to_simplex(0.3, 0.4), [0.3, 0.4])

    def test_fold_reflects_points_outside(self):
        np.testing.assert_allclose(fold_to_simplex(0.8, 0.5), [0.2, 0.5])

    def test_fold_on_the_hypotenuse_is_kept(self):
        np.testing.assert_array_equal(fold_to_simplex(0.25, 0.75), [0.25, 0.75])

    def test_samples_lie_in_the_simplex(self):
        points = sample_uniform_simplex(np.random.default_rng(0), 10_000)
        assert points.shape == (10_000, 2)
        assert (points >= 0).all()
        assert (points.sum(axis=1) <= 1.0).all()

    def test_single_sample_shape(self):
        assert sample_uniform_simplex(np.random.default_rng(0)).shape == (2,)

    def test_single_triangle_sample_is_a_point(self, mesh_n2):
        point = sample_uniform_triangle(mesh_n2, 7, RngStream(5, 1).generator())
        assert isinstance(point, Point2)
        assert mesh_n2.locate_point(point) >= 0
        assert (mesh_n2.barycentric_coordinates(7, np.array(point)) >= -1e-12).all()

    def test_triangle_samples_stay_inside(self, mesh_n2):
        rng = RngStream(5, 0).generator()
        for t in (0, 7, 31):
            points = sample_uniform_triangle(mesh_n2, t, rng, size=2_000)
            coordinates = mesh_n2.barycentric_coordinates(t, points)
            assert (coordinates >= -1e-12).all()
            center = np.array(mesh_n2.barycenter(t))
            np.testing.assert_allclose(points.mean(axis=0), center, atol=0.01)

    @pytest.mark.statistical
    def test_uniformity_chi_square(self):
        points = sample_uniform_simplex(RngStream(2024, 1).generator(), 40_000)
        counts = _subtriangle_counts(points)
        _, p_value = stats.chisquare(counts, np.full(4, points.shape[0] / 4))
        assert p_value > 1e-3


class TestHatSampler:
    """Test suite for the hat-density rejection sampler."""

    def test_density_integrates_to_one(self):
        """Midpoint-rule check of 6 phi_hat over S2 on a fine grid."""
        k = 400
        centers = (np.arange(k) + 0.5) / k
        a, b = np.meshgrid(centers, centers, indexing="ij")
        density = hat_density_reference(1, a, b)
        assert density.sum() / k**2 == pytest.approx(1.0, abs=1e-2)

    def test_density_vanishes_outside(self):
        assert hat_density_reference(0, 0.8, 0.8) == 0.0
        assert hat_density_reference(2, -0.1, 0.5) == 0.0

    def test_acceptance_test_accepts_on_equality(self):
        """Density 6 alpha is 3 at (1/2, 1/4); the proposal density is 2."""
        assert accept_hat_proposal(1, 0.5, 0.25, 1.5) is True
        assert accept_hat_proposal(1, 0.5, 0.25, 1.6) is False
        np.testing.assert_array_equal(
            accept_hat_proposal([0, 2], [0.1, 0.1], [0.1, 0.1], [2.0, 0.2]),
            [True, True],
        )

    def test_bad_local_vertex(self):
        with pytest.raises(ParameterError):
            hat_density_reference(3, 0.2, 0.2)

    @pytest.mark.statistical
    def test_acceptance_rate_is_one_third(self):
        count = 40_000
        points, proposals = hat_rejection_sample(
            np.full(count, 2), RngStream(5, 9).generator()
        )
        assert points.shape == (count, 2)
        assert count / proposals == pytest.approx(1.0 / 3.0, abs=0.02)

    @pytest.mark.statistical
    def test_sample_mean_for_vertex_zero(self):
        """E[(alpha, beta)] = (1/4, 1/4) under the density 6 (1 - alpha - beta)."""
        points = sample_hat_reference(0, RngStream(5, 10).generator(), size=20_000)
        np.testing.assert_allclose(points.mean(axis=0), [0.25, 0.25], atol=0.01)

    @pytest.mark.statistical
    def test_chi_square_against_the_hat_density(self):
        """Subtriangle masses of 6 alpha are 1/2, 1/8, 1/8 and 1/4."""
        points = sample_hat_reference(1, RngStream(5, 11).generator(), size=40_000)
        counts = _subtriangle_counts(points)
        expected = points.shape[0] * np.array([0.5, 0.125, 0.125, 0.25])
        _, p_value = stats.chisquare(counts, expected)
        assert p_value > 1e-3

    def test_iteration_cap(self):
        """An envelope far above the density makes acceptance rare."""
        with pytest.raises(SamplingError):
            hat_rejection_sample(
                np.zeros(50, dtype=int),
                np.random.default_rng(0),
                envelope=1e9,
                iteration_cap=10,
            )

    def test_sample_Y_Tj_stays_in_the_triangle(self, mesh_n2):
        j = 4
        t = int(mesh_n2.node_to_triangles[j][0])
        rng = np.random.default_rng(3)
        for _ in range(20):
            point = sample_Y_Tj(mesh_n2, t, j, rng)
            assert (mesh_n2.barycentric_coordinates(t, np.array(point)) >= -1e-12).all()

    def test_sample_Y_Tj_requires_incidence(self, mesh_n2):
        with pytest.raises(ParameterError):
            sample_Y_Tj(mesh_n2, 0, 4, np.random.default_rng(0))


class TestDraws:
    """Test suite for uniform and hat draws over a whole mesh."""

    def test_uniform_draw_points_lie_in_their_triangles(self, mesh_n2):
        draw = draw_uniform(mesh_n2, RngStream(1, 2))
        assert draw.kind is DrawKind.UNIFORM
        assert draw.points.shape == (mesh_n2.num_triangles, 2)
        for t in range(mesh_n2.num_triangles):
            lam = mesh_n2.barycentric_coordinates(t, draw.points[t])
            assert (lam >= -1e-12).all()

    def test_uniform_draw_is_reproducible(self, mesh_n2):
        first = draw_uniform(mesh_n2, RngStream(1, 2))
        second = draw_uniform(mesh_n2, RngStream(1, 2))
        np.testing.assert_array_equal(first.points, second.points)
        assert first.acceptance_rate == 1.0

    def test_hat_draw_layout(self, mesh_n2):
        draw = draw_hat(mesh_n2, RngStream(1, 3))
        assert draw.kind is DrawKind.HAT
        np.testing.assert_array_equal(draw.mask, mesh_n2.interior_mask())
        assert np.isnan(draw.points[~draw.mask]).all()
        assert np.isfinite(draw.points[draw.mask]).all()
        assert 0.0 < draw.acceptance_rate <= 1.0

    def test_hat_draw_is_reproducible(self, mesh_n2):
        first = draw_hat(mesh_n2, RngStream(1, 3))
        second = draw_hat(mesh_n2, RngStream(1, 3))
        np.testing.assert_array_equal(first.points, second.points)
        assert first.proposals == second.proposals

    def test_hat_draw_point_access(self, mesh_n2):
        draw = draw_hat(mesh_n2, RngStream(1, 3))
        t, k = (int(i) for i in np.argwhere(draw.mask)[0])
        assert tuple(draw.point(t, k)) == tuple(draw.points[t, k])
        with pytest.raises(ParameterError):
            draw.point(0, 0)

    def test_resample_point_is_fresh_and_reproducible(self, mesh_n2):
        draw = draw_uniform(mesh_n2, RngStream(1, 2))
        reference, point = resample_point(mesh_n2, draw, 5)
        again, _ = resample_point(mesh_n2, draw, 5)
        np.testing.assert_array_equal(reference, again)
        assert not np.array_equal(reference, draw.reference[5])
        assert (mesh_n2.barycentric_coordinates(5, point) >= -1e-12).all()
