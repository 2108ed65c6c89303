# randfem - Mesh Tests
# Structured meshes, affine maps, hat functions and validation

"""
Tests for the mesh package:
- structured mesh counts, areas and numbering
- reference-triangle maps and point location
- P1 hat values and gradients
- validation reports and the text format
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from randfem.engine.mesh import (
    TriangleMesh,
    build_structured_mesh,
    format_mesh,
    parse_mesh,
    read_mesh,
    validate_mesh,
    write_mesh,
)
from randfem.engine.sampling import sample_uniform_simplex
from randfem.engine.utils.errors import MeshValidityError, ParameterError


class TestStructuredMesh:
    """Test suite for the unit-square triangulations."""

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_counts(self, n):
        """Vertex, triangle and interior-node counts follow from 2^n squares."""
        mesh = build_structured_mesh(n)
        m = 2**n
        assert mesh.num_vertices == (m + 1) ** 2
        assert mesh.num_triangles == 2 * m * m
        assert mesh.num_interior == (m - 1) ** 2

    @pytest.mark.parametrize("n", [1, 3, 4])
    def test_sizes_and_areas(self, n):
        mesh = build_structured_mesh(n)
        spacing = 2.0**-n
        assert mesh.grid_spacing == spacing
        assert mesh.h == pytest.approx(math.sqrt(2.0) * spacing, rel=1e-14)
        assert mesh.areas.sum() == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_allclose(mesh.areas, spacing**2 / 2.0, rtol=1e-14)

    def test_triangles_are_counterclockwise(self, mesh_n3):
        p0 = mesh_n3.vertices[mesh_n3.triangles[:, 0]]
        e1 = mesh_n3.vertices[mesh_n3.triangles[:, 1]] - p0
        e2 = mesh_n3.vertices[mesh_n3.triangles[:, 2]] - p0
        assert (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] > 0).all()

    def test_interior_numbering_is_row_major(self, mesh_n2):
        """z_1..z_9 of the level-2 mesh run along rows, bottom row first."""
        expected = [(x / 4, y / 4) for y in (1, 2, 3) for x in (1, 2, 3)]
        interior = mesh_n2.vertices[mesh_n2.interior_nodes]
        np.testing.assert_array_equal(interior, expected)

    def test_each_interior_node_has_six_triangles(self, mesh_n3):
        assert all(len(ts) == 6 for ts in mesh_n3.node_to_triangles)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_diagonal_barycenters_lie_on_the_diagonal(self, n):
        """Both triangles of a diagonal square have barycenters with x == y."""
        centers = build_structured_mesh(n).barycenters()
        assert int((centers[:, 0] == centers[:, 1]).sum()) == 2 * 2**n

    @pytest.mark.parametrize("n", [0, 13, -1, 2.0, True])
    def test_rejects_bad_levels(self, n):
        with pytest.raises(ParameterError):
            build_structured_mesh(n)


class TestGeometry:
    """Test suite for affine maps, areas and point location."""

    def test_triangle_area(self, mesh_n1):
        assert mesh_n1.triangle_area(0) == pytest.approx(0.125)
        with pytest.raises(ParameterError):
            mesh_n1.triangle_area(8)

    def test_barycenter(self, mesh_n1):
        x, y = mesh_n1.barycenter(0)
        assert (x, y) == pytest.approx((1.0 / 6.0, 1.0 / 6.0))

    def test_reference_map_hits_vertices(self, mesh_n2):
        t = 7
        to_triangle = mesh_n2.from_reference(t)
        corners = to_triangle(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        np.testing.assert_allclose(corners, mesh_n2.vertices[mesh_n2.triangles[t]])
        assert abs(to_triangle.det) == pytest.approx(2.0 * mesh_n2.triangle_area(t))

    def test_ordering_selects_the_origin_vertex(self, mesh_n2):
        t = 5
        to_triangle = mesh_n2.from_reference(t, ordering=(1, 2, 0))
        origin = to_triangle(np.array([0.0, 0.0]))
        np.testing.assert_allclose(origin, mesh_n2.vertices[mesh_n2.triangles[t][1]])

    def test_bad_ordering(self, mesh_n1):
        with pytest.raises(ParameterError):
            mesh_n1.from_reference(0, ordering=(0, 0, 1))

    @settings(max_examples=50, deadline=None)
    @given(
        t=st.integers(min_value=0, max_value=31),
        alpha=st.floats(min_value=0.0, max_value=1.0),
        beta=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_reference_round_trip(self, t, alpha, beta):
        assume(alpha + beta <= 1.0)
        mesh = build_structured_mesh(2)
        point = mesh.from_reference(t)(np.array([alpha, beta]))
        back = mesh.to_reference(t)(point)
        np.testing.assert_allclose(back, [alpha, beta], atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(
        corners=st.lists(
            st.floats(min_value=-10.0, max_value=10.0), min_size=6, max_size=6
        ),
        alpha=st.floats(min_value=0.0, max_value=1.0),
        beta=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_round_trip_on_arbitrary_triangles(self, corners, alpha, beta):
        vertices = np.reshape(corners, (3, 2))
        e1, e2 = vertices[1] - vertices[0], vertices[2] - vertices[0]
        assume(abs(e1[0] * e2[1] - e1[1] * e2[0]) > 1.0)
        assume(alpha + beta <= 1.0)
        mesh = TriangleMesh.from_arrays(vertices, [[0, 1, 2]], [True, True, True])
        to_triangle = mesh.from_reference(0)
        back = mesh.to_reference(0)(to_triangle(np.array([alpha, beta])))
        np.testing.assert_allclose(back, [alpha, beta], atol=1e-9)
        assert abs(to_triangle.det) == pytest.approx(2.0 * mesh.triangle_area(0))

    def test_map_reference_points_matches_affine_maps(self, mesh_n2):
        rng = np.random.default_rng(4)
        reference = rng.random((mesh_n2.num_triangles, 2)) / 2.0
        triangles = np.arange(mesh_n2.num_triangles)
        mapped = mesh_n2.map_reference_points(triangles, reference)
        for t in range(mesh_n2.num_triangles):
            expected = mesh_n2.from_reference(t)(reference[t])
            np.testing.assert_allclose(mapped[t], expected)

    def test_locate_point(self, mesh_n1):
        assert mesh_n1.locate_point((0.1, 0.05)) == 0
        assert mesh_n1.locate_point((0.4, 0.4)) == 1
        assert mesh_n1.locate_point((1.5, 0.5)) == -1


class TestBasis:
    """Test suite for P1 hat values and gradients."""

    def test_hat_is_one_at_its_node(self, mesh_n1):
        assert mesh_n1.basis_value(0, (0.5, 0.5)) == pytest.approx(1.0)

    def test_hat_value_inside_support(self, mesh_n1):
        assert mesh_n1.basis_value(0, (0.375, 0.375)) == pytest.approx(0.5)

    def test_hat_vanishes_on_the_boundary(self, mesh_n1):
        assert mesh_n1.basis_value(0, (0.0, 0.3)) == 0.0

    def test_hat_outside_domain(self, mesh_n1):
        with pytest.raises(ParameterError):
            mesh_n1.basis_value(0, (2.0, 2.0))

    def test_gradient(self, mesh_n1):
        np.testing.assert_allclose(mesh_n1.basis_gradient_on_triangle(0, 1), [2.0, 2.0])
        gradient = mesh_n1.basis_gradient_on_triangle(0, 0)
        np.testing.assert_array_equal(gradient, [0.0, 0.0])

    def test_local_vertex(self, mesh_n1):
        assert mesh_n1.local_vertex(0, 1) == 1
        assert mesh_n1.local_vertex(0, 0) == -1
        with pytest.raises(ParameterError):
            mesh_n1.local_vertex(1, 0)

    def test_partition_of_unity(self, mesh_n2):
        """Hats sum to at most one, and to one away from the boundary."""
        rng = np.random.default_rng(8)
        interior = mesh_n2.interior_mask()
        for t in range(mesh_n2.num_triangles):
            points = mesh_n2.from_reference(t)(sample_uniform_simplex(rng, 5))
            for point in points:
                total = sum(
                    mesh_n2.basis_value(j, point) for j in range(mesh_n2.num_interior)
                )
                assert -1e-12 <= total <= 1.0 + 1e-12
                if interior[t].all():
                    assert total == pytest.approx(1.0, abs=1e-12)

    def test_finite_difference_gradients(self, mesh_n2):
        rng = np.random.default_rng(9)
        step = 1e-6
        offsets = step * np.eye(2)
        for t in range(mesh_n2.num_triangles):
            # shrink toward the barycenter so that p +- step stays in t
            reference = 1.0 / 3.0 + 0.5 * (sample_uniform_simplex(rng, 10) - 1.0 / 3.0)
            points = mesh_n2.from_reference(t)(reference)
            for node in mesh_n2.node_index[mesh_n2.triangles[t]].tolist():
                if node < 0:
                    continue
                expected = mesh_n2.basis_gradient_on_triangle(node, t)
                for p in points:
                    numeric = [
                        mesh_n2.basis_value(node, p + d)
                        - mesh_n2.basis_value(node, p - d)
                        for d in offsets
                    ]
                    np.testing.assert_allclose(
                        np.array(numeric) / (2.0 * step), expected, atol=1e-6
                    )

    def test_local_gradients_sum_to_zero(self, mesh_n3):
        np.testing.assert_allclose(mesh_n3.gradients.sum(axis=1), 0.0, atol=1e-12)

    def test_gather_to_nodes(self, mesh_n1):
        local = np.ones((mesh_n1.num_triangles, 3))
        np.testing.assert_array_equal(mesh_n1.gather_to_nodes(local), [6.0])
        with pytest.raises(ParameterError):
            mesh_n1.gather_to_nodes(np.ones((2, 3)))


class TestMeshConstruction:
    """Test suite for meshes built from raw arrays."""

    def test_clockwise_triangles_are_reoriented(self):
        vertices = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
        mesh = TriangleMesh.from_arrays(vertices, [[0, 2, 1]], [True, True, True])
        np.testing.assert_array_equal(mesh.triangles, [[0, 1, 2]])
        assert mesh.areas[0] == pytest.approx(0.5)

    def test_degenerate_triangle_rejected(self):
        vertices = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]
        with pytest.raises(MeshValidityError):
            TriangleMesh.from_arrays(vertices, [[0, 1, 2]], [True, True, True])

    def test_out_of_range_vertex_rejected(self):
        vertices = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
        with pytest.raises(MeshValidityError):
            TriangleMesh.from_arrays(vertices, [[0, 1, 3]], [True, True, True])

    def test_arrays_are_read_only(self, mesh_n1):
        with pytest.raises(ValueError):
            mesh_n1.vertices[0, 0] = 1.0


class TestValidation:
    """Test suite for validate_mesh and the mesh text format."""

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_structured_meshes_are_valid(self, n):
        report = validate_mesh(build_structured_mesh(n), domain_area=1.0)
        assert report.valid
        assert report.total_area == pytest.approx(1.0, abs=1e-12)
        assert report.quasi_uniformity_constant == pytest.approx(0.25)

    def test_convex_hull_default_area(self, mesh_n2):
        assert validate_mesh(mesh_n2).domain_area == pytest.approx(1.0)

    def test_area_mismatch_is_reported(self, mesh_n2):
        report = validate_mesh(mesh_n2, domain_area=2.0, raise_on_failure=False)
        assert not report.valid
        assert "domain area" in report.failures[0]
        with pytest.raises(MeshValidityError):
            validate_mesh(mesh_n2, domain_area=2.0)

    def test_hanging_node_is_reported(self):
        """A vertex in the middle of a neighbor's edge breaks conformity."""
        vertices = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]
        triangles = [[0, 1, 2], [0, 4, 3], [4, 2, 3]]
        flags = [True, True, True, True, False]
        mesh = TriangleMesh.from_arrays(vertices, triangles, flags)
        report = validate_mesh(mesh, domain_area=1.0, raise_on_failure=False)
        assert not report.valid

    def test_text_round_trip(self, mesh_n2):
        parsed = parse_mesh(format_mesh(mesh_n2))
        np.testing.assert_array_equal(parsed.vertices, mesh_n2.vertices)
        np.testing.assert_array_equal(parsed.triangles, mesh_n2.triangles)
        np.testing.assert_array_equal(parsed.boundary, mesh_n2.boundary)

    def test_file_round_trip(self, mesh_n2, tmp_path):
        path = tmp_path / "mesh.txt"
        write_mesh(mesh_n2, path)
        loaded = read_mesh(path)
        np.testing.assert_array_equal(loaded.triangles, mesh_n2.triangles)
        assert loaded.num_interior == mesh_n2.num_interior

    def test_missing_file(self, tmp_path):
        with pytest.raises(MeshValidityError, match="cannot read"):
            read_mesh(tmp_path / "absent.txt")

    def test_text_header(self, mesh_n1):
        assert format_mesh(mesh_n1).splitlines()[0] == "vertices 9 triangles 8"

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "vertices 3 triangles 1\n0 0 1\n",
            "points 1 2\n",
            "vertices x triangles 1\n",
        ],
    )
    def test_malformed_text(self, text):
        with pytest.raises(MeshValidityError):
            parse_mesh(text)
