# randfem - Triangle Mesh
# Conforming P1 triangulations, hat functions and reference-triangle maps

"""
Immutable triangle mesh data model for P1 Lagrange finite elements.

Interior nodes z_1..z_{N_h} are the vertices not flagged as boundary vertices,
numbered in vertex order. Homogeneous Dirichlet conditions are imposed by
construction: only interior nodes carry degrees of freedom.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import structlog

from randfem.engine.utils.errors import MeshValidityError, ParameterError

logger = structlog.get_logger(__name__)

# Triangles with a smaller area are treated as degenerate.
DEGENERATE_AREA = 1e-14
# Slack for barycentric containment tests.
CONTAINMENT_TOL = 1e-12

IDENTITY_ORDERING = (0, 1, 2)


class Point2(NamedTuple):
    """A point (x, y) of the domain."""

    x: float
    y: float


@dataclass(frozen=True)
class AffineMap:
    """Affine map ``p -> linear @ p + offset`` of the plane."""

    linear: np.ndarray
    offset: np.ndarray

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))

    def __call__(self, points: np.ndarray | Sequence[float]) -> np.ndarray:
        """Apply the map to one point (shape (2,)) or a stack of points (..., 2)."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.offset

    def inverse(self) -> "AffineMap":
        if abs(self.det) < 2.0 * DEGENERATE_AREA:
            raise MeshValidityError("Affine map is numerically singular")
        inv = np.linalg.inv(self.linear)
        return AffineMap(linear=inv, offset=-inv @ self.offset)


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def signed_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Half the cross product of the edge vectors; positive for counterclockwise."""
    p0 = vertices[triangles[:, 0]]
    e1 = vertices[triangles[:, 1]] - p0
    e2 = vertices[triangles[:, 2]] - p0
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def _local_gradients(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Constant gradients of the local barycentric coordinates, shape (T, 3, 2)."""
    p0 = vertices[triangles[:, 0]]
    e1 = vertices[triangles[:, 1]] - p0
    e2 = vertices[triangles[:, 2]] - p0
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    # rows of the inverse Jacobian are the gradients of alpha and beta
    grad_alpha = np.column_stack((e2[:, 1], -e2[:, 0])) / det[:, None]
    grad_beta = np.column_stack((-e1[:, 1], e1[:, 0])) / det[:, None]
    grad_one = -(grad_alpha + grad_beta)
    return np.stack((grad_one, grad_alpha, grad_beta), axis=1)


def _vertex_to_triangles(triangles: np.ndarray, num_vertices: int) -> list[np.ndarray]:
    flat = triangles.ravel()
    owners = np.repeat(np.arange(triangles.shape[0]), 3)
    order = np.argsort(flat, kind="stable")
    counts = np.bincount(flat, minlength=num_vertices)
    return np.split(owners[order], np.cumsum(counts)[:-1])


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """
    Conforming triangulation with P1 bookkeeping.

    Attributes:
        vertices: (V, 2) coordinates.
        triangles: (T, 3) counterclockwise vertex indices.
        boundary: (V,) flags of vertices on the domain boundary.
        interior_nodes: (N_h,) vertex indices of z_1..z_{N_h}.
        node_index: (V,) interior index of each vertex, -1 on the boundary.
        node_to_triangles: for each interior node, sorted indices of its triangles.
        areas: (T,) triangle areas |T|.
        gradients: (T, 3, 2) gradients of the local hat functions.
        h: maximal edge length.
        grid_spacing: square side 2^-n of structured meshes, otherwise None.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary: np.ndarray
    interior_nodes: np.ndarray
    node_index: np.ndarray
    node_to_triangles: tuple[np.ndarray, ...]
    areas: np.ndarray
    gradients: np.ndarray
    h: float
    grid_spacing: float | None = field(default=None)

    @classmethod
    def from_arrays(
        cls,
        vertices: np.ndarray,
        triangles: np.ndarray,
        boundary: np.ndarray,
        grid_spacing: float | None = None,
    ) -> "TriangleMesh":
        """Build a mesh, reorienting clockwise triangles; degenerate ones raise."""
        verts = np.array(vertices, dtype=float)
        tris = np.array(triangles, dtype=np.int64)
        flags = np.array(boundary, dtype=bool)

        if verts.ndim != 2 or verts.shape[1] != 2:
            raise ParameterError(f"vertices must have shape (V, 2), got {verts.shape}")
        if tris.ndim != 2 or tris.shape[1] != 3 or tris.shape[0] == 0:
            raise ParameterError(f"triangles must have shape (T, 3), got {tris.shape}")
        if flags.shape != (verts.shape[0],):
            raise ParameterError("boundary flags must have one entry per vertex")
        if not np.isfinite(verts).all():
            raise MeshValidityError("Vertex coordinates must be finite")
        if tris.min() < 0 or tris.max() >= verts.shape[0]:
            raise MeshValidityError("Triangle references a vertex out of range")

        areas = signed_areas(verts, tris)
        clockwise = areas < 0
        if clockwise.any():
            logger.info("Reoriented clockwise triangles", count=int(clockwise.sum()))
            tris[clockwise] = tris[clockwise][:, [0, 2, 1]]
            areas = np.abs(areas)
        degenerate = np.flatnonzero(areas < DEGENERATE_AREA)
        if degenerate.size:
            raise MeshValidityError(
                f"{degenerate.size} degenerate triangle(s), first index {degenerate[0]}"
            )

        interior = np.flatnonzero(~flags)
        node_index = np.full(verts.shape[0], -1, dtype=np.int64)
        node_index[interior] = np.arange(interior.size)

        owners = _vertex_to_triangles(tris, verts.shape[0])
        adjacency = tuple(_readonly(owners[v]) for v in interior)

        edges = verts[tris[:, [1, 2, 0]]] - verts[tris]
        h = float(np.sqrt((edges**2).sum(axis=2)).max())

        return cls(
            vertices=_readonly(verts),
            triangles=_readonly(tris),
            boundary=_readonly(flags),
            interior_nodes=_readonly(interior),
            node_index=_readonly(node_index),
            node_to_triangles=adjacency,
            areas=_readonly(areas),
            gradients=_readonly(_local_gradients(verts, tris)),
            h=h,
            grid_spacing=grid_spacing,
        )

    # ============================================
    # Sizes and index checks
    # ============================================

    @property
    def num_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def num_triangles(self) -> int:
        return int(self.triangles.shape[0])

    @property
    def num_interior(self) -> int:
        return int(self.interior_nodes.shape[0])

    def _check_triangle(self, t: int) -> int:
        if not 0 <= t < self.num_triangles:
            raise ParameterError(
                f"triangle index {t} out of range [0, {self.num_triangles})"
            )
        return int(t)

    def _check_node(self, j: int) -> int:
        if not 0 <= j < self.num_interior:
            raise ParameterError(
                f"interior node index {j} out of range [0, {self.num_interior})"
            )
        return int(j)

    def local_vertex(self, j: int, t: int) -> int:
        """Position (0, 1 or 2) of interior node z_j in triangle t, or -1."""
        vertex = self.interior_nodes[self._check_node(j)]
        hits = np.flatnonzero(self.triangles[self._check_triangle(t)] == vertex)
        return int(hits[0]) if hits.size else -1

    # ============================================
    # Geometry
    # ============================================

    def triangle_area(self, t: int) -> float:
        """Area |T| of triangle t."""
        t = self._check_triangle(t)
        area = float(abs(signed_areas(self.vertices, self.triangles[t : t + 1])[0]))
        if area < DEGENERATE_AREA:
            raise MeshValidityError(f"triangle {t} is degenerate (area {area:.3e})")
        return area

    def barycenter(self, t: int) -> Point2:
        """Arithmetic mean of the three vertices of triangle t."""
        cx, cy = self.vertices[self.triangles[self._check_triangle(t)]].mean(axis=0)
        return Point2(float(cx), float(cy))

    def barycenters(self) -> np.ndarray:
        """Barycenters of all triangles, shape (T, 2)."""
        return self.vertices[self.triangles].mean(axis=1)

    def from_reference(
        self, t: int, ordering: Sequence[int] = IDENTITY_ORDERING
    ) -> AffineMap:
        """
        Map from the reference simplex S2 onto triangle t.

        ``ordering`` is a permutation of (0, 1, 2) selecting which local vertex
        is the image of (0, 0), (1, 0) and (0, 1) respectively.
        """
        t = self._check_triangle(t)
        if sorted(ordering) != [0, 1, 2]:
            raise ParameterError(
                f"ordering must be a permutation of (0, 1, 2): {ordering}"
            )
        p0, p1, p2 = self.vertices[self.triangles[t][list(ordering)]]
        linear = np.column_stack((p1 - p0, p2 - p0))
        if abs(np.linalg.det(linear)) < 2.0 * DEGENERATE_AREA:
            raise MeshValidityError(f"triangle {t} is degenerate")
        return AffineMap(linear=linear, offset=p0.copy())

    def to_reference(
        self, t: int, ordering: Sequence[int] = IDENTITY_ORDERING
    ) -> AffineMap:
        """Map from triangle t onto the reference simplex S2."""
        return self.from_reference(t, ordering).inverse()

    def map_reference_points(
        self, triangle_ids: np.ndarray, reference: np.ndarray
    ) -> np.ndarray:
        """Vectorized identity-ordering maps of reference[i] onto triangle_ids[i]."""
        tris = self.triangles[np.asarray(triangle_ids, dtype=np.int64)]
        p0 = self.vertices[tris[:, 0]]
        e1 = self.vertices[tris[:, 1]] - p0
        e2 = self.vertices[tris[:, 2]] - p0
        return p0 + reference[:, :1] * e1 + reference[:, 1:2] * e2

    def barycentric_coordinates(self, t: int, points: np.ndarray) -> np.ndarray:
        """Barycentric coordinates (K, 3) of points (K, 2) in triangle t."""
        ref = self.to_reference(t)(np.atleast_2d(points))
        return np.column_stack((1.0 - ref[:, 0] - ref[:, 1], ref[:, 0], ref[:, 1]))

    def locate_point(self, p: Sequence[float]) -> int:
        """Index of a triangle containing p (closed), or -1 outside the mesh."""
        point = np.asarray(p, dtype=float)
        p0 = self.vertices[self.triangles[:, 0]]
        e1 = self.vertices[self.triangles[:, 1]] - p0
        e2 = self.vertices[self.triangles[:, 2]] - p0
        d = point - p0
        det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        alpha = (d[:, 0] * e2[:, 1] - d[:, 1] * e2[:, 0]) / det
        beta = (e1[:, 0] * d[:, 1] - e1[:, 1] * d[:, 0]) / det
        inside = (
            (alpha >= -CONTAINMENT_TOL)
            & (beta >= -CONTAINMENT_TOL)
            & (alpha + beta <= 1.0 + CONTAINMENT_TOL)
        )
        hits = np.flatnonzero(inside)
        return int(hits[0]) if hits.size else -1

    # ============================================
    # P1 basis
    # ============================================

    def basis_value(self, j: int, p: Sequence[float]) -> float:
        """Value of the hat function phi_j at p; zero outside its support."""
        j = self._check_node(j)
        vertex = self.interior_nodes[j]
        for t in self.node_to_triangles[j]:
            lam = self.barycentric_coordinates(int(t), np.asarray(p, dtype=float))[0]
            if (lam >= -CONTAINMENT_TOL).all():
                k = int(np.flatnonzero(self.triangles[t] == vertex)[0])
                return float(np.clip(lam[k], 0.0, 1.0))
        if self.locate_point(p) < 0:
            raise ParameterError(f"point {tuple(p)} lies outside the domain")
        return 0.0

    def interior_mask(self) -> np.ndarray:
        """(T, 3) flags of local vertices that are interior nodes."""
        return self.node_index[self.triangles] >= 0

    def gather_to_nodes(self, local_values: np.ndarray) -> np.ndarray:
        """
        Sum per-(triangle, local vertex) values into the interior nodes.

        Entries at boundary vertices are dropped; the summation order is the
        triangle order, so results are reproducible bit for bit.
        """
        values = np.asarray(local_values, dtype=float)
        if values.shape != self.triangles.shape:
            raise ParameterError(
                f"local values must have shape {self.triangles.shape}, "
                f"got {values.shape}"
            )
        mask = self.interior_mask()
        return np.bincount(
            self.node_index[self.triangles][mask],
            weights=values[mask],
            minlength=self.num_interior,
        )

    def basis_gradient_on_triangle(self, j: int, t: int) -> np.ndarray:
        """Constant gradient of phi_j on triangle t; zero off the support of phi_j."""
        k = self.local_vertex(j, t)
        if k < 0:
            return np.zeros(2)
        return self.gradients[t, k].copy()
