# randfem - Mesh Validation
# Admissibility and quasi-uniformity checks for supplied meshes

"""
Explicit mesh validation.

Validation is not run on every query; the CLI runs it when a mesh is built or
loaded. All failed checks are collected and reported together.
"""

import math

import numpy as np
import structlog
from pydantic import BaseModel, Field
from scipy.spatial import ConvexHull

from randfem.engine.mesh.triangle_mesh import (
    DEGENERATE_AREA,
    TriangleMesh,
    signed_areas,
)
from randfem.engine.utils.errors import MeshValidityError

logger = structlog.get_logger(__name__)

AREA_TOL = 1e-12
WEITZENBOCK = math.sqrt(3.0) / 4.0


class MeshReport(BaseModel):
    """Outcome of :func:`validate_mesh`."""

    num_vertices: int = Field(..., description="Vertex count")
    num_triangles: int = Field(..., description="Triangle count")
    num_interior: int = Field(..., description="Interior node count N_h")
    h: float = Field(..., description="Maximal edge length")
    grid_spacing: float | None = Field(None, description="Structured square side")
    total_area: float = Field(..., description="Sum of triangle areas")
    domain_area: float = Field(..., description="Area the triangles must cover")
    min_area: float = Field(..., description="Smallest triangle area")
    max_area: float = Field(..., description="Largest triangle area")
    quasi_uniformity_constant: float = Field(..., description="c with |T| >= c h^2")
    failures: list[str] = Field(default_factory=list, description="Failed checks")

    @property
    def valid(self) -> bool:
        return not self.failures


def _edge_multiplicities(triangles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    edges = np.sort(triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2), axis=1)
    return np.unique(edges, axis=0, return_counts=True)


def _check_adjacency(mesh: TriangleMesh) -> bool:
    lengths = np.array([len(ts) for ts in mesh.node_to_triangles], dtype=np.int64)
    expected = int(np.isin(mesh.triangles, mesh.interior_nodes).sum())
    if int(lengths.sum()) != expected:
        return False
    if any(np.unique(ts).size != ts.size for ts in mesh.node_to_triangles):
        return False
    if expected == 0:
        return True
    owners = np.concatenate(mesh.node_to_triangles)
    nodes = np.repeat(mesh.interior_nodes, lengths)
    return bool((mesh.triangles[owners] == nodes[:, None]).any(axis=1).all())


def validate_mesh(
    mesh: TriangleMesh,
    domain_area: float | None = None,
    raise_on_failure: bool = True,
) -> MeshReport:
    """
    Check admissibility and quasi-uniformity of ``mesh``.

    Args:
        mesh: The mesh to check.
        domain_area: Area of the domain; defaults to the convex hull area, which
            is exact for convex domains such as the unit square.
        raise_on_failure: Raise :class:`MeshValidityError` listing every failure.

    Returns:
        The validation report.
    """
    failures: list[str] = []

    areas = signed_areas(mesh.vertices, mesh.triangles)
    if (areas <= 0).any():
        failures.append(f"{int((areas <= 0).sum())} triangle(s) not counterclockwise")
    if (np.abs(areas) < DEGENERATE_AREA).any():
        failures.append("degenerate triangle(s) with area below 1e-14")

    total = float(np.abs(areas).sum())
    if domain_area is None:
        domain_area = float(ConvexHull(mesh.vertices).volume)
    if abs(total - domain_area) > AREA_TOL * max(1.0, domain_area):
        failures.append(
            f"triangle areas sum to {total:.17g}, domain area is {domain_area:.17g}"
        )

    h2 = mesh.h**2
    max_area = float(np.abs(areas).max())
    min_area = float(np.abs(areas).min())
    if max_area > WEITZENBOCK * h2 * (1.0 + 1e-12):
        failures.append("Weitzenboeck bound |T| <= sqrt(3)/4 h^2 violated")
    constant = min_area / h2
    if constant <= 0.0:
        failures.append("quasi-uniformity constant is not positive")

    edges, counts = _edge_multiplicities(mesh.triangles)
    if (counts > 2).any():
        shared = int((counts > 2).sum())
        failures.append(f"{shared} edge(s) shared by more than two triangles")
    # a hanging node leaves a once-used edge whose endpoints are not on the boundary
    single = edges[counts == 1]
    if single.size and not mesh.boundary[single].all():
        failures.append("non-conforming edge: a vertex lies inside another edge")

    if not _check_adjacency(mesh):
        failures.append("node_to_triangles does not match the triangle vertex sets")

    report = MeshReport(
        num_vertices=mesh.num_vertices,
        num_triangles=mesh.num_triangles,
        num_interior=mesh.num_interior,
        h=mesh.h,
        grid_spacing=mesh.grid_spacing,
        total_area=total,
        domain_area=domain_area,
        min_area=min_area,
        max_area=max_area,
        quasi_uniformity_constant=constant,
        failures=failures,
    )
    if failures:
        logger.warning("Mesh validation failed", failures=failures)
        if raise_on_failure:
            raise MeshValidityError("; ".join(failures), failures=failures)
    else:
        logger.info("Mesh validated", triangles=mesh.num_triangles, c=constant)
    return report
