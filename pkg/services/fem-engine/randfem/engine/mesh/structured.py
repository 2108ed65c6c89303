# randfem - Structured Meshes
# Uniform triangulations of the unit square

"""
Structured meshes of the unit square.

The square is divided into 2^n x 2^n squares of side 2^-n and every square is
bisected along its diagonal from the upper left to the lower right vertex.
Vertices are numbered row-major (x fastest), bottom row first.
"""

import numpy as np
import structlog

from randfem.engine.mesh.triangle_mesh import TriangleMesh
from randfem.engine.utils.errors import ParameterError

logger = structlog.get_logger(__name__)

MIN_LEVEL = 1
MAX_LEVEL = 12


def build_structured_mesh(n: int) -> TriangleMesh:
    """Build the level-n structured triangulation of the unit square."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ParameterError(f"mesh level must be an integer, got {n!r}")
    if not MIN_LEVEL <= n <= MAX_LEVEL:
        raise ParameterError(f"mesh level n={n} outside [{MIN_LEVEL}, {MAX_LEVEL}]")

    m = 2**n
    coords = np.arange(m + 1) / m
    xx, yy = np.meshgrid(coords, coords, indexing="xy")
    vertices = np.column_stack((xx.ravel(), yy.ravel()))

    ii, jj = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="xy")
    boundary = ((ii == 0) | (ii == m) | (jj == 0) | (jj == m)).ravel()

    si, sj = np.meshgrid(np.arange(m), np.arange(m), indexing="xy")
    lower_left = (sj * (m + 1) + si).ravel()
    lower_right = lower_left + 1
    upper_left = lower_left + (m + 1)
    upper_right = upper_left + 1
    # two counterclockwise triangles per square, split along upper-left -> lower-right
    first = np.column_stack((lower_left, lower_right, upper_left))
    second = np.column_stack((lower_right, upper_right, upper_left))
    triangles = np.stack((first, second), axis=1).reshape(-1, 3)

    mesh = TriangleMesh.from_arrays(vertices, triangles, boundary, grid_spacing=1.0 / m)
    assert mesh.areas.min() > 0.0, "structured mesh must be counterclockwise"
    logger.debug(
        "Built structured mesh",
        level=n,
        vertices=mesh.num_vertices,
        triangles=mesh.num_triangles,
        interior=mesh.num_interior,
    )
    return mesh
