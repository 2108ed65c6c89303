# randfem - Mesh Text Format
# Plain-text export and import of triangulations

"""
Mesh text format::

    vertices <count> triangles <count>
    x y boundary_flag          (one line per vertex, reals with 17 significant digits)
    i j k                      (one line per triangle, 0-based)
"""

from pathlib import Path

import numpy as np

from randfem.engine.mesh.triangle_mesh import TriangleMesh
from randfem.engine.utils.errors import MeshValidityError


def format_mesh(mesh: TriangleMesh) -> str:
    lines = [f"vertices {mesh.num_vertices} triangles {mesh.num_triangles}"]
    lines.extend(
        f"{x:.17g} {y:.17g} {int(flag)}"
        for (x, y), flag in zip(mesh.vertices.tolist(), mesh.boundary.tolist())
    )
    lines.extend(f"{i} {j} {k}" for i, j, k in mesh.triangles.tolist())
    return "\n".join(lines) + "\n"


def write_mesh(mesh: TriangleMesh, path: Path) -> None:
    Path(path).write_text(format_mesh(mesh), encoding="utf-8")


def parse_mesh(text: str) -> TriangleMesh:
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines:
        raise MeshValidityError("empty mesh file")
    header = lines[0]
    if len(header) != 4 or header[0] != "vertices" or header[2] != "triangles":
        raise MeshValidityError(f"bad mesh header: {' '.join(header)!r}")
    try:
        num_vertices, num_triangles = int(header[1]), int(header[3])
        vertex_rows = lines[1 : 1 + num_vertices]
        triangle_rows = lines[1 + num_vertices : 1 + num_vertices + num_triangles]
        if len(vertex_rows) != num_vertices or len(triangle_rows) != num_triangles:
            raise MeshValidityError("mesh file is truncated")
        if len(lines) != 1 + num_vertices + num_triangles:
            raise MeshValidityError("mesh file has trailing lines")
        vertices = np.array([[float(r[0]), float(r[1])] for r in vertex_rows])
        boundary = np.array([int(r[2]) != 0 for r in vertex_rows], dtype=bool)
        triangles = np.array(
            [[int(v) for v in r] for r in triangle_rows], dtype=np.int64
        )
    except (ValueError, IndexError) as exc:
        raise MeshValidityError(f"malformed mesh file: {exc}") from exc
    return TriangleMesh.from_arrays(vertices.reshape(-1, 2), triangles, boundary)


def read_mesh(path: Path) -> TriangleMesh:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MeshValidityError(f"cannot read mesh file {path}: {exc}") from exc
    return parse_mesh(text)
