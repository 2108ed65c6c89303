"""Conforming triangulations of the unit square and the P1 basis geometry."""

from randfem.engine.mesh.mesh_io import format_mesh, parse_mesh, read_mesh, write_mesh
from randfem.engine.mesh.structured import build_structured_mesh
from randfem.engine.mesh.triangle_mesh import AffineMap, Point2, TriangleMesh
from randfem.engine.mesh.validation import MeshReport, validate_mesh

__all__ = [
    "AffineMap",
    "MeshReport",
    "Point2",
    "TriangleMesh",
    "build_structured_mesh",
    "format_mesh",
    "parse_mesh",
    "read_mesh",
    "validate_mesh",
    "write_mesh",
]
