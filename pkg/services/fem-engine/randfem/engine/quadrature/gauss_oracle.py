# randfem - Gauss Oracle
# High-accuracy deterministic quadrature on triangles

"""
Conical-product Gauss rules on the reference simplex S2.

The collapsed map (u, v) -> (u, v (1 - u)) takes the unit square onto S2 with
Jacobian 1 - u. Gauss-Jacobi nodes for the weight (1 - u) in u times
Gauss-Legendre nodes in v give a positive rule that is exact for every
polynomial of total degree up to 2n - 1 with n points per direction.
"""

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from randfem.engine.mesh.triangle_mesh import TriangleMesh
from randfem.engine.quadrature.rules import Integrand, evaluate
from randfem.engine.utils.errors import ParameterError

MIN_DEGREE = 2
MAX_DEGREE = 10


@lru_cache(maxsize=None)
def _conical_rule(points_per_direction: int) -> tuple[np.ndarray, np.ndarray]:
    t, w_jacobi = roots_jacobi(points_per_direction, 1.0, 0.0)
    s, w_legendre = roots_legendre(points_per_direction)
    u = 0.5 * (1.0 + t)
    v = 0.5 * (1.0 + s)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    nodes = np.column_stack((uu.ravel(), (vv * (1.0 - uu)).ravel()))
    weights = np.outer(0.25 * w_jacobi, 0.5 * w_legendre).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_oracle_rule(degree: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Reference nodes (Q, 2) and weights (Q,) exact up to ``degree`` on S2.

    Weights sum to 1/2, the area of S2.
    """
    if not MIN_DEGREE <= degree <= MAX_DEGREE:
        raise ParameterError(
            f"oracle degree must be in [{MIN_DEGREE}, {MAX_DEGREE}], got {degree}"
        )
    return _conical_rule((degree + 2) // 2)


def _physical_nodes(mesh: TriangleMesh, nodes: np.ndarray) -> np.ndarray:
    p0 = mesh.vertices[mesh.triangles[:, 0]]
    e1 = mesh.vertices[mesh.triangles[:, 1]] - p0
    e2 = mesh.vertices[mesh.triangles[:, 2]] - p0
    return (
        p0[:, None, :]
        + nodes[None, :, 0:1] * e1[:, None, :]
        + nodes[None, :, 1:2] * e2[:, None, :]
    )


def gauss_oracle(v: Integrand, mesh: TriangleMesh, degree: int) -> float:
    """Sum over triangles of the degree-exact rule; v must be smooth per triangle."""
    nodes, weights = gauss_oracle_rule(degree)
    values = evaluate(v, _physical_nodes(mesh, nodes))
    return float((2.0 * mesh.areas * (values @ weights)).sum())


def gauss_oracle_load(f: Integrand, mesh: TriangleMesh, degree: int) -> np.ndarray:
    """Integrals of f phi_j for every interior node, shape (N_h,)."""
    nodes, weights = gauss_oracle_rule(degree)
    values = evaluate(f, _physical_nodes(mesh, nodes))
    hats = np.column_stack((1.0 - nodes[:, 0] - nodes[:, 1], nodes[:, 0], nodes[:, 1]))
    local = 2.0 * mesh.areas[:, None] * ((values * weights) @ hats)
    return mesh.gather_to_nodes(local)
