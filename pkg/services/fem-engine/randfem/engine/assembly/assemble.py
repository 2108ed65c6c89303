# randfem - System Assembly
# Element-centric assembly of stiffness, mass and load

"""
Assembly of the P1 linear systems.

Every routine computes per-triangle local contributions in one vectorized
pass and scatters them into interior-node numbering. Dirichlet rows and
columns are eliminated by construction: boundary vertices carry no index
unless ``include_boundary`` asks for the full vertex numbering.

The randomized routines follow the index structure of their estimators.
The Monte Carlo load shares one point Z_T between all hat functions of T,
the importance-sampling load uses its own point Y_{T,j} per hat function,
and the Monte Carlo stiffness expects its own draw, independent of the load.
"""

import numpy as np
import structlog

from randfem.engine.assembly.coefficients import CoefficientField
from randfem.engine.assembly.matrices import FemCoefficients, SparseSpdMatrix
from randfem.engine.mesh.triangle_mesh import TriangleMesh
from randfem.engine.quadrature.rules import (
    Integrand,
    evaluate,
    evaluate_hat_draw,
    evaluate_uniform_draw,
)
from randfem.engine.sampling.draws import QuadratureDraw

logger = structlog.get_logger(__name__)

_MASS_PATTERN = (np.ones((3, 3)) + np.eye(3)) / 12.0


# ============================================
# Scatter helpers
# ============================================


def _scatter_matrix(
    mesh: TriangleMesh, local: np.ndarray, include_boundary: bool
) -> SparseSpdMatrix:
    """Scatter (T, 3, 3) element matrices into a global sparse matrix."""
    if include_boundary:
        index = mesh.triangles
        dimension = mesh.num_vertices
    else:
        index = mesh.node_index[mesh.triangles]
        dimension = mesh.num_interior
    rows = np.broadcast_to(index[:, :, None], local.shape)
    cols = np.broadcast_to(index[:, None, :], local.shape)
    keep = (rows >= 0) & (cols >= 0)
    return SparseSpdMatrix.from_triplets(rows[keep], cols[keep], local[keep], dimension)


def _gradient_products(mesh: TriangleMesh) -> np.ndarray:
    """grad(lambda_a) . grad(lambda_b) per triangle, shape (T, 3, 3)."""
    return np.einsum("tad,tbd->tab", mesh.gradients, mesh.gradients)


# ============================================
# Matrices
# ============================================


def assemble_stiffness_exact(
    mesh: TriangleMesh, include_boundary: bool = False
) -> SparseSpdMatrix:
    """Stiffness matrix of sigma = 1; exact, P1 gradients are piecewise constant."""
    local = mesh.areas[:, None, None] * _gradient_products(mesh)
    return _scatter_matrix(mesh, local, include_boundary)


def assemble_stiffness_mc(
    mesh: TriangleMesh, sigma: CoefficientField, draw: QuadratureDraw
) -> SparseSpdMatrix:
    """Randomized stiffness sum_T |T| sigma(Z_T) grad(phi_i) . grad(phi_j)."""
    values, _ = evaluate_uniform_draw(sigma.evaluate, mesh, draw)
    sigma.check_samples(values)
    local = (mesh.areas * values)[:, None, None] * _gradient_products(mesh)
    return _scatter_matrix(mesh, local, include_boundary=False)


def assemble_mass(
    mesh: TriangleMesh, include_boundary: bool = False
) -> SparseSpdMatrix:
    """P1 mass matrix from the element matrix |T| (1 + delta_ab) / 12."""
    local = mesh.areas[:, None, None] * _MASS_PATTERN[None, :, :]
    return _scatter_matrix(mesh, local, include_boundary)


# ============================================
# Load vectors
# ============================================


def assemble_load_mc(
    mesh: TriangleMesh, f: Integrand, draw: QuadratureDraw
) -> FemCoefficients:
    """Monte Carlo load: entry j = sum_{T incident to z_j} |T| f(Z_T) phi_j(Z_T)."""
    values, reference = evaluate_uniform_draw(f, mesh, draw)
    alpha, beta = reference[:, 0], reference[:, 1]
    hats = np.column_stack((1.0 - alpha - beta, alpha, beta))
    local = (mesh.areas * values)[:, None] * hats
    load = mesh.gather_to_nodes(local)
    logger.debug("Assembled load vector", estimator="mc", n_h=mesh.num_interior)
    return FemCoefficients(load)


def assemble_load_is(
    mesh: TriangleMesh, f: Integrand, draw: QuadratureDraw
) -> FemCoefficients:
    """Importance-sampling load: (1/3) sum over T around z_j of |T| f(Y_{T,j})."""
    values = evaluate_hat_draw(f, mesh, draw)
    local = mesh.areas[:, None] * values / 3.0
    load = mesh.gather_to_nodes(local)
    logger.debug("Assembled load vector", estimator="is", n_h=mesh.num_interior)
    return FemCoefficients(load)


def assemble_load_barycentric(mesh: TriangleMesh, f: Integrand) -> FemCoefficients:
    """Barycentric load: entry j = sum_{T incident to z_j} (|T| / 3) f(z_T)."""
    values = evaluate(f, mesh.barycenters())
    non_finite = np.flatnonzero(~np.isfinite(values))
    if non_finite.size:
        logger.warning(
            "Non-finite integrand at barycenters",
            count=int(non_finite.size),
            first_triangle=int(non_finite[0]),
        )
    per_triangle = mesh.areas * values / 3.0
    local = np.repeat(per_triangle[:, None], 3, axis=1)
    return FemCoefficients(mesh.gather_to_nodes(local))
