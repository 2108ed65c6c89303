# randfem - Samplers
# Uniform and hat-density variates on the reference simplex and on triangles

"""
Random variates on the standard 2-simplex S2 = {(a, b): a, b >= 0, a + b <= 1}.

Uniform points use the fold trick: two independent uniforms (U1, U2) are kept
if U1 + U2 <= 1 and reflected to (1 - U1, 1 - U2) otherwise.

Hat-density points use the general rejection algorithm with the uniform
proposal density g = 2 on S2 and envelope constant c = 3: a proposal Z is
accepted when Y * g(Z) <= p(Z) for Y ~ U(0, c), where p = 6 * phi_hat and
phi_hat is 1 - a - b, a or b for local vertex 0, 1 or 2.
"""

import numpy as np
import structlog

from randfem.engine.mesh.triangle_mesh import Point2, TriangleMesh
from randfem.engine.utils.config import get_settings
from randfem.engine.utils.errors import ParameterError, SamplingError

logger = structlog.get_logger(__name__)

PROPOSAL_DENSITY = 2.0
DEFAULT_ENVELOPE = 3.0


def fold_to_simplex(u1: np.ndarray | float, u2: np.ndarray | float) -> np.ndarray:
    """Map uniforms on the unit square to S2; returns (..., 2)."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    keep = u1 + u2 <= 1.0
    return np.stack(
        (np.where(keep, u1, 1.0 - u1), np.where(keep, u2, 1.0 - u2)), axis=-1
    )


def sample_uniform_simplex(
    rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    """Uniform point(s) on S2: shape (2,) for ``size=None`` else (size, 2)."""
    u = rng.random(2 if size is None else (size, 2))
    return fold_to_simplex(u[..., 0], u[..., 1])


def sample_uniform_triangle(
    mesh: TriangleMesh, t: int, rng: np.random.Generator, size: int | None = None
) -> Point2 | np.ndarray:
    """
    Uniform point(s) on triangle t, the affine image of uniform points on S2.

    A single draw comes back as a Point2, ``size`` draws as a (size, 2) array.
    """
    points = mesh.from_reference(t)(sample_uniform_simplex(rng, size))
    if size is None:
        return Point2(float(points[0]), float(points[1]))
    return points


def _check_local_vertex(local_vertex: np.ndarray) -> np.ndarray:
    lv = np.asarray(local_vertex, dtype=np.int64)
    if ((lv < 0) | (lv > 2)).any():
        raise ParameterError(f"local vertex must be 0, 1 or 2, got {local_vertex}")
    return lv


def reference_hat(local_vertex: np.ndarray | int, alpha, beta) -> np.ndarray:
    """phi_hat on S2 for the given local vertex (no indicator)."""
    lv = _check_local_vertex(local_vertex)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    return np.choose(lv, (1.0 - alpha - beta, alpha, beta))


def hat_density_reference(local_vertex: np.ndarray | int, alpha, beta) -> np.ndarray:
    """Probability density 6 * phi_hat * 1_{S2}; integrates to 1 over S2."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    inside = (alpha >= 0.0) & (beta >= 0.0) & (alpha + beta <= 1.0)
    density = np.where(inside, 6.0 * reference_hat(local_vertex, alpha, beta), 0.0)
    return density if density.ndim else float(density)


def accept_hat_proposal(local_vertex, alpha, beta, y) -> np.ndarray:
    """Rejection test ``y * g(Z) <= p(Z)`` for proposals Z = (alpha, beta) in S2."""
    result = np.asarray(y, dtype=float) * PROPOSAL_DENSITY <= hat_density_reference(
        local_vertex, alpha, beta
    )
    return result if np.ndim(result) else bool(result)


def hat_rejection_sample(
    local_vertices: np.ndarray,
    rng: np.random.Generator,
    envelope: float | None = None,
    iteration_cap: int | None = None,
) -> tuple[np.ndarray, int]:
    """
    Draw one hat-density point per entry of ``local_vertices``.

    All pending samples are proposed in vectorized rounds; a sample keeps
    proposing until accepted.

    Returns:
        (points of shape (K, 2), total number of proposals)
    """
    sampling = get_settings().sampling
    envelope = sampling.envelope_constant if envelope is None else envelope
    if iteration_cap is None:
        iteration_cap = sampling.rejection_iteration_cap
    lv = _check_local_vertex(np.atleast_1d(local_vertices))

    out = np.empty((lv.size, 2))
    pending = np.arange(lv.size)
    proposals = 0
    rounds = 0
    while pending.size:
        rounds += 1
        if rounds > iteration_cap:
            logger.error(
                "Rejection sampler hit its iteration cap",
                cap=iteration_cap,
                pending=int(pending.size),
                envelope=envelope,
            )
            raise SamplingError(
                f"rejection sampler exceeded {iteration_cap} rounds with "
                f"{pending.size} samples pending"
            )
        z = sample_uniform_simplex(rng, pending.size)
        y = rng.uniform(0.0, envelope, pending.size)
        accepted = accept_hat_proposal(lv[pending], z[:, 0], z[:, 1], y)
        out[pending[accepted]] = z[accepted]
        proposals += int(pending.size)
        pending = pending[~accepted]
    return out, proposals


def sample_hat_reference(
    local_vertex: int, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    """Hat-density point(s) on S2: shape (2,) for ``size=None`` else (size, 2)."""
    count = 1 if size is None else size
    points, _ = hat_rejection_sample(np.full(count, local_vertex), rng)
    return points[0] if size is None else points


def sample_Y_Tj(mesh: TriangleMesh, t: int, j: int, rng: np.random.Generator) -> Point2:
    """A point of triangle t with density 3 |T|^-1 phi_j restricted to t."""
    k = mesh.local_vertex(j, t)
    if k < 0:
        raise ParameterError(f"triangle {t} is not incident to interior node {j}")
    x, y = mesh.from_reference(t)(sample_hat_reference(k, rng))
    return Point2(float(x), float(y))
