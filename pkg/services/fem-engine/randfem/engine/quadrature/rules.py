# randfem - Quadrature Rules
# Stratified Monte Carlo and barycentric rules over a triangulation

"""
Scalar quadrature rules over a triangulation.

Integrands are vectorized callables ``f(x, y)`` accepting coordinate arrays
of equal shape. Integrands that are singular on a measure-zero set (such as
the line x = y) may evaluate non-finite at a sampled point; such points are
resampled once from a derived stream before the evaluation is abandoned.
"""

from typing import Callable, TypeAlias

import numpy as np
import structlog

from randfem.engine.mesh.triangle_mesh import TriangleMesh
from randfem.engine.sampling.draws import DrawKind, QuadratureDraw, resample_point
from randfem.engine.utils.errors import ParameterError, SingularIntegrandError

logger = structlog.get_logger(__name__)

Integrand: TypeAlias = Callable[[np.ndarray, np.ndarray], np.ndarray | float]


def evaluate(f: Integrand, points: np.ndarray) -> np.ndarray:
    """Evaluate f at points (..., 2); constant integrands are broadcast."""
    pts = np.asarray(points, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = f(pts[..., 0], pts[..., 1])
    return np.array(np.broadcast_to(values, pts.shape[:-1]), dtype=float)


def _check_draw(mesh: TriangleMesh, draw: QuadratureDraw, kind: DrawKind) -> None:
    if draw.kind is not kind:
        raise ParameterError(f"expected a {kind.value} draw, got {draw.kind.value}")
    if draw.points.shape[0] != mesh.num_triangles:
        raise ParameterError(
            f"draw covers {draw.points.shape[0]} triangles, "
            f"mesh has {mesh.num_triangles}"
        )


def _resample_once(
    f: Integrand,
    mesh: TriangleMesh,
    draw: QuadratureDraw,
    t: int,
    local_vertex: int,
) -> tuple[float, np.ndarray]:
    reference, point = resample_point(mesh, draw, t, local_vertex)
    value = float(evaluate(f, point))
    if not np.isfinite(value):
        logger.error(
            "Integrand non-finite after resample",
            triangle=t,
            local_vertex=local_vertex,
            seed=draw.seed,
            stream_id=draw.stream_id,
        )
        raise SingularIntegrandError(
            f"integrand is non-finite at triangle {t} after one resample "
            f"(seed {draw.seed}, stream {draw.stream_id})",
            triangle=t,
        )
    logger.warning(
        "Resampled singular draw point",
        triangle=t,
        local_vertex=local_vertex,
        seed=draw.seed,
    )
    return value, reference


def evaluate_uniform_draw(
    f: Integrand, mesh: TriangleMesh, draw: QuadratureDraw
) -> tuple[np.ndarray, np.ndarray]:
    """
    Values f(Z_T) of a uniform draw.

    Returns:
        (values (T,), reference coordinates (T, 2)) where the reference
        coordinates reflect any resampled point.
    """
    _check_draw(mesh, draw, DrawKind.UNIFORM)
    values = evaluate(f, draw.points)
    reference = draw.reference
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        reference = reference.copy()
        for t in bad:
            values[t], reference[t] = _resample_once(f, mesh, draw, int(t), -1)
    return values, reference


def evaluate_hat_draw(
    f: Integrand, mesh: TriangleMesh, draw: QuadratureDraw
) -> np.ndarray:
    """Values f(Y_{T,j}) of a hat draw, shape (T, 3), zero at unsampled pairs."""
    _check_draw(mesh, draw, DrawKind.HAT)
    values = np.zeros(draw.mask.shape)
    values[draw.mask] = evaluate(f, draw.points[draw.mask])
    bad_t, bad_k = np.nonzero(draw.mask & ~np.isfinite(values))
    for t, k in zip(bad_t, bad_k):
        values[t, k], _ = _resample_once(f, mesh, draw, int(t), int(k))
    return values


def q_mc(v: Integrand, mesh: TriangleMesh, draw: QuadratureDraw) -> float:
    """Stratified Monte Carlo estimate sum_T |T| v(Z_T)."""
    values, _ = evaluate_uniform_draw(v, mesh, draw)
    return float((mesh.areas * values).sum())


def barycentric_quadrature(v: Integrand, mesh: TriangleMesh) -> float:
    """One-point Gauss rule sum_T |T| v(z_T); non-finite values propagate."""
    values = evaluate(v, mesh.barycenters())
    non_finite = int((~np.isfinite(values)).sum())
    if non_finite:
        logger.warning("Non-finite barycentric evaluation", count=non_finite)
    return float((mesh.areas * values).sum())
