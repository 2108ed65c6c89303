# randfem - Quadrature Draws
# Full-mesh families of sampled points for the randomized estimators

"""
Quadrature draws.

A uniform draw holds one point Z_T per triangle. A hat draw holds one point
Y_{T,j} per (triangle, local vertex) pair whose vertex is an interior node,
drawn with density 3 |T|^-1 phi_j on T. Each draw keeps its reference
coordinates, because the barycentric coordinates of a sampled point are the
values of the local hat functions there.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import structlog

from randfem.engine.mesh.triangle_mesh import Point2, TriangleMesh
from randfem.engine.sampling.samplers import (
    hat_rejection_sample,
    sample_uniform_simplex,
)
from randfem.engine.sampling.streams import RngStream, resample_stream_id
from randfem.engine.utils.errors import ParameterError

logger = structlog.get_logger(__name__)


class DrawKind(str, Enum):
    """Layout of a :class:`QuadratureDraw`."""

    UNIFORM = "uniform-per-triangle"
    HAT = "hat-per-triangle-vertex"


@dataclass(frozen=True, eq=False)
class QuadratureDraw:
    """
    Sampled points of one estimator evaluation.

    Attributes:
        kind: Uniform (one point per triangle) or hat (one per triangle vertex).
        reference: Reference coordinates in S2, (T, 2) or (T, 3, 2).
        points: Physical points, same shape as ``reference``; NaN where unused.
        mask: (T, 3) flags of sampled (triangle, local vertex) pairs for hat
            draws, None for uniform draws.
        seed: Seed the points were drawn with.
        stream_id: Stream id the points were drawn from.
        proposals: Rejection proposals consumed (hat draws), else the point count.
    """

    kind: DrawKind
    reference: np.ndarray
    points: np.ndarray
    mask: np.ndarray | None
    seed: int
    stream_id: int
    proposals: int

    @property
    def stream(self) -> RngStream:
        return RngStream(self.seed, self.stream_id)

    @property
    def acceptance_rate(self) -> float:
        sampled = self.points.shape[0] if self.mask is None else int(self.mask.sum())
        return sampled / self.proposals if self.proposals else 1.0

    def point(self, t: int, local_vertex: int | None = None) -> Point2:
        """The sampled point of triangle t (and local vertex for hat draws)."""
        if self.kind is DrawKind.UNIFORM:
            x, y = self.points[t]
        else:
            if local_vertex is None or not self.mask[t, local_vertex]:
                raise ParameterError(
                    f"no hat point for triangle {t}, vertex {local_vertex}"
                )
            x, y = self.points[t, local_vertex]
        return Point2(float(x), float(y))


def draw_uniform(mesh: TriangleMesh, stream: RngStream) -> QuadratureDraw:
    """One uniform point per triangle from a single stream."""
    rng = stream.generator()
    reference = sample_uniform_simplex(rng, mesh.num_triangles)
    points = mesh.map_reference_points(np.arange(mesh.num_triangles), reference)
    return QuadratureDraw(
        kind=DrawKind.UNIFORM,
        reference=reference,
        points=points,
        mask=None,
        seed=stream.seed,
        stream_id=stream.stream_id,
        proposals=mesh.num_triangles,
    )


def draw_hat(mesh: TriangleMesh, stream: RngStream) -> QuadratureDraw:
    """One hat-density point per (triangle, interior local vertex) pair."""
    rng = stream.generator()
    mask = mesh.interior_mask()
    tri_ids, local = np.nonzero(mask)
    samples, proposals = hat_rejection_sample(local, rng)

    reference = np.full((mesh.num_triangles, 3, 2), np.nan)
    points = np.full((mesh.num_triangles, 3, 2), np.nan)
    reference[tri_ids, local] = samples
    points[tri_ids, local] = mesh.map_reference_points(tri_ids, samples)
    logger.debug(
        "Drew hat points",
        pairs=int(tri_ids.size),
        proposals=proposals,
        acceptance=tri_ids.size / proposals if proposals else 1.0,
    )
    return QuadratureDraw(
        kind=DrawKind.HAT,
        reference=reference,
        points=points,
        mask=mask,
        seed=stream.seed,
        stream_id=stream.stream_id,
        proposals=proposals,
    )


def resample_point(
    mesh: TriangleMesh, draw: QuadratureDraw, t: int, local_vertex: int = -1
) -> tuple[np.ndarray, np.ndarray]:
    """
    Fresh replacement for one point of ``draw`` from its own derived stream.

    Returns:
        (reference coordinates (2,), physical point (2,))
    """
    stream = RngStream(draw.seed, resample_stream_id(draw.stream_id, t, local_vertex))
    rng = stream.generator()
    if draw.kind is DrawKind.UNIFORM:
        reference = sample_uniform_simplex(rng)
    else:
        reference = hat_rejection_sample(np.array([local_vertex]), rng)[0][0]
    point = mesh.map_reference_points(np.array([t]), reference[None, :])[0]
    return reference, point
