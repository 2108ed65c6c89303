"""Seeded random streams, simplex samplers and full-mesh quadrature draws."""

from randfem.engine.sampling.draws import (
    DrawKind,
    QuadratureDraw,
    draw_hat,
    draw_uniform,
    resample_point,
)
from randfem.engine.sampling.samplers import (
    accept_hat_proposal,
    fold_to_simplex,
    hat_density_reference,
    hat_rejection_sample,
    sample_hat_reference,
    sample_uniform_simplex,
    sample_uniform_triangle,
    sample_Y_Tj,
)
from randfem.engine.sampling.streams import (
    RngStream,
    StreamPurpose,
    derive_stream_id,
    resample_stream_id,
)

__all__ = [
    "DrawKind",
    "QuadratureDraw",
    "RngStream",
    "StreamPurpose",
    "accept_hat_proposal",
    "derive_stream_id",
    "draw_hat",
    "draw_uniform",
    "fold_to_simplex",
    "hat_density_reference",
    "hat_rejection_sample",
    "resample_point",
    "resample_stream_id",
    "sample_Y_Tj",
    "sample_hat_reference",
    "sample_uniform_simplex",
    "sample_uniform_triangle",
]
