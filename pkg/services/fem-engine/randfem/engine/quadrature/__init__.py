"""Randomized, barycentric and oracle quadrature over a triangulation."""

from randfem.engine.quadrature.gauss_oracle import (
    gauss_oracle,
    gauss_oracle_load,
    gauss_oracle_rule,
)
from randfem.engine.quadrature.rules import (
    Integrand,
    barycentric_quadrature,
    evaluate,
    evaluate_hat_draw,
    evaluate_uniform_draw,
    q_mc,
)

__all__ = [
    "Integrand",
    "barycentric_quadrature",
    "evaluate",
    "evaluate_hat_draw",
    "evaluate_uniform_draw",
    "gauss_oracle",
    "gauss_oracle_load",
    "gauss_oracle_rule",
    "q_mc",
]
