"""
End-to-end acceptance studies for randfem.

These run the convergence, quadrature-rate and baseline experiments at desk
scale and check the fitted orders and magnitudes. They take minutes, so they
are marked ``slow`` and skipped by the default ``-m "not slow"`` selection:

    pytest -m slow services/fem-engine/tests
"""

import math

import numpy as np
import pytest
from scipy import stats

from randfem.engine.assembly import (
    FemCoefficients,
    assemble_load_is,
    assemble_load_mc,
)
from randfem.engine.experiments import (
    EXPECTED_H1_MAGNITUDES,
    ErrorAccumulator,
    StudyConfig,
    f1,
    f2,
    fit_convergence_order,
    fit_records,
    get_forcing,
    h1_seminorm,
    reference_integral,
    run_convergence_study,
    run_table1,
)
from randfem.engine.mesh import build_structured_mesh
from randfem.engine.quadrature import gauss_oracle_load, q_mc
from randfem.engine.sampling import (
    RngStream,
    StreamPurpose,
    draw_hat,
    draw_uniform,
    hat_rejection_sample,
    sample_hat_reference,
)
from randfem.engine.solver import RealizationContext, run_realization

pytestmark = [pytest.mark.slow, pytest.mark.integration]

SEED = 20240501
LEVELS = (2, 6)
REPLICATIONS = 200


def _study(estimator, forcing, timing=False):
    config = StudyConfig(
        estimator=estimator,
        forcing=forcing,
        n_min=LEVELS[0],
        n_max=LEVELS[1],
        replications=REPLICATIONS,
        seed=SEED,
        threads=4,
        timing=timing,
    )
    return run_convergence_study(config)


@pytest.fixture(scope="module")
def mc_f2():
    return _study("mc", "f2", timing=True)


@pytest.fixture(scope="module")
def is_f2():
    return _study("is", "f2", timing=True)


class TestConvergenceOrders:
    """Fitted orders of the randomized solutions."""

    def test_monte_carlo_smooth_forcing(self, mc_f2):
        assert 0.75 <= fit_records(mc_f2, "h1") <= 1.25

    def test_monte_carlo_singular_forcing(self):
        records = _study("mc", "f1")
        assert 0.6 <= fit_records(records, "h1") <= 1.1

    def test_importance_sampling_smooth_forcing(self, is_f2):
        assert 1.7 <= fit_records(is_f2, "l2") <= 2.3
        assert fit_records(is_f2, "h1") >= 1.5

    def test_importance_sampling_beats_monte_carlo(self, mc_f2, is_f2):
        for mc, is_ in zip(mc_f2, is_f2):
            if mc.n >= 3:
                assert is_.err_h1 < mc.err_h1, f"n={mc.n}"

    def test_estimator_means_agree(self):
        """The MC and IS sample means differ by at most 3 combined standard errors."""
        mesh = build_structured_mesh(4)
        context = RealizationContext.build(mesh)
        replications = 2000
        accumulators = {}
        for estimator in ("mc", "is"):
            accumulator = ErrorAccumulator(context)
            for r in range(replications):
                result = run_realization(
                    mesh, None, f2, estimator, seed=SEED, replication=r, context=context
                )
                accumulator.add(result.coefficients)
            accumulators[estimator] = accumulator
        mc, is_ = accumulators["mc"], accumulators["is"]
        difference = FemCoefficients(mc.mean - is_.mean)
        combined = math.sqrt(
            (mc.error("h1") ** 2 + is_.error("h1") ** 2) / replications
        )
        assert h1_seminorm(context.stiffness, difference) <= 3.0 * combined

    def test_importance_sampling_cost(self, mc_f2, is_f2):
        """Rejection sampling costs a bounded factor over uniform points."""
        for mc, is_ in zip(mc_f2, is_f2):
            assert is_.time_load_s <= 10.0 * mc.time_load_s + 1e-3, f"n={mc.n}"


class TestQuadratureRates:
    """Root-mean-square error of the stratified rule against closed forms."""

    @staticmethod
    def _rms_slope(integrand, exact, draws=2000):
        hs, errors = [], []
        for n in range(LEVELS[0], LEVELS[1] + 1):
            mesh = build_structured_mesh(n)
            estimates = np.array(
                [
                    q_mc(integrand, mesh, draw_uniform(mesh, RngStream(SEED, r)))
                    for r in range(draws)
                ]
            )
            hs.append(mesh.grid_spacing)
            errors.append(math.sqrt(np.mean((estimates - exact) ** 2)))
        return fit_convergence_order(hs, errors)

    def test_smooth_integrand(self):
        exact = reference_integral(get_forcing("f2"))
        assert self._rms_slope(f2, exact) >= 1.8

    def test_singular_integrand(self):
        exact = reference_integral(get_forcing("f1"))
        assert self._rms_slope(f1, exact) >= 0.9


class TestUnbiasedLoads:
    """Sample means of the load estimators against the Gauss oracle."""

    NODES = [0, 10, 24, 38, 48]
    DRAWS = 10_000

    @pytest.mark.parametrize(
        "name, integrand",
        [
            ("one", lambda x, y: np.ones_like(x)),
            ("x", lambda x, y: np.asarray(x, dtype=float)),
            ("f2", f2),
        ],
    )
    def test_monte_carlo_and_importance_sampling(self, name, integrand):
        mesh = build_structured_mesh(3)
        expected = gauss_oracle_load(integrand, mesh, 6)[self.NODES]
        for assemble, sampler, purpose in (
            (assemble_load_mc, draw_uniform, StreamPurpose.LOAD),
            (assemble_load_is, draw_hat, StreamPurpose.HAT),
        ):
            loads = np.array(
                [
                    assemble(
                        mesh,
                        integrand,
                        sampler(mesh, RngStream.derive(SEED, r, purpose)),
                    ).values[self.NODES]
                    for r in range(self.DRAWS)
                ]
            )
            standard_error = loads.std(axis=0, ddof=1) / math.sqrt(self.DRAWS)
            tolerance = np.maximum(4.0 * standard_error, 1e-12)
            assert (np.abs(loads.mean(axis=0) - expected) <= tolerance).all(), (
                f"{name} via {assemble.__name__}"
            )


class TestSamplerStatistics:
    """Rejection sampler statistics at 10^5 proposals."""

    def test_acceptance_rate(self):
        count = 35_000
        _, proposals = hat_rejection_sample(
            np.arange(count) % 3, RngStream(SEED, 1).generator()
        )
        assert proposals >= 100_000
        assert count / proposals == pytest.approx(1.0 / 3.0, abs=0.02)

    def test_accepted_mean(self):
        """The first coordinate is Beta(1, 3) under 6 (1 - alpha - beta)."""
        size = 40_000
        points = sample_hat_reference(0, RngStream(SEED, 2).generator(), size=size)
        standard_error = math.sqrt(3.0 / 80.0) / math.sqrt(size)
        assert np.abs(points.mean(axis=0) - 0.25).max() <= 4.0 * standard_error

    def test_chi_square_on_subtriangles(self):
        """Midpoint-subtriangle masses of 6 alpha are 1/2, 1/8, 1/8 and 1/4."""
        points = sample_hat_reference(1, RngStream(SEED, 3).generator(), size=60_000)
        a, b = points[:, 0], points[:, 1]
        near_a = a >= 0.5
        near_b = b >= 0.5
        near_origin = (a + b <= 0.5) & ~near_a & ~near_b
        center = ~(near_a | near_b | near_origin)
        observed = [near_a.sum(), near_b.sum(), near_origin.sum(), center.sum()]
        expected = len(points) * np.array([0.5, 0.125, 0.125, 0.25])
        _, p_value = stats.chisquare(observed, expected)
        assert p_value > 1e-3


class TestBarycentricBaseline:
    """Magnitudes of the barycentric-rule errors for the shifted forcing."""

    def test_magnitudes_and_ratios(self, tmp_path):
        records = run_table1(range(3, 9), seed=SEED, threads=4, cache_dir=tmp_path)
        errors = [record.err_h1 for record in records]
        for record in records:
            expected = EXPECTED_H1_MAGNITUDES[record.n]
            assert expected / 10.0 <= record.err_h1 <= expected * 10.0, f"n={record.n}"
        ratios = np.array(errors[:-1]) / np.array(errors[1:])
        assert ((ratios >= 1.5) & (ratios <= 2.5)).all(), ratios
