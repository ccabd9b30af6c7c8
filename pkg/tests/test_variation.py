"""
FrozenTime - Variation Rate Tests

Snapshot differences, N-width averages and the c coefficients, including
the inequalities that tie them to frozen-time stability margins.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))


WIDTH_CASES = [
    {"values": [0.0, 0.0, 3.0, 0.0], "N": 4, "expected": 0.75},
    {"values": [0.0, 0.0, 3.0, 0.0], "N": 1, "expected": 3.0},
    {"values": [1.0, 1.0, 1.0, 1.0], "N": 2, "expected": 1.0},
    {"values": [2.0], "N": 8, "expected": 0.25},
]


class TestVariationTrace:
    """Snapshot-difference norms."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.exceptions import InputError
        from src.operators import DeadZoneComposite, MatrixSchedule, MemorylessMatrix, OneStepLinear, TimeInvariantWrapper
        from src.variation import VariationTrace, snapshot_delta_norm, variation_trace
        self.Schedule = MatrixSchedule
        self.Memoryless = MemorylessMatrix
        self.OneStep = OneStepLinear
        self.DeadZone = DeadZoneComposite
        self.Frozen = TimeInvariantWrapper
        self.Trace = VariationTrace
        self.delta = snapshot_delta_norm
        self.trace = variation_trace
        self.InputError = InputError

    def test_single_memoryless_jump(self):
        H = self.Memoryless(self.Schedule([np.eye(2), 0.5 * np.eye(2)]))
        trace = self.trace(H, range(0, 2), 1.2)
        assert np.allclose(trace.values, [0.0, 0.5])
        assert self.delta(H, 1, 1.2).upper == pytest.approx(0.5)

    def test_lagged_difference_is_weighted(self):
        a = self.Schedule([[[0.0]], [[0.0]]])
        b = self.Schedule([[[0.0]], [[1.0]]])
        trace = self.trace(self.OneStep(a, b), range(0, 2), 1.5)
        assert trace.values[1] == pytest.approx(1.5)

    def test_time_invariant_has_no_variation(self):
        rng = np.random.default_rng(0)
        inner = self.Memoryless(self.Schedule(rng.normal(size=(10, 2, 2))))
        trace = self.trace(self.Frozen(inner, 3), range(0, 10), 1.2)
        assert np.array_equal(trace.values, np.zeros(10))

    def test_dead_zone_estimate_brackets(self):
        rng = np.random.default_rng(1)
        inner = self.OneStep(self.Schedule(rng.normal(size=(6, 2, 2))), self.Schedule(rng.normal(size=(6, 2, 2))))
        H = self.DeadZone(inner, width=0.1)
        for t in range(1, 6):
            estimate = self.delta(H, t, 1.2, rng=np.random.default_rng(t))
            assert 0.0 <= estimate.lower <= estimate.upper
            assert estimate.upper == pytest.approx(self.delta(inner, t, 1.2).upper)

    def test_frame_columns(self):
        frame = self.Trace(1.2, 3, [0.0, 0.25]).to_frame()
        assert list(frame.columns) == ["t", "value"]
        assert list(frame["t"]) == [3, 4]

    def test_trace_validation(self):
        with pytest.raises(self.InputError):
            self.Trace(1.2, 0, [0.1, -0.1])
        with pytest.raises(self.InputError):
            self.Trace(1.2, 0, [0.1, float("nan")])


class TestRates:
    """N-width averages and the c coefficients."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.exceptions import DomainError
        from src.variation import (
            VariationTrace,
            c_coeff_trace,
            c_sigma_N,
            c_sigma_sigma0,
            n_width_average,
            prior_variation_rate,
            sup_n_width,
        )
        self.Trace = VariationTrace
        self.c_trace = c_coeff_trace
        self.c_N = c_sigma_N
        self.c = c_sigma_sigma0
        self.average = n_width_average
        self.prior = prior_variation_rate
        self.sup = sup_n_width
        self.DomainError = DomainError

    @pytest.mark.parametrize("case", WIDTH_CASES)
    def test_sup_n_width(self, case):
        trace = self.Trace(1.2, 0, case["values"])
        value = self.sup(trace, case["N"])
        assert value == pytest.approx(case["expected"]), (
            f"values={case['values']} N={case['N']}: got {value}, expected {case['expected']}"
        )

    def test_average_at_time(self):
        trace = self.Trace(1.2, 0, [0.0, 0.0, 3.0, 0.0])
        assert self.average(trace, 4, 3) == pytest.approx(0.75)
        assert self.average(trace, 1, 3) == 0.0

    def test_width_must_be_positive(self):
        with pytest.raises(self.DomainError):
            self.sup(self.Trace(1.2, 0, [1.0]), 0)

    def test_c_sigma_N_values(self):
        assert self.c_N(0.0913, 1.2, 1.44, 1) == pytest.approx(0.18420, abs=2e-4)
        ratio = self.c_N(0.0913, 1.2, 1.44, 2) / self.c_N(0.0913, 1.2, 1.44, 1)
        assert ratio == pytest.approx(1.2, rel=1e-12)

    def test_c_sigma_N_needs_ordered_weights(self):
        with pytest.raises(self.DomainError):
            self.c_N(0.1, 1.44, 1.2, 1)

    def test_single_jump_coefficient(self):
        trace = self.Trace(1.2, 0, [0.0, 0.0, 0.4, 0.0, 0.0])
        assert self.c(trace, 1.44, 2) == pytest.approx((1.2 / 1.44) * 0.4)
        assert self.c(trace, 1.44, 1) == 0.0
        assert self.c(trace, 1.44, 4) == pytest.approx((1.2 / 1.44) ** 3 * 0.4)

    def test_prior_rate(self):
        trace = self.Trace(1.5, 0, [0.1, 0.4, 0.2])
        assert self.prior(trace) == pytest.approx(0.6)

    def test_average_rate_dominates_coefficient(self):
        """c_{sigma,sigma0}(G, t) <= c_{sigma,N}(d-bar_{sigma,N}) for every t."""
        rng = np.random.default_rng(2)
        for n in range(1000):
            sigma = rng.uniform(1.0, 1.5)
            sigma0 = sigma * rng.uniform(1.05, 1.6)
            values = rng.exponential(0.1, size=30) * (rng.uniform(size=30) < rng.uniform(0.1, 1.0))
            trace = self.Trace(sigma, 0, values)
            coefficients = self.c_trace(trace, sigma0)
            for N in (1, 2, 4, 8):
                bound = self.c_N(self.sup(trace, N), sigma, sigma0, N)
                worst = float(np.max(coefficients))
                assert worst <= bound * (1.0 + 1e-12) + 1e-15, (
                    f"trace {n}, N={N}: c={worst} exceeds {bound}\n"
                    f"  sigma={sigma} sigma0={sigma0}"
                )


class TestVariationInequalities:
    """Bounds that connect variation rates to loop behavior."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.operators import (
            Composition,
            MatrixSchedule,
            MemorylessMatrix,
            OneStepLinear,
            induced_norm_frozen,
            nabla_extension_apply,
        )
        from src.signals import Signal, WeightSpec, weighted_norm
        from src.variation import c_sigma_sigma0, product_variation_bound, sup_n_width, variation_trace
        self.Schedule = MatrixSchedule
        self.Memoryless = MemorylessMatrix
        self.OneStep = OneStepLinear
        self.Composition = Composition
        self.induced = induced_norm_frozen
        self.nabla = nabla_extension_apply
        self.Signal = Signal
        self.WeightSpec = WeightSpec
        self.weighted_norm = weighted_norm
        self.c = c_sigma_sigma0
        self.product_bound = product_variation_bound
        self.sup = sup_n_width
        self.trace = variation_trace

    def test_product_with_time_invariant_factor(self):
        """d-bar_{sigma,N}(GK) <= ||K||_{sigma inf} d-bar_{sigma,N}(G)."""
        rng = np.random.default_rng(3)
        sigma = 1.2
        for n in range(100):
            G = self.Memoryless(self.Schedule(rng.normal(size=(20, 2, 2))))
            K = self.OneStep(self.Schedule.constant(rng.normal(size=(2, 2))), self.Schedule.constant(rng.normal(size=(2, 2))))
            K_norm = self.induced(K, 0, sigma).upper
            for N in (1, 3):
                measured = self.sup(self.trace(self.Composition(G, K), range(0, 20), sigma), N)
                bound = self.product_bound(self.sup(self.trace(G, range(0, 20), sigma), N), K_norm)
                assert measured <= bound * (1.0 + 1e-12) + 1e-12, (
                    f"pair {n}, N={N}: d(GK)={measured} exceeds ||K|| d(G)={bound}"
                )

    def test_loop_applied_to_nabla_extension(self):
        """|h_t (nabla G_t u)| <= ||h_t||_{sigma0} c_{sigma,sigma0}(G, t) ||u||_{sigma, t}."""
        rng = np.random.default_rng(4)
        sigma, sigma0 = 1.2, 1.44
        weight = self.WeightSpec(sigma=sigma, vector_norm="max")
        for n in range(200):
            T = 15
            G = self.OneStep(self.Schedule(0.5 * rng.normal(size=(T, 2, 2))), self.Schedule(0.5 * rng.normal(size=(T, 2, 2))))
            H = self.OneStep(self.Schedule(rng.normal(size=(T, 2, 2))), self.Schedule(rng.normal(size=(T, 2, 2))))
            u = self.Signal(0, rng.normal(size=(T, 2)))
            t = int(rng.integers(0, T))
            w = self.Signal(0, np.stack([self.nabla(G, t, u, s) for s in range(0, t + 1)]))

            lhs = float(np.abs(H.snapshot(t, w)).max())
            rhs = (
                self.induced(H, t, sigma0).upper
                * self.c(self.trace(G, range(0, T), sigma), sigma0, t)
                * self.weighted_norm(u, weight, None, t)
            )
            assert lhs <= rhs * (1.0 + 1e-12) + 1e-12, f"system {n}, t={t}: {lhs} > {rhs}"


if __name__ == "__main__":
    pytest.main([__file__, "-v", "--tb=short"])
