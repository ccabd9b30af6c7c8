"""
FrozenTime - Simulator Tests

Closed-loop simulation, certificate inputs collected from scenarios, the
seeded example generators, scenario files, and measured gains checked
against certified bounds.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))


def scalar_scenario(g, values, name="scalar", **kwargs):
    """x(t) = u(t) + g x(t-1) with an explicit scalar input."""
    from src.operators import MatrixSchedule, MemorylessMatrix
    from src.simulator import InputSpec, Scenario
    return Scenario(
        name=name,
        F=MemorylessMatrix(MatrixSchedule.constant([[1.0]])),
        G=MemorylessMatrix(MatrixSchedule.constant([[g]])),
        input=InputSpec(kind="explicit", dimension=1, values=[[float(v)] for v in values]),
        horizon=range(len(values)),
        **kwargs,
    )


class TestSimulate:
    """Forward simulation."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.operators import DeadZoneComposite, MatrixSchedule, MemorylessMatrix, OneStepLinear
        from src.simulator import InputSpec, Scenario, simulate, verify_gain_bound
        self.Schedule = MatrixSchedule
        self.Memoryless = MemorylessMatrix
        self.OneStep = OneStepLinear
        self.DeadZone = DeadZoneComposite
        self.InputSpec = InputSpec
        self.Scenario = Scenario
        self.simulate = simulate
        self.verify = verify_gain_bound

    def test_open_loop_copies_input(self):
        rng = np.random.default_rng(0)
        values = rng.normal(size=(25, 2))
        s = self.Scenario(
            name="open_loop",
            F=self.Memoryless(self.Schedule.constant(np.eye(2))),
            G=self.Memoryless(self.Schedule.constant(np.zeros((2, 2)))),
            input=self.InputSpec(kind="explicit", dimension=2, values=values.tolist()),
            horizon=range(25),
        )
        result = self.simulate(s)
        assert np.array_equal(result.x.values, values)
        check = self.verify(result, 1.0)
        assert check.ok
        assert check.worst_ratio == pytest.approx(1.0)

    def test_geometric_loop(self):
        result = self.simulate(scalar_scenario(0.5, np.ones(40)))
        expected = 2.0 * (1.0 - 0.5 ** np.arange(1, 41))
        assert np.allclose(result.x.values[:, 0], expected, rtol=1e-12)
        assert result.x.values[-1, 0] == pytest.approx(1.0 / (1.0 - 0.5), rel=1e-9)

    def test_causality(self):
        rng = np.random.default_rng(1)
        first = rng.normal(size=30)
        second = first.copy()
        second[15:] = rng.normal(size=15)
        x1 = self.simulate(scalar_scenario(-0.7, first)).x.values
        x2 = self.simulate(scalar_scenario(-0.7, second)).x.values
        assert np.array_equal(x1[:15], x2[:15])
        assert not np.array_equal(x1[15:], x2[15:])

    def test_linear_loop_superposes(self):
        rng = np.random.default_rng(2)
        a = self.Schedule(0.3 * rng.normal(size=(20, 2, 2)))
        b = self.Schedule(0.3 * rng.normal(size=(20, 2, 2)))
        u1, u2 = rng.normal(size=(20, 2)), rng.normal(size=(20, 2))

        def run(G, values):
            s = self.Scenario(
                name="superposition",
                F=self.Memoryless(self.Schedule.constant(np.eye(2))),
                G=G,
                input=self.InputSpec(kind="explicit", dimension=2, values=values.tolist()),
                horizon=range(20),
            )
            return self.simulate(s).x.values

        linear = self.OneStep(a, b)
        assert np.allclose(run(linear, u1 + u2), run(linear, u1) + run(linear, u2), atol=1e-12)
        clipped = self.DeadZone(linear, width=0.3)
        assert not np.allclose(run(clipped, 3 * u1), 3 * run(clipped, u1))

    def test_divergence_is_flagged(self):
        s = self.Scenario(
            name="divergent",
            F=self.Memoryless(self.Schedule.constant([[1.0]])),
            G=self.Memoryless(self.Schedule.constant([[1.5]])),
            input=self.InputSpec(kind="exp_cos", dimension=1, period=1000.0),
            horizon=range(200),
        )
        result = self.simulate(s)
        assert result.diverged
        assert 50 < result.diverged_at < 100
        assert result.x.length == result.diverged_at
        assert result.summary()["diverged"] is True
        check = self.verify(result, 1e6, at=range(200))
        assert not check.ok and check.worst_ratio == math.inf

    def test_unbounded_claim_always_passes(self):
        result = self.simulate(scalar_scenario(0.5, np.ones(10)))
        assert self.verify(result, math.inf).ok

    def test_zero_input_times_are_skipped(self):
        result = self.simulate(scalar_scenario(0.5, [0.0, 0.0, 1.0, 1.0]))
        check = self.verify(result, 2.0)
        assert check.skipped == [0, 1]
        assert check.checked == 2

    def test_result_frames(self):
        result = self.simulate(scalar_scenario(0.5, np.ones(5)))
        frames = result.frames()
        assert set(frames) == {"x", "u", "gain"}
        assert list(frames["gain"].columns) == ["t", "x_sup", "u_sup", "gain"]


class TestCertificateInputsFromScenarios:
    """Per-time traces collected from scenarios."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.certificates import check_corollary2, check_theorem1, state_envelope
        from src.operators import MatrixSchedule, MemorylessMatrix, TimeInvariantWrapper
        from src.simulator import (
            InputSpec,
            Scenario,
            collect_certificate_inputs,
            random_stable_scenario,
            simulate,
            state_norm_trace,
            verify_gain_bound,
        )
        self.theorem1 = check_theorem1
        self.corollary2 = check_corollary2
        self.envelope = state_envelope
        self.Schedule = MatrixSchedule
        self.Memoryless = MemorylessMatrix
        self.Frozen = TimeInvariantWrapper
        self.InputSpec = InputSpec
        self.Scenario = Scenario
        self.collect = collect_certificate_inputs
        self.random_scenario = random_stable_scenario
        self.simulate = simulate
        self.state_norms = state_norm_trace
        self.verify = verify_gain_bound

    def test_scalar_traces(self):
        inputs = self.collect(scalar_scenario(0.3, np.ones(5), sigma=1.2, sigma0=1.4))
        assert np.allclose(inputs.l_norm, 0.42 / 0.58, atol=1e-8)
        assert np.allclose(inputs.s_norm, 1.0 / 0.7, atol=1e-8)
        assert np.allclose(inputs.g_norm, 0.3)
        assert inputs.F_norm == 1.0
        assert inputs.all_stabilizing
        assert np.array_equal(inputs.variation, np.zeros(5))

    def test_time_invariant_loop_has_no_coefficient(self):
        rng = np.random.default_rng(3)
        inner = self.Memoryless(self.Schedule(0.2 * rng.normal(size=(10, 2, 2))))
        s = self.Scenario(
            name="frozen",
            F=self.Memoryless(self.Schedule.constant(np.eye(2))),
            G=self.Frozen(inner, 4),
            input=self.InputSpec(kind="random", dimension=2),
            horizon=range(10),
        )
        inputs = self.collect(s)
        assert np.array_equal(inputs.c_coeff, np.zeros(10))
        assert np.allclose(inputs.g_norm, inputs.g_norm[0])

    def test_envelope_dominates_measured_norms(self):
        for seed in range(20):
            s = self.random_scenario(seed, horizon=40)
            inputs = self.collect(s)
            result = self.simulate(s)
            measured = self.state_norms(result.x, s.sigma)
            envelope = self.envelope(inputs, result.u_sup)
            assert np.all(measured <= envelope * (1.0 + 1e-9) + 1e-12), f"seed {seed}: envelope below the state"

    def test_window_gain_is_sound_on_random_loops(self):
        for seed in range(50):
            s = self.random_scenario(seed)
            inputs = self.collect(s)
            report = self.theorem1(inputs, max_gap=20)
            assert report.holds, f"seed {seed}: theorem1 fails on a contracting loop"

            result = self.simulate(s)
            assert not result.diverged
            norms = self.state_norms(result.x, s.sigma)
            beta = report.constants["beta"]
            times = report.time_sequence.times
            for t_prev, t_next in zip(times, times[1:]):
                before = norms[t_prev] if t_prev >= 0 else 0.0
                bound = s.rho ** (t_next - t_prev) * before + beta * result.u_sup[t_next]
                assert norms[t_next] <= bound * (1.0 + 1e-9) + 1e-12, (
                    f"seed {seed}: window ({t_prev}, {t_next}]\n"
                    f"  ||x||={norms[t_next]}\n"
                    f"  bound={bound}"
                )

            check = self.verify(result, report.gain_bound, at=report.time_sequence.boundaries)
            assert check.ok, f"seed {seed}: gain {check.worst_ratio} at t={check.worst_t} exceeds {report.gain_bound}"

    def test_all_time_gain_is_sound_on_random_loops(self):
        for seed in range(50):
            s = self.random_scenario(seed, horizon=60)
            inputs = self.collect(s)
            report = self.corollary2(inputs, max_gap=20)
            assert report.holds, f"seed {seed}: corollary2 fails at {report.failure_locations[:5]}"
            assert report.gain_claimed

            check = self.verify(self.simulate(s), report.gain_bound)
            assert check.ok, f"seed {seed}: gain {check.worst_ratio} at t={check.worst_t} exceeds {report.gain_bound}"


DIVERGENT_LOOPS = {
    "constant": [[[1.5]]] * 150,
    "late_switch": [[[0.3]]] * 30 + [[[1.6]]] * 120,
}


class TestLoopDecomposition:
    """x(t) = (s_t F u)(t) + (l_t nabla G_t T x)(t) on simulated runs."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.operators import MatrixSchedule, OneStepLinear, apply, apply_taps, frozen_closed_loop, nabla_extension_apply
        from src.signals import Signal, shift
        from src.simulator import InputSpec, Scenario, random_stable_scenario, simulate
        self.Schedule = MatrixSchedule
        self.OneStep = OneStepLinear
        self.apply = apply
        self.apply_taps = apply_taps
        self.frozen = frozen_closed_loop
        self.nabla = nabla_extension_apply
        self.Signal = Signal
        self.shift = shift
        self.InputSpec = InputSpec
        self.Scenario = Scenario
        self.random_scenario = random_stable_scenario
        self.simulate = simulate

    def _check(self, s, times):
        result = self.simulate(s)
        assert not result.diverged
        fu = self.apply(s.F, result.u, s.horizon)
        delayed = self.shift(result.x, 1)
        for t in times:
            loop = self.frozen(s.G, t)
            count = t - s.horizon.start + 1
            w = self.Signal(s.horizon.start, np.stack([self.nabla(s.G, t, delayed, r) for r in range(s.horizon.start, t + 1)]))
            predicted = (
                self.apply_taps(loop.sensitivity.taps(count), fu, t)
                + self.apply_taps(loop.loop_gain.taps(count), w, t)
            )
            np.testing.assert_allclose(predicted, result.x.at(t), rtol=1e-9, atol=1e-9, err_msg=f"{s.name}, t={t}")

    def test_memoryless_loops(self):
        for seed in range(10):
            self._check(self.random_scenario(seed, horizon=30), (0, 7, 18, 29))

    def test_one_step_loop(self):
        rng = np.random.default_rng(7)
        G = self.OneStep(self.Schedule(0.2 * rng.normal(size=(25, 2, 2))), self.Schedule(0.2 * rng.normal(size=(25, 2, 2))))
        s = self.Scenario(
            name="one_step",
            F=self.random_scenario(0).F,
            G=G,
            input=self.InputSpec(kind="random", dimension=2, seed=3),
            horizon=range(25),
        )
        self._check(s, (0, 1, 12, 24))


class TestDivergentRuns:
    """Runs that diverge are never certified."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.certificates import CertificateVariant, run_certificate
        from src.operators import MatrixSchedule, MemorylessMatrix
        from src.simulator import InputSpec, Scenario, collect_certificate_inputs, simulate
        self.Variant = CertificateVariant
        self.run = run_certificate
        self.Schedule = MatrixSchedule
        self.Memoryless = MemorylessMatrix
        self.InputSpec = InputSpec
        self.Scenario = Scenario
        self.collect = collect_certificate_inputs
        self.simulate = simulate

    @pytest.mark.parametrize("name", sorted(DIVERGENT_LOOPS))
    def test_every_certificate_fails(self, name):
        matrices = DIVERGENT_LOOPS[name]
        s = self.Scenario(
            name=name,
            F=self.Memoryless(self.Schedule.constant([[1.0]])),
            G=self.Memoryless(self.Schedule(matrices)),
            input=self.InputSpec(kind="exp_cos", dimension=1, period=1000.0),
            horizon=range(len(matrices)),
        )
        assert self.simulate(s).diverged
        inputs = self.collect(s)
        for variant in self.Variant:
            report = self.run(inputs, variant, max_gap=50)
            assert not report.holds, f"{name}: {variant.value} certifies a divergent run"


class TestExamples:
    """Seeded example generators."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.operators import FrozenClass, classify_frozen, spectral_radius
        from src.simulator import build_example1, build_example2, episode_schedule
        from src.variation import variation_trace
        self.FrozenClass = FrozenClass
        self.classify = classify_frozen
        self.spectral_radius = spectral_radius
        self.example1 = build_example1
        self.example2 = build_example2
        self.episodes = episode_schedule
        self.trace = variation_trace

    def test_episode_layout(self):
        episodes = self.episodes(np.random.default_rng(0), 996)
        assert episodes
        for (start, n), (nxt, _) in zip(episodes, episodes[1:]):
            assert 3 <= n <= 5
            assert 40 <= nxt - (start + n) <= 60
        last_start, last_length = episodes[-1]
        assert last_start + last_length <= 996 - 40

    def test_example1_classification_follows_episodes(self):
        s = self.example1(seed=0, horizon=300)
        for t in s.horizon:
            destabilizing = self.classify(s.G, t, s.sigma0) is self.FrozenClass.DESTABILIZING
            assert destabilizing == bool(s.indicator[t]), f"t={t}: indicator {s.indicator[t]}"

    def test_example1_matrices_keep_moving(self):
        s = self.example1(seed=1, horizon=100)
        a = s.G.inner.a
        for t in range(1, 100):
            assert not np.array_equal(a.at(t), a.at(t - 1)), f"A_t repeats at t={t}"

    def test_example2_is_stabilizing_and_varies(self):
        s = self.example2(seed=0, horizon=200)
        for t in s.horizon:
            assert self.spectral_radius(s.G.schedule.at(t)) < 1.0
            assert self.classify(s.G, t, s.sigma0) is self.FrozenClass.STABILIZING
        values = self.trace(s.G, s.horizon, s.sigma).values
        assert np.all(values[1:] > 0)

    def test_seed_reproduces_matrices(self):
        first = self.example2(seed=7, horizon=50).G.schedule.matrices
        second = self.example2(seed=7, horizon=50).G.schedule.matrices
        other = self.example2(seed=8, horizon=50).G.schedule.matrices
        assert np.array_equal(first, second)
        assert not np.array_equal(first, other)


class TestExampleCertificates:
    """End-to-end certificates on the full-length examples."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.certificates import check_corollary2, check_zames_wang
        from src.simulator import build_example1, build_example2, collect_certificate_inputs, simulate, verify_gain_bound
        self.corollary2 = check_corollary2
        self.zames_wang = check_zames_wang
        self.example1 = build_example1
        self.example2 = build_example2
        self.collect = collect_certificate_inputs
        self.simulate = simulate
        self.verify = verify_gain_bound

    def test_example1_with_destabilizing_episodes(self):
        s = self.example1(seed=0)
        inputs = self.collect(s)
        assert not inputs.all_stabilizing
        assert np.array_equal(~inputs.stabilizing, s.indicator)
        assert np.all(np.isinf(inputs.l_norm[s.indicator]))

        report = self.corollary2(inputs, max_gap=s.max_gap)
        assert report.holds, f"corollary2 fails at {report.failure_locations[:5]}"
        check = self.verify(self.simulate(s), report.gain_bound)
        assert check.ok, f"gain {check.worst_ratio} at t={check.worst_t} exceeds c_hat={report.gain_bound}"

        baseline = self.zames_wang(inputs)
        assert not baseline.holds
        assert not baseline.applicable

    def test_example2_window_condition_beats_baseline(self):
        s = self.example2(seed=0)
        inputs = self.collect(s)
        assert inputs.all_stabilizing

        baseline = self.zames_wang(inputs)
        assert not baseline.holds
        assert len(baseline.failure_locations) > inputs.length / 2, (
            f"baseline fails at only {len(baseline.failure_locations)} of {inputs.length} times"
        )

        report = self.corollary2(inputs, max_gap=s.max_gap)
        assert report.holds, f"corollary2 fails at {report.failure_locations[:5]}"
        check = self.verify(self.simulate(s), report.gain_bound)
        assert check.ok


class TestScenarioFiles:
    """Scenario documents."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.exceptions import InputError
        from src.simulator import (
            dump_scenario,
            example_document,
            load_scenario,
            random_stable_scenario,
            run_batch,
            scenario_from_document,
            simulate,
        )
        from src.utils import write_json
        self.dump = dump_scenario
        self.example_document = example_document
        self.load = load_scenario
        self.random_scenario = random_stable_scenario
        self.run_batch = run_batch
        self.from_document = scenario_from_document
        self.simulate = simulate
        self.write_json = write_json
        self.InputError = InputError

    def test_example_reference(self):
        s = self.from_document(self.example_document("example2", seed=3, horizon=40))
        assert s.name == "example2_seed3"
        assert len(s.horizon) == 40
        assert s.max_gap == 300

    def test_parameter_overrides(self):
        document = self.example_document("random", seed=1, horizon=20)
        document.update({"rho": 0.95, "n_width": 3})
        s = self.from_document(document)
        assert s.rho == 0.95 and s.n_width == 3

    def test_explicit_file_reproduces_run(self, tmp_path):
        s = self.random_scenario(4, horizon=30)
        path = self.dump(s, tmp_path / "random.json")
        restored = self.load(path)
        assert restored.name == s.name
        assert np.array_equal(self.simulate(restored).x.values, self.simulate(s).x.values)

    def test_file_stem_names_unnamed_scenarios(self, tmp_path):
        document = self.example_document("random", seed=0, horizon=10)
        del document["name"]
        path = self.write_json(tmp_path / "my_run.json", document)
        assert self.load(path).name == "my_run"

    @pytest.mark.parametrize("document", [
        {"document": "scenario"},
        {"document": "scenario", "example": {"name": "example3"}},
        {"document": "scenario", "schema_version": 99, "example": {"name": "example1"}},
        {"document": "scenario", "example": {"name": "example1"}, "horizon": {"length": 5}},
    ])
    def test_invalid_documents(self, document):
        with pytest.raises(self.InputError):
            self.from_document(document)

    def test_missing_and_malformed_files(self, tmp_path):
        with pytest.raises(self.InputError):
            self.load(tmp_path / "absent.json")
        broken = tmp_path / "broken.json"
        broken.write_text("{")
        with pytest.raises(self.InputError):
            self.load(broken)

    def test_batch_keeps_order(self):
        scenarios = [self.random_scenario(seed, horizon=15) for seed in range(6)]
        results = self.run_batch(scenarios, threads=3)
        assert [r.name for r in results] == [s.name for s in scenarios]
        sequential = self.run_batch(scenarios, threads=1)
        for a, b in zip(results, sequential):
            assert np.array_equal(a.x.values, b.x.values)


if __name__ == "__main__":
    pytest.main([__file__, "-v", "--tb=short"])
