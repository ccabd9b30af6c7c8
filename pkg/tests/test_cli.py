"""
FrozenTime - Command Line Tests

Subcommands, output files and exit codes.
"""

import json
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))


DIVERGENT_SCENARIO = {
    "document": "scenario",
    "schema_version": 1,
    "name": "divergent",
    "F": {"kind": "memoryless_matrix", "schedule": {"matrix": [[1.0]]}},
    "G": {"kind": "memoryless_matrix", "schedule": {"matrix": [[1.5]]}},
    "input": {"kind": "exp_cos", "dimension": 1, "amplitude": 1.0, "period": 1000.0},
    "horizon": {"start": 0, "length": 200},
}

EXAMPLE2_SHORT = {
    "document": "scenario",
    "schema_version": 1,
    "example": {"name": "example2", "seed": 0, "horizon": 300},
}

OPEN_LOOP_SCENARIO = {
    "document": "scenario",
    "schema_version": 1,
    "name": "open_loop",
    "F": {"kind": "memoryless_matrix", "schedule": {"matrix": [[1.0]]}},
    "G": {"kind": "memoryless_matrix", "schedule": {"matrix": [[0.0]]}},
    "input": {"kind": "exp_cos", "dimension": 1, "amplitude": 1.0, "period": 1000.0},
    "horizon": {"start": 0, "length": 60},
}

EXAMPLE1_SHORT = {
    "document": "scenario",
    "schema_version": 1,
    "example": {"name": "example1", "seed": 0, "horizon": 300},
}

VARIANTS = [
    "theorem1", "corollary1", "corollary2", "lemma9_cN", "lemma10_special", "corollary3_bound", "zames_wang",
]

BOUND_CASES = [
    {"args": ["--sup-l", "4.8839"], "zames_wang": 0.0913, "code": 0},
    {"args": ["--sup-l", "inf"], "zames_wang": 0.0, "code": 0},
    {"args": ["--sup-l", "4.8839", "--sigma", "1.5", "--sigma0", "1.44"], "zames_wang": None, "code": 1},
    {"args": ["--sup-l", "4.8839", "--rho", "1.2"], "zames_wang": None, "code": 1},
]


def write_document(path: Path, document) -> Path:
    path.write_text(json.dumps(document))
    return path


class TestBoundCommand:
    """bound subcommand."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.cli.main import main
        self.main = main

    @pytest.mark.parametrize("case", BOUND_CASES)
    def test_bound(self, case, capsys):
        code = self.main(["bound", "--sigma", "1.2", "--sigma0", "1.44", "--rho", "0.9"] + case["args"])
        assert code == case["code"], f"{case['args']}: exit {code}"
        if case["zames_wang"] is not None:
            document = json.loads(capsys.readouterr().out)
            assert document["document"] == "bound"
            assert document["zames_wang"] == pytest.approx(case["zames_wang"], abs=1e-4)

    def test_bound_file(self, tmp_path):
        code = self.main([
            "bound", "--sup-l", "4.8839", "--n-width", "2",
            "--controller-factor-norm", "2.0", "--out-dir", str(tmp_path),
        ])
        assert code == 0
        document = json.loads((tmp_path / "bound.json").read_text())
        assert document["N"] == 2
        assert document["tolerable_variation"] == pytest.approx(document["zames_wang"] * 1.2 / 1.44, rel=1e-12)
        assert "adaptive_plant" in document

    def test_usage_error_is_input_error(self):
        assert self.main(["bound"]) == 1
        assert self.main(["no-such-command"]) == 1


class TestSimulateCommand:
    """simulate subcommand."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.cli.main import main
        self.main = main

    def test_outputs(self, tmp_path):
        path = write_document(tmp_path / "random.json", {
            "document": "scenario",
            "example": {"name": "random", "seed": 2, "horizon": 30},
        })
        out = tmp_path / "out"
        assert self.main(["simulate", "--scenario", str(path), "--out-dir", str(out)]) == 0
        for name in ("x.csv", "u.csv", "gain.csv", "summary.json"):
            assert (out / "random" / name).exists(), f"missing {name}"
        summary = json.loads((out / "random" / "summary.json").read_text())
        assert summary["document"] == "simulation_summary"
        assert summary["steps"] == 30
        assert not summary["diverged"]
        assert (out / "random" / "x.csv").read_text().splitlines()[0] == "t,x_1,x_2"

    def test_divergent_scenario(self, tmp_path):
        path = write_document(tmp_path / "divergent.json", DIVERGENT_SCENARIO)
        assert self.main(["simulate", "--scenario", str(path), "--out-dir", str(tmp_path)]) == 2
        summary = json.loads((tmp_path / "divergent" / "summary.json").read_text())
        assert summary["diverged"] and summary["diverged_at"] is not None

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{\"document\": ")
        assert self.main(["simulate", "--scenario", str(path), "--out-dir", str(tmp_path)]) == 1

    def test_missing_file(self, tmp_path):
        assert self.main(["simulate", "--scenario", str(tmp_path / "absent.json")]) == 1

    def test_batch_reports_most_severe(self, tmp_path):
        good = write_document(tmp_path / "good.json", {
            "document": "scenario",
            "example": {"name": "random", "seed": 0, "horizon": 20},
        })
        bad = write_document(tmp_path / "divergent.json", DIVERGENT_SCENARIO)
        broken = tmp_path / "broken.json"
        broken.write_text("[]")
        args = ["simulate", "--scenario", str(good), "--scenario", str(bad), "--out-dir", str(tmp_path / "out")]
        assert self.main(args) == 2
        assert self.main(args + ["--scenario", str(broken)]) == 1

    def test_repeated_run_writes_identical_files(self, tmp_path):
        path = write_document(tmp_path / "random.json", {
            "document": "scenario",
            "example": {"name": "random", "seed": 4, "horizon": 40},
        })
        contents = []
        for run in ("first", "second"):
            out = tmp_path / run
            assert self.main(["simulate", "--scenario", str(path), "--out-dir", str(out)]) == 0
            contents.append({p.name: p.read_bytes() for p in sorted((out / "random").iterdir())})
        assert contents[0] == contents[1]


class TestCertifyCommand:
    """certify and compare subcommands."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.certificates import CertificateInputs, dump_certificate_inputs, periodic_spike_trace, separation_spike
        from src.cli.main import main
        from src.variation import c_coeff_trace
        self.Inputs = CertificateInputs
        self.dump = dump_certificate_inputs
        self.spike_trace = periodic_spike_trace
        self.separation = separation_spike
        self.c_trace = c_coeff_trace
        self.main = main

    def test_example2_baseline_fails(self, tmp_path):
        path = write_document(tmp_path / "example2.json", EXAMPLE2_SHORT)
        code = self.main(["certify", "--scenario", str(path), "--variant", "zames_wang", "--out-dir", str(tmp_path)])
        assert code == 3
        report = json.loads((tmp_path / "example2" / "report.json").read_text())
        assert report["variant"] == "zames_wang"
        assert report["applicable"] and not report["holds"]

    def test_example2_window_condition_holds(self, tmp_path, capsys):
        path = write_document(tmp_path / "example2.json", EXAMPLE2_SHORT)
        code = self.main(["certify", "--scenario", str(path), "--out-dir", str(tmp_path)])
        assert code == 0
        assert "corollary2 holds" in capsys.readouterr().out

        out = tmp_path / "example2"
        report = json.loads((out / "report.json").read_text())
        assert report["holds"] and report["gain_claimed"]
        assert report["gain_check"]["ok"]
        assert (out / "margins.csv").read_text().splitlines()[0] == "start,end,worst_t,required,achieved,margin"
        inputs = json.loads((out / "inputs.json").read_text())
        assert inputs["document"] == "certificate_inputs"
        assert len(inputs["l_norm"]) == 300

    def test_compare_on_precomputed_inputs(self, tmp_path):
        sigma, sigma0, rho, sup_l = 1.2, 1.44, 0.9, 4.8839
        spike = self.separation(sup_l, sigma, sigma0, rho, 2)
        trace = self.spike_trace(spike, 2, 40, sigma)
        inputs = self.Inputs(
            sigma=sigma,
            sigma0=sigma0,
            rho=rho,
            F_norm=1.0,
            s_norm=np.ones(40),
            l_norm=np.full(40, sup_l),
            g_norm=np.full(40, 0.5),
            c_coeff=self.c_trace(trace, sigma0),
            stabilizing=np.ones(40, dtype=bool),
            s_norm_sigma=np.ones(40),
            variation=trace.values,
        )
        path = self.dump(inputs, tmp_path / "spikes.json")

        code = self.main([
            "compare", "--scenario", str(path), "--n-width", "2", "--max-gap", "40", "--out-dir", str(tmp_path),
        ])
        assert code == 0
        table = json.loads((tmp_path / "spikes" / "comparison.json").read_text())
        rows = {row["condition"]: row for row in table["rows"]}
        assert rows["corollary3_bound"]["holds"]
        assert not rows["zames_wang"]["holds"]
        assert (tmp_path / "spikes" / "comparison.csv").exists()

    def test_inputs_reject_weight_overrides(self, tmp_path):
        inputs = self.Inputs(
            sigma=1.2, sigma0=1.44, rho=0.9, F_norm=1.0,
            s_norm=[1.0], l_norm=[2.0], g_norm=[0.5], c_coeff=[0.1], stabilizing=[True],
        )
        path = self.dump(inputs, tmp_path / "inputs.json")
        assert self.main(["certify", "--scenario", str(path), "--sigma", "1.1", "--out-dir", str(tmp_path)]) == 1

    def test_inputs_reject_seed_override(self, tmp_path):
        inputs = self.Inputs(
            sigma=1.2, sigma0=1.44, rho=0.9, F_norm=1.0,
            s_norm=[1.0], l_norm=[2.0], g_norm=[0.5], c_coeff=[0.1], stabilizing=[True],
        )
        path = self.dump(inputs, tmp_path / "inputs.json")
        assert self.main(["certify", "--scenario", str(path), "--seed", "3", "--out-dir", str(tmp_path)]) == 1
        assert self.main(["compare", "--scenario", str(path), "--seed", "3", "--out-dir", str(tmp_path)]) == 1

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_open_loop_holds_for_every_variant(self, variant, tmp_path):
        path = write_document(tmp_path / "open_loop.json", OPEN_LOOP_SCENARIO)
        code = self.main(["certify", "--scenario", str(path), "--variant", variant, "--out-dir", str(tmp_path)])
        assert code == 0, f"{variant}: exit {code}"
        report = json.loads((tmp_path / "open_loop" / "report.json").read_text())
        assert report["holds"]
        if report["gain_claimed"]:
            assert report["gain_check"]["ok"]

    def test_open_loop_compare(self, tmp_path):
        path = write_document(tmp_path / "open_loop.json", OPEN_LOOP_SCENARIO)
        assert self.main(["compare", "--scenario", str(path), "--out-dir", str(tmp_path)]) == 0
        table = json.loads((tmp_path / "open_loop" / "comparison.json").read_text())
        rows = {row["condition"]: row for row in table["rows"]}
        assert rows["corollary3_bound"]["holds"]
        assert rows["zames_wang"]["holds"]

    @pytest.mark.parametrize("variant", ["lemma10_special", "corollary3_bound", "zames_wang"])
    def test_example1_rejects_all_stabilizing_variants(self, variant, tmp_path):
        path = write_document(tmp_path / "example1.json", EXAMPLE1_SHORT)
        code = self.main(["certify", "--scenario", str(path), "--variant", variant, "--out-dir", str(tmp_path)])
        assert code == 1, f"{variant}: exit {code}"
        assert not (tmp_path / "example1" / "report.json").exists()

    def test_repeated_certify_writes_identical_files(self, tmp_path):
        path = write_document(tmp_path / "example2.json", EXAMPLE2_SHORT)
        contents = []
        for run in ("first", "second"):
            out = tmp_path / run
            assert self.main(["certify", "--scenario", str(path), "--out-dir", str(out)]) == 0
            contents.append({p.name: p.read_bytes() for p in sorted((out / "example2").iterdir())})
        assert contents[0] == contents[1]


class TestGenExampleCommand:
    """gen-example subcommand."""

    @pytest.fixture(autouse=True)
    def setup(self):
        from src.cli.main import main
        from src.simulator import load_scenario
        self.main = main
        self.load = load_scenario

    def test_reference_file(self, tmp_path):
        code = self.main(["gen-example", "--example", "example1", "--seed", "3", "--horizon", "120",
                          "--out-dir", str(tmp_path)])
        assert code == 0
        path = tmp_path / "example1_seed3.json"
        document = json.loads(path.read_text())
        assert document["example"]["name"] == "example1"
        s = self.load(path)
        assert len(s.horizon) == 120

    def test_explicit_file(self, tmp_path):
        code = self.main(["gen-example", "--example", "random", "--seed", "1", "--horizon", "10",
                          "--explicit", "--out-dir", str(tmp_path)])
        assert code == 0
        document = json.loads((tmp_path / "random_seed1.json").read_text())
        assert "example" not in document
        assert document["G"]["kind"] == "memoryless_matrix"

    def test_invalid_parameters(self, tmp_path):
        code = self.main(["gen-example", "--example", "example2", "--sigma", "2.0", "--sigma0", "1.5",
                          "--out-dir", str(tmp_path)])
        assert code == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v", "--tb=short"])
