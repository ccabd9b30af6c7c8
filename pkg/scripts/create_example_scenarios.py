"""
FrozenTime - Create Example Scenarios

Writes the seeded example scenario files plus a small divergent scenario
for trying out the CLI.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.simulator import build_example1, build_example2, dump_scenario, example_document, random_stable_scenario
from src.utils import write_json


def divergent_document() -> dict:
    """Scalar loop x(t) = u(t) + 1.5 x(t-1): grows until the divergence threshold."""
    return {
        "document": "scenario",
        "schema_version": 1,
        "name": "divergent",
        "F": {"kind": "memoryless_matrix", "schedule": {"matrix": [[1.0]]}},
        "G": {"kind": "memoryless_matrix", "schedule": {"matrix": [[1.5]]}},
        "input": {"kind": "exp_cos", "dimension": 1, "amplitude": 1.0, "period": 1000.0},
        "horizon": {"start": 0, "length": 200},
    }


def create_example_scenarios(out_dir: str = "data/scenarios", seed: int = 0):
    """Create the example scenario files."""

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    written = [
        dump_scenario(build_example1(seed), out / "example1.json", explicit=False),
        dump_scenario(build_example2(seed), out / "example2.json", explicit=False),
        dump_scenario(random_stable_scenario(seed), out / "random_explicit.json", explicit=True),
        write_json(out / "example2_short.json", example_document("example2", seed, horizon=200)),
        write_json(out / "divergent.json", divergent_document()),
    ]

    print("\n" + "="*50)
    print("Example scenarios created")
    print("="*50)
    for path in written:
        print(f"  {path}")
    print("="*50)


if __name__ == "__main__":
    create_example_scenarios()
