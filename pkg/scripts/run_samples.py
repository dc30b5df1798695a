"""Run every sample config through the CLI into one output directory.

    python scripts/run_samples.py OUT_DIR
"""

import sys
from pathlib import Path

from corrphoton.cli import main

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"

SAMPLES = [
    ("feasibility", "cluster_1nm.cfg"),
    ("feasibility", "atom_0p1nm.cfg"),
    ("sweep", "sweep_clusters.cfg"),
    ("sweep", "sweep_empty.cfg"),
    ("fock", "fock_n3.cfg"),
    ("field", "field_n2.cfg"),
    ("transition", "transition_p_to_f.cfg"),
    ("dynamics", "dynamics_scaling_n2.cfg"),
    ("dynamics", "dynamics_rabi.cfg"),
    ("dynamics", "lifetime.cfg"),
]


def run_all(out: Path) -> list[int]:
    codes = []
    for command, name in SAMPLES:
        dest = out / Path(name).stem
        codes.append(main([command, "--config", str(CONFIGS / name), "--out", str(dest), "--format", "csv,svg"]))
    return codes


if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "sample_output")
    codes = run_all(out)
    sys.exit(max(codes))
