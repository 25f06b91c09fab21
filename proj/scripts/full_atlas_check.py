#!/usr/bin/env python3
"""Full-atlas structural check (optional, not part of the desk-scale suite).

Needs a real atlas distribution on disk: the anatomy label map, a property
label map (or an edit config producing one), the hierarchy JSON and a
conductivity table covering the property labels. Drives the atlasfem CLI
end to end and asserts structural properties only:

  1. mesh cell count equals the number of nonzero property voxels,
  2. the solve converges,
  3. every requested structure returns a non-empty statistics row.

Example:
  python3 scripts/full_atlas_check.py \
      --cli build/tools/atlasfem \
      --anatomy atlas_labels.nrrd --property property_labels.nrrd \
      --hierarchy hierarchy.json --conductivity conductivities.json \
      --dipole 93.0 121.0 78.0 \
      --structure left_middle_temporal_gyrus --structure left_amygdala \
      --structure left_parahippocampal_gyrus --structure left_fusiform_gyrus
"""

import argparse
import json
import csv
import subprocess
import sys
import tempfile
from pathlib import Path


def run(cli, *args):
    cmd = [cli, *args]
    print("+", " ".join(str(a) for a in cmd))
    result = subprocess.run(cmd, capture_output=True, text=True)
    if result.returncode != 0:
        sys.exit(f"command failed ({result.returncode}):\n{result.stderr}")
    return result.stdout


def nonzero_voxels(cli, volume):
    """Sum the label histogram rows of `info`, skipping background."""
    text = run(cli, "info", str(volume))
    total = 0
    in_labels = False
    for line in text.splitlines():
        if line.startswith("labels:"):
            in_labels = True
            continue
        if in_labels and line.startswith("  "):
            label, count = line.strip().split(":")
            if int(label) != 0:
                total += int(count.split()[0])
    return total


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cli", default="build/tools/atlasfem")
    parser.add_argument("--anatomy", required=True, type=Path)
    parser.add_argument("--property", required=True, type=Path)
    parser.add_argument("--hierarchy", required=True, type=Path)
    parser.add_argument("--conductivity", required=True, type=Path)
    parser.add_argument("--dipole", nargs=3, type=float, required=True,
                        metavar=("X", "Y", "Z"), help="dipole position in mm")
    parser.add_argument("--moment", nargs=3, type=float, default=[1e-8, 0.0, 0.0],
                        help="dipole moment in A*m")
    parser.add_argument("--structure", action="append", required=True,
                        help="structure name to query (repeatable)")
    parser.add_argument("--workdir", type=Path, default=None)
    args = parser.parse_args()

    workdir = args.workdir or Path(tempfile.mkdtemp(prefix="atlasfem_full_"))
    workdir.mkdir(parents=True, exist_ok=True)

    config = {
        "inputs": {
            "anatomy": str(args.anatomy),
            "property": str(args.property),
            "hierarchy": str(args.hierarchy),
            "conductivity": str(args.conductivity),
        },
        "dipole": {"position_mm": args.dipole, "moment_Am": args.moment},
        "solver": {"tol": 1e-8},
        "query": {"structures": args.structure},
        "outputs": {
            "mesh_vtk": str(workdir / "mesh.vtk"),
            "mesh_stats": str(workdir / "mesh_stats.json"),
            "field_vtk": str(workdir / "field.vtk"),
            "solve_report": str(workdir / "solve_report.json"),
            "report": str(workdir / "report.csv"),
        },
    }
    config_path = workdir / "config.json"
    config_path.write_text(json.dumps(config, indent=2))

    run(args.cli, "mesh", "--config", str(config_path))
    run(args.cli, "solve", "--config", str(config_path))
    run(args.cli, "query", "--config", str(config_path))

    failures = []

    stats = json.loads((workdir / "mesh_stats.json").read_text())
    expected_cells = nonzero_voxels(args.cli, args.property)
    if stats["cells"] != expected_cells:
        failures.append(f"cell count {stats['cells']} != nonzero property voxels {expected_cells}")
    else:
        print(f"PASS: {stats['cells']} cells match the nonzero property voxel count")

    report = json.loads((workdir / "solve_report.json").read_text())
    if not report.get("converged", False):
        failures.append("solve did not converge")
    else:
        print(f"PASS: solve converged in {report['iterations']} iterations "
              f"(residual {report['relative_residual']:.2e})")

    with open(workdir / "report.csv", newline="") as f:
        rows = {row["structure"]: row for row in csv.DictReader(f)}
    for name in args.structure:
        if name not in rows or int(rows[name]["node_count"]) < 1:
            failures.append(f"structure '{name}' returned no statistics")
        else:
            print(f"PASS: {name}: {rows[name]['node_count']} nodes, "
                  f"max {rows[name]['max_uV']} uV, mean {rows[name]['mean_uV']} uV, "
                  f"min {rows[name]['min_uV']} uV")

    if failures:
        for f in failures:
            print("FAIL:", f)
        sys.exit(1)
    print("all structural checks passed; artifacts in", workdir)


if __name__ == "__main__":
    main()
