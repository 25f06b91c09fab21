#!/usr/bin/env python3
"""Generates a self-contained synthetic demo workspace.

Writes a small labeled head phantom (nested spheres), a matching structure
hierarchy, a color table and a run configuration, so the whole pipeline can
be exercised without any atlas download:

    python3 scripts/make_demo.py demo
    atlasfem run-all --config demo/config.json
    cat demo/report.csv
"""

import json
import math
import struct
import sys
from pathlib import Path

SIZE = 24
CENTER = (SIZE - 1) / 2.0  # voxel-center coordinates


def voxel_label(i, j, k):
    r = math.sqrt((i - CENTER) ** 2 + (j - CENTER) ** 2 + (k - CENTER) ** 2)
    if r <= 4.0:
        return 2  # deep_nucleus
    if r <= 7.5:
        return 3  # cortex
    return 0


def write_nrrd(path):
    header = (
        "NRRD0004\n"
        "type: uchar\n"
        "dimension: 3\n"
        f"sizes: {SIZE} {SIZE} {SIZE}\n"
        "space directions: (1,0,0) (0,1,0) (0,0,1)\n"
        "space origin: (0,0,0)\n"
        "endian: little\n"
        "encoding: raw\n"
        "\n"
    )
    voxels = bytearray()
    for k in range(SIZE):
        for j in range(SIZE):
            for i in range(SIZE):
                voxels += struct.pack("<B", voxel_label(i, j, k))
    path.write_bytes(header.encode() + bytes(voxels))


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo")
    out.mkdir(parents=True, exist_ok=True)

    write_nrrd(out / "anatomy.nrrd")

    (out / "hierarchy.json").write_text(json.dumps({
        "name": "head",
        "children": [{
            "name": "brain",
            "children": [
                {"name": "deep_nucleus", "label": 2},
                {"name": "cortex", "label": 3},
            ],
        }],
    }, indent=2) + "\n")

    (out / "colors.txt").write_text(
        "# label name R G B A\n"
        "0 background 0 0 0 0\n"
        "2 deep_nucleus 220 60 60 255\n"
        "3 cortex 240 200 120 255\n"
    )

    config = {
        "inputs": {
            "anatomy": str(out / "anatomy.nrrd"),
            "hierarchy": str(out / "hierarchy.json"),
            "color_table": str(out / "colors.txt"),
        },
        "edit": {
            "source": "anatomy",
            "directives": [
                {"op": "merge", "structures": ["brain"], "target": 1},
                {"op": "shells", "shells": [
                    {"thickness_mm": 1.0, "label": 3},
                    {"thickness_mm": 2.0, "label": 4},
                    {"thickness_mm": 1.0, "label": 5},
                ]},
            ],
        },
        "dipole": {
            "position_mm": [CENTER + 0.5, CENTER + 0.5, CENTER + 0.5],
            "direction": [1.0, 0.0, 0.0],
        },
        "solver": {"tol": 1e-8},
        "query": {"structures": ["deep_nucleus", "cortex", "brain"]},
        "outputs": {
            "edited": str(out / "property.nrrd"),
            "mesh_vtk": str(out / "mesh.vtk"),
            "mesh_stats": str(out / "mesh_stats.json"),
            "field_vtk": str(out / "field.vtk"),
            "solve_report": str(out / "solve_report.json"),
            "report": str(out / "report.csv"),
        },
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n")
    print(f"demo workspace in {out}/ — next: atlasfem run-all --config {out}/config.json")


if __name__ == "__main__":
    main()
