#!/usr/bin/env python3
"""Regenerate the sample asset library (OBJ + .meta sidecars).

Assets are authored in a canonical frame: mount stems grow from the x = 0
plane toward +x, y is the spread axis, z up. Support-point spreads are kept
at fixed distances per label family so alignment scales stay near 1.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from artgen.geometry.mesh import Aabb, Mesh, build_box, build_lathe, orient_outward, transform_mesh
from artgen.objio import write_obj

OUT = Path(__file__).resolve().parents[1] / "src" / "artgen" / "data" / "assets"


def concat(*meshes: Mesh) -> Mesh:
    verts = []
    faces = []
    offset = 0
    for m in meshes:
        verts.append(m.vertices)
        faces.append(m.faces + offset)
        offset += m.n_vertices
    return orient_outward(Mesh(np.vstack(verts), np.vstack(faces)))


def box(x0, y0, z0, x1, y1, z1, bevel=0.0) -> Mesh:
    return build_box(Aabb([x0, y0, z0], [x1, y1, z1]), bevel=bevel)


def x_axis_lathe(profile, segments=32) -> Mesh:
    """Revolve around z, then point the axis along +x."""
    m = build_lathe(profile, segments=segments)
    rot = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]])
    return orient_outward(transform_mesh(m, 1.0, rot, [0.0, 0.0, 0.0]))


def write_asset(name: str, label: str, mesh: Mesh, supports: list[tuple[str, tuple]]):
    OUT.mkdir(parents=True, exist_ok=True)
    write_obj(mesh, OUT / f"{name}.obj")
    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    lines = [f"label {label}",
             f"bbox_min {lo[0]:.6g} {lo[1]:.6g} {lo[2]:.6g}",
             f"bbox_max {hi[0]:.6g} {hi[1]:.6g} {hi[2]:.6g}"]
    for sname, p in supports:
        lines.append(f"support {sname} {p[0]:.6g} {p[1]:.6g} {p[2]:.6g}")
    (OUT / f"{name}.meta").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{name}: {mesh.n_vertices} verts, {mesh.n_faces} faces")


def main() -> None:
    # Bar handles, mount spread 0.1 (y = +-0.05).
    write_asset(
        "handle_bar_a", "handle_bar",
        concat(
            box(0.0, -0.056, -0.008, 0.02, -0.044, 0.008),
            box(0.0, 0.044, -0.008, 0.02, 0.056, 0.008),
            box(0.018, -0.068, -0.01, 0.033, 0.068, 0.01),
        ),
        [("left", (0.0, -0.05, 0.0)), ("right", (0.0, 0.05, 0.0))])
    write_asset(
        "handle_bar_b", "handle_bar",
        concat(
            box(0.0, -0.057, -0.009, 0.016, -0.043, 0.009),
            box(0.0, 0.043, -0.009, 0.016, 0.057, 0.009),
            box(0.014, -0.062, -0.012, 0.032, 0.062, 0.012, bevel=0.004),
        ),
        [("left", (0.0, -0.05, 0.0)), ("right", (0.0, 0.05, 0.0))])
    write_asset(
        "handle_bar_c", "handle_bar",
        concat(
            box(0.0, -0.055, -0.007, 0.024, -0.045, 0.007),
            box(0.0, 0.045, -0.007, 0.024, 0.055, 0.007),
            box(0.022, -0.072, -0.008, 0.034, 0.072, 0.008),
        ),
        [("left", (0.0, -0.05, 0.0)), ("right", (0.0, 0.05, 0.0))])

    # Knobs, single mount at the stem base (aligned at unit scale).
    write_asset(
        "knob_round_a", "knob",
        x_axis_lathe([(0.0, 0.0), (0.006, 0.0), (0.006, 0.007),
                      (0.0125, 0.011), (0.0125, 0.016), (0.0, 0.019)]),
        [("base", (0.0, 0.0, 0.0))])
    write_asset(
        "knob_round_b", "knob",
        x_axis_lathe([(0.0, 0.0), (0.0055, 0.0), (0.0055, 0.006),
                      (0.013, 0.013), (0.009, 0.018), (0.0, 0.018)]),
        [("base", (0.0, 0.0, 0.0))])
    write_asset(
        "knob_cyl_a", "knob",
        x_axis_lathe([(0.0, 0.0), (0.011, 0.0), (0.011, 0.016), (0.0, 0.016)]),
        [("base", (0.0, 0.0, 0.0))])

    # Arch pulls, mount spread 0.08 (y = +-0.04).
    write_asset(
        "pull_arch_a", "pull_arch",
        concat(
            box(0.0, -0.046, -0.007, 0.018, -0.034, 0.007),
            box(0.0, 0.034, -0.007, 0.018, 0.046, 0.007),
            box(0.016, -0.052, -0.009, 0.03, 0.052, 0.009),
        ),
        [("left", (0.0, -0.04, 0.0)), ("right", (0.0, 0.04, 0.0))])
    write_asset(
        "pull_arch_b", "pull_arch",
        concat(
            box(0.0, -0.045, -0.006, 0.022, -0.035, 0.006),
            box(0.0, 0.035, -0.006, 0.022, 0.045, 0.006),
            box(0.02, -0.05, -0.007, 0.031, 0.05, 0.007, bevel=0.003),
        ),
        [("left", (0.0, -0.04, 0.0)), ("right", (0.0, 0.04, 0.0))])


if __name__ == "__main__":
    main()
