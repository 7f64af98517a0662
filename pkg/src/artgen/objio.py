"""Wavefront OBJ read/write.

Writing is deterministic and exact: floats are printed with `%.17g`, which
round-trips IEEE doubles, so write -> read -> write is a byte-level fixpoint.
Reading accepts the subset we emit plus quad faces (split along the shorter
diagonal) and ignores grouping/shading statements.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ParseError, PathNotWritable
from .geometry.mesh import Mesh


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_obj(mesh: Mesh, path: str | Path, material_name: str | None = None,
              mtllib: str | None = None) -> Path:
    """Write a triangle mesh; returns the path written."""
    path = Path(path)
    lines: list[str] = []
    if mtllib:
        lines.append(f"mtllib {mtllib}")
    if material_name:
        lines.append(f"usemtl {material_name}")
    for v in mesh.vertices:
        lines.append(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
    has_normals = mesh.normals is not None and len(mesh.normals) == len(mesh.vertices)
    has_uvs = mesh.uvs is not None and len(mesh.uvs) == len(mesh.vertices)
    if has_uvs:
        for t in mesh.uvs:
            lines.append(f"vt {_fmt(t[0])} {_fmt(t[1])}")
    if has_normals:
        for n in mesh.normals:
            lines.append(f"vn {_fmt(n[0])} {_fmt(n[1])} {_fmt(n[2])}")
    for f in mesh.faces:
        a, b, c = int(f[0]) + 1, int(f[1]) + 1, int(f[2]) + 1
        if has_normals and has_uvs:
            lines.append(f"f {a}/{a}/{a} {b}/{b}/{b} {c}/{c}/{c}")
        elif has_normals:
            lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
        elif has_uvs:
            lines.append(f"f {a}/{a} {b}/{b} {c}/{c}")
        else:
            lines.append(f"f {a} {b} {c}")
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise PathNotWritable(f"cannot write {path}: {e}") from e
    return path


def _face_index(token: str, count: int, where: str) -> int:
    head = token.split("/", 1)[0]
    try:
        i = int(head)
    except ValueError as e:
        raise ParseError(f"{where}: bad face index {token!r}") from e
    if i < 0:
        i = count + 1 + i
    if not (1 <= i <= count):
        raise ParseError(f"{where}: face index {i} out of range")
    return i - 1


def read_obj(path: str | Path) -> Mesh:
    """Read a triangle/quad OBJ. Quads split along their shorter diagonal."""
    path = Path(path)
    positions: list[list[float]] = []
    normals: list[list[float]] = []
    uvs: list[list[float]] = []
    faces: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        where = f"{path.name}:{lineno}"
        if tag == "v":
            positions.append([float(x) for x in parts[1:4]])
        elif tag == "vn":
            normals.append([float(x) for x in parts[1:4]])
        elif tag == "vt":
            uvs.append([float(x) for x in parts[1:3]])
        elif tag == "f":
            idx = [_face_index(t, len(positions), where) for t in parts[1:]]
            if len(idx) == 3:
                faces.append((idx[0], idx[1], idx[2]))
            elif len(idx) == 4:
                a, b, c, d = idx
                p = np.asarray(positions, dtype=np.float64)
                if np.linalg.norm(p[a] - p[c]) <= np.linalg.norm(p[b] - p[d]):
                    faces.append((a, b, c))
                    faces.append((a, c, d))
                else:
                    faces.append((b, c, d))
                    faces.append((b, d, a))
            else:
                raise ParseError(f"{where}: only triangles and quads supported")
        elif tag in ("mtllib", "usemtl", "o", "g", "s", "l"):
            continue
        else:
            raise ParseError(f"{where}: unsupported OBJ record {tag!r}")
    if not positions:
        raise ParseError(f"{path}: no vertices")
    mesh_normals = None
    if len(normals) == len(positions):
        mesh_normals = np.asarray(normals, dtype=np.float64)
    mesh_uvs = None
    if len(uvs) == len(positions):
        mesh_uvs = np.asarray(uvs, dtype=np.float64)
    return Mesh(np.asarray(positions, dtype=np.float64),
                np.asarray(faces, dtype=np.int32), mesh_normals, mesh_uvs)
