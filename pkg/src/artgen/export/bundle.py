"""Bundle manifests: structured text with per-file checksums, no timestamps.

Schema (one `key: value` per line, then one `file <sha256> <relpath>` line per
bundle file, paths relative and inside the bundle directory):

    category: cabinet
    seed: 7
    object_index: 0
    generator_version: 0.1.0
    nodes: 17
    joints: 16
    moving_joints: 5
    structure_hash: 0x1a2b...
    material mat_3 noise: 0.05
    file <sha256> object.urdf
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError, PathNotWritable

MANIFEST_NAME = "manifest.txt"


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


@dataclass
class Bundle:
    directory: Path
    urdf_path: str
    mesh_paths: dict[int, str]
    material_paths: list[str]
    manifest: dict
    material_noise: dict[str, float] = field(default_factory=dict)

    def files(self) -> list[str]:
        rel = [self.urdf_path]
        rel.extend(sorted(self.mesh_paths.values()))
        rel.extend(sorted(self.material_paths))
        return rel

    def write_manifest(self) -> Path:
        lines = [f"{k}: {v}" for k, v in self.manifest.items()]
        for name in sorted(self.material_noise):
            lines.append(f"material {name} noise: {format(self.material_noise[name], '.17g')}")
        for rel in self.files():
            p = self.directory / rel
            if not p.is_file():
                raise ConfigError(f"bundle file missing: {rel}")
            lines.append(f"file {_sha256(p)} {rel}")
        out = self.directory / MANIFEST_NAME
        try:
            out.write_text("\n".join(lines) + "\n", encoding="utf-8")
        except OSError as e:
            raise PathNotWritable(f"cannot write {out}: {e}") from e
        return out


def write_manifest(bundle: Bundle) -> Path:
    return bundle.write_manifest()


def read_manifest(directory: str | Path) -> tuple[dict, list[tuple[str, str]]]:
    """Returns (key/value fields, [(sha256, relpath), ...])."""
    path = Path(directory) / MANIFEST_NAME
    fields: dict[str, str] = {}
    files: list[tuple[str, str]] = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("file "):
            _, digest, rel = line.split(" ", 2)
            files.append((digest, rel))
        else:
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
    return fields, files


def check_bundle(directory: str | Path) -> list[str]:
    """Verify manifest invariants: files exist inside the bundle, paths are
    relative, checksums match. Returns a list of problems (empty = ok)."""
    directory = Path(directory)
    problems: list[str] = []
    try:
        _, files = read_manifest(directory)
    except FileNotFoundError:
        return [f"{directory}: missing {MANIFEST_NAME}"]
    for digest, rel in files:
        p = Path(rel)
        if p.is_absolute() or ".." in p.parts:
            problems.append(f"{rel}: path escapes the bundle")
            continue
        full = directory / p
        if not full.is_file():
            problems.append(f"{rel}: missing")
        elif _sha256(full) != digest:
            problems.append(f"{rel}: checksum mismatch")
    return problems
