"""Retrieval asset library and support-point alignment.

Assets are OBJ meshes with a `<name>.meta` sidecar declaring a part label,
canonical bounds, and named support points (mount anchors). Retrieved parts
are placed by solving for the similarity transform -- uniform scale, one of
the 24 axis-aligned rotations, and a translation -- that best maps the
asset's support points onto target points on the object, instead of naively
stretching the asset into a bounding box.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigError, NoAssetForLabel
from ..rng import SeededStream
from ..tree import SemanticLabel
from ..objio import read_obj
from .mesh import Aabb, Mesh, transform_mesh


@dataclass
class AssetEntry:
    id: str
    label: SemanticLabel
    mesh_path: Path
    canonical_bbox: Aabb
    support_points: list[tuple[str, np.ndarray]]

    def support(self, name: str) -> np.ndarray:
        for n, p in self.support_points:
            if n == name:
                return p
        raise KeyError(f"asset {self.id!r} has no support point {name!r}")


def parse_meta(text: str, source: str = "<meta>") -> tuple[str, Aabb, list[tuple[str, np.ndarray]]]:
    label: str | None = None
    bbox_min = bbox_max = None
    supports: list[tuple[str, np.ndarray]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        where = f"{source}:{lineno}"
        if parts[0] == "label" and len(parts) == 2:
            label = parts[1]
        elif parts[0] == "bbox_min" and len(parts) == 4:
            bbox_min = np.array([float(x) for x in parts[1:]])
        elif parts[0] == "bbox_max" and len(parts) == 4:
            bbox_max = np.array([float(x) for x in parts[1:]])
        elif parts[0] == "support" and len(parts) == 5:
            supports.append((parts[1], np.array([float(x) for x in parts[2:]])))
        else:
            raise ConfigError(f"{where}: bad meta line {line!r}")
    if label is None or bbox_min is None or bbox_max is None:
        raise ConfigError(f"{source}: meta needs label, bbox_min, bbox_max")
    if not supports:
        raise ConfigError(f"{source}: at least one support point required")
    bbox = Aabb(bbox_min, bbox_max)
    slack = 0.01 * bbox.extents + 1e-12
    for name, p in supports:
        if np.any(p < bbox.min - slack) or np.any(p > bbox.max + slack):
            raise ConfigError(f"{source}: support {name!r} outside canonical bbox")
    return label, bbox, supports


class AssetLibrary:
    """Read-only library of retrievable part meshes, keyed by part label."""

    def __init__(self, entries: list[AssetEntry]):
        self.entries = sorted(entries, key=lambda e: e.id)
        self.by_part: dict[str, list[AssetEntry]] = {}
        for e in self.entries:
            self.by_part.setdefault(e.label.part, []).append(e)
        self._mesh_cache: dict[str, Mesh] = {}

    @staticmethod
    def load(directory: str | Path) -> "AssetLibrary":
        directory = Path(directory)
        entries = []
        for meta_path in sorted(directory.glob("*.meta")):
            label, bbox, supports = parse_meta(
                meta_path.read_text(encoding="utf-8"), str(meta_path))
            mesh_path = meta_path.with_suffix(".obj")
            if not mesh_path.exists():
                raise ConfigError(f"{meta_path}: missing mesh file {mesh_path.name}")
            entries.append(AssetEntry(
                id=meta_path.stem,
                label=SemanticLabel("asset", label),
                mesh_path=mesh_path,
                canonical_bbox=bbox,
                support_points=supports,
            ))
        return AssetLibrary(entries)

    def mesh(self, entry: AssetEntry) -> Mesh:
        if entry.id not in self._mesh_cache:
            self._mesh_cache[entry.id] = read_obj(entry.mesh_path)
        return self._mesh_cache[entry.id].copy()


def retrieve_part(library: list[AssetEntry] | AssetLibrary, label, rng: SeededStream) -> AssetEntry:
    """Uniformly sample an asset whose label matches `label`."""
    part = label.part if isinstance(label, SemanticLabel) else str(label)
    if isinstance(library, AssetLibrary):
        candidates = library.by_part.get(part, [])
    else:
        candidates = [e for e in library if e.label.part == part]
    if not candidates:
        raise NoAssetForLabel(f"no asset with label {part!r}")
    return candidates[rng.randint(0, len(candidates) - 1)]


def _axis_aligned_rotations() -> list[np.ndarray]:
    """The 24 proper rotations mapping axes to signed axes, in a fixed order."""
    mats = []
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        for sx in (1, -1):
            for sy in (1, -1):
                for sz in (1, -1):
                    m = np.zeros((3, 3))
                    for row, (col, s) in enumerate(zip(perm, (sx, sy, sz))):
                        m[row, col] = s
                    if np.linalg.det(m) > 0:
                        mats.append(m)
    mats.sort(key=lambda m: tuple(m.flatten()))
    return mats


_ROTATIONS = _axis_aligned_rotations()


@dataclass
class AlignmentResult:
    mesh: Mesh
    scale: float
    rotation: np.ndarray
    translation: np.ndarray
    residual_rms: float
    rank_deficient: bool

    def apply(self, points: np.ndarray) -> np.ndarray:
        return self.scale * (np.asarray(points) @ self.rotation.T) + self.translation


def align_support_points(mesh: Mesh, source_points, target_points) -> AlignmentResult:
    """Best similarity transform (uniform scale, axis-aligned rotation,
    translation) mapping source points onto target points in least squares.

    When the source points are coincident the rotation and scale are
    unidentifiable (rank deficient); the documented fallback is the identity
    rotation at unit scale with a pure centroid translation.
    """
    src = np.asarray(source_points, dtype=np.float64).reshape(-1, 3)
    dst = np.asarray(target_points, dtype=np.float64).reshape(-1, 3)
    if len(src) != len(dst) or len(src) < 1:
        raise ValueError("need equal-length, nonempty point lists")

    sc = src.mean(axis=0)
    dc = dst.mean(axis=0)
    src0 = src - sc
    dst0 = dst - dc
    denom = float(np.sum(src0 * src0))

    if denom < 1e-24:
        rot = np.eye(3)
        scale = 1.0
        t = dc - sc
        moved = transform_mesh(mesh, scale, rot, t)
        rms = float(np.sqrt(np.mean(np.sum((scale * src @ rot.T + t - dst) ** 2, axis=1))))
        return AlignmentResult(moved, scale, rot, t, rms, rank_deficient=True)

    best: tuple[float, int] | None = None
    best_fit: tuple[np.ndarray, float, np.ndarray] | None = None
    for k, rot in enumerate(_ROTATIONS):
        rs = src0 @ rot.T
        s = float(np.sum(rs * dst0)) / denom
        if s <= 1e-12:
            continue
        t = dc - s * (rot @ sc)
        resid = s * rs + dc - dst  # == s*R*src + t - dst
        err = float(np.sum(resid * resid))
        if best is None or err < best[0] - 1e-18:
            best = (err, k)
            best_fit = (rot, s, t)
    if best_fit is None:
        # All scales degenerate; same fallback as the coincident case.
        rot, scale, t = np.eye(3), 1.0, dc - sc
        rank_deficient = True
    else:
        rot, scale, t = best_fit
        rank_deficient = False
    moved = transform_mesh(mesh, scale, rot, t)
    resid = scale * (src @ rot.T) + t - dst
    rms = float(np.sqrt(np.mean(np.sum(resid * resid, axis=1))))
    return AlignmentResult(moved, scale, rot, t, rms, rank_deficient)
