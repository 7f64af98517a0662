"""Physical-plausibility repairs and motion-sweep verification.

Two repairs: `insert_gap` shrinks articulated child meshes by 2% about their
joint anchor so simulators' approximate colliders don't jam, and
`ground_clearance_fix` keeps the full motion sweep above the ground plane,
either by inserting a plinth base under the root or by clamping offending
joint limits.

The sweep proxies each link by its mesh's link-frame AABB transformed by
forward kinematics (an OBB in world space); ground tests use exact mesh
vertices (evaluated on the convex hull, which reaches the same minimum).
Adjacent (parent-child) links legitimately share interfaces and are exempt
from the interpenetration test. Meshes are expected in link-local
coordinates, i.e. relative to their joint anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .errors import Unfixable
from .geometry.mesh import Aabb, Mesh, compute_aabb, scale_about
from .joints.kinematics import forward_kinematics
from .joints.model import CONTINUOUS, FIXED, JointSpec
from .tree import ArticulationTree, SemanticLabel, PLINTH_PART

GAP_FACTOR = 0.98  # articulated parts shrink by 2% of their original scale
DEFAULT_TOLERANCE = 1e-6
_LIFT_MARGIN = 1e-3
_CLAMP_RESOLUTION = 1e-4
_CORNER_CAP = 64  # enumerate all-extreme configs only while 2^k fits


@dataclass
class SweepViolation:
    config: dict[int, float]
    kind: str  # "ground_penetration" | "part_interpenetration"
    nodes: tuple[int, ...]
    depth: float


@dataclass
class SweepReport:
    violations: list[SweepViolation] = field(default_factory=list)
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_lines(self) -> list[str]:
        if self.ok:
            return ["pass: no violations"]
        out = []
        for v in self.violations:
            cfg = " ".join(f"{k}={val:.6g}" for k, val in sorted(v.config.items()))
            nodes = ",".join(str(n) for n in v.nodes)
            out.append(f"{v.kind} nodes={nodes} depth={v.depth:.6g} config[{cfg}]")
        return out

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "violations": [
                {
                    "kind": v.kind,
                    "nodes": list(v.nodes),
                    "depth": v.depth,
                    "config": {str(k): val for k, val in v.config.items()},
                }
                for v in self.violations
            ],
        }


# -- sweep machinery ----------------------------------------------------------


class _SweepContext:
    def __init__(self, tree: ArticulationTree):
        self.tree = tree
        self.mesh_nodes = sorted(tree.meshes.keys())
        self.local_aabb: dict[int, Aabb] = {}
        self.hull_pts: dict[int, np.ndarray] = {}
        for i in self.mesh_nodes:
            mesh = tree.meshes[i]
            self.local_aabb[i] = compute_aabb(mesh)
            self.hull_pts[i] = _hull_points(mesh)
        self.adjacent: set[tuple[int, int]] = set()
        for i, p in enumerate(tree.parent):
            if p is not None:
                self.adjacent.add((min(i, p), max(i, p)))
        self.moving = [
            i for i in tree.pre_order()
            if tree.parent[i] is not None
            and isinstance(tree.edge_spec[i], JointSpec)
            and tree.edge_spec[i].kind != FIXED
        ]

    def poses(self, config: dict[int, float]) -> dict[int, np.ndarray]:
        return forward_kinematics(self.tree, config)

    def min_z(self, config: dict[int, float]) -> float:
        poses = self.poses(config)
        lowest = math.inf
        for i in self.mesh_nodes:
            m = poses[i]
            pts = self.hull_pts[i]
            z = pts @ m[2, :3] + m[2, 3]
            lowest = min(lowest, float(z.min()))
        return lowest

    def ground_hits(self, config, tol: float) -> list[SweepViolation]:
        poses = self.poses(config)
        out = []
        for i in self.mesh_nodes:
            m = poses[i]
            z = self.hull_pts[i] @ m[2, :3] + m[2, 3]
            depth = -float(z.min())
            if depth > tol:
                out.append(SweepViolation(dict(config), "ground_penetration", (i,), depth))
        return out

    def obb_hits(self, config, tol: float) -> list[SweepViolation]:
        poses = self.poses(config)
        n = len(self.mesh_nodes)
        if n < 2:
            return []
        centers = np.empty((n, 3))
        halves = np.empty((n, 3))
        axes = np.empty((n, 3, 3))
        wmin = np.empty((n, 3))
        wmax = np.empty((n, 3))
        for k, i in enumerate(self.mesh_nodes):
            m = poses[i]
            box = self.local_aabb[i]
            r = m[:3, :3]
            c = r @ box.center + m[:3, 3]
            h = 0.5 * box.extents
            centers[k] = c
            halves[k] = h
            axes[k] = r
            radius = np.abs(r) @ h  # world-AABB half extents of the OBB
            wmin[k] = c - radius
            wmax[k] = c + radius
        out = []
        for a in range(n):
            for b in range(a + 1, n):
                ia, ib = self.mesh_nodes[a], self.mesh_nodes[b]
                if (ia, ib) in self.adjacent:
                    continue
                gap = np.minimum(wmax[a], wmax[b]) - np.maximum(wmin[a], wmin[b])
                if np.any(gap <= tol):
                    continue
                depth = _obb_overlap_depth(centers[a], axes[a], halves[a],
                                           centers[b], axes[b], halves[b])
                if depth > tol:
                    out.append(SweepViolation(
                        dict(config), "part_interpenetration", (ia, ib), depth))
        return out

    def sample_configs(self, samples_per_joint: int) -> list[dict[int, float]]:
        """Per-joint independent sweeps (others at rest) plus, when 2^k is
        within the cap, every all-extremes corner config."""
        configs: list[dict[int, float]] = [{}]
        for j in self.moving:
            for v in _joint_values(self.tree.edge_spec[j], samples_per_joint):
                configs.append({j: v})
        k = len(self.moving)
        if 0 < k and 2 ** k <= _CORNER_CAP:
            extreme_sets = [_joint_extremes(self.tree.edge_spec[j]) for j in self.moving]
            for combo in product(*extreme_sets):
                configs.append(dict(zip(self.moving, combo)))
        return configs


def _hull_points(mesh: Mesh) -> np.ndarray:
    pts = mesh.vertices
    if len(pts) > 30:
        try:
            from scipy.spatial import ConvexHull

            hull = ConvexHull(pts)
            return pts[hull.vertices]
        except Exception:
            return pts
    return pts


def _joint_values(spec: JointSpec, samples: int) -> np.ndarray:
    if spec.kind == CONTINUOUS:
        return np.arange(samples) * (2.0 * math.pi / samples)
    lo, hi = spec.limits
    return np.linspace(lo, hi, samples)


def _joint_extremes(spec: JointSpec) -> tuple[float, float]:
    if spec.kind == CONTINUOUS:
        return (0.0, math.pi)
    return spec.limits


def _obb_overlap_depth(c1, a1, h1, c2, a2, h2) -> float:
    """Separating-axis test; returns the minimal overlap depth (<= 0 when
    separated) over the 15 candidate axes."""
    d = c2 - c1
    best = math.inf
    axes = [a1[:, k] for k in range(3)] + [a2[:, k] for k in range(3)]
    for i in range(3):
        for j in range(3):
            cr = np.cross(a1[:, i], a2[:, j])
            norm = np.linalg.norm(cr)
            if norm > 1e-9:
                axes.append(cr / norm)
    for axis in axes:
        ra = float(h1 @ np.abs(a1.T @ axis))
        rb = float(h2 @ np.abs(a2.T @ axis))
        depth = ra + rb - abs(float(d @ axis))
        if depth <= 0:
            return depth
        best = min(best, depth)
    return best


def motion_sweep_check(tree: ArticulationTree, samples_per_joint: int = 16,
                       tolerance: float = DEFAULT_TOLERANCE) -> SweepReport:
    """Sweep each joint independently (others at rest) plus the all-extremes
    corner configs; report ground penetrations (mesh vertex below -tolerance)
    and OBB interpenetrations of non-adjacent links deeper than tolerance.
    """
    if samples_per_joint < 2:
        raise ValueError("samples_per_joint must be >= 2")
    ctx = _SweepContext(tree)
    report = SweepReport(tolerance=tolerance)
    for config in ctx.sample_configs(samples_per_joint):
        report.violations.extend(ctx.ground_hits(config, tolerance))
        report.violations.extend(ctx.obb_hits(config, tolerance))
    return report


# -- repairs -----------------------------------------------------------------


def insert_gap(tree: ArticulationTree, node_id: int) -> ArticulationTree:
    """Shrink an articulated child's mesh by the 2% gap factor about its
    joint anchor (the link-frame origin). Topology and the joint origin are
    untouched; only vertex positions move toward the anchor.
    """
    spec = tree.edge_spec[node_id]
    kind = tree.edge_kind[node_id]
    if spec is not None:
        kind = spec.kind
    if kind in (None, FIXED):
        raise ValueError(f"node {node_id} is not articulated")
    if node_id not in tree.meshes:
        raise ValueError(f"node {node_id} has no mesh")
    tree.meshes[node_id] = scale_about(tree.meshes[node_id], GAP_FACTOR, np.zeros(3))
    return tree


def insert_gaps(tree: ArticulationTree) -> ArticulationTree:
    """Apply the gap repair to every articulated, meshed child."""
    for i in tree.pre_order():
        if tree.parent[i] is None or i not in tree.meshes:
            continue
        spec = tree.edge_spec[i]
        if spec is not None and spec.kind != FIXED:
            insert_gap(tree, i)
    return tree


def _plinth_mesh(footprint: Aabb, lift: float) -> Mesh:
    from .geometry.mesh import build_box

    lo = footprint.min.copy()
    hi = footprint.max.copy()
    ext = hi - lo
    # Recessed toe-kick: keep the plinth clear of front-door sweeps.
    lo[0] += 0.05 * ext[0]
    hi[0] -= 0.25 * ext[0]
    lo[1] += 0.08 * ext[1]
    hi[1] -= 0.08 * ext[1]
    return build_box(Aabb([lo[0], lo[1], 0.0], [hi[0], hi[1], lift]))


def _rest_footprint(ctx: _SweepContext) -> Aabb:
    poses = ctx.poses({})
    mins = []
    maxs = []
    for i in ctx.mesh_nodes:
        m = poses[i]
        pts = ctx.hull_pts[i] @ m[:3, :3].T + m[:3, 3]
        mins.append(pts.min(axis=0))
        maxs.append(pts.max(axis=0))
    return Aabb(np.min(mins, axis=0), np.max(maxs, axis=0))


def ground_clearance_fix(tree: ArticulationTree, policy: str = "base_insert",
                         samples_per_joint: int = 32,
                         tolerance: float = DEFAULT_TOLERANCE) -> ArticulationTree:
    """Make the full limit sweep stay at z >= 0.

    base_insert: add a fixed plinth link under the root, lifting the object
    by the worst sweep penetration (plus a 1 mm margin). limit_clamp: shrink
    offending joints' limits to the largest sub-interval (containing the rest
    value) whose sweep clears the ground, found by binary search at 1e-4
    resolution; the rest pose is unchanged. Raises Unfixable when the rest
    pose itself penetrates under limit_clamp.
    """
    ctx = _SweepContext(tree)
    if not ctx.mesh_nodes:
        return tree
    worst = min(ctx.min_z(c) for c in ctx.sample_configs(samples_per_joint))
    if worst >= -tolerance:
        return tree

    if policy == "base_insert":
        lift = -worst + _LIFT_MARGIN
        old_root = tree.root_id
        footprint = _rest_footprint(ctx)
        plinth = tree.add_node(
            SemanticLabel(tree.nodes[old_root].label.category, PLINTH_PART), None)
        tree.children[plinth] = [old_root]
        tree.parent[old_root] = plinth
        spec = JointSpec(FIXED, origin_xyz=np.array([0.0, 0.0, lift]))
        tree.edge_kind[old_root] = FIXED
        tree.edge_spec[old_root] = spec
        tree.meshes[plinth] = _plinth_mesh(footprint, lift)
        return tree

    if policy != "limit_clamp":
        raise ValueError(f"unknown ground-fix policy {policy!r}")

    if ctx.min_z({}) < -tolerance:
        raise Unfixable("rest pose already penetrates the ground")
    for j in ctx.moving:
        spec = tree.edge_spec[j]
        if spec.limits is None:
            if any(ctx.min_z({j: v}) < -tolerance
                   for v in _joint_values(spec, samples_per_joint)):
                raise Unfixable(
                    f"continuous joint at node {j} penetrates; cannot clamp")
            continue
        lo, hi = spec.limits
        rest = spec.rest_value()
        new_lo = _clamp_end(ctx, j, rest, lo, tolerance)
        new_hi = _clamp_end(ctx, j, rest, hi, tolerance)
        if (new_lo, new_hi) != (lo, hi):
            if new_hi - new_lo < _CLAMP_RESOLUTION:
                new_hi = new_lo + _CLAMP_RESOLUTION
            tree.edge_spec[j] = JointSpec(
                spec.kind, origin_xyz=spec.origin_xyz,
                origin_quat=spec.origin_quat, axis=spec.axis,
                limits=(new_lo, new_hi))
    return tree


def _clamp_end(ctx: _SweepContext, joint: int, rest: float, end: float,
               tol: float) -> float:
    """Largest |end - rest| keeping min_z >= -tol along [rest, end]."""
    if ctx.min_z({joint: end}) >= -tol:
        return end
    ok, bad = rest, end
    while abs(bad - ok) > _CLAMP_RESOLUTION:
        mid = 0.5 * (ok + bad)
        if ctx.min_z({joint: mid}) >= -tol:
            ok = mid
        else:
            bad = mid
    # Snap toward rest onto the resolution grid so the result stays feasible.
    steps = math.floor(abs(ok - rest) / _CLAMP_RESOLUTION)
    return rest + math.copysign(steps * _CLAMP_RESOLUTION, end - rest)


def write_sweep_report(report: SweepReport, text_path: str | Path,
                       json_path: str | Path | None = None) -> None:
    import json

    Path(text_path).write_text("\n".join(report.to_lines()) + "\n", encoding="utf-8")
    if json_path is not None:
        Path(json_path).write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
