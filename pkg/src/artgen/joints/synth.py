"""Joint synthesis: derive origin, axis, and limits from assembled geometry.

Axis policies map (parent, child) boxes to a world anchor point plus motion
axes; limit policies sample each sub-joint's limits uniformly from its
geometric feasibility interval, rounded to 1e-4. Both registries are named so
rule tables stay data. Link frames sit at joint anchors: a joint's origin
translation is its anchor minus the parent's anchor, rotation identity.

Shipped axis policies (front of an object faces +X, up is +Z):

    attach_center  fixed attachment at the child box center
    attach_top     fixed attachment at the child box top-center (legs)
    slide_front    prismatic +X from the child's front-face center (drawers)
    hinge_side     revolute about a vertical front edge; the hinge sits on
                   the outer edge (farther from the object midline), axis
                   signed so positive motion swings outward
    hinge_bottom   revolute about +Y, hinge inset 0.3 x depth above the
                   child's bottom edge (drop-down appliance doors)
    vertical       axis +Z at the child's bottom center (turntables,
                   cylindrical chains)
    tilt_yx        gimbal axes +Y then +X at the child's bottom center
    plane_xy       planar axes +X then +Y at the child's bottom center
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InfeasibleLimits, UnexpandedCompound
from ..rng import SeededStream
from ..tree import ArticulationTree, LinkNode
from .model import (
    CompoundJointSpec,
    CONTINUOUS,
    CYLINDRICAL,
    FIXED,
    GIMBAL,
    JointSpec,
    PLANAR,
    PRISMATIC,
    REVOLUTE,
)
from .rules import JointRuleTable

_ROUND = 1e-4


def _rounded(x: float) -> float:
    return round(x / _ROUND) * _ROUND


def _center(node: LinkNode) -> np.ndarray:
    return node.bbox.center


# Axis policies: (parent, child) -> (anchor point, list of unit axes).

def _attach_center(parent: LinkNode, child: LinkNode):
    return _center(child), []


def _attach_top(parent: LinkNode, child: LinkNode):
    c = _center(child)
    return np.array([c[0], c[1], child.bbox.max[2]]), []


def _slide_front(parent: LinkNode, child: LinkNode):
    c = _center(child)
    return np.array([child.bbox.max[0], c[1], c[2]]), [np.array([1.0, 0.0, 0.0])]


def _hinge_side(parent: LinkNode, child: LinkNode):
    b = child.bbox
    c = b.center
    # Outer edge: farther from the object's y midline; ties take min-y.
    if abs(b.min[1]) >= abs(b.max[1]):
        y, axis = b.min[1], np.array([0.0, 0.0, -1.0])
    else:
        y, axis = b.max[1], np.array([0.0, 0.0, 1.0])
    return np.array([b.min[0], y, c[2]]), [axis]


def _hinge_bottom(parent: LinkNode, child: LinkNode):
    b = child.bbox
    c = b.center
    inset = 0.3 * float(b.extents[0])
    return np.array([b.min[0], c[1], b.min[2] + inset]), [np.array([0.0, 1.0, 0.0])]


def _vertical(parent: LinkNode, child: LinkNode):
    b = child.bbox
    c = b.center
    return np.array([c[0], c[1], b.min[2]]), [np.array([0.0, 0.0, 1.0])]


def _tilt_yx(parent: LinkNode, child: LinkNode):
    b = child.bbox
    c = b.center
    return (np.array([c[0], c[1], b.min[2]]),
            [np.array([0.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0])])


def _plane_xy(parent: LinkNode, child: LinkNode):
    b = child.bbox
    c = b.center
    return (np.array([c[0], c[1], b.min[2]]),
            [np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])])


AXIS_POLICIES = {
    "attach_center": _attach_center,
    "attach_top": _attach_top,
    "slide_front": _slide_front,
    "hinge_side": _hinge_side,
    "hinge_bottom": _hinge_bottom,
    "vertical": _vertical,
    "tilt_yx": _tilt_yx,
    "plane_xy": _plane_xy,
}


# Limit policies: (parent, child, rng) -> per-sub-joint limits.

def _limits_none(parent, child, rng):
    return [None]


def _drawer_travel(parent, child, rng):
    depth = float(child.bbox.extents[0])
    if depth <= 1e-6:
        raise InfeasibleLimits(f"drawer {child.id} has zero depth")
    travel = _rounded(rng.uniform(0.6, 0.95) * depth)
    travel = min(max(travel, _ROUND), 0.95 * depth)
    return [(0.0, travel)]


def _door_swing(parent, child, rng):
    # Swing capped at pi/2; hinge_side geometry keeps the panel inside its
    # own closed-position span for any angle in [0, pi/2].
    hi = _rounded(rng.uniform(1.2, 0.5 * math.pi))
    return [(0.0, min(hi, 0.5 * math.pi))]


def _door_drop(parent, child, rng):
    hi = _rounded(rng.uniform(1.25, 1.5))
    return [(0.0, hi)]


def _cyl_lift(parent, child, rng):
    height = float(child.bbox.extents[2])
    if height <= 1e-6:
        raise InfeasibleLimits(f"node {child.id} has zero height")
    travel = _rounded(rng.uniform(0.08, 0.18) * height)
    return [None, (0.0, max(travel, _ROUND))]


def _tilt_range(parent, child, rng):
    a = _rounded(rng.uniform(0.3, 0.55))
    b = _rounded(rng.uniform(0.3, 0.55))
    return [(-a, a), (-b, b)]


def _plane_travel(parent, child, rng):
    ext = child.bbox.extents
    u = _rounded(rng.uniform(0.1, 0.3) * float(ext[0]))
    v = _rounded(rng.uniform(0.1, 0.3) * float(ext[1]))
    return [(0.0, max(u, _ROUND)), (0.0, max(v, _ROUND))]


LIMIT_POLICIES = {
    "none": _limits_none,
    "drawer_travel": _drawer_travel,
    "door_swing": _door_swing,
    "door_drop": _door_drop,
    "cyl_lift": _cyl_lift,
    "tilt_range": _tilt_range,
    "plane_travel": _plane_travel,
}


def _build_spec(kind: str, anchor: np.ndarray, parent_anchor: np.ndarray,
                axes: list[np.ndarray], limits: list):
    origin = anchor - parent_anchor
    if kind == FIXED:
        spec = JointSpec(FIXED, origin_xyz=origin)
        spec.check()
        return spec
    if kind in (REVOLUTE, PRISMATIC, CONTINUOUS):
        if len(axes) != 1 or len(limits) != 1:
            raise UnexpandedCompound(f"{kind} expects one axis and one limit entry")
        spec = JointSpec(kind, origin_xyz=origin, axis=axes[0], limits=limits[0])
        spec.check()
        return spec
    if kind == CYLINDRICAL:
        first = JointSpec(CONTINUOUS, origin_xyz=origin, axis=axes[0])
        second = JointSpec(PRISMATIC, axis=axes[0], limits=limits[1])
        spec = CompoundJointSpec(CYLINDRICAL, [(first, "dummy"), (second, None)])
        spec.check()
        return spec
    if kind in (PLANAR, GIMBAL):
        sub_kind = PRISMATIC if kind == PLANAR else REVOLUTE
        first = JointSpec(sub_kind, origin_xyz=origin, axis=axes[0], limits=limits[0])
        second = JointSpec(sub_kind, axis=axes[1], limits=limits[1])
        spec = CompoundJointSpec(kind, [(first, "dummy"), (second, None)])
        spec.check()
        return spec
    raise UnexpandedCompound(f"unknown joint kind {kind!r}")


def _edge_spec(tree: ArticulationTree, node_id: int, rules: JointRuleTable,
               rng: SeededStream, parent_anchor: np.ndarray):
    parent = tree.nodes[tree.parent[node_id]]
    child = tree.nodes[node_id]
    rule = rules.for_edge(parent.label.part, child.label.part)
    anchor, axes = AXIS_POLICIES[rule.axis_policy](parent, child)
    limits = LIMIT_POLICIES[rule.limit_policy](parent, child, rng)
    if rule.kind in (CYLINDRICAL, PLANAR, GIMBAL) and len(limits) == 1:
        limits = [limits[0], limits[0]]
    return _build_spec(rule.kind, anchor, parent_anchor, axes, limits), anchor


def _world_anchor(tree: ArticulationTree, node_id: int, rules: JointRuleTable) -> np.ndarray:
    """Anchor of a node's link frame; no draws, derivable from boxes alone."""
    if tree.parent[node_id] is None:
        return np.zeros(3)
    parent = tree.nodes[tree.parent[node_id]]
    child = tree.nodes[node_id]
    rule = rules.for_edge(parent.label.part, child.label.part)
    anchor, _ = AXIS_POLICIES[rule.axis_policy](parent, child)
    return anchor


def synthesize_joint(tree: ArticulationTree, node_id: int, rules: JointRuleTable,
                     rng: SeededStream):
    """Joint spec for one edge (origin expressed in the parent link frame)."""
    parent_anchor = _world_anchor(tree, tree.parent[node_id], rules)
    spec, _ = _edge_spec(tree, node_id, rules, rng, parent_anchor)
    return spec


def synthesize_joints(tree: ArticulationTree, rules: JointRuleTable,
                      rng: SeededStream) -> ArticulationTree:
    """Synthesize every edge in pre-order (that is the documented draw order:
    one limit-policy draw sequence per edge)."""
    anchors: dict[int, np.ndarray] = {}
    for i in tree.pre_order():
        if tree.parent[i] is None:
            anchors[i] = np.zeros(3)
            continue
        spec, anchor = _edge_spec(tree, i, rules, rng, anchors[tree.parent[i]])
        anchors[i] = anchor
        tree.edge_spec[i] = spec
    return tree
