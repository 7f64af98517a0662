"""Forward kinematics and compound-joint expansion.

Poses are 4x4 homogeneous matrices. A child's pose is
`parent_pose @ origin @ motion(kind, axis, value)`; fixed joints contribute
their origin only.
"""

from __future__ import annotations

import numpy as np

from ..errors import UnexpandedCompound, ValueOutOfLimits
from ..tree import ArticulationTree, SemanticLabel, DUMMY_PART
from .model import (
    CompoundJointSpec,
    CONTINUOUS,
    FIXED,
    JointSpec,
    PRISMATIC,
    REVOLUTE,
    quat_to_matrix,
)

_LIMIT_EPS = 1e-9


def pose_of_origin(spec: JointSpec) -> np.ndarray:
    m = np.eye(4)
    m[:3, :3] = quat_to_matrix(spec.origin_quat)
    m[:3, 3] = spec.origin_xyz
    return m


def _axis_rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    x, y, z = axis
    c, s = np.cos(angle), np.sin(angle)
    cc = 1.0 - c
    return np.array([
        [c + x * x * cc, x * y * cc - z * s, x * z * cc + y * s],
        [y * x * cc + z * s, c + y * y * cc, y * z * cc - x * s],
        [z * x * cc - y * s, z * y * cc + x * s, c + z * z * cc],
    ])


def joint_motion(spec: JointSpec, value: float) -> np.ndarray:
    """4x4 motion transform of a simple joint at the given value."""
    m = np.eye(4)
    if spec.kind == FIXED:
        return m
    if spec.kind == PRISMATIC:
        m[:3, 3] = spec.axis * value
        return m
    if spec.kind in (REVOLUTE, CONTINUOUS):
        m[:3, :3] = _axis_rotation(spec.axis, value)
        return m
    raise UnexpandedCompound(f"cannot evaluate motion of kind {spec.kind!r}")


def forward_kinematics(tree: ArticulationTree,
                       config: dict[int, float] | None = None) -> dict[int, np.ndarray]:
    """World pose per node id. `config` maps child-node id -> joint value;
    unconfigured joints sit at their rest value (0, or the lower limit when 0
    is outside the limits). Values outside a joint's limits raise.
    """
    config = config or {}
    poses: dict[int, np.ndarray] = {}
    for i in tree.pre_order():
        parent = tree.parent[i]
        if parent is None:
            poses[i] = np.eye(4)
            continue
        spec = tree.edge_spec[i]
        if spec is None:
            raise UnexpandedCompound(f"node {i} has no synthesized joint")
        if isinstance(spec, CompoundJointSpec):
            raise UnexpandedCompound(
                f"node {i} carries an unexpanded {spec.kind} joint")
        value = config.get(i, spec.rest_value())
        if spec.limits is not None:
            lo, hi = spec.limits
            if not (lo - _LIMIT_EPS <= value <= hi + _LIMIT_EPS):
                raise ValueOutOfLimits(
                    f"node {i}: value {value} outside [{lo}, {hi}]")
        poses[i] = poses[parent] @ pose_of_origin(spec) @ joint_motion(spec, value)
    return poses


# -- compound expansion ------------------------------------------------------


def expand_compound(spec: CompoundJointSpec, parent_id: int,
                    child_id: int) -> list[tuple[JointSpec, str | None]]:
    """Validated chain for splicing between parent and child."""
    spec.check()
    return list(spec.chain)


def expand_compounds(tree: ArticulationTree) -> ArticulationTree:
    """Splice every compound edge into simple joints + dummy links, in place.

    Dummy links carry no mesh; intermediate joints keep the compound's
    anchor (first joint) or an identity pose (the rest), so the chain's
    composite motion equals the compound kind's motion subspace.
    """
    compound_children = [i for i in tree.pre_order()
                         if isinstance(tree.edge_spec[i], CompoundJointSpec)]
    for child in compound_children:
        spec: CompoundJointSpec = tree.edge_spec[child]
        chain = expand_compound(spec, tree.parent[child], child)
        current_parent = tree.parent[child]
        category = tree.nodes[child].label.category
        for joint_spec, dummy_name in chain[:-1]:
            dummy = tree.add_node(SemanticLabel(category, DUMMY_PART), current_parent)
            # Keep the child's position among its siblings: the dummy takes
            # the child's place and adopts it.
            tree.children[current_parent].remove(dummy)
            tree.splice_child(current_parent, child, dummy)
            tree.parent[child] = dummy
            tree.children[dummy] = [child]
            tree.edge_kind[dummy] = joint_spec.kind
            tree.edge_spec[dummy] = joint_spec
            current_parent = dummy
        last_spec, _ = chain[-1]
        tree.edge_kind[child] = last_spec.kind
        tree.edge_spec[child] = last_spec
    return tree


# -- closed-form compound motions (verification oracles live in tests; these
#    are the library's own statements of each kind's motion subspace) -------


def cylindrical_motion(axis, angle: float, travel: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    m = np.eye(4)
    m[:3, :3] = _axis_rotation(axis, angle)
    m[:3, 3] = axis * travel
    return m


def planar_motion(axis_u, axis_v, u: float, v: float) -> np.ndarray:
    m = np.eye(4)
    m[:3, 3] = np.asarray(axis_u, dtype=np.float64) * u \
        + np.asarray(axis_v, dtype=np.float64) * v
    return m


def gimbal_motion(axis_a, axis_b, alpha: float, beta: float) -> np.ndarray:
    m = np.eye(4)
    m[:3, :3] = _axis_rotation(np.asarray(axis_a, dtype=np.float64), alpha) \
        @ _axis_rotation(np.asarray(axis_b, dtype=np.float64), beta)
    return m
