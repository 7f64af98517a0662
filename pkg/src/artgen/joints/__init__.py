"""Joint assignment, synthesis from geometry, kinematics, compound expansion."""

from .model import (  # noqa: F401
    CompoundJointSpec,
    JointSpec,
    quat_from_axis_angle,
    quat_identity,
    quat_to_matrix,
    matrix_to_quat,
    COMPOUND_KINDS,
    SIMPLE_KINDS,
)
from .rules import EdgeRule, JointRuleTable, assign_joint_kinds, load_rules, parse_rules  # noqa: F401
from .kinematics import (  # noqa: F401
    cylindrical_motion,
    expand_compound,
    expand_compounds,
    forward_kinematics,
    gimbal_motion,
    joint_motion,
    planar_motion,
    pose_of_origin,
)
from .synth import synthesize_joint, synthesize_joints  # noqa: F401
