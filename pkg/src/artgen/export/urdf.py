"""URDF writing and strict parsing.

Writer contract: one <link> per node (dummy links carry no geometry), one
<joint> per non-root node, elements in pre-order, floats printed with %.17g
(exact double round-trip, locale-independent), byte-identical output for
identical input. Origins are parent-frame; rotations export as fixed-axis
roll-pitch-yaw with a branch-stable conversion (at the pitch = +-pi/2
singularity roll is set to 0 and yaw absorbs the remaining angle).

Parser contract: accepts the subset the writer emits plus mesh-path geometry;
collects warnings for anything it skips, so `parse_urdf_report` doubles as a
strictness check on our own files.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from ..errors import (
    CycleDetected,
    MalformedXml,
    MultipleRoots,
    PathNotWritable,
    UnexpandedCompound,
    UnsupportedJointType,
)
from ..tree import ArticulationTree, SemanticLabel
from ..joints.model import (
    CompoundJointSpec,
    JointSpec,
    LIMITED_KINDS,
    SIMPLE_KINDS,
    matrix_to_quat,
    quat_to_matrix,
)
from ..objio import write_obj
from .materials import write_mtl
from .bundle import Bundle

_LIMIT_EFFORT = "100"
_LIMIT_VELOCITY = "1"
# Near-zero inertials keep simulators from rejecting shapeless links.
_DUMMY_MASS = "1e-06"
_DUMMY_INERTIA = "1e-09"
_LINK_MASS = "1"
_LINK_INERTIA = "0.01"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _vec(v) -> str:
    return " ".join(_fmt(x) for x in v)


def matrix_to_rpy(m: np.ndarray) -> tuple[float, float, float]:
    """Fixed-axis XYZ (URDF rpy). Gimbal lock: roll = 0, yaw absorbs."""
    sy = math.hypot(m[0, 0], m[1, 0])
    if sy > 1e-9:
        roll = math.atan2(m[2, 1], m[2, 2])
        pitch = math.atan2(-m[2, 0], sy)
        yaw = math.atan2(m[1, 0], m[0, 0])
    else:
        pitch = 0.5 * math.pi if m[2, 0] < 0 else -0.5 * math.pi
        roll = 0.0
        yaw = math.atan2(-m[0, 1], m[1, 1])
    return roll, pitch, yaw


def rpy_to_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    rz = np.array([[cy, -sy, 0], [sy, cy, 0], [0, 0, 1]])
    ry = np.array([[cp, 0, sp], [0, 1, 0], [-sp, 0, cp]])
    rx = np.array([[1, 0, 0], [0, cr, -sr], [0, sr, cr]])
    return rz @ ry @ rx


def link_name(label: SemanticLabel, node_id: int) -> str:
    return f"{label.category}.{label.part}_{node_id}"


def _label_from_name(name: str) -> SemanticLabel:
    base = name
    if "_" in base:
        head, _, tail = base.rpartition("_")
        if tail.isdigit():
            base = head
    if "." in base:
        cat, _, part = base.partition(".")
        return SemanticLabel(cat, part)
    return SemanticLabel("external", base)


def write_urdf(tree: ArticulationTree, out_dir: str | Path,
               meta: dict | None = None) -> Bundle:
    """Serialize a fully synthesized tree to `<out_dir>/object.urdf` plus one
    OBJ + MTL per meshed node under `meshes/`, and a manifest. Compound
    joints must already be expanded.
    """
    for i in tree.pre_order():
        if isinstance(tree.edge_spec[i], CompoundJointSpec):
            raise UnexpandedCompound(
                f"node {i} still carries a {tree.edge_spec[i].kind} joint")

    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "meshes").mkdir(exist_ok=True)
    except OSError as e:
        raise PathNotWritable(f"cannot create {out_dir}: {e}") from e

    order = list(tree.pre_order())
    names = {i: link_name(tree.nodes[i].label, i) for i in order}

    mesh_paths: dict[int, str] = {}
    material_paths: list[str] = []
    robot = ET.Element("robot", name=str(meta.get("name", "object")) if meta else "object")

    for i in order:
        node = tree.nodes[i]
        link = ET.SubElement(robot, "link", name=names[i])
        inertial = ET.SubElement(link, "inertial")
        has_mesh = i in tree.meshes
        mass = _LINK_MASS if has_mesh else _DUMMY_MASS
        inert = _LINK_INERTIA if has_mesh else _DUMMY_INERTIA
        ET.SubElement(inertial, "origin", xyz="0 0 0", rpy="0 0 0")
        ET.SubElement(inertial, "mass", value=mass)
        ET.SubElement(inertial, "inertia", ixx=inert, ixy="0", ixz="0",
                      iyy=inert, iyz="0", izz=inert)
        if not has_mesh:
            continue
        mesh = tree.meshes[i]
        stem = f"{node.label.part}_{i}"
        rel_obj = f"meshes/{stem}.obj"
        material = tree.materials.get(i)
        mat_name = node.material_ref or f"mat_{i}"
        if material is not None:
            write_mtl(material, mat_name, out_dir / "meshes" / f"{stem}.mtl")
            material_paths.append(f"meshes/{stem}.mtl")
            write_obj(mesh, out_dir / rel_obj, material_name=mat_name,
                      mtllib=f"{stem}.mtl")
        else:
            write_obj(mesh, out_dir / rel_obj)
        mesh_paths[i] = rel_obj

        for tag in ("visual", "collision"):
            sec = ET.SubElement(link, tag)
            ET.SubElement(sec, "origin", xyz="0 0 0", rpy="0 0 0")
            geom = ET.SubElement(sec, "geometry")
            ET.SubElement(geom, "mesh", filename=rel_obj)
            if tag == "visual" and material is not None:
                mat = ET.SubElement(sec, "material", name=mat_name)
                rgba = _vec(material.base_color) + " 1"
                ET.SubElement(mat, "color", rgba=rgba)

    for i in order:
        parent = tree.parent[i]
        if parent is None:
            continue
        spec = tree.edge_spec[i]
        if spec is None:
            raise UnexpandedCompound(f"node {i} has no joint to export")
        joint = ET.SubElement(robot, "joint", name=f"{names[i]}_joint", type=spec.kind)
        ET.SubElement(joint, "parent", link=names[parent])
        ET.SubElement(joint, "child", link=names[i])
        rpy = matrix_to_rpy(quat_to_matrix(spec.origin_quat))
        ET.SubElement(joint, "origin", xyz=_vec(spec.origin_xyz), rpy=_vec(rpy))
        if spec.kind != "fixed":
            ET.SubElement(joint, "axis", xyz=_vec(spec.axis))
        if spec.limits is not None:
            ET.SubElement(joint, "limit", lower=_fmt(spec.limits[0]),
                          upper=_fmt(spec.limits[1]),
                          effort=_LIMIT_EFFORT, velocity=_LIMIT_VELOCITY)

    ET.indent(robot, space="  ")
    xml_text = '<?xml version="1.0"?>\n' + ET.tostring(robot, encoding="unicode") + "\n"
    urdf_path = out_dir / "object.urdf"
    try:
        urdf_path.write_text(xml_text, encoding="utf-8")
    except OSError as e:
        raise PathNotWritable(f"cannot write {urdf_path}: {e}") from e

    manifest = dict(meta or {})
    manifest.pop("name", None)
    manifest.update({
        "nodes": len(tree),
        "joints": tree.joint_count(),
        "moving_joints": sum(
            1 for i in order
            if tree.edge_spec[i] is not None and tree.edge_spec[i].kind != "fixed"),
    })
    noise_notes = {}
    for i in order:
        material = tree.materials.get(i)
        if material is not None:
            noise_notes[tree.nodes[i].material_ref or f"mat_{i}"] = material.noise_amplitude
    bundle = Bundle(
        directory=out_dir,
        urdf_path="object.urdf",
        mesh_paths={i: p for i, p in mesh_paths.items()},
        material_paths=material_paths,
        manifest=manifest,
        material_noise=noise_notes,
    )
    bundle.write_manifest()
    return bundle


# -- parsing -----------------------------------------------------------------


def _req_attr(el: ET.Element, attr: str, where: str) -> str:
    v = el.get(attr)
    if v is None:
        raise MalformedXml(f"{where}: missing attribute {attr!r}")
    return v


def _floats(text: str, n: int, where: str) -> np.ndarray:
    parts = text.split()
    if len(parts) != n:
        raise MalformedXml(f"{where}: expected {n} floats, got {text!r}")
    return np.array([float(p) for p in parts])


def parse_urdf_report(path: str | Path) -> tuple[ArticulationTree, list[str]]:
    """Parse a URDF file; returns (tree, warnings). Raises on structural
    defects (multiple roots, cycles, unsupported joint types, bad XML)."""
    path = Path(path)
    warnings: list[str] = []
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as e:
        raise MalformedXml(f"{path}: {e}") from e
    if root.tag != "robot":
        raise MalformedXml(f"{path}: top element is {root.tag!r}, not robot")

    links: list[tuple[str, str | None]] = []
    joints: list[dict] = []
    for el in root:
        if el.tag == "link":
            name = _req_attr(el, "name", path.name)
            mesh_ref = None
            for sub in el:
                if sub.tag == "visual":
                    m = sub.find("./geometry/mesh")
                    if m is not None:
                        mesh_ref = m.get("filename")
                elif sub.tag in ("collision", "inertial"):
                    continue
                else:
                    warnings.append(f"{path.name}: link {name}: skipped <{sub.tag}>")
            links.append((name, mesh_ref))
        elif el.tag == "joint":
            name = _req_attr(el, "name", path.name)
            jtype = _req_attr(el, "type", path.name)
            if jtype not in SIMPLE_KINDS:
                raise UnsupportedJointType(
                    f"{path.name}: joint {name!r} has unsupported type {jtype!r}")
            where = f"{path.name}:{name}"
            parent = child = None
            xyz = np.zeros(3)
            rpy = np.zeros(3)
            axis = None
            limits = None
            for sub in el:
                if sub.tag == "parent":
                    parent = _req_attr(sub, "link", where)
                elif sub.tag == "child":
                    child = _req_attr(sub, "link", where)
                elif sub.tag == "origin":
                    if sub.get("xyz"):
                        xyz = _floats(sub.get("xyz"), 3, where)
                    if sub.get("rpy"):
                        rpy = _floats(sub.get("rpy"), 3, where)
                elif sub.tag == "axis":
                    axis = _floats(_req_attr(sub, "xyz", where), 3, where)
                elif sub.tag == "limit":
                    limits = (float(_req_attr(sub, "lower", where)),
                              float(_req_attr(sub, "upper", where)))
                else:
                    warnings.append(f"{where}: skipped <{sub.tag}>")
            if parent is None or child is None:
                raise MalformedXml(f"{where}: joint needs parent and child")
            joints.append(dict(name=name, type=jtype, parent=parent, child=child,
                               xyz=xyz, rpy=rpy, axis=axis, limits=limits))
        elif el.tag == "material":
            continue
        else:
            warnings.append(f"{path.name}: skipped top-level <{el.tag}>")

    if not links:
        raise MalformedXml(f"{path}: no links")
    by_name = {}
    for name, _ in links:
        if name in by_name:
            raise MalformedXml(f"{path}: duplicate link name {name!r}")
        by_name[name] = None

    child_names = set()
    for j in joints:
        for end in ("parent", "child"):
            if j[end] not in by_name:
                raise MalformedXml(f"{path}: joint {j['name']!r} references "
                                   f"unknown link {j[end]!r}")
        if j["child"] in child_names:
            raise MalformedXml(f"{path}: link {j['child']!r} has two parent joints")
        child_names.add(j["child"])

    roots = [name for name, _ in links if name not in child_names]
    if len(roots) > 1:
        raise MultipleRoots(f"{path}: links {roots} all lack a parent joint")
    if not roots:
        raise CycleDetected(f"{path}: every link is some joint's child")

    tree = ArticulationTree()
    ids: dict[str, int] = {}
    for name, mesh_ref in links:
        i = tree.add_node(_label_from_name(name), None)
        tree.nodes[i].mesh_ref = mesh_ref
        ids[name] = i
    tree.children = [[] for _ in tree.nodes]
    for j in joints:
        ci, pi = ids[j["child"]], ids[j["parent"]]
        tree.parent[ci] = pi
        tree.children[pi].append(ci)
        quat = matrix_to_quat(rpy_to_matrix(*j["rpy"]))
        spec = JointSpec(j["type"], origin_xyz=j["xyz"], origin_quat=quat,
                         axis=j["axis"], limits=j["limits"])
        if (spec.limits is not None) != (spec.kind in LIMITED_KINDS):
            raise MalformedXml(
                f"{path}: joint {j['name']!r} limit presence contradicts type")
        spec.check()
        tree.edge_kind[ci] = j["type"]
        tree.edge_spec[ci] = spec

    reachable = set()
    stack = [ids[roots[0]]]
    while stack:
        i = stack.pop()
        if i in reachable:
            continue
        reachable.add(i)
        stack.extend(tree.children[i])
    if len(reachable) != len(tree):
        raise CycleDetected(f"{path}: {len(tree) - len(reachable)} links are "
                            f"unreachable from the root (cycle or orphan)")
    return tree, warnings


def parse_urdf(path: str | Path) -> ArticulationTree:
    tree, _ = parse_urdf_report(path)
    return tree
