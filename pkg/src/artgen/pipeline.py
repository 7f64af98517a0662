"""End-to-end object generation: grammar -> tree -> geometry -> joints ->
repairs -> verified bundle.

One seeded stream per object drives every stage in a fixed order (growth,
layout, meshes + materials per node in pre-order, joint limits per edge in
pre-order), so a (category, master seed, index) triple fully determines the
bundle bytes. Category packs are data: grammar.txt, layout.txt, rules.txt
under `data/categories/<name>/`, with retrievable meshes in `data/assets/`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ArtgenError, ConfigError
from .rng import SeededStream, object_stream
from .tree import ArticulationTree, canonicalize, grow_tree, structure_hash, validate_tree
from .grammar import GrowthGrammar, load_grammar
from .geometry.assets import AssetLibrary, align_support_points, retrieve_part
from .geometry.layout import LayoutTemplate, SlotRule, assign_bounding_boxes, load_layout
from .geometry.mesh import Aabb, build_box, build_lathe
from .joints.kinematics import expand_compounds, forward_kinematics
from .joints.rules import JointRuleTable, assign_joint_kinds, load_rules
from .joints.synth import synthesize_joints
from .plausibility import (
    SweepReport,
    ground_clearance_fix,
    insert_gaps,
    motion_sweep_check,
)
from .export.materials import PALETTES, sample_material
from .export.urdf import write_urdf
from .export.bundle import Bundle

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_LATHE_SEGMENTS = 48


@dataclass
class GenConfig:
    """Inputs of one generation run."""

    master_seed: int
    category: str
    object_count: int
    output_dir: Path
    style_overrides: dict[str, tuple[float, float]] = field(default_factory=dict)
    data_dir: Path | None = None
    samples_per_joint: int = 16

    def __post_init__(self) -> None:
        self.output_dir = Path(self.output_dir)
        if self.data_dir is not None:
            self.data_dir = Path(self.data_dir)
        if self.object_count < 1:
            raise ConfigError("object_count must be >= 1")
        for name, (lo, hi) in self.style_overrides.items():
            if lo > hi:
                raise ConfigError(f"override {name!r} has empty range")


@dataclass
class CategoryPack:
    name: str
    grammar: GrowthGrammar
    layout: LayoutTemplate
    rules: JointRuleTable
    assets: AssetLibrary


def available_categories(data_dir: Path | None = None) -> list[str]:
    base = (data_dir or DATA_DIR) / "categories"
    return sorted(p.name for p in base.iterdir() if p.is_dir())


@lru_cache(maxsize=32)
def _load_pack_cached(name: str, data_dir_str: str) -> CategoryPack:
    base = Path(data_dir_str)
    cat_dir = base / "categories" / name
    if not cat_dir.is_dir():
        raise ConfigError(
            f"unknown category {name!r}; available: {available_categories(base)}")
    return CategoryPack(
        name=name,
        grammar=load_grammar(cat_dir / "grammar.txt"),
        layout=load_layout(cat_dir / "layout.txt"),
        rules=load_rules(cat_dir / "rules.txt"),
        assets=AssetLibrary.load(base / "assets"),
    )


def load_category(name: str, data_dir: Path | None = None) -> CategoryPack:
    return _load_pack_cached(name, str(data_dir or DATA_DIR))


# -- mesh attachment -----------------------------------------------------------


def _lathe_profile(name: str, box: Aabb, rng: SeededStream) -> list[tuple[float, float]]:
    """Named revolve profiles; each consumes a documented number of draws."""
    z0, z1 = float(box.min[2]), float(box.max[2])
    rmax = 0.5 * float(min(box.extents[0], box.extents[1]))
    if name == "cylinder":
        return [(rmax, z0), (rmax, z1)]
    if name == "taper":
        top = rmax * rng.uniform(0.6, 0.9)
        return [(rmax, z0), (top, z1)]
    if name == "disk":
        top = rmax * rng.uniform(0.82, 0.95)
        return [(rmax, z0), (top, z1)]
    if name == "shade":
        top = rmax * rng.uniform(0.35, 0.5)
        return [(rmax, z0), (top, z1)]
    if name == "bulb":
        steps = 8
        pts = []
        for k in range(steps + 1):
            t = k / steps
            r = rmax * float(np.sin(np.pi * t))
            pts.append((max(r, 0.0), z0 + t * (z1 - z0)))
        return pts
    raise ConfigError(f"unknown lathe profile {name!r}")


def attach_meshes(tree: ArticulationTree, layout: LayoutTemplate,
                  assets: AssetLibrary, rng: SeededStream) -> ArticulationTree:
    """Build or retrieve a mesh (plus material) for every slotted node.

    Draw order per node (pre-order): mesh draws (profile jitter or asset
    pick), then material draws. Meshes are built in world coordinates here
    and rebased to link frames after joint synthesis.
    """
    for i in tree.pre_order():
        node = tree.nodes[i]
        slot = layout.slots.get(node.label.part)
        if slot is None or slot.mesh_kind == "none" or node.bbox is None:
            continue
        box = node.bbox.sub_box(slot.mesh_region_lo, slot.mesh_region_hi)
        if slot.mesh_kind == "box":
            mesh = build_box(box, bevel=slot.mesh_params.get("bevel", 0.0))
            node.mesh_ref = "box"
        elif slot.mesh_kind == "lathe":
            profile_name = slot.mesh_params["profile"]
            profile = _lathe_profile(profile_name, box, rng)
            mesh = build_lathe(profile, segments=DEFAULT_LATHE_SEGMENTS)
            center = box.center
            mesh.vertices[:, 0] += center[0]
            mesh.vertices[:, 1] += center[1]
            node.mesh_ref = f"lathe:{profile_name}"
        elif slot.mesh_kind == "asset":
            entry = retrieve_part(assets, slot.mesh_params["label"], rng)
            if not slot.mounts:
                raise ConfigError(
                    f"slot {node.label.part!r} retrieves an asset but has no mounts")
            sources = [entry.support(name) for name, _ in slot.mounts]
            targets = [box.min + frac * box.extents for _, frac in slot.mounts]
            result = align_support_points(assets.mesh(entry), sources, targets)
            mesh = result.mesh
            node.mesh_ref = f"asset:{entry.id}"
        else:
            raise ConfigError(f"unknown mesh kind {slot.mesh_kind!r}")
        tree.meshes[i] = mesh
        palette = PALETTES.get(slot.palette)
        if palette is None:
            raise ConfigError(f"unknown palette {slot.palette!r}")
        tree.materials[i] = sample_material(rng, palette)
        node.material_ref = f"mat_{i}"
    return tree


def rebase_meshes(tree: ArticulationTree) -> ArticulationTree:
    """Move world-coordinate meshes into their links' rest frames."""
    poses = forward_kinematics(tree, {})
    for i, mesh in tree.meshes.items():
        m = poses[i]
        r = m[:3, :3]
        t = m[:3, 3]
        mesh.vertices = (mesh.vertices - t) @ r  # == R^T (v - t)
        if mesh.normals is not None:
            mesh.normals = mesh.normals @ r
    return tree


# -- per-object pipeline --------------------------------------------------


@dataclass
class ObjectResult:
    index: int
    seed: int
    bundle_dir: Path | None
    nodes: int
    joints: int
    moving_joints: int
    repair: str
    sweep_ok: bool
    sweep_violations: int
    tree: ArticulationTree | None = None


def generate_object(pack: CategoryPack, config: GenConfig, index: int,
                    write: bool = True) -> ObjectResult:
    rng = object_stream(config.master_seed, index)
    layout = pack.layout.with_overrides(config.style_overrides)

    tree = grow_tree(pack.grammar, rng)
    tree = canonicalize(tree)
    report = validate_tree(tree, pack.grammar)
    if not report.ok:
        raise ArtgenError(f"object {index}: grown tree fails validation: {report}")

    assign_bounding_boxes(tree, layout, rng)
    attach_meshes(tree, layout, pack.assets, rng)
    assign_joint_kinds(tree, pack.rules)
    synthesize_joints(tree, pack.rules, rng)
    expand_compounds(tree)
    rebase_meshes(tree)
    insert_gaps(tree)

    before_nodes = len(tree)
    before_limits = [None if tree.edge_spec[i] is None else tree.edge_spec[i].limits
                     for i in range(len(tree))]
    ground_clearance_fix(tree, pack.grammar.ground_fix)
    after_limits = [None if tree.edge_spec[i] is None else tree.edge_spec[i].limits
                    for i in range(before_nodes)]
    changed = len(tree) != before_nodes or before_limits != after_limits
    repair = pack.grammar.ground_fix if changed else "none"

    sweep = motion_sweep_check(tree, config.samples_per_joint)

    bundle_dir = None
    if write:
        bundle_dir = config.output_dir / f"{pack.name}_{index:04d}"
        meta = {
            "category": pack.name,
            "seed": config.master_seed,
            "object_index": index,
            "generator_version": __version__,
            "structure_hash": f"0x{structure_hash(tree):016x}",
        }
        write_urdf(tree, bundle_dir, meta=meta)

    moving = sum(1 for i in tree.pre_order()
                 if tree.edge_spec[i] is not None and tree.edge_spec[i].kind != "fixed")
    return ObjectResult(
        index=index,
        seed=config.master_seed,
        bundle_dir=bundle_dir,
        nodes=len(tree),
        joints=tree.joint_count(),
        moving_joints=moving,
        repair=repair,
        sweep_ok=sweep.ok,
        sweep_violations=len(sweep.violations),
        tree=tree,
    )


def _worker(args: tuple) -> ObjectResult:
    category, data_dir_str, config_fields, index = args
    pack = load_category(category, Path(data_dir_str) if data_dir_str else None)
    config = GenConfig(**config_fields)
    result = generate_object(pack, config, index)
    result.tree = None  # keep pickles small
    return result


def generate_corpus(config: GenConfig, threads: int = 1,
                    keep_trees: bool = False) -> list[ObjectResult]:
    """Generate `object_count` bundles; results ordered by object index
    regardless of scheduling."""
    pack = load_category(config.category, config.data_dir)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    indices = list(range(config.object_count))
    if threads <= 1:
        results = [generate_object(pack, config, i) for i in indices]
        if not keep_trees:
            for r in results:
                r.tree = None
        return results

    from concurrent.futures import ProcessPoolExecutor

    fields = dict(
        master_seed=config.master_seed,
        category=config.category,
        object_count=config.object_count,
        output_dir=config.output_dir,
        style_overrides=config.style_overrides,
        data_dir=config.data_dir,
        samples_per_joint=config.samples_per_joint,
    )
    args = [(config.category, str(config.data_dir) if config.data_dir else "",
             fields, i) for i in indices]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(_worker, args))
    return sorted(results, key=lambda r: r.index)
