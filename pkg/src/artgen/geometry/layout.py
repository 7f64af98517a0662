"""Per-category layout templates: where each part's box goes and how big it is.

A template samples the object envelope (meters, +Z up, footprint centered on
the origin, base at z = 0) and gives every label a slot rule:

    category: cabinet
    envelope: x=[0.45..0.62] y=[0.7..1.1] z=[0.95..1.4]

    slot drawer:
      frame: parent                 # region fractions of parent bbox (default)
      region: x=[0.12..0.9] y=[0.1..0.9] z=[0.52..0.9]
      size: x=fill y=fill*0.94 z=fill*0.86
      anchor: x=lo y=mid z=mid
      repeat: z
      min_cell: 0.08                # meters; fewer fits -> SlotOverflow
      mesh: box
      palette: wood

Sizes are `fill`, `fill*<f>` (fraction of the cell) or `[lo..hi]` meters.
`frame: envelope` positions the region inside the whole-object envelope
instead of the parent box (needed for chain-structured objects such as lamps
whose parts stack along the parent chain). `mesh` is `none`, `box`
(optional `bevel=<m>`), `lathe <profile>`, or `asset <label>`; asset slots add
`mount <support-name> <fx> <fy> <fz>` target points as fractions of the
node's box.

Draw order (one stream, documented for reproducibility): envelope x, y, z;
then per node in pre-order, one uniform draw per metric-range size axis in
x, y, z order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import ConfigError, LabelNotInTemplate, SlotOverflow
from ..rng import SeededStream
from ..tree import ArticulationTree, DUMMY_PART, PLINTH_PART
from .mesh import Aabb

_RANGE_RE = re.compile(r"^\[([0-9.eE+-]+)\.\.([0-9.eE+-]+)\]$")
_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class SizeSpec:
    """Per-axis extent: cell fraction (`fill`, `fill*f`) or metric range."""

    mode: str  # "fill" or "range"
    frac: float = 1.0
    lo: float = 0.0
    hi: float = 0.0


@dataclass
class SlotRule:
    part: str
    frame: str = "parent"  # or "envelope"
    region_lo: np.ndarray = field(default_factory=lambda: np.zeros(3))
    region_hi: np.ndarray = field(default_factory=lambda: np.ones(3))
    size: tuple[SizeSpec, SizeSpec, SizeSpec] = (
        SizeSpec("fill"), SizeSpec("fill"), SizeSpec("fill"))
    anchor: tuple[str, str, str] = ("mid", "mid", "mid")
    repeat: str | None = None  # "x" | "y" | "z" | "corners"
    min_cell: float = 0.0
    corner_frac: float = 0.3
    mesh_kind: str = "none"  # none | box | lathe | asset
    mesh_params: dict = field(default_factory=dict)
    mesh_region_lo: np.ndarray = field(default_factory=lambda: np.zeros(3))
    mesh_region_hi: np.ndarray = field(default_factory=lambda: np.ones(3))
    palette: str = "painted"
    mounts: list[tuple[str, np.ndarray]] = field(default_factory=list)


@dataclass
class LayoutTemplate:
    category: str
    envelope: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]
    slots: dict[str, SlotRule]

    def check(self) -> None:
        for lo, hi in self.envelope:
            if not (0 < lo <= hi):
                raise ConfigError(f"bad envelope range [{lo}, {hi}]")
        for part, slot in self.slots.items():
            if np.any(slot.region_lo < 0) or np.any(slot.region_hi > 1) \
                    or np.any(slot.region_lo > slot.region_hi):
                raise ConfigError(f"slot {part!r}: region fractions outside [0, 1]")
            for spec in slot.size:
                if spec.mode == "range" and not (0 < spec.lo <= spec.hi):
                    raise ConfigError(f"slot {part!r}: empty size range")

    def with_overrides(self, overrides: dict[str, tuple[float, float]]) -> "LayoutTemplate":
        """Apply named style overrides: `envelope.<axis>` or `<part>.size.<axis>`."""
        if not overrides:
            return self
        env = list(self.envelope)
        slots = dict(self.slots)
        for name, (lo, hi) in overrides.items():
            if lo > hi:
                raise ConfigError(f"override {name!r}: empty range [{lo}, {hi}]")
            parts = name.split(".")
            if len(parts) == 2 and parts[0] == "envelope" and parts[1] in _AXES:
                env[_AXES.index(parts[1])] = (lo, hi)
            elif len(parts) == 3 and parts[0] in slots and parts[1] == "size" \
                    and parts[2] in _AXES:
                slot = slots[parts[0]]
                size = list(slot.size)
                size[_AXES.index(parts[2])] = SizeSpec("range", lo=lo, hi=hi)
                slots[parts[0]] = replace(slot, size=(size[0], size[1], size[2]))
            else:
                raise ConfigError(f"unknown style override {name!r}")
        out = LayoutTemplate(self.category, (env[0], env[1], env[2]), slots)
        out.check()
        return out


# -- file format --------------------------------------------------------------


def _parse_range(token: str, where: str) -> tuple[float, float]:
    m = _RANGE_RE.match(token)
    if not m:
        raise ConfigError(f"{where}: expected [lo..hi], got {token!r}")
    return float(m.group(1)), float(m.group(2))


def _parse_axis_ranges(value: str, where: str) -> dict[str, tuple[float, float]]:
    out = {}
    for token in value.split():
        if "=" not in token:
            raise ConfigError(f"{where}: expected axis=range, got {token!r}")
        axis, _, rng = token.partition("=")
        if axis not in _AXES:
            raise ConfigError(f"{where}: bad axis {axis!r}")
        out[axis] = _parse_range(rng, where)
    return out


def _parse_size_token(token: str, where: str) -> SizeSpec:
    if token == "fill":
        return SizeSpec("fill")
    if token.startswith("fill*"):
        return SizeSpec("fill", frac=float(token[5:]))
    if token.startswith("["):
        lo, hi = _parse_range(token, where)
        return SizeSpec("range", lo=lo, hi=hi)
    raise ConfigError(f"{where}: bad size spec {token!r}")


def parse_layout(text: str, source: str = "<layout>") -> LayoutTemplate:
    category: str | None = None
    envelope: dict[str, tuple[float, float]] | None = None
    slots: dict[str, SlotRule] = {}
    current: SlotRule | None = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        where = f"{source}:{lineno}"
        indented = line[0].isspace()
        stripped = line.strip()

        if not indented:
            current = None
            key, _, value = stripped.partition(":")
            key, value = key.strip(), value.strip()
            if key == "category":
                category = value
            elif key == "envelope":
                envelope = _parse_axis_ranges(value, where)
            elif key.startswith("slot "):
                part = key[len("slot "):].strip()
                if part in slots:
                    raise ConfigError(f"{where}: duplicate slot {part!r}")
                current = SlotRule(part=part)
                slots[part] = current
            else:
                raise ConfigError(f"{where}: unknown key {key!r}")
            continue

        if current is None:
            raise ConfigError(f"{where}: indented line outside a slot block")
        key, _, value = stripped.partition(":")
        key, value = key.strip(), value.strip()
        if key == "frame":
            if value not in ("parent", "envelope"):
                raise ConfigError(f"{where}: frame must be parent|envelope")
            current.frame = value
        elif key == "region" or key == "mesh_region":
            ranges = _parse_axis_ranges(value, where)
            lo = np.array([ranges.get(a, (0.0, 1.0))[0] for a in _AXES])
            hi = np.array([ranges.get(a, (0.0, 1.0))[1] for a in _AXES])
            if key == "region":
                current.region_lo, current.region_hi = lo, hi
            else:
                current.mesh_region_lo, current.mesh_region_hi = lo, hi
        elif key == "size":
            if value.startswith("fill") and "=" not in value:
                current.size = (_parse_size_token(value, where),) * 3
            else:
                specs = {a: SizeSpec("fill") for a in _AXES}
                for token in value.split():
                    axis, _, spec = token.partition("=")
                    if axis not in _AXES or not spec:
                        raise ConfigError(f"{where}: bad size token {token!r}")
                    specs[axis] = _parse_size_token(spec, where)
                current.size = (specs["x"], specs["y"], specs["z"])
        elif key == "anchor":
            anchors = {a: "mid" for a in _AXES}
            for token in value.split():
                axis, _, spot = token.partition("=")
                if axis not in _AXES or spot not in ("lo", "mid", "hi"):
                    raise ConfigError(f"{where}: bad anchor token {token!r}")
                anchors[axis] = spot
            current.anchor = (anchors["x"], anchors["y"], anchors["z"])
        elif key == "repeat":
            if value not in ("x", "y", "z", "corners"):
                raise ConfigError(f"{where}: bad repeat {value!r}")
            current.repeat = value
        elif key == "min_cell":
            current.min_cell = float(value)
        elif key == "corner_frac":
            current.corner_frac = float(value)
        elif key == "mesh":
            parts = value.split()
            kind = parts[0]
            if kind == "none":
                current.mesh_kind = "none"
            elif kind == "box":
                current.mesh_kind = "box"
                for p in parts[1:]:
                    k, _, v = p.partition("=")
                    if k != "bevel":
                        raise ConfigError(f"{where}: bad box param {p!r}")
                    current.mesh_params["bevel"] = float(v)
            elif kind == "lathe":
                if len(parts) != 2:
                    raise ConfigError(f"{where}: lathe needs a profile name")
                current.mesh_kind = "lathe"
                current.mesh_params["profile"] = parts[1]
            elif kind == "asset":
                if len(parts) != 2:
                    raise ConfigError(f"{where}: asset needs a label")
                current.mesh_kind = "asset"
                current.mesh_params["label"] = parts[1]
            else:
                raise ConfigError(f"{where}: unknown mesh kind {kind!r}")
        elif key == "palette":
            current.palette = value
        elif key == "mount":
            parts = value.split()
            if len(parts) != 4:
                raise ConfigError(f"{where}: mount needs name + 3 fractions")
            current.mounts.append((parts[0], np.array([float(x) for x in parts[1:]])))
        else:
            raise ConfigError(f"{where}: unknown slot key {key!r}")

    if category is None or envelope is None:
        raise ConfigError(f"{source}: layout needs category and envelope")
    for a in _AXES:
        if a not in envelope:
            raise ConfigError(f"{source}: envelope missing axis {a}")
    template = LayoutTemplate(
        category=category,
        envelope=(envelope["x"], envelope["y"], envelope["z"]),
        slots=slots,
    )
    template.check()
    return template


def load_layout(path: str | Path) -> LayoutTemplate:
    path = Path(path)
    return parse_layout(path.read_text(encoding="utf-8"), source=str(path))


# -- bbox assignment --------------------------------------------------------


def sample_envelope(template: LayoutTemplate, rng: SeededStream) -> Aabb:
    """Envelope box: footprint centered at the origin, base at z = 0."""
    ex = rng.uniform(*template.envelope[0])
    ey = rng.uniform(*template.envelope[1])
    ez = rng.uniform(*template.envelope[2])
    return Aabb([-0.5 * ex, -0.5 * ey, 0.0], [0.5 * ex, 0.5 * ey, ez])


def _cells(region: Aabb, slot: SlotRule, count: int, part: str) -> list[Aabb]:
    if count == 1 and slot.repeat is None:
        return [region]
    if slot.repeat is None:
        raise SlotOverflow(
            f"slot {part!r} has {count} siblings but no repeat axis")
    if slot.repeat == "corners":
        if count > 4:
            raise SlotOverflow(f"slot {part!r}: corners mode fits 4, got {count}")
        f = slot.corner_frac
        ext = region.extents
        if slot.min_cell and (f * ext[0] < slot.min_cell or f * ext[1] < slot.min_cell):
            raise SlotOverflow(f"slot {part!r}: corner cells below min_cell")
        quads = [(0.0, 0.0), (1.0 - f, 0.0), (0.0, 1.0 - f), (1.0 - f, 1.0 - f)]
        out = []
        for qx, qy in quads[:count]:
            out.append(region.sub_box([qx, qy, 0.0], [qx + f, qy + f, 1.0]))
        return out
    axis = _AXES.index(slot.repeat)
    extent = float(region.extents[axis])
    if count < 1:
        return []
    cell = extent / count
    if slot.min_cell and cell < slot.min_cell - 1e-12:
        raise SlotOverflow(
            f"slot {part!r}: {count} cells of {cell:.4f} m on {slot.repeat}, "
            f"min_cell {slot.min_cell} m")
    out = []
    for i in range(count):
        lo = [0.0, 0.0, 0.0]
        hi = [1.0, 1.0, 1.0]
        lo[axis] = i / count
        hi[axis] = (i + 1) / count
        out.append(region.sub_box(lo, hi))
    return out


def _place(cell: Aabb, slot: SlotRule, rng: SeededStream, part: str) -> Aabb:
    ext = cell.extents
    size = np.empty(3)
    for a in range(3):
        spec = slot.size[a]
        if spec.mode == "fill":
            size[a] = spec.frac * ext[a]
        else:
            if spec.lo > ext[a] + 1e-12:
                raise SlotOverflow(
                    f"slot {part!r}: size {spec.lo} m exceeds cell extent "
                    f"{ext[a]:.4f} m on axis {_AXES[a]}")
            size[a] = min(rng.uniform(spec.lo, spec.hi), ext[a])
    lo = np.empty(3)
    for a in range(3):
        if slot.anchor[a] == "lo":
            lo[a] = cell.min[a]
        elif slot.anchor[a] == "hi":
            lo[a] = cell.max[a] - size[a]
        else:
            lo[a] = cell.min[a] + 0.5 * (ext[a] - size[a])
    return Aabb(lo, lo + size)


def assign_bounding_boxes(tree: ArticulationTree, template: LayoutTemplate,
                          rng: SeededStream) -> ArticulationTree:
    """Assign a bbox to every non-dummy node; returns the same tree.

    Child boxes land in their slot's region (a fractional sub-box of the
    parent bbox, or of the envelope for `frame: envelope` slots). Siblings
    sharing a repeated slot get disjoint equal cells along the repeat axis.
    """
    envelope = sample_envelope(template, rng)
    synthetic = {DUMMY_PART, PLINTH_PART}
    for i in tree.pre_order():
        node = tree.nodes[i]
        part = node.label.part
        if part in synthetic:
            continue
        slot = template.slots.get(part)
        if slot is None:
            raise LabelNotInTemplate(f"no slot rule for label {part!r}")
        parent = tree.parent[i]
        if parent is None or slot.frame == "envelope":
            frame_box = envelope
        else:
            frame_box = tree.nodes[parent].bbox
            if frame_box is None:
                raise LabelNotInTemplate(
                    f"parent of {part!r} has no bbox (dummy parent?)")
        region = frame_box.sub_box(slot.region_lo, slot.region_hi)
        if parent is None:
            siblings = [i]
        else:
            siblings = [c for c in tree.children[parent]
                        if tree.nodes[c].label.part == part]
        cells = _cells(region, slot, len(siblings), part)
        cell = cells[siblings.index(i)]
        node.bbox = _place(cell, slot, rng, part)
    return tree
