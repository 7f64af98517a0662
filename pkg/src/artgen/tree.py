"""Articulation-tree skeletons: growth from grammars, validation, canonical form.

A tree is stored as an adjacency structure over `LinkNode`s: a parallel
`parent` array (None exactly at the root) plus per-node child lists. Each
non-root node owns its parent edge; the edge carries a joint-kind tag
(`edge_kind`) from the moment kinds are assigned and a full joint object
(`edge_spec`) once synthesis has run.
"""

from __future__ import annotations

import copy as _copy
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import GrammarDiverges, LabelUnknown
from .rng import MASK64, SeededStream

DUMMY_PART = "dummy"
PLINTH_PART = "plinth"  # generator-inserted ground base, like "dummy" not grammar-owned
DEFAULT_MAX_NODES = 256

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


@dataclass(frozen=True)
class SemanticLabel:
    """Category-qualified part identifier, e.g. ("cabinet", "drawer")."""

    category: str
    part: str

    @property
    def full(self) -> str:
        return f"{self.category}/{self.part}"

    def __str__(self) -> str:
        return self.full


@dataclass
class LinkNode:
    id: int
    label: SemanticLabel
    bbox: object | None = None  # geometry.Aabb once layout has run
    mesh_ref: str | None = None
    material_ref: str | None = None

    @property
    def is_dummy(self) -> bool:
        return self.label.part == DUMMY_PART


class ArticulationTree:
    """Rooted labeled tree of links; edges are (future) joints."""

    def __init__(self) -> None:
        self.nodes: list[LinkNode] = []
        self.parent: list[Optional[int]] = []
        self.children: list[list[int]] = []
        self.edge_kind: list[Optional[str]] = []
        self.edge_spec: list[object | None] = []
        self.meshes: dict[int, object] = {}
        self.materials: dict[int, object] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def add_node(self, label: SemanticLabel, parent_id: Optional[int]) -> int:
        node_id = len(self.nodes)
        self.nodes.append(LinkNode(id=node_id, label=label))
        self.parent.append(parent_id)
        self.children.append([])
        self.edge_kind.append(None)
        self.edge_spec.append(None)
        if parent_id is not None:
            self.children[parent_id].append(node_id)
        return node_id

    @property
    def root_id(self) -> int:
        for i, p in enumerate(self.parent):
            if p is None:
                return i
        raise ValueError("tree has no root")

    def pre_order(self) -> Iterator[int]:
        """Depth-first traversal in stored child order."""
        stack = [self.root_id]
        while stack:
            i = stack.pop()
            yield i
            stack.extend(reversed(self.children[i]))

    def splice_child(self, parent_id: int, old_child: int, new_child: int) -> None:
        """Replace `old_child` with `new_child` in the parent's child list."""
        idx = self.children[parent_id].index(old_child)
        self.children[parent_id][idx] = new_child
        self.parent[new_child] = parent_id

    def copy(self) -> "ArticulationTree":
        return _copy.deepcopy(self)

    def joint_count(self) -> int:
        return len(self.nodes) - 1


# -- growth ---------------------------------------------------------------


def grow_tree(grammar, rng: SeededStream, max_nodes: int = DEFAULT_MAX_NODES) -> ArticulationTree:
    """Grow a tree from the grammar's root label.

    Nodes are expanded in creation (breadth-first) order. Per node the draw
    order is fixed: requested children in rule order (a scalar count consumes
    no draw, a range consumes one `randint`), then plausible branches in rule
    order (one `random()` for the activation, then a `randint` when the count
    spec is a real range). Identical (grammar, seed) pairs therefore yield
    identical trees.
    """
    tree = ArticulationTree()
    root = tree.add_node(grammar.root_label, None)
    queue: list[tuple[int, int]] = [(root, 0)]
    head = 0
    while head < len(queue):
        node_id, depth = queue[head]
        head += 1
        label = tree.nodes[node_id].label
        rule = grammar.rules.get(label.part)
        if rule is None:
            raise LabelUnknown(f"label {label.full!r} has no rule block")
        parts: list[str] = []
        for req in rule.requested:
            count = req.lo if req.lo == req.hi else rng.randint(req.lo, req.hi)
            parts.extend([req.child_part] * count)
        for pb in rule.plausible:
            if rng.random() < pb.probability:
                count = pb.lo if pb.lo == pb.hi else rng.randint(pb.lo, pb.hi)
                parts.extend([pb.child_part] * count)
        if parts and depth + 1 > grammar.max_depth:
            raise GrammarDiverges(
                f"node {label.full!r} at depth {depth} wants children beyond "
                f"max_depth {grammar.max_depth}"
            )
        for part in parts:
            if part not in grammar.alphabet:
                raise LabelUnknown(f"rule for {label.part!r} references undeclared {part!r}")
            if len(tree) >= max_nodes:
                raise GrammarDiverges(f"growth exceeded the {max_nodes} node cap")
            child = tree.add_node(SemanticLabel(grammar.category, part), node_id)
            queue.append((child, depth + 1))
    return tree


# -- validation -------------------------------------------------------------


@dataclass
class Violation:
    kind: str
    detail: str
    node_id: Optional[int] = None


@dataclass
class ValidationReport:
    entries: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.entries

    def add(self, kind: str, detail: str, node_id: Optional[int] = None) -> None:
        self.entries.append(Violation(kind, detail, node_id))

    def kinds(self) -> set[str]:
        return {v.kind for v in self.entries}

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"{v.kind}: {v.detail}" for v in self.entries)


def validate_tree(tree: ArticulationTree, grammar=None,
                  max_nodes: int = DEFAULT_MAX_NODES) -> ValidationReport:
    """Collect every structural (and, when a grammar is given, grammatical)
    invariant violation. All failures are report entries, never exceptions.

    Generator-inserted parts ("dummy", "plinth") are exempt from grammar
    conformance; they do not exist in any grammar's alphabet.
    """
    report = ValidationReport()
    n = len(tree)
    if n == 0:
        report.add("no_root", "tree has no nodes")
        return report
    if n > max_nodes:
        report.add("too_many_nodes", f"{n} nodes exceeds cap {max_nodes}")

    roots = [i for i, p in enumerate(tree.parent) if p is None]
    if len(roots) == 0:
        report.add("no_root", "every node has a parent")
    elif len(roots) > 1:
        report.add("multiple_roots", f"nodes {roots} all lack a parent")

    # Parent-pointer cycles: walk up at most n steps from every node.
    for i in range(n):
        seen = set()
        j: Optional[int] = i
        while j is not None:
            if j in seen:
                report.add("cycle_detected", f"parent chain from node {i} revisits {j}", i)
                break
            seen.add(j)
            j = tree.parent[j]

    if roots:
        reachable = set()
        stack = [roots[0]]
        while stack:
            i = stack.pop()
            if i in reachable:
                continue
            reachable.add(i)
            stack.extend(tree.children[i])
        for i in range(n):
            if i not in reachable:
                report.add("unreachable", f"node {i} not reachable from root", i)

    for node in tree.nodes:
        if node.is_dummy and node.mesh_ref is not None:
            report.add("dummy_with_mesh", f"dummy node {node.id} has mesh_ref", node.id)
        if node.bbox is not None and not node.bbox.is_valid():
            report.add("bad_bbox", f"node {node.id} bbox min > max", node.id)

    if grammar is not None:
        _check_grammar_conformance(tree, grammar, report)
    return report


def _check_grammar_conformance(tree: ArticulationTree, grammar, report: ValidationReport) -> None:
    synthetic = {DUMMY_PART, PLINTH_PART}
    for i, node in enumerate(tree.nodes):
        part = node.label.part
        if part in synthetic:
            continue
        if part not in grammar.alphabet:
            report.add("unknown_label", f"label {node.label.full!r} not in grammar", i)
            continue
        rule = grammar.rules.get(part)
        if rule is None:
            continue
        counts: dict[str, int] = {}
        for c in tree.children[i]:
            cpart = tree.nodes[c].label.part
            if cpart in synthetic:
                # Dummies splice into edges; conformance is judged pre-expansion.
                continue
            counts[cpart] = counts.get(cpart, 0) + 1
        declared = set()
        for req in rule.requested:
            declared.add(req.child_part)
            have = counts.get(req.child_part, 0)
            if have < req.lo:
                report.add("missing_requested_child",
                           f"node {i} ({part}) has {have} of requested "
                           f"{req.child_part!r}, needs >= {req.lo}", i)
            elif have > req.hi:
                report.add("count_out_of_range",
                           f"node {i} ({part}) has {have} of {req.child_part!r}, "
                           f"requested at most {req.hi}", i)
        for pb in rule.plausible:
            declared.add(pb.child_part)
            have = counts.get(pb.child_part, 0)
            if have and not (pb.lo <= have <= pb.hi):
                report.add("count_out_of_range",
                           f"node {i} ({part}) has {have} of plausible "
                           f"{pb.child_part!r}, range [{pb.lo}, {pb.hi}]", i)
        for cpart, have in counts.items():
            if cpart not in declared:
                report.add("unknown_label",
                           f"node {i} ({part}) has undeclared child {cpart!r}", i)


# -- canonical form -------------------------------------------------------


def _fnv1a(data: bytes, h: int = _FNV_OFFSET) -> int:
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & MASK64
    return h


def subtree_keys(tree: ArticulationTree) -> tuple[dict[int, int], dict[int, int]]:
    """Per-node (size, 64-bit structural hash), children considered in
    canonical order. The hash absorbs the label UTF-8, a zero byte, then each
    canonically-ordered child hash as 8 little-endian bytes.
    """
    sizes: dict[int, int] = {}
    hashes: dict[int, int] = {}
    # Iterative post-order so 10k-node chains don't hit the recursion limit.
    stack: list[tuple[int, bool]] = [(tree.root_id, False)]
    while stack:
        i, expanded = stack.pop()
        if not expanded:
            stack.append((i, True))
            for c in tree.children[i]:
                stack.append((c, False))
        else:
            kids = sorted(
                tree.children[i],
                key=lambda c: (tree.nodes[c].label.full, sizes[c], hashes[c]),
            )
            h = _fnv1a(tree.nodes[i].label.full.encode("utf-8"))
            h = _fnv1a(b"\x00", h)
            size = 1
            for c in kids:
                h = _fnv1a(hashes[c].to_bytes(8, "little"), h)
                size += sizes[c]
            sizes[i] = size
            hashes[i] = h
    return sizes, hashes


def structure_hash(tree: ArticulationTree) -> int:
    """64-bit hash of the canonical form (labels + topology only)."""
    _, hashes = subtree_keys(tree)
    return hashes[tree.root_id]


def canonicalize(tree: ArticulationTree) -> ArticulationTree:
    """Reorder every node's children by (label, subtree size, subtree hash)
    and renumber ids in pre-order. Structure-preserving and idempotent.
    """
    sizes, hashes = subtree_keys(tree)
    order: list[int] = []
    stack = [tree.root_id]
    while stack:
        i = stack.pop()
        order.append(i)
        kids = sorted(
            tree.children[i],
            key=lambda c: (tree.nodes[c].label.full, sizes[c], hashes[c]),
        )
        stack.extend(reversed(kids))

    remap = {old: new for new, old in enumerate(order)}
    out = ArticulationTree()
    for new_id, old_id in enumerate(order):
        node = tree.nodes[old_id]
        out.nodes.append(LinkNode(
            id=new_id, label=node.label, bbox=node.bbox,
            mesh_ref=node.mesh_ref, material_ref=node.material_ref,
        ))
        old_parent = tree.parent[old_id]
        out.parent.append(None if old_parent is None else remap[old_parent])
        out.children.append([])
        out.edge_kind.append(tree.edge_kind[old_id])
        out.edge_spec.append(_copy.deepcopy(tree.edge_spec[old_id]))
        if old_id in tree.meshes:
            out.meshes[new_id] = _copy.deepcopy(tree.meshes[old_id])
        if old_id in tree.materials:
            out.materials[new_id] = _copy.deepcopy(tree.materials[old_id])
    for new_id, p in enumerate(out.parent):
        if p is not None:
            out.children[p].append(new_id)
    # Pre-order numbering makes child lists already sorted ascending, which
    # coincides with canonical order by construction.
    for kids in out.children:
        kids.sort()
    return out


def structure_text(tree: ArticulationTree) -> str:
    """Deterministic serialization of labels + topology in stored order."""

    def render(i: int) -> str:
        kids = tree.children[i]
        inner = ",".join(render(c) for c in kids)
        base = tree.nodes[i].label.full
        return f"{base}({inner})" if kids else base

    return render(tree.root_id)
