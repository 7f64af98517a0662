"""Joint rule tables: (parent label, child label) -> kind + named policies.

File format, one line per edge, unknown policy names rejected at load:

    edge body drawer kind=prismatic axis=slide_front limits=drawer_travel
    edge body leg kind=fixed axis=attach_top limits=none
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigError, MissingRule
from ..tree import ArticulationTree
from .model import COMPOUND_KINDS, SIMPLE_KINDS


@dataclass(frozen=True)
class EdgeRule:
    kind: str
    axis_policy: str
    limit_policy: str


class JointRuleTable:
    def __init__(self, rules: dict[tuple[str, str], EdgeRule]):
        self.rules = rules

    def for_edge(self, parent_part: str, child_part: str) -> EdgeRule:
        rule = self.rules.get((parent_part, child_part))
        if rule is None:
            raise MissingRule(parent_part, child_part)
        return rule


def parse_rules(text: str, source: str = "<rules>") -> JointRuleTable:
    from .synth import AXIS_POLICIES, LIMIT_POLICIES  # registry lives with the policies

    rules: dict[tuple[str, str], EdgeRule] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        parts = line.split()
        if parts[0] != "edge" or len(parts) != 6:
            raise ConfigError(
                f"{where}: expected 'edge <parent> <child> kind=.. axis=.. limits=..'")
        parent, child = parts[1], parts[2]
        fields = {}
        for token in parts[3:]:
            key, _, value = token.partition("=")
            if key not in ("kind", "axis", "limits") or not value:
                raise ConfigError(f"{where}: bad field {token!r}")
            fields[key] = value
        if set(fields) != {"kind", "axis", "limits"}:
            raise ConfigError(f"{where}: kind/axis/limits all required")
        kind = fields["kind"]
        if kind not in SIMPLE_KINDS + COMPOUND_KINDS:
            raise ConfigError(f"{where}: unknown joint kind {kind!r}")
        if fields["axis"] not in AXIS_POLICIES:
            raise ConfigError(f"{where}: unknown axis policy {fields['axis']!r}")
        if fields["limits"] not in LIMIT_POLICIES:
            raise ConfigError(f"{where}: unknown limit policy {fields['limits']!r}")
        key = (parent, child)
        if key in rules:
            raise ConfigError(f"{where}: duplicate edge {parent} -> {child}")
        rules[key] = EdgeRule(kind, fields["axis"], fields["limits"])
    return JointRuleTable(rules)


def load_rules(path: str | Path) -> JointRuleTable:
    path = Path(path)
    return parse_rules(path.read_text(encoding="utf-8"), source=str(path))


def assign_joint_kinds(tree: ArticulationTree, rules: JointRuleTable) -> ArticulationTree:
    """Tag every non-root edge with its rule's joint kind (pure in inputs:
    repeated calls give identical tags)."""
    for i in tree.pre_order():
        parent = tree.parent[i]
        if parent is None:
            continue
        rule = rules.for_edge(tree.nodes[parent].label.part, tree.nodes[i].label.part)
        tree.edge_kind[i] = rule.kind
    return tree
