"""Category growth grammars and their on-disk text format.

One file per category. The schema is line-oriented and strict (unknown keys
are rejected):

    category: cabinet
    root: body
    max_depth: 6
    ground_fix: base_insert        # or limit_clamp

    label body:
      requested: [floor x1, leg x4]
      plausible: [drawer p=0.7 x[1..4], door p=0.6 x[0..2]]

    label leg:

Count specs are `xN` (exact) or `x[lo..hi]` (uniform integer range). Every
referenced child label must have its own `label` block, possibly empty; the
block set is the grammar's alphabet. Blank lines and `#` comments are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, LabelUnknown
from .tree import SemanticLabel

GROUND_FIX_POLICIES = ("base_insert", "limit_clamp")


@dataclass(frozen=True)
class RequestedChild:
    child_part: str
    lo: int
    hi: int


@dataclass(frozen=True)
class PlausibleBranch:
    child_part: str
    probability: float
    lo: int
    hi: int


@dataclass
class Rule:
    requested: list[RequestedChild] = field(default_factory=list)
    plausible: list[PlausibleBranch] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.requested and not self.plausible


@dataclass
class GrowthGrammar:
    category: str
    root_label: SemanticLabel
    rules: dict[str, Rule]
    max_depth: int = 8
    ground_fix: str = "base_insert"

    @property
    def alphabet(self) -> set[str]:
        return set(self.rules)

    def check(self) -> None:
        """Raise on violated grammar invariants."""
        if self.root_label.part not in self.rules:
            raise LabelUnknown(f"root {self.root_label.part!r} has no label block")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.ground_fix not in GROUND_FIX_POLICIES:
            raise ConfigError(f"unknown ground_fix policy {self.ground_fix!r}")
        for part, rule in self.rules.items():
            for req in rule.requested:
                if req.child_part not in self.rules:
                    raise LabelUnknown(
                        f"rule {part!r} requests undeclared label {req.child_part!r}")
                if not (0 <= req.lo <= req.hi):
                    raise ConfigError(
                        f"rule {part!r}: bad count range [{req.lo}, {req.hi}]")
            for pb in rule.plausible:
                if pb.child_part not in self.rules:
                    raise LabelUnknown(
                        f"rule {part!r} references undeclared label {pb.child_part!r}")
                if not (0.0 <= pb.probability <= 1.0):
                    raise ConfigError(
                        f"rule {part!r}: probability {pb.probability} outside [0, 1]")
                if not (0 <= pb.lo <= pb.hi):
                    raise ConfigError(
                        f"rule {part!r}: bad count range [{pb.lo}, {pb.hi}]")


_COUNT_RE = re.compile(r"^x(?:(\d+)|\[(\d+)\.\.(\d+)\])$")
_PROB_RE = re.compile(r"^p=([0-9.eE+-]+)$")
_IDENT_RE = re.compile(r"^[a-z][a-z0-9_]*$")


def _parse_count(token: str, where: str) -> tuple[int, int]:
    m = _COUNT_RE.match(token)
    if not m:
        raise ConfigError(f"{where}: bad count spec {token!r}")
    if m.group(1) is not None:
        n = int(m.group(1))
        return n, n
    return int(m.group(2)), int(m.group(3))


def _parse_list(body: str, where: str) -> list[list[str]]:
    body = body.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ConfigError(f"{where}: expected [...], got {body!r}")
    inner = body[1:-1].strip()
    if not inner:
        return []
    return [item.split() for item in inner.split(",")]


def parse_grammar(text: str, source: str = "<string>") -> GrowthGrammar:
    category: str | None = None
    root_part: str | None = None
    max_depth = 8
    ground_fix = "base_insert"
    rules: dict[str, Rule] = {}
    current: Rule | None = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        where = f"{source}:{lineno}"
        indented = line[0].isspace()
        stripped = line.strip()

        if not indented:
            current = None
            if ":" not in stripped:
                raise ConfigError(f"{where}: expected 'key: value'")
            key, _, value = stripped.partition(":")
            key, value = key.strip(), value.strip()
            if key == "category":
                category = value
            elif key == "root":
                root_part = value
            elif key == "max_depth":
                max_depth = int(value)
            elif key == "ground_fix":
                ground_fix = value
            elif key.startswith("label "):
                part = key[len("label "):].strip()
                if not _IDENT_RE.match(part):
                    raise ConfigError(f"{where}: bad label identifier {part!r}")
                if part in rules:
                    raise ConfigError(f"{where}: duplicate label block {part!r}")
                if value:
                    raise ConfigError(f"{where}: label line takes no value")
                current = Rule()
                rules[part] = current
            else:
                raise ConfigError(f"{where}: unknown key {key!r}")
            continue

        if current is None:
            raise ConfigError(f"{where}: indented line outside a label block")
        key, _, value = stripped.partition(":")
        key = key.strip()
        if key == "requested":
            for item in _parse_list(value, where):
                if len(item) != 2:
                    raise ConfigError(f"{where}: requested entry needs 'label xN'")
                lo, hi = _parse_count(item[1], where)
                current.requested.append(RequestedChild(item[0], lo, hi))
        elif key == "plausible":
            for item in _parse_list(value, where):
                if len(item) != 3:
                    raise ConfigError(f"{where}: plausible entry needs 'label p=<f> xSpec'")
                m = _PROB_RE.match(item[1])
                if not m:
                    raise ConfigError(f"{where}: bad probability {item[1]!r}")
                lo, hi = _parse_count(item[2], where)
                current.plausible.append(
                    PlausibleBranch(item[0], float(m.group(1)), lo, hi))
        else:
            raise ConfigError(f"{where}: unknown key {key!r} in label block")

    if category is None:
        raise ConfigError(f"{source}: missing 'category'")
    if root_part is None:
        raise ConfigError(f"{source}: missing 'root'")
    grammar = GrowthGrammar(
        category=category,
        root_label=SemanticLabel(category, root_part),
        rules=rules,
        max_depth=max_depth,
        ground_fix=ground_fix,
    )
    grammar.check()
    return grammar


def load_grammar(path: str | Path) -> GrowthGrammar:
    path = Path(path)
    return parse_grammar(path.read_text(encoding="utf-8"), source=str(path))
