"""Tree edit distance over canonically ordered labeled trees.

Zhang-Shasha with unit insert/delete/relabel costs. Callers should
canonicalize trees first (module `tree`); sibling order then carries no
accidental information, which makes the ordered-tree distance well defined
for our corpora. Trees above 10 000 nodes are rejected.
"""

from __future__ import annotations

import numpy as np

from ..errors import TreeTooLarge
from ..tree import ArticulationTree
from .. import _kernels

MAX_TED_NODES = 10_000


def encode_postorder(tree: ArticulationTree,
                     label_codes: dict[str, int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(lmld, labels, keyroots) in postorder; label_codes is extended in
    place so multiple trees share one label alphabet."""
    order: list[int] = []
    stack: list[tuple[int, bool]] = [(tree.root_id, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
        else:
            stack.append((node, True))
            for c in reversed(tree.children[node]):
                stack.append((c, False))
    pos = {node: k for k, node in enumerate(order)}
    n = len(order)
    lmld = np.empty(n, dtype=np.int32)
    labels = np.empty(n, dtype=np.int32)
    for k, node in enumerate(order):
        full = tree.nodes[node].label.full
        labels[k] = label_codes.setdefault(full, len(label_codes))
        kids = tree.children[node]
        lmld[k] = lmld[pos[kids[0]]] if kids else k
    last_for_lmld: dict[int, int] = {}
    for k in range(n):
        last_for_lmld[int(lmld[k])] = k
    keyroots = np.array(sorted(last_for_lmld.values()), dtype=np.int32)
    return lmld, labels, keyroots


def tree_edit_distance(a: ArticulationTree, b: ArticulationTree) -> int:
    """Minimal node insert/delete/relabel count turning `a` into `b`."""
    if len(a) > MAX_TED_NODES or len(b) > MAX_TED_NODES:
        raise TreeTooLarge(f"trees of {len(a)} and {len(b)} nodes exceed "
                           f"the {MAX_TED_NODES} node cap")
    codes: dict[str, int] = {}
    ea = encode_postorder(a, codes)
    eb = encode_postorder(b, codes)
    return int(_kernels.tree_distance(*ea, *eb))
