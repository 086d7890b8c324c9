"""Constituent trees as augmented dependency trees.

Every constituent ``X`` headed by word ``h`` contributes one arc
``(h, d, X#k)`` per non-head child, where ``d`` is that child's head word and
``k`` is the 1-based position of ``X`` in the bottom-up chain of
constituents headed by ``h``. The root's head word attaches to 0 with label
``root``. Unary nodes are removed first: non-leaf chains are merged into one
``A+B`` node and chains sitting directly on a word are stored per token.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Optional

from .errors import DataError
from .headrules import HeadRuleSet
from .trees import (
    AugmentedDepTree,
    ConstituentTree,
    DependencyTree,
    Node,
    is_interval,
)

ROOT_LABEL = "root"
REPAIR_ROOT_SYMBOL = "VROOT"
UNARY_SEP = "+"


def _category(tree, child):
    if isinstance(child, int):
        return tree.terminals[child - 1].pos or ""
    return child.label


def assign_heads(tree: ConstituentTree, rules: HeadRuleSet) -> ConstituentTree:
    """Return a copy of ``tree`` whose every node designates a head child."""

    def visit(child):
        if isinstance(child, int):
            return child
        children = [visit(c) for c in child.children]
        head = rules.find_head(child.label, [_category(tree, c) for c in children])
        return Node(child.label, children, head)

    return ConstituentTree(tree.terminals, visit(tree.root))


def collapse_unary_chains(tree: ConstituentTree):
    """Remove unary nodes.

    Returns ``(tree, leaf_unaries)``. Non-leaf chains become one node
    labeled ``A+B+...`` (outermost first) that keeps the innermost node's
    head child; chains directly above a word are dropped from the tree and
    reported in ``leaf_unaries`` (one entry per token, ``None`` if absent).
    """
    leaf = [None] * len(tree)

    def visit(child):
        if isinstance(child, int):
            return child
        labels = []
        cur = child
        while isinstance(cur, Node) and len(cur.children) == 1:
            labels.append(cur.label)
            cur = cur.children[0]
        if isinstance(cur, int):
            leaf[cur - 1] = UNARY_SEP.join(labels)
            return cur
        inner = Node(cur.label, [visit(c) for c in cur.children], cur.head)
        if labels:
            return Node(UNARY_SEP.join(labels + [cur.label]), inner.children, inner.head)
        return inner

    return ConstituentTree(tree.terminals, visit(tree.root)), tuple(leaf)


def restore_unary_chains(tree: ConstituentTree, leaf_unaries=None) -> ConstituentTree:
    """Inverse of :func:`collapse_unary_chains`."""
    leaf_unaries = leaf_unaries or (None,) * len(tree)

    def wrap(child, labels):
        for label in reversed(labels):
            child = Node(label, [child], 0)
        return child

    def visit(child):
        if isinstance(child, int):
            chain = leaf_unaries[child - 1]
            return wrap(child, chain.split(UNARY_SEP)) if chain else child
        labels = child.label.split(UNARY_SEP)
        inner = Node(labels[-1], [visit(c) for c in child.children], child.head)
        return wrap(inner, labels[:-1])

    return ConstituentTree(tree.terminals, visit(tree.root))


def encode(tree: ConstituentTree, leaf_unaries=None) -> AugmentedDepTree:
    """Encode a headed, unariless tree as an augmented dependency tree."""
    n = len(tree)
    heads = [None] * n
    labels = [None] * n

    def visit(node):
        # returns (head word, length of the chain of nodes it heads so far)
        if isinstance(node, int):
            return node, 0
        if len(node.children) < 2:
            raise DataError(f"unary node {node.label!r}: collapse unary chains before encoding")
        if node.head is None:
            raise DataError(f"node {node.label!r} has no head; assign heads before encoding")
        results = [visit(c) for c in node.children]
        hw, level = results[node.head]
        level += 1
        for i, (dw, _) in enumerate(results):
            if i != node.head:
                heads[dw - 1] = hw
                labels[dw - 1] = f"{node.label}#{level}"
        return hw, level

    root_word, _ = visit(tree.root)
    heads[root_word - 1] = 0
    labels[root_word - 1] = ROOT_LABEL
    base = DependencyTree(tree.terminals, heads, labels)
    return AugmentedDepTree(base, leaf_unaries)


def split_label(label: str):
    """``'VP#2'`` -> ``('VP', 2)``; anything unparseable is taken as level 1."""
    symbol, sep, k = label.rpartition("#")
    if sep and k.isdigit() and int(k) >= 1:
        return symbol, int(k)
    return label, 1


def repair(heads, labels):
    """Make a predicted encoding decodable.

    Extra root arcs are re-attached to the first root word as ``VROOT#1``.
    Returns ``(heads, levels)`` where ``levels[h]`` is the list of
    ``(symbol, dependents)`` for head word ``h`` bottom-up, with consecutive
    levels and one symbol per level (the leftmost dependent's).
    """
    heads = list(heads)
    labels = list(labels)
    roots = [d for d, h in enumerate(heads, 1) if h == 0]
    if not roots:
        raise DataError("encoding has no root arc")
    for d in roots[1:]:
        heads[d - 1] = roots[0]
        labels[d - 1] = f"{REPAIR_ROOT_SYMBOL}#1"
    grouped = defaultdict(lambda: defaultdict(list))
    for d, (h, label) in enumerate(zip(heads, labels), 1):
        if h:
            grouped[h][split_label(label)[1]].append((d, split_label(label)[0]))
    levels = {}
    for h, by_k in grouped.items():
        levels[h] = []
        for k in sorted(by_k):
            deps = sorted(by_k[k])
            levels[h].append((deps[0][1], [d for d, _ in deps]))
    return heads, levels


def decode(aug: AugmentedDepTree, restore_unaries: bool = True) -> ConstituentTree:
    """Rebuild the headed constituent tree from an augmented encoding.

    Total over predicted input: see :func:`repair`. Collapsed ``A+B``
    labels and leaf unary chains are expanded unless ``restore_unaries``
    is false.
    """
    heads, levels = repair(aug.heads, aug.labels)
    # children before parents, without recursion (chains can be long)
    order = []
    stack = [next(d for d, h in enumerate(heads, 1) if h == 0)]
    while stack:
        h = stack.pop()
        order.append(h)
        for _, deps in levels.get(h, ()):
            stack.extend(deps)
    built = {}
    for h in reversed(order):
        node = h
        for symbol, deps in levels.get(h, ()):
            node = Node(symbol, [node] + [built.pop(d) for d in deps], 0)
        built[h] = node
    collapsed = ConstituentTree(aug.tokens, built[order[0]])
    if not restore_unaries:
        return collapsed
    return restore_unary_chains(collapsed, aug.leaf_unaries)


def tree_to_augmented(tree: ConstituentTree, rules: Optional[HeadRuleSet] = None) -> AugmentedDepTree:
    """assign_heads -> collapse_unary_chains -> encode, in one call.

    ``rules`` may be omitted when the tree already carries heads.
    """
    if rules is not None:
        tree = assign_heads(tree, rules)
    collapsed, leaf = collapse_unary_chains(tree)
    return encode(collapsed, leaf)


def is_continuous(tree: ConstituentTree) -> bool:
    return all(is_interval(node.yield_) for node in tree.nodes())


def is_projective(tree) -> bool:
    """No two arcs cross when drawn above the sentence, ROOT at position 0."""
    heads = tree.heads
    spans = sorted((min(h, d), max(h, d)) for d, h in enumerate(heads, 1))
    for i, (a, b) in enumerate(spans):
        for c, e in spans[i + 1:]:
            if c >= b:
                break
            if a < c < b < e:
                return False
    return True
