"""Random trees and brute-force reference implementations shared by the tests."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from mrparse.trees import ConstituentTree, DependencyTree, Node, Token

LABELS = ("S", "VP", "NP", "PP", "X")
TAGS = ("NN", "VB", "DT", "JJ", "IN", ",", ".")


def tokens(n, rng=None):
    rng = rng or random.Random(0)
    return tuple(Token(i, f"w{i}", rng.choice(TAGS)) for i in range(1, n + 1))


def _wrap_unary(rng, child, prob, headed=True):
    while rng.random() < prob:
        child = Node(rng.choice(LABELS), [child], 0 if headed else None)
    return child


def random_tree(rng, n, discontinuous=True, unary_prob=0.0, headed=True):
    """Random constituent tree over ``n`` terminals.

    Nodes are built bottom-up by merging two or more current items; with
    ``discontinuous`` the merged items need not be adjacent. ``unary_prob``
    is the chance of stacking one more unary node above each item.
    """
    items = [_wrap_unary(rng, i, unary_prob, headed) for i in range(1, n + 1)]
    while len(items) > 1:
        k = rng.randint(2, min(len(items), 4))
        if discontinuous and rng.random() < 0.5:
            picked = sorted(rng.sample(range(len(items)), k))
        else:
            start = rng.randrange(len(items) - k + 1)
            picked = list(range(start, start + k))
        children = [items[i] for i in picked]
        head = rng.randrange(k) if headed else None
        node = _wrap_unary(rng, Node(rng.choice(LABELS), children, head), unary_prob, headed)
        items = [x for i, x in enumerate(items) if i not in picked[1:]]
        items[picked[0]] = node
    return ConstituentTree(tokens(n, rng), items[0])


def random_heads(rng, n):
    """Uniform-ish random dependency tree (any number of root children)."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    attached = [0]
    heads = [None] * n
    for d in order:
        heads[d - 1] = rng.choice(attached)
        attached.append(d)
    return heads


def random_projective_heads(rng, n):
    heads = [None] * n

    def fill(lo, hi, head):
        # split [lo, hi] into consecutive chunks, each a subtree under head
        while lo <= hi:
            end = rng.randint(lo, hi)
            root = rng.randint(lo, end)
            heads[root - 1] = head
            fill(lo, root - 1, root)
            fill(root + 1, end, root)
            lo = end + 1

    fill(1, n, 0)
    return heads


def dep_tree(heads, labels=None, rng=None):
    n = len(heads)
    labels = labels or ["dep"] * n
    return DependencyTree(tokens(n, rng), heads, labels)


# -- brute-force oracles --------------------------------------------------

def is_tree(heads):
    n = len(heads)
    for d in range(1, n + 1):
        seen, x = set(), d
        while x != 0:
            if x in seen:
                return False
            seen.add(x)
            x = heads[x - 1]
            if x == d:
                return False
    return all(0 <= h <= n and h != d for d, h in enumerate(heads, 1))


def descendants(heads, h):
    """Words dominated by ``h`` (0 dominates everything)."""
    out = set()
    for d in range(1, len(heads) + 1):
        x = d
        while x != 0 and x != h:
            x = heads[x - 1]
        if x == h:
            out.add(d)
    return out


def projective_by_descendants(heads):
    """Every word strictly between a head and its dependent descends from the head."""
    for d, h in enumerate(heads, 1):
        lo, hi = sorted((h, d))
        below = descendants(heads, h)
        if any(w not in below for w in range(lo + 1, hi)):
            return False
    return True


@lru_cache(maxsize=None)
def all_trees(n, projective=False, single_root=False):
    out = []
    for heads in itertools.product(range(n + 1), repeat=n):
        if not is_tree(heads):
            continue
        if projective and not projective_by_descendants(heads):
            continue
        if single_root and heads.count(0) != 1:
            continue
        out.append(heads)
    return tuple(out)


def extendable_heads(prefix, n, projective=False, single_root=False):
    """Heads for the next token that keep the prefix completable to a valid tree."""
    k = len(prefix)
    return {t[k] for t in all_trees(n, projective, single_root) if t[:k] == tuple(prefix)}


def brute_greedy(matrix, projective=False, single_root=False):
    """Per-step argmax over the brute-force legal set, smallest position on ties."""
    n = len(matrix)
    heads = []
    for i in range(n):
        legal = extendable_heads(heads, n, projective, single_root)
        heads.append(max(sorted(legal), key=lambda p: (matrix[i][p], -p)))
    return heads


def brute_brackets(tree, punct=frozenset(), drop_root=False):
    """(label, renumbered yield) list, computed by plain recursion."""
    keep = [t.index for t in tree.terminals if t.pos not in punct]
    out = []

    def visit(node):
        if isinstance(node, int):
            return {node}
        span = set()
        for c in node.children:
            span |= visit(c)
        if not (drop_root and node is tree.root):
            renum = frozenset(keep.index(i) + 1 for i in span if i in keep)
            if renum:
                out.append((node.label, renum))
        return span

    visit(tree.root)
    return out


def brute_prf(gold, pred):
    remaining = list(gold)
    match = 0
    for b in pred:
        if b in remaining:
            remaining.remove(b)
            match += 1
    if not gold and not pred:
        return 1.0, 1.0, 1.0
    p = match / len(pred) if pred else 0.0
    r = match / len(gold) if gold else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f
