"""Tree types and treebank reading/writing.

Constituent trees are read from PTB-style bracketed files or from the
``discbracket`` format used for discontinuous treebanks, where every
terminal is written ``index=form`` (0-based on disk). Dependency trees use
the 10-column CoNLL-X format.

A parenthesised group holding exactly one bare terminal is a preterminal:
its label becomes the POS tag of the token and no constituent node is
created for it. POS tag ``_`` means "no tag".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    DependencyValidationError,
    TreebankParseError,
    TreeStructureError,
    UnsupportedFormatError,
)

BRACKETED = "bracketed"
DISCBRACKET = "discbracket"
FORMATS = (BRACKETED, DISCBRACKET)
NO_POS = "_"


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    pos: Optional[str] = None

    def __post_init__(self):
        if self.index < 1:
            raise TreeStructureError(f"token index must be >= 1, got {self.index}")
        if not self.form:
            raise TreeStructureError(f"token {self.index} has an empty form")


Child = Union["Node", int]


def yield_of(child: Child) -> frozenset:
    if isinstance(child, int):
        return frozenset((child,))
    return child.yield_


class Node:
    """Internal constituent node.

    Children are terminal indices (``int``) or nodes, kept sorted by the
    smallest terminal they dominate, so two nodes with the same content
    compare equal whatever order they were built in. ``head`` is the
    position of the head child in that sorted order, or ``None``.
    """

    __slots__ = ("label", "children", "head", "yield_")

    def __init__(self, label: str, children: Sequence[Child], head: Optional[int] = None):
        if not children:
            raise TreeStructureError(f"node {label!r} has no children")
        order = sorted(range(len(children)), key=lambda i: min(yield_of(children[i])))
        self.label = label
        self.children = tuple(children[i] for i in order)
        self.head = None if head is None else order.index(head)
        span = set()
        for child in self.children:
            cy = yield_of(child)
            if span & cy:
                raise TreeStructureError(f"children of {label!r} have overlapping yields")
            span |= cy
        self.yield_ = frozenset(span)

    def __eq__(self, other):
        if not isinstance(other, Node):
            return NotImplemented
        return (
            self.label == other.label
            and self.head == other.head
            and self.children == other.children
        )

    def __hash__(self):
        return hash((self.label, self.head, self.children))

    def __repr__(self):
        return f"Node({self.label!r}, {list(self.children)!r}, head={self.head})"

    @property
    def head_child(self) -> Child:
        if self.head is None:
            raise ValueError(f"node {self.label!r} has no head assigned")
        return self.children[self.head]


def subtrees(root: Child) -> Iterator[Node]:
    """Pre-order iteration over the internal nodes below (and including) root."""
    stack = [root]
    while stack:
        node = stack.pop()
        if isinstance(node, Node):
            yield node
            stack.extend(reversed(node.children))


def is_interval(indices) -> bool:
    return max(indices) - min(indices) + 1 == len(indices)


@dataclass(frozen=True, eq=True)
class ConstituentTree:
    terminals: tuple
    root: Child

    def __post_init__(self):
        object.__setattr__(self, "terminals", tuple(self.terminals))
        n = len(self.terminals)
        if n == 0:
            raise TreeStructureError("tree has no terminals")
        for i, tok in enumerate(self.terminals, 1):
            if tok.index != i:
                raise TreeStructureError(f"terminal {i} carries index {tok.index}")
        if yield_of(self.root) != frozenset(range(1, n + 1)):
            raise TreeStructureError("root does not dominate every terminal exactly once")

    def __len__(self):
        return len(self.terminals)

    @property
    def words(self):
        return [t.form for t in self.terminals]

    def nodes(self) -> Iterator[Node]:
        return subtrees(self.root)

    @property
    def is_headed(self) -> bool:
        return all(node.head is not None for node in self.nodes())

    def head_word(self, node: Child) -> int:
        while isinstance(node, Node):
            node = node.head_child
        return node

    def __str__(self):
        fmt = BRACKETED if all(is_interval(n.yield_) for n in self.nodes()) else DISCBRACKET
        return serialize_constituent(self, fmt)


@dataclass(frozen=True)
class DependencyTree:
    tokens: tuple
    heads: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "heads", tuple(self.heads))
        object.__setattr__(self, "labels", tuple(self.labels))
        problem = dependency_problem(self.heads)
        if problem:
            raise DependencyValidationError(problem)
        if len(self.labels) != len(self.heads) or len(self.tokens) != len(self.heads):
            raise DependencyValidationError("tokens, heads and labels differ in length")

    def __len__(self):
        return len(self.heads)

    @property
    def words(self):
        return [t.form for t in self.tokens]

    def arcs(self):
        """(head, dependent, label) triples with 1-based dependents."""
        return [(h, d, l) for d, (h, l) in enumerate(zip(self.heads, self.labels), 1)]


def dependency_problem(heads: Sequence[int]) -> Optional[str]:
    """Describe why ``heads`` is not a tree rooted at 0, or return None."""
    n = len(heads)
    for d, h in enumerate(heads, 1):
        if not 0 <= h <= n:
            return f"head {h} of token {d} out of range [0, {n}]"
        if h == d:
            return f"token {d} is its own head"
    state = [0] * (n + 1)  # 0 unseen, 1 on current path, 2 reaches root
    state[0] = 2
    for start in range(1, n + 1):
        path = []
        node = start
        while state[node] == 0:
            state[node] = 1
            path.append(node)
            node = heads[node - 1]
        if state[node] == 1:
            return f"cycle through token {node}"
        for p in path:
            state[p] = 2
    return None


@dataclass(frozen=True)
class AugmentedDepTree:
    """Dependency encoding of a constituent tree.

    Non-root labels look like ``SYMBOL#k``; ``leaf_unaries[i]`` holds the
    ``+``-joined chain of unary nodes removed from above token ``i + 1``
    (outermost first), or ``None``.
    """

    base: DependencyTree
    leaf_unaries: tuple = None

    def __post_init__(self):
        lu = self.leaf_unaries
        if lu is None:
            lu = (None,) * len(self.base)
        lu = tuple(x or None for x in lu)
        if len(lu) != len(self.base):
            raise TreeStructureError("leaf_unaries length differs from sentence length")
        object.__setattr__(self, "leaf_unaries", lu)

    def __len__(self):
        return len(self.base)

    @property
    def heads(self):
        return self.base.heads

    @property
    def labels(self):
        return self.base.labels

    @property
    def tokens(self):
        return self.base.tokens


# ---------------------------------------------------------------------------
# constituent formats

_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def _tokenize(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        for m in _TOKEN_RE.finditer(line):
            yield m.group(), lineno


def _records(text: str):
    """Split text into top-level balanced parenthesis blocks of tokens."""
    depth = 0
    current = []
    start = None
    for tok, lineno in _tokenize(text):
        if tok == "(":
            if depth == 0:
                start = lineno
            depth += 1
        elif tok == ")":
            if depth == 0:
                raise TreebankParseError("unbalanced ')'", lineno)
            depth -= 1
        elif depth == 0:
            raise TreebankParseError(f"text {tok!r} outside of a tree", lineno)
        current.append((tok, lineno))
        if depth == 0:
            yield current, start
            current = []
    if depth:
        raise TreebankParseError("unbalanced '(': tree not closed", start)


def _read_group(toks, pos):
    """Read ``( label item* )`` starting at toks[pos]; return (sexpr, next)."""
    pos += 1
    label = ""
    if toks[pos][0] not in "()":
        label = toks[pos][0]
        pos += 1
    items = []
    while toks[pos][0] != ")":
        if toks[pos][0] == "(":
            item, pos = _read_group(toks, pos)
            items.append(item)
        else:
            items.append(toks[pos])
            pos += 1
    line = toks[pos][1]
    if not items:
        raise TreebankParseError(f"empty constituent {label!r}", line)
    return (label, items, line), pos + 1


def _build(sexpr, fmt, terminals):
    """Turn a nested (label, items, line) structure into a Node or terminal."""
    label, items, line = sexpr
    if len(items) == 1 and isinstance(items[0], tuple) and len(items[0]) == 2:
        return _terminal(items[0], label, fmt, terminals)
    children = []
    for item in items:
        if len(item) == 2:
            children.append(_terminal(item, None, fmt, terminals))
        else:
            children.append(_build(item, fmt, terminals))
    if not label:
        raise TreebankParseError("constituent without a label", line)
    try:
        return Node(label, children)
    except TreeStructureError as err:
        raise TreeStructureError(f"line {line}: {err}") from None


def _terminal(atom, pos, fmt, terminals):
    text, line = atom
    if pos == NO_POS:
        pos = None
    if fmt == BRACKETED:
        index = len(terminals) + 1
        form = text
    else:
        idx, sep, form = text.partition("=")
        if not sep or not idx.isdigit() or not form:
            raise TreebankParseError(f"discbracket terminal must be index=form, got {text!r}", line)
        index = int(idx) + 1
        if index in terminals:
            raise TreeStructureError(f"line {line}: duplicate terminal index {idx}")
    terminals[index] = Token(index, form, pos)
    return index


def parse_constituent(text: str, format: str = BRACKETED) -> list:
    """Read every tree in ``text``."""
    if format not in FORMATS:
        raise UnsupportedFormatError(f"unknown constituent format {format!r}")
    trees = []
    for toks, line in _records(text):
        sexpr, _ = _read_group(toks, 0)
        # PTB files often wrap each tree in an unlabeled outer bracket
        while not sexpr[0] and len(sexpr[1]) == 1 and len(sexpr[1][0]) == 3:
            sexpr = sexpr[1][0]
        terminals = {}
        root = _build(sexpr, format, terminals)
        n = len(terminals)
        missing = set(range(1, n + 1)) - set(terminals)
        if missing:
            raise TreeStructureError(
                f"line {line}: missing terminal indices {sorted(i - 1 for i in missing)}"
            )
        trees.append(ConstituentTree(tuple(terminals[i] for i in range(1, n + 1)), root))
    return trees


def serialize_constituent(tree: ConstituentTree, format: str = BRACKETED) -> str:
    """Write one tree on a single line."""
    if format not in FORMATS:
        raise UnsupportedFormatError(f"unknown constituent format {format!r}")
    if format == BRACKETED and not all(is_interval(n.yield_) for n in tree.nodes()):
        raise UnsupportedFormatError("discontinuous tree cannot be written as bracketed")

    def term(i):
        tok = tree.terminals[i - 1]
        form = tok.form if format == BRACKETED else f"{i - 1}={tok.form}"
        return f"({tok.pos or NO_POS} {form})"

    def write(child):
        if isinstance(child, int):
            return term(child)
        return f"({child.label} {' '.join(write(c) for c in child.children)})"

    return write(tree.root)


def write_constituents(trees, format: str = BRACKETED) -> str:
    return "".join(serialize_constituent(t, format) + "\n" for t in trees)


def detect_format(text: str) -> str:
    """Guess the constituent format: discbracket iff terminals look like ``N=form``."""
    return DISCBRACKET if re.search(r"\s\d+=[^\s()]+\s*\)", text) else BRACKETED


# ---------------------------------------------------------------------------
# CoNLL-X

def _conll_blocks(text: str):
    block, start = [], None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.rstrip("\r")
        if not line.strip():
            if block:
                yield block, start
                block = []
            continue
        if line.startswith("#") and not block:
            continue
        if start is None or not block:
            start = lineno
        block.append((lineno, line))
    if block:
        yield block, start


def _read_conll(text: str):
    """Yield (tokens, heads, labels, feats, start_line) per sentence."""
    for number, (block, start) in enumerate(_conll_blocks(text), 1):
        tokens, heads, labels, feats = [], [], [], []
        for lineno, line in block:
            cols = line.split("\t")
            if len(cols) != 10:
                raise TreebankParseError(f"expected 10 tab-separated columns, got {len(cols)}", lineno)
            if cols[0] != str(len(tokens) + 1):
                raise TreebankParseError(f"token id {cols[0]!r} out of sequence", lineno)
            pos = cols[4] if cols[4] != NO_POS else None
            try:
                head = int(cols[6])
            except ValueError:
                raise TreebankParseError(f"non-integer HEAD {cols[6]!r}", lineno) from None
            tokens.append(Token(len(tokens) + 1, cols[1], pos))
            heads.append(head)
            labels.append(cols[7])
            feats.append(cols[5])
        problem = dependency_problem(heads)
        if problem:
            raise DependencyValidationError(f"sentence {number} (line {start}): {problem}")
        yield tokens, heads, labels, feats, start


def parse_dependency(text: str) -> list:
    return [DependencyTree(t, h, l) for t, h, l, _, _ in _read_conll(text)]


def _conll_lines(tree: DependencyTree, feats=None):
    for i, tok in enumerate(tree.tokens):
        pos = tok.pos or NO_POS
        yield "\t".join((
            str(i + 1), tok.form, NO_POS, pos, pos, feats[i] if feats else NO_POS,
            str(tree.heads[i]), tree.labels[i], NO_POS, NO_POS,
        ))


def serialize_dependency(trees) -> str:
    """CoNLL-X text for one tree or a sequence of trees."""
    if isinstance(trees, DependencyTree):
        trees = [trees]
    return "".join("\n".join(_conll_lines(t)) + "\n\n" for t in trees)


def parse_augmented(text: str) -> list:
    """Read augmented trees; leaf-unary chains live in FEATS as ``lu=X+Y``."""
    out = []
    for tokens, heads, labels, feats, start in _read_conll(text):
        lu = []
        for f in feats:
            chain = None
            for item in f.split("|"):
                if item.startswith("lu="):
                    chain = item[3:] or None
            lu.append(chain)
        out.append(AugmentedDepTree(DependencyTree(tokens, heads, labels), tuple(lu)))
    return out


def serialize_augmented(trees) -> str:
    if isinstance(trees, AugmentedDepTree):
        trees = [trees]
    chunks = []
    for t in trees:
        feats = [f"lu={x}" if x else NO_POS for x in t.leaf_unaries]
        chunks.append("\n".join(_conll_lines(t.base, feats)) + "\n\n")
    return "".join(chunks)
