"""Left-to-right SHIFT-ATTACH-p transition system.

Token ``focus`` (starting at 1) is attached to the pointed position ``p``
(0 is ROOT) and the focus moves right, so a sentence of ``n`` words takes
exactly ``n`` transitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .trees import DependencyTree, Token


@dataclass(frozen=True)
class TransitionSequence:
    pointers: tuple

    def __len__(self):
        return len(self.pointers)

    def __str__(self):
        return " ".join(map(str, self.pointers))


class ParserState:
    """Partial tree built by the first ``focus - 1`` transitions.

    ``top[i]`` is the highest ancestor of ``i`` (an unattached token, or 0),
    so ``focus`` is an ancestor of ``p`` iff ``top[p] == focus``.
    """

    def __init__(self, n: int):
        self.n = n
        self.focus = 1
        self.heads = [None] * (n + 1)  # index 0 unused
        self.top = np.arange(n + 1)
        self.arc_min = np.zeros(n + 1, dtype=np.int64)
        self.arc_max = np.zeros(n + 1, dtype=np.int64)
        self.root_used = False

    @property
    def done(self) -> bool:
        return self.focus > self.n

    @property
    def partial_heads(self):
        return self.heads[1:]

    def legal_mask(self, projective: bool = False, single_root: bool = False) -> np.ndarray:
        n, f = self.n, self.focus
        mask = self.top != f
        mask[0] = not (single_root and self.root_used)
        if projective:
            a, b = self.arc_min[1:f], self.arc_max[1:f]
            # arcs over the focus bound the head to their span; arcs fully
            # to the left block the positions strictly inside them
            cover = (a < f) & (f < b)
            lo, hi = a[cover].max(initial=0), b[cover].min(initial=n)
            left = (b < f) & (b - a > 1)
            interior = (np.bincount(a[left] + 1, minlength=n + 2)
                        - np.bincount(b[left], minlength=n + 2))
            mask &= np.cumsum(interior)[: n + 1] == 0
            mask[:lo] = False
            mask[hi + 1:] = False
        assert mask.any(), "no legal head: transition system invariant broken"
        return mask

    def legal_heads(self, projective: bool = False, single_root: bool = False) -> set:
        return set(np.flatnonzero(self.legal_mask(projective, single_root)).tolist())

    def attach(self, p: int):
        f = self.focus
        self.heads[f] = p
        self.arc_min[f], self.arc_max[f] = min(p, f), max(p, f)
        if p == 0:
            self.root_used = True
        self.top[self.top == f] = self.top[p]
        self.focus += 1


def legal_heads(state: ParserState, projective_mode: bool = False, single_root: bool = False) -> set:
    return state.legal_heads(projective_mode, single_root)


def oracle(gold: DependencyTree) -> TransitionSequence:
    """Gold pointer sequence: the head of each token, left to right."""
    return TransitionSequence(tuple(gold.heads))


def replay(sequence, tokens: Sequence[Token], labels=None) -> DependencyTree:
    pointers = sequence.pointers if isinstance(sequence, TransitionSequence) else tuple(sequence)
    state = ParserState(len(pointers))
    for p in pointers:
        state.attach(p)
    labels = labels if labels is not None else ["_"] * len(pointers)
    return DependencyTree(tokens, state.partial_heads, labels)


def choose_head(state: ParserState, scores, projective: bool = False, single_root: bool = False) -> int:
    """Best legal position for the current focus; ties go to the smaller position."""
    scores = np.asarray(scores, dtype=np.float64)
    masked = np.where(state.legal_mask(projective, single_root), scores, -np.inf)
    return int(np.argmax(masked))


ScoreSource = Union[np.ndarray, Callable[[ParserState], np.ndarray]]


def greedy_heads(scores: ScoreSource, n: Optional[int] = None, projective: bool = False,
                 single_root: bool = False) -> list:
    """Decode a head per token from an ``n x (n+1)`` matrix or a per-state callable."""
    if callable(scores):
        if n is None:
            raise TypeError("sentence length required with a score callable")
        score_of = scores
    else:
        matrix = np.asarray(scores)
        n = matrix.shape[0]
        score_of = lambda state: matrix[state.focus - 1]
    state = ParserState(n)
    while not state.done:
        state.attach(choose_head(state, score_of(state), projective, single_root))
    return state.partial_heads


def greedy_parse(scores: ScoreSource, tokens: Sequence[Token], projective_mode: bool = False,
                 single_root: bool = False, labeler=None) -> DependencyTree:
    """Greedy decoding into a tree.

    ``labeler(dependent, head)``, if given, names each arc once its head is
    fixed; otherwise arcs are labeled ``_``.
    """
    heads = greedy_heads(scores, len(tokens), projective_mode, single_root)
    if labeler is None:
        labels = ["_"] * len(heads)
    else:
        labels = [labeler(d, h) for d, h in enumerate(heads, 1)]
    return DependencyTree(tokens, heads, labels)


def write_pointers(sequences) -> str:
    return "".join(str(s) + "\n" for s in sequences)
