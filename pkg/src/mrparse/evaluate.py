"""Attachment scores, bracketing F1, discontinuous F1.

All scores are percentages. Constituents are compared as a multiset of
``(label, yield)`` pairs, so discontinuous constituents need no special
treatment; preterminals (POS tags) are not constituents.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import AlignmentError, DataError
from .trees import ConstituentTree, DependencyTree, is_interval

INCLUDE_ALL = "include_all"
EXCLUDE_BY_POS = "exclude_by_pos_set"
PTB_PUNCT = frozenset({"``", "''", ":", ",", "."})


@dataclass(frozen=True)
class EvalConfig:
    punctuation_policy: str = INCLUDE_ALL
    punct_pos_set: frozenset = field(default_factory=frozenset)
    ignore_root_symbol: bool = False

    def __post_init__(self):
        if self.punctuation_policy not in (INCLUDE_ALL, EXCLUDE_BY_POS):
            raise DataError(f"unknown punctuation policy {self.punctuation_policy!r}")
        if self.punctuation_policy == EXCLUDE_BY_POS and not self.punct_pos_set:
            raise DataError("punctuation exclusion needs a non-empty POS set")
        object.__setattr__(self, "punct_pos_set", frozenset(self.punct_pos_set))

    def is_punct(self, token) -> bool:
        return self.punctuation_policy == EXCLUDE_BY_POS and token.pos in self.punct_pos_set


PTB = EvalConfig(EXCLUDE_BY_POS, PTB_PUNCT)
DISCO = EvalConfig(EXCLUDE_BY_POS, frozenset({"$,", "$.", "$(", "$[", "PUNCT"}), True)
ALL_TOKENS = EvalConfig()


def _pairs(gold, pred, kind):
    if isinstance(gold, kind):
        gold, pred = [gold], [pred]
    gold, pred = list(gold), list(pred)
    if len(gold) != len(pred):
        raise AlignmentError(f"{len(gold)} gold trees but {len(pred)} predicted trees")
    for i, (g, p) in enumerate(zip(gold, pred), 1):
        if g.words != p.words:
            raise AlignmentError(f"sentence {i}: tokens differ ({len(g)} vs {len(p)} words)")
    return zip(gold, pred)


def attachment_counts(gold, pred, config: EvalConfig = ALL_TOKENS):
    """(scored tokens, correct heads, correct heads and labels)."""
    total = uas = las = 0
    for g, p in _pairs(gold, pred, DependencyTree):
        for i, tok in enumerate(g.tokens):
            if config.is_punct(tok):
                continue
            total += 1
            if g.heads[i] == p.heads[i]:
                uas += 1
                if g.labels[i] == p.labels[i]:
                    las += 1
    return total, uas, las


def attachment_scores(gold, pred, config: EvalConfig = ALL_TOKENS):
    """(UAS, LAS) over one tree pair or aligned sequences of trees."""
    total, uas, las = attachment_counts(gold, pred, config)
    if total == 0:
        return 100.0, 100.0
    return 100.0 * uas / total, 100.0 * las / total


def brackets(tree: ConstituentTree, config: EvalConfig = ALL_TOKENS) -> Counter:
    """Multiset of ``(label, yield)`` after punctuation and root removal.

    Yields are renumbered over the remaining tokens, so a gap made only of
    punctuation does not count as a discontinuity.
    """
    keep = [t.index for t in tree.terminals if not config.is_punct(t)]
    rank = {idx: r for r, idx in enumerate(keep, 1)}
    out = Counter()
    for node in tree.nodes():
        if config.ignore_root_symbol and node is tree.root:
            continue
        span = frozenset(rank[i] for i in node.yield_ if i in rank)
        if span:
            out[(node.label, span)] += 1
    return out


def _prf(gold_counts: Counter, pred_counts: Counter):
    ng, np_ = sum(gold_counts.values()), sum(pred_counts.values())
    match = sum((gold_counts & pred_counts).values())
    if ng == 0 and np_ == 0:
        return 100.0, 100.0, 100.0
    p = 100.0 * match / np_ if np_ else 0.0
    r = 100.0 * match / ng if ng else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def constituency_f1(gold, pred, config: EvalConfig = ALL_TOKENS):
    """(precision, recall, F1) over one tree pair or aligned sequences."""
    gc, pc = Counter(), Counter()
    for g, p in _pairs(gold, pred, ConstituentTree):
        gc += brackets(g, config)
        pc += brackets(p, config)
    return _prf(gc, pc)


def _discontinuous(counts: Counter) -> Counter:
    return Counter({k: v for k, v in counts.items() if not is_interval(k[1])})


def discontinuous_prf(gold, pred, config: EvalConfig = ALL_TOKENS):
    gc, pc = Counter(), Counter()
    for g, p in _pairs(gold, pred, ConstituentTree):
        gc += _discontinuous(brackets(g, config))
        pc += _discontinuous(brackets(p, config))
    return _prf(gc, pc)


def discontinuous_f1(gold, pred, config: EvalConfig = ALL_TOKENS) -> float:
    """F1 over discontinuous constituents only (100 if neither side has any)."""
    return discontinuous_prf(gold, pred, config)[2]


def harmonic_mean(a: float, b: float) -> float:
    if a < 0 or b < 0:
        raise ValueError("harmonic mean of negative scores")
    if a + b == 0:
        return 0.0
    return 2 * a * b / (a + b)


def summary(**scores) -> str:
    """``key=value`` line, two decimals."""
    return " ".join(f"{k}={v:.2f}" for k, v in scores.items())
