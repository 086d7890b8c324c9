from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

PAD, UNK = "<pad>", "<unk>"
NONE_TAG = "NONE"


@dataclass
class Vocab:
    """String <-> id tables.

    Input tables (words, chars, POS) reserve id 0 for padding and 1 for
    unknown items. Output tables (the two label sets and the leaf-unary
    tags, whose id 0 is ``NONE``) only hold what the training data contains.
    """

    words: list = field(default_factory=lambda: [PAD, UNK])
    chars: list = field(default_factory=lambda: [PAD, UNK])
    pos: list = field(default_factory=lambda: [PAD, UNK])
    dep_labels: list = field(default_factory=list)
    const_labels: list = field(default_factory=list)
    unary_tags: list = field(default_factory=lambda: [NONE_TAG])
    singletons: frozenset = frozenset()

    def __post_init__(self):
        self._index = {}

    def index(self, table: str) -> dict:
        if table not in self._index:
            self._index[table] = {s: i for i, s in enumerate(getattr(self, table))}
        return self._index[table]

    def lookup(self, table: str, item, default=1):
        return self.index(table).get(item, default)

    @classmethod
    def build(cls, corpus) -> "Vocab":
        """Tables from parallel training sentences (see ``ParallelSentence``)."""
        word_counts = Counter()
        chars, pos, dep, const, unary = set(), set(), set(), set(), set()
        for sent in corpus:
            for tok in sent.tokens:
                word_counts[tok.form] += 1
                chars.update(tok.form)
                if tok.pos:
                    pos.add(tok.pos)
            dep.update(sent.dep.labels)
            const.update(sent.aug.labels)
            unary.update(x for x in sent.aug.leaf_unaries if x)
        unary.discard(NONE_TAG)
        return cls(
            words=[PAD, UNK] + sorted(word_counts),
            chars=[PAD, UNK] + sorted(chars),
            pos=[PAD, UNK] + sorted(pos),
            dep_labels=sorted(dep),
            const_labels=sorted(const),
            unary_tags=[NONE_TAG] + sorted(unary),
            singletons=frozenset(w for w, c in word_counts.items() if c == 1),
        )

    def to_dict(self) -> dict:
        return {k: list(getattr(self, k)) for k in
                ("words", "chars", "pos", "dep_labels", "const_labels", "unary_tags")}

    @classmethod
    def from_dict(cls, data: dict) -> "Vocab":
        return cls(**{k: list(v) for k, v in data.items()})
