"""The multitask parser: vocabulary + network + decoding."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import torch
from torch.nn import functional as F

from ..encoding import decode
from ..errors import AlignmentError, DataError
from ..transition import greedy_heads
from ..trees import AugmentedDepTree, DependencyTree, Token
from .config import ModelConfig
from .network import TASKS, Batch, MultitaskPointerNet
from .vocab import Vocab


@dataclass
class ParallelSentence:
    """One training sentence with both gold representations."""

    tokens: tuple
    dep: DependencyTree
    aug: AugmentedDepTree
    external: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.dep) != len(self.aug):
            raise AlignmentError(
                f"regular tree has {len(self.dep)} tokens, augmented tree {len(self.aug)}")
        if self.dep.words != self.aug.base.words:
            raise AlignmentError(f"word mismatch: {self.dep.words} vs {self.aug.base.words}")
        if self.external is not None and len(self.external) != len(self.dep):
            raise AlignmentError(
                f"{len(self.external)} external vectors for {len(self.dep)} tokens")


def make_parallel(dep_trees, aug_trees, externals=None) -> list:
    if len(dep_trees) != len(aug_trees):
        raise AlignmentError(
            f"{len(dep_trees)} dependency trees but {len(aug_trees)} constituent trees")
    if externals is not None and len(externals) != len(dep_trees):
        raise AlignmentError(f"{len(externals)} external blocks for {len(dep_trees)} sentences")
    return [
        ParallelSentence(d.tokens, d, a, None if externals is None else externals[i])
        for i, (d, a) in enumerate(zip(dep_trees, aug_trees))
    ]


class Parser:
    def __init__(self, config: ModelConfig, vocab: Vocab, net: Optional[MultitaskPointerNet] = None):
        self.config = config
        self.vocab = vocab
        if net is None:
            net = MultitaskPointerNet(
                config, len(vocab.words), len(vocab.chars), len(vocab.pos),
                len(vocab.dep_labels), len(vocab.const_labels), len(vocab.unary_tags))
        self.net = net

    @property
    def dtype(self):
        return self.net.encoder.root.dtype

    # -- tensors ---------------------------------------------------------

    def tensorize(self, sentences: Sequence[Sequence[Token]], externals=None,
                  unk_replace: float = 0.0, rng: Optional[random.Random] = None) -> Batch:
        v = self.vocab
        B = len(sentences)
        T = max(len(s) for s in sentences)
        C = max(len(t.form) for s in sentences for t in s)
        words = torch.zeros(B, T, dtype=torch.long)
        chars = torch.zeros(B, T, C, dtype=torch.long)
        pos = torch.zeros(B, T, dtype=torch.long)
        for b, sent in enumerate(sentences):
            for i, tok in enumerate(sent):
                wid = v.lookup("words", tok.form)
                if unk_replace and tok.form in v.singletons and rng.random() < unk_replace:
                    wid = 1
                words[b, i] = wid
                pos[b, i] = v.lookup("pos", tok.pos) if tok.pos else 1
                for j, ch in enumerate(tok.form):
                    chars[b, i, j] = v.lookup("chars", ch)
        lengths = torch.tensor([len(s) for s in sentences], dtype=torch.long)
        ext = None
        if self.config.external_dim:
            if externals is None:
                raise AlignmentError("model needs external vectors for every sentence")
            ext = torch.zeros(B, T, self.config.external_dim, dtype=self.dtype)
            for b, (sent, vecs) in enumerate(zip(sentences, externals)):
                vecs = np.asarray(vecs)
                if vecs.shape != (len(sent), self.config.external_dim):
                    raise AlignmentError(
                        f"external vectors of shape {vecs.shape} for a {len(sent)}-token "
                        f"sentence (expected dim {self.config.external_dim})")
                ext[b, : len(sent)] = torch.from_numpy(vecs).to(self.dtype)
        return Batch(words, chars, pos, lengths, ext)

    def gold_tensors(self, sentences: Sequence[ParallelSentence]):
        v = self.vocab
        B = len(sentences)
        T = max(len(s.tokens) for s in sentences)
        gold = {}
        for task in TASKS:
            table = "dep_labels" if task == "dep" else "const_labels"
            heads = torch.full((B, T), -1, dtype=torch.long)
            labels = torch.full((B, T), -1, dtype=torch.long)
            for b, s in enumerate(sentences):
                tree = s.dep if task == "dep" else s.aug
                heads[b, : len(tree)] = torch.tensor(tree.heads)
                labels[b, : len(tree)] = torch.tensor(
                    [v.lookup(table, l, default=-1) for l in tree.labels])
            gold[task] = (heads, labels)
        tags = torch.full((B, T), -1, dtype=torch.long)
        for b, s in enumerate(sentences):
            tags[b, : len(s.tokens)] = torch.tensor(
                [v.lookup("unary_tags", x or "NONE", default=0) for x in s.aug.leaf_unaries])
        gold["unary"] = tags
        return gold

    # -- training objective ----------------------------------------------

    def loss_terms(self, sentences: Sequence[ParallelSentence], tasks=TASKS,
                   unk_replace: float = 0.0, rng=None) -> dict:
        """Summed cross-entropy terms over the batch.

        Keys: ``pointer_dep``, ``labeler_dep``, ``pointer_const``,
        ``labeler_const`` and, when leaf unaries are modeled, ``unary``.
        Pointer terms condition on the gold left context; labeler terms on
        the gold head.
        """
        batch = self.tensorize([s.tokens for s in sentences],
                               [s.external for s in sentences] if self.config.external_dim else None,
                               unk_replace, rng)
        gold = self.gold_tensors(sentences)
        H = self.net.encoder(batch)
        terms = {}
        for task in tasks:
            heads, labels = gold[task]
            valid = heads >= 0
            s, scores = self.net.pointer_scores(task, H, batch.lengths)
            terms[f"pointer_{task}"] = F.cross_entropy(scores[valid], heads[valid], reduction="sum")
            label_scores = self.net.decoders[task].label_scores(s, H, heads)
            if (labels[valid] < 0).any():
                raise DataError(f"{task} label outside the training label set")
            terms[f"labeler_{task}"] = F.cross_entropy(
                label_scores[valid], labels[valid], reduction="sum")
        if self.config.leaf_unaries:
            tags = gold["unary"]
            valid = tags >= 0
            terms["unary"] = F.cross_entropy(
                self.net.unary_scores(H)[valid], tags[valid], reduction="sum")
        return terms

    def sentence_loss(self, sentence: ParallelSentence, tasks=TASKS) -> torch.Tensor:
        return sum(self.loss_terms([sentence], tasks).values())

    # -- inference ---------------------------------------------------------

    @torch.no_grad()
    def encode(self, sentences, externals=None) -> tuple:
        batch = self.tensorize(sentences, externals)
        return batch, self.net.encoder(batch)

    @torch.no_grad()
    def predict_batch(self, sentences: Sequence[Sequence[Token]], externals=None):
        """Parse token lists; returns one ``(DependencyTree, ConstituentTree)`` per sentence."""
        self.net.eval()
        sentences = [tuple(s) for s in sentences]
        batch, H = self.encode(sentences, externals)
        deps, augs = self.decode_states(sentences, H, batch.lengths)
        return [(d, decode(a)) for d, a in zip(deps, augs)]

    @torch.no_grad()
    def decode_states(self, sentences, H, lengths):
        """Greedy decoding of both tasks from shared encoder states.

        Returns ``(dependency trees, augmented trees)``.
        """
        c = self.config
        out = {}
        for task in TASKS:
            projective = c.projective_dep if task == "dep" else c.projective_const
            table = self.vocab.dep_labels if task == "dep" else self.vocab.const_labels
            s, scores = self.net.pointer_scores(task, H, lengths)
            scores = scores.double().numpy()
            dec = self.net.decoders[task]
            all_heads = torch.zeros(scores.shape[:2], dtype=torch.long)
            for b, sent in enumerate(sentences):
                n = len(sent)
                all_heads[b, :n] = torch.tensor(
                    greedy_heads(scores[b, :n, : n + 1], projective=projective,
                                 single_root=c.single_root))
            label_ids = dec.label_scores(s, H, all_heads).argmax(-1)
            trees = []
            for b, sent in enumerate(sentences):
                n = len(sent)
                labels = [table[i] if table else "_" for i in label_ids[b, :n].tolist()]
                trees.append(DependencyTree(sent, all_heads[b, :n].tolist(), labels))
            out[task] = trees
        tags = [[None] * len(s) for s in sentences]
        if c.leaf_unaries:
            tag_ids = self.net.unary_scores(H).argmax(-1)
            for b, sent in enumerate(sentences):
                for i in range(len(sent)):
                    tag = self.vocab.unary_tags[tag_ids[b, i]]
                    tags[b][i] = None if tag == "NONE" else tag
        augs = [AugmentedDepTree(t, tuple(lu)) for t, lu in zip(out["const"], tags)]
        return out["dep"], augs

    def predict(self, sentence: Sequence[Token], external=None):
        """``(DependencyTree, ConstituentTree)`` for one sentence."""
        return self.predict_batch([sentence], None if external is None else [external])[0]

    def predict_augmented(self, sentences, externals=None):
        """Regular and augmented trees, without decoding to constituents."""
        self.net.eval()
        sentences = [tuple(s) for s in sentences]
        batch, H = self.encode(sentences, externals)
        return self.decode_states(sentences, H, batch.lengths)

    @torch.no_grad()
    def pointer_score_vectors(self, sentence, external=None) -> dict:
        """Raw pointer score matrices ``n x (n+1)`` per task (for inspection)."""
        self.net.eval()
        batch, H = self.encode([tuple(sentence)], None if external is None else [external])
        return {task: self.net.pointer_scores(task, H, batch.lengths)[1][0].numpy()
                for task in TASKS}
