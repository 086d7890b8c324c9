"""The shipped toy corpus and the small configurations used across tests."""

from __future__ import annotations

import random
from importlib import resources

from mrparse.encoding import encode, tree_to_augmented
from mrparse.headrules import parse_head_rules
from mrparse.model import ModelConfig, TrainConfig, make_parallel
from mrparse.model.parser import ParallelSentence
from mrparse.trees import DISCBRACKET, DependencyTree, parse_constituent, parse_dependency

from treegen import random_heads, random_tree, tokens


def data_path(name):
    return resources.files("mrparse").joinpath("data", name)


def toy_trees():
    consts = parse_constituent(data_path("toy.discbracket").read_text(), DISCBRACKET)
    deps = parse_dependency(data_path("toy.conll").read_text())
    return consts, deps


def toy_corpus():
    rules = parse_head_rules(data_path("demo.rules").read_text())
    consts, deps = toy_trees()
    return make_parallel(deps, [tree_to_augmented(t, rules) for t in consts])


def tiny_config(**kw):
    """Gradient-check sized network: every dimension at most 8."""
    base = dict(word_dim=6, char_dim=5, pos_dim=4, cnn_filters=4, encoder_layers=2,
                encoder_hidden=3, decoder_hidden=4, arc_mlp_dim=5, label_mlp_dim=3, dropout=0.0)
    base.update(kw)
    return ModelConfig(**base)


def overfit_configs(tasks="dep,const"):
    """Dims 16 (embeddings, recurrent layers, arc MLP) and 8 (filters, label MLP)."""
    mc = ModelConfig(word_dim=16, char_dim=16, pos_dim=16, cnn_filters=8, encoder_hidden=16,
                     decoder_hidden=16, arc_mlp_dim=16, label_mlp_dim=8, dropout=0.0)
    tc = TrainConfig(epochs=200, batch_size=4, learning_rate=0.005, patience=20,
                     unk_replace=0.0, seed=1, tasks=tasks, target_score=100.0)
    return mc, tc


def synthetic_sentence(rng, n):
    """Parallel sentence of length n with random trees on both sides."""
    toks = tokens(n, rng)
    dep = DependencyTree(toks, random_heads(rng, n), [rng.choice(["a", "b"]) for _ in range(n)])
    tree = random_tree(rng, n)
    tree = type(tree)(toks, tree.root)
    return ParallelSentence(toks, dep, encode(tree))


def random_sentences(corpus, count, length, seed=0):
    """Token sequences drawn from the corpus vocabulary (with POS)."""
    rng = random.Random(seed)
    pool = [t for s in corpus for t in s.tokens]
    out = []
    for _ in range(count):
        picks = [rng.choice(pool) for _ in range(length)]
        out.append(tuple(type(t)(i, t.form, t.pos) for i, t in enumerate(picks, 1)))
    return out
