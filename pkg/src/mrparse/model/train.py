"""Multitask training with model selection on the dev harmonic mean of LAS."""

from __future__ import annotations

import copy
import logging
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import torch

from ..encoding import is_projective
from ..errors import DataError
from ..evaluate import ALL_TOKENS, EvalConfig, attachment_scores, harmonic_mean
from .config import ModelConfig, TrainConfig
from .network import TASKS
from .parser import ParallelSentence, Parser
from .vocab import Vocab

logger = logging.getLogger(__name__)


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    dev_dep_las: float
    dev_const_las: float
    dev_score: float
    learning_rate: float


@dataclass
class TrainResult:
    parser: Parser
    best_epoch: int
    best_score: float
    history: list = field(default_factory=list)


def seed_everything(seed: int):
    random.seed(seed)
    torch.manual_seed(seed)


def evaluate_parallel(parser: Parser, sentences: Sequence[ParallelSentence],
                      config: EvalConfig = ALL_TOKENS, batch_size: int = 64):
    """LAS on the regular and on the augmented trees, plus UAS for both."""
    dep_pred, aug_pred = [], []
    for i in range(0, len(sentences), batch_size):
        chunk = sentences[i: i + batch_size]
        externals = [s.external for s in chunk] if parser.config.external_dim else None
        d, a = parser.predict_augmented([s.tokens for s in chunk], externals)
        dep_pred += d
        aug_pred += [x.base for x in a]
    dep_uas, dep_las = attachment_scores([s.dep for s in sentences], dep_pred, config)
    const_uas, const_las = attachment_scores([s.aug.base for s in sentences], aug_pred, config)
    return {"dep_uas": dep_uas, "dep_las": dep_las,
            "const_uas": const_uas, "const_las": const_las, "aug_pred": aug_pred}


def default_projectivity(model_config: ModelConfig, corpus: Sequence[ParallelSentence]):
    """Enforce projectivity per decoder when every training tree allows it."""
    model_config.projective_dep = all(is_projective(s.dep) for s in corpus)
    model_config.projective_const = all(is_projective(s.aug) for s in corpus)


def train(corpus: Sequence[ParallelSentence], dev: Optional[Sequence[ParallelSentence]] = None,
          model_config: Optional[ModelConfig] = None, train_config: Optional[TrainConfig] = None,
          eval_config: EvalConfig = ALL_TOKENS) -> TrainResult:
    """Train a parser on sentences carrying both gold trees.

    After every epoch both dev LAS scores are computed and the weights with
    the best harmonic mean are kept. Without a dev set the last epoch wins.
    """
    if not corpus:
        raise DataError("empty training corpus")
    mc = model_config or ModelConfig()
    tc = train_config or TrainConfig()
    tasks = tuple(t for t in TASKS if t in tc.task_set)
    if not tasks:
        raise DataError(f"no known task in {tc.tasks!r}")
    seed_everything(tc.seed)
    rng = random.Random(tc.seed)
    if mc.leaf_unaries and not any(x for s in corpus for x in s.aug.leaf_unaries):
        mc.leaf_unaries = False
    if not any(t.pos for s in corpus for t in s.tokens):
        mc.pos_dim = 0

    parser = Parser(mc, Vocab.build(corpus))
    net = parser.net
    optimizer = torch.optim.Adam(net.parameters(), lr=tc.learning_rate,
                                 betas=(tc.beta1, tc.beta2))
    lr = tc.learning_rate
    best_score, best_epoch, best_state = -1.0, 0, None
    stale = 0
    history = []
    order = list(range(len(corpus)))
    for epoch in range(1, tc.epochs + 1):
        net.train()
        rng.shuffle(order)
        epoch_loss = 0.0
        for start in range(0, len(order), tc.batch_size):
            batch = [corpus[i] for i in order[start: start + tc.batch_size]]
            terms = parser.loss_terms(batch, tasks, tc.unk_replace, rng)
            loss = sum(terms.values())
            if not torch.isfinite(loss):
                detail = ", ".join(f"{k}={v.item():.4g}" for k, v in terms.items())
                raise FloatingPointError(
                    f"non-finite loss at epoch {epoch}, batch starting {start}: {detail}")
            optimizer.zero_grad()
            (loss / len(batch)).backward()
            if tc.grad_clip:
                torch.nn.utils.clip_grad_norm_(net.parameters(), tc.grad_clip)
            optimizer.step()
            epoch_loss += loss.item()

        if dev:
            scores = evaluate_parallel(parser, dev, eval_config)
            dep_las = scores["dep_las"] if "dep" in tasks else 100.0
            const_las = scores["const_las"] if "const" in tasks else 100.0
        else:
            dep_las = const_las = float("nan")
        score = harmonic_mean(dep_las, const_las) if dev else float(epoch)
        history.append(EpochRecord(epoch, epoch_loss, dep_las, const_las, score, lr))
        logger.info("epoch %d loss %.4f dev las dep %.2f const %.2f hm %.2f lr %.2e",
                    epoch, epoch_loss, dep_las, const_las, score, lr)
        if score > best_score:
            best_score, best_epoch, stale = score, epoch, 0
            best_state = copy.deepcopy(net.state_dict())
        else:
            stale += 1
            if stale >= tc.patience:
                lr *= tc.decay_rate
                for group in optimizer.param_groups:
                    group["lr"] = lr
                stale = 0
        if dev and tc.target_score is not None and score >= tc.target_score:
            break

    net.load_state_dict(best_state)
    net.eval()
    return TrainResult(parser, best_epoch, best_score, history)
