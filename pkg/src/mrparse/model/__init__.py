from .config import ModelConfig, TrainConfig, load_config
from .parser import ParallelSentence, Parser, make_parallel
from .train import TrainResult, evaluate_parallel, train
from .vocab import Vocab
from .checkpoint import load, save
from .embeddings import load_external_embeddings

__all__ = [
    "ModelConfig", "TrainConfig", "load_config", "ParallelSentence", "Parser",
    "make_parallel", "TrainResult", "evaluate_parallel", "train", "Vocab",
    "load", "save", "load_external_embeddings",
]
