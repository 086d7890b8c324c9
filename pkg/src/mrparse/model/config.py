"""Model and training hyper-parameters.

Config files are plain ``key = value`` lines; keys are the dataclass field
names below or the long names of the published hyper-parameter table
(``cnn_number_of_filters``, ``arc_mlp_size``...). ``#`` starts a comment.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from typing import Optional

from ..errors import DataError


@dataclass
class ModelConfig:
    word_dim: int = 100
    char_dim: int = 100
    pos_dim: int = 100  # 0 disables POS embeddings
    cnn_window: int = 3
    cnn_filters: int = 50
    encoder_layers: int = 3
    encoder_hidden: int = 512  # per direction
    decoder_layers: int = 1
    decoder_hidden: int = 512
    arc_mlp_dim: int = 512
    label_mlp_dim: int = 128
    dropout: float = 0.33
    external_dim: int = 0  # 0 disables precomputed external vectors
    leaf_unaries: bool = True
    projective_dep: bool = False
    projective_const: bool = False
    single_root: bool = False

    def __post_init__(self):
        for name in ("word_dim", "char_dim", "cnn_window", "cnn_filters", "encoder_layers",
                     "encoder_hidden", "decoder_layers", "decoder_hidden", "arc_mlp_dim",
                     "label_mlp_dim"):
            if getattr(self, name) <= 0:
                raise DataError(f"{name} must be positive")
        if self.pos_dim < 0 or self.external_dim < 0:
            raise DataError("pos_dim and external_dim must be >= 0")
        if not 0.0 <= self.dropout < 1.0:
            raise DataError("dropout must be in [0, 1)")


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.9
    grad_clip: float = 5.0
    decay_rate: float = 0.75
    patience: int = 2  # epochs without dev improvement before decaying lr
    unk_replace: float = 0.5
    seed: int = 1
    tasks: str = "dep,const"  # drop one to train a single-task baseline
    target_score: Optional[float] = None  # stop once the dev harmonic mean reaches it

    @property
    def task_set(self):
        return {t.strip() for t in self.tasks.split(",") if t.strip()}


ALIASES = {
    "cnn_window_size": "cnn_window",
    "cnn_number_of_filters": "cnn_filters",
    "bilstm_encoder_layers": "encoder_layers",
    "bilstm_encoder_size": "encoder_hidden",
    "lstm_decoder_layers": "decoder_layers",
    "lstm_decoder_size": "decoder_hidden",
    "lstm_layers_dropout": "dropout",
    "embeddings_dropout": "dropout",
    "embedding_dimension": ("word_dim", "char_dim", "pos_dim"),
    "arc_mlp_size": "arc_mlp_dim",
    "label_mlp_size": "label_mlp_dim",
    "unk_replacement_probability": "unk_replace",
    "initial_learning_rate": "learning_rate",
    "batch": "batch_size",
    "gradient_clipping": "grad_clip",
}


def _convert(value: str, kind):
    kind = str(kind)
    if "bool" in kind:
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(value)
    if "Optional" in kind or "None" in kind:
        return None if value.lower() == "none" else float(value)
    if "int" in kind:
        return int(value)
    if "float" in kind:
        return float(value)
    return value


def apply_settings(settings: dict, model: ModelConfig, train: TrainConfig):
    """Apply ``{key: string value}`` overrides in place."""
    targets = {f.name: (model, f.type) for f in fields(model)}
    targets.update({f.name: (train, f.type) for f in fields(train)})
    for key, value in settings.items():
        key = key.strip().lower().replace("-", "_").replace(" ", "_")
        names = ALIASES.get(key, key)
        for name in (names,) if isinstance(names, str) else names:
            if name not in targets:
                raise DataError(f"unknown config key {key!r}")
            obj, kind = targets[name]
            try:
                setattr(obj, name, _convert(str(value).strip(), kind))
            except ValueError:
                raise DataError(f"bad value {value!r} for {key}") from None
    model.__post_init__()


def parse_config(text: str) -> dict:
    settings = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DataError(f"config line {lineno}: expected key = value")
        settings[key.strip()] = value.strip()
    return settings


def load_config(path, model: Optional[ModelConfig] = None, train: Optional[TrainConfig] = None):
    model = model or ModelConfig()
    train = train or TrainConfig()
    with open(path, encoding="utf-8") as f:
        apply_settings(parse_config(f.read()), model, train)
    return model, train


def config_dict(config) -> dict:
    return dataclasses.asdict(config)
