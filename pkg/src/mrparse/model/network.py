"""Neural network: a shared BiLSTM-CNN encoder feeding two pointer decoders.

Shapes use ``B`` for batch, ``T`` for the longest sentence (without ROOT)
and ``T+1`` for positions including ROOT at index 0.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import torch
from torch import nn
from torch.nn.utils.rnn import pack_padded_sequence, pad_packed_sequence

from .config import ModelConfig

TASKS = ("dep", "const")


class Batch(NamedTuple):
    words: torch.Tensor  # B x T
    chars: torch.Tensor  # B x T x C
    pos: torch.Tensor  # B x T
    lengths: torch.Tensor  # B, on CPU
    external: Optional[torch.Tensor] = None  # B x T x E


class CharCNN(nn.Module):
    """Convolution over character embeddings, max-pooled over positions."""

    def __init__(self, n_chars: int, char_dim: int, filters: int, window: int):
        super().__init__()
        self.embed = nn.Embedding(n_chars, char_dim, padding_idx=0)
        # left/right padding keeps one output per character and lets
        # words shorter than the window through
        self.pad = ((window - 1) // 2, window // 2)
        self.conv = nn.Conv1d(char_dim, filters, window)

    def forward(self, chars: torch.Tensor) -> torch.Tensor:
        shape = chars.shape[:-1]
        chars = chars.reshape(-1, chars.shape[-1])
        # zero padded positions explicitly so the padding row never matters
        x = (self.embed(chars) * (chars != 0).unsqueeze(-1)).transpose(1, 2)
        x = nn.functional.pad(x, self.pad)
        y = self.conv(x)
        y = y.masked_fill((chars == 0).unsqueeze(1), float("-inf"))
        out = y.max(dim=2).values
        # fully padded (non-existent) words
        out = out.masked_fill(torch.isinf(out), 0.0)
        return out.reshape(*shape, -1)


class SharedEncoder(nn.Module):
    def __init__(self, config: ModelConfig, n_words: int, n_chars: int, n_pos: int):
        super().__init__()
        c = config
        self.word_embed = nn.Embedding(n_words, c.word_dim, padding_idx=0)
        self.char_cnn = CharCNN(n_chars, c.char_dim, c.cnn_filters, c.cnn_window)
        self.pos_embed = nn.Embedding(n_pos, c.pos_dim, padding_idx=0) if c.pos_dim else None
        in_dim = c.word_dim + c.cnn_filters + c.pos_dim + c.external_dim
        self.lstm = nn.LSTM(in_dim, c.encoder_hidden, c.encoder_layers, batch_first=True,
                            bidirectional=True, dropout=c.dropout if c.encoder_layers > 1 else 0.0)
        self.root = nn.Parameter(torch.randn(2 * c.encoder_hidden) * 0.1)
        self.dropout = nn.Dropout(c.dropout)
        self.external_dim = c.external_dim

    def forward(self, batch: Batch) -> torch.Tensor:
        """Encoder states ``B x (T+1) x 2H`` with the ROOT vector at position 0."""
        parts = [self.char_cnn(batch.chars), self.word_embed(batch.words)]
        if self.pos_embed is not None:
            parts.append(self.pos_embed(batch.pos))
        if self.external_dim:
            if batch.external is None or batch.external.shape[-1] != self.external_dim:
                raise ValueError(f"model expects {self.external_dim}-dim external vectors")
            parts.append(batch.external.to(parts[0].dtype))
        x = self.dropout(torch.cat(parts, dim=-1))
        packed = pack_padded_sequence(x, batch.lengths, batch_first=True, enforce_sorted=False)
        out, _ = self.lstm(packed)
        out, _ = pad_packed_sequence(out, batch_first=True, total_length=x.shape[1])
        out = self.dropout(out)
        root = self.root.to(out.dtype).expand(out.shape[0], 1, -1)
        return torch.cat([root, out], dim=1)


class MLP(nn.Module):
    """Single layer with ELU activation."""

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.linear = nn.Linear(in_dim, out_dim)

    def forward(self, x):
        return nn.functional.elu(self.linear(x))


class BiaffinePointer(nn.Module):
    """``f1(s)^T W f2(h) + U^T f1(s) + V^T f2(h) + b`` for every (step, position)."""

    def __init__(self, state_dim: int, enc_dim: int, mlp_dim: int):
        super().__init__()
        self.f1 = MLP(state_dim, mlp_dim)
        self.f2 = MLP(enc_dim, mlp_dim)
        self.W = nn.Parameter(torch.zeros(mlp_dim, mlp_dim))
        self.U = nn.Parameter(torch.zeros(mlp_dim))
        self.V = nn.Parameter(torch.zeros(mlp_dim))
        self.b = nn.Parameter(torch.zeros(()))
        nn.init.xavier_uniform_(self.W)
        nn.init.uniform_(self.U, -0.1, 0.1)
        nn.init.uniform_(self.V, -0.1, 0.1)

    def forward(self, s: torch.Tensor, h: torch.Tensor) -> torch.Tensor:
        """``s``: B x T x S, ``h``: B x (T+1) x E -> scores B x T x (T+1)."""
        a, c = self.f1(s), self.f2(h)
        bilinear = torch.einsum("bti,ij,bpj->btp", a, self.W, c)
        return bilinear + (a @ self.U).unsqueeze(2) + (c @ self.V).unsqueeze(1) + self.b


class BiaffineLabeler(nn.Module):
    """Per-label biaffine score of the arc (head ``p`` -> focus ``t``)."""

    def __init__(self, state_dim: int, enc_dim: int, mlp_dim: int, n_labels: int):
        super().__init__()
        self.g1 = MLP(state_dim, mlp_dim)
        self.g2 = MLP(enc_dim, mlp_dim)
        self.W = nn.Parameter(torch.zeros(n_labels, mlp_dim, mlp_dim))
        self.U = nn.Parameter(torch.zeros(n_labels, mlp_dim))
        self.V = nn.Parameter(torch.zeros(n_labels, mlp_dim))
        self.b = nn.Parameter(torch.zeros(n_labels))
        nn.init.xavier_uniform_(self.W)
        nn.init.uniform_(self.U, -0.1, 0.1)
        nn.init.uniform_(self.V, -0.1, 0.1)

    def forward(self, s: torch.Tensor, h_head: torch.Tensor) -> torch.Tensor:
        """``s``: ... x S, ``h_head``: ... x E (aligned) -> ... x L."""
        a, c = self.g1(s), self.g2(h_head)
        bilinear = torch.einsum("...i,lij,...j->...l", a, self.W, c)
        return bilinear + a @ self.U.T + c @ self.V.T + self.b


class PointerDecoder(nn.Module):
    """LSTM over the encoder states of the focus words, plus pointer and labeler."""

    def __init__(self, config: ModelConfig, n_labels: int):
        super().__init__()
        c = config
        enc_dim = 2 * c.encoder_hidden
        self.lstm = nn.LSTM(enc_dim, c.decoder_hidden, c.decoder_layers, batch_first=True,
                            dropout=c.dropout if c.decoder_layers > 1 else 0.0)
        self.dropout = nn.Dropout(c.dropout)
        self.pointer = BiaffinePointer(c.decoder_hidden, enc_dim, c.arc_mlp_dim)
        self.labeler = BiaffineLabeler(c.decoder_hidden, enc_dim, c.label_mlp_dim, max(n_labels, 1))

    def states(self, H: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
        """Decoder state ``s_t`` for each focus word t = 1..n: B x T x S."""
        focus = H[:, 1:]
        packed = pack_padded_sequence(focus, lengths, batch_first=True, enforce_sorted=False)
        out, _ = self.lstm(packed)
        out, _ = pad_packed_sequence(out, batch_first=True, total_length=focus.shape[1])
        return self.dropout(out)

    def label_scores(self, s: torch.Tensor, H: torch.Tensor, heads: torch.Tensor) -> torch.Tensor:
        """Label scores for arcs ``heads[b, t] -> t``: B x T x L."""
        idx = heads.clamp(min=0).unsqueeze(-1).expand(-1, -1, H.shape[-1])
        return self.labeler(s, torch.gather(H, 1, idx))


class MultitaskPointerNet(nn.Module):
    def __init__(self, config: ModelConfig, n_words: int, n_chars: int, n_pos: int,
                 n_dep_labels: int, n_const_labels: int, n_unary_tags: int):
        super().__init__()
        self.encoder = SharedEncoder(config, n_words, n_chars, n_pos)
        self.decoders = nn.ModuleDict({
            "dep": PointerDecoder(config, n_dep_labels),
            "const": PointerDecoder(config, n_const_labels),
        })
        self.unary = nn.Linear(2 * config.encoder_hidden, max(n_unary_tags, 1))

    def pointer_scores(self, task: str, H: torch.Tensor, lengths: torch.Tensor):
        """(decoder states, masked pointer scores B x T x (T+1))."""
        dec = self.decoders[task]
        s = dec.states(H, lengths)
        scores = dec.pointer(s, H)
        positions = torch.arange(H.shape[1])
        invalid = positions.unsqueeze(0) > lengths.unsqueeze(1)  # B x (T+1)
        return s, scores.masked_fill(invalid.unsqueeze(1), float("-inf"))

    def unary_scores(self, H: torch.Tensor) -> torch.Tensor:
        return self.unary(H[:, 1:])
