"""Precomputed per-token vectors (e.g. averaged subword states of a pretrained
language model), concatenated to the word representation and never trained.

File format: one line of whitespace-separated floats per token, sentences
separated by a blank line, in corpus order.
"""

from __future__ import annotations

import numpy as np

from ..errors import AlignmentError, DataError


def parse_external_embeddings(text: str) -> list:
    blocks, current, dim = [], [], None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            if current:
                blocks.append(np.array(current, dtype=np.float32))
                current = []
            continue
        try:
            row = [float(x) for x in line.split()]
        except ValueError:
            raise DataError(f"external vectors line {lineno}: not a list of floats") from None
        if dim is None:
            dim = len(row)
        elif len(row) != dim:
            raise DataError(f"external vectors line {lineno}: {len(row)} values, expected {dim}")
        current.append(row)
    if current:
        blocks.append(np.array(current, dtype=np.float32))
    return blocks


def load_external_embeddings(path, sentences=None) -> list:
    """Read the vector table; with ``sentences`` given, check it aligns."""
    with open(path, encoding="utf-8") as f:
        blocks = parse_external_embeddings(f.read())
    if sentences is not None:
        check_alignment(blocks, sentences)
    return blocks


def check_alignment(blocks, sentences):
    if len(blocks) != len(sentences):
        raise AlignmentError(f"{len(blocks)} vector blocks for {len(sentences)} sentences")
    for i, (vecs, sent) in enumerate(zip(blocks, sentences), 1):
        if len(vecs) != len(sent):
            raise AlignmentError(f"sentence {i}: {len(vecs)} vectors for {len(sent)} tokens")


def write_external_embeddings(blocks) -> str:
    return "".join(
        "".join(" ".join(repr(float(x)) for x in row) + "\n" for row in vecs) + "\n"
        for vecs in blocks
    )
