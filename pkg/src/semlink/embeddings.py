"""Word-vector loading and entity embedding by token averaging.

Consumes standard GloVe-style text: one line per token, the token
followed by its vector components, all space-separated, no header.
Entity labels are lowercased and split on whitespace; the entity vector
is the mean of its in-vocabulary token vectors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import FileFormatError, OutOfVocabularyError, ValidationError

logger = logging.getLogger(__name__)


class WordVectorTable:
    """Immutable token -> vector map with a fixed dimensionality.

    Missing tokens are a distinct outcome (get returns None), never a
    silent zero vector.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._vectors: dict[str, np.ndarray] = {}

    def __len__(self):
        return len(self._vectors)

    def __contains__(self, token: str) -> bool:
        return token in self._vectors

    def get(self, token: str):
        return self._vectors.get(token)

    def __getitem__(self, token: str) -> np.ndarray:
        return self._vectors[token]

    def _put(self, token: str, vector: np.ndarray) -> None:
        if vector.shape != (self.dim,):
            raise ValidationError(
                f"vector for {token!r} has length {vector.shape[0]}, "
                f"expected {self.dim}"
            )
        self._vectors[token] = vector


@dataclass
class EntityEmbedding:
    vector: np.ndarray
    source_tokens: list[str]


def load_word_vectors(path, expected_dim: int = 100) -> WordVectorTable:
    """Load a GloVe-style text file, checking every line's dimension.

    On duplicate tokens the last line wins.
    """
    table = WordVectorTable(expected_dim)
    n_lines = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            n_lines += 1
            parts = raw.split()
            if len(parts) != expected_dim + 1:
                raise FileFormatError(
                    f"expected token + {expected_dim} numbers, "
                    f"got {len(parts) - 1} numbers",
                    path=path,
                    line=lineno,
                )
            token = parts[0]
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise FileFormatError(
                    f"unparseable number: {exc}", path=path, line=lineno
                ) from exc
            table._vectors[token] = vec
    if n_lines == 0:
        raise FileFormatError("empty word-vector file", path=path)
    return table


def tokenize_label(label: str) -> list[str]:
    return label.lower().split()


def embed_entity(table: WordVectorTable, label: str) -> EntityEmbedding:
    """Mean of the label's in-vocabulary token vectors.

    OOV tokens within a label are skipped; if nothing remains the label
    cannot be embedded and OutOfVocabularyError is raised (callers may
    substitute an explicit zero vector, see embed_entity_or_zero).
    """
    if not label.strip():
        raise ValidationError("entity label is empty")
    tokens = tokenize_label(label)
    hits = [(tok, table.get(tok)) for tok in tokens]
    used = [(tok, v) for tok, v in hits if v is not None]
    if not used:
        raise OutOfVocabularyError(
            f"no token of {label!r} is in the word-vector table"
        )
    vectors = np.stack([v for _, v in used])
    return EntityEmbedding(
        vector=vectors.mean(axis=0), source_tokens=[tok for tok, _ in used]
    )


def embed_entity_set(table: WordVectorTable, labels) -> np.ndarray:
    """Average the embeddings of all embeddable labels.

    Labels whose tokens are entirely out of vocabulary are skipped with
    a logged warning. Raises if the list is empty or nothing could be
    embedded.
    """
    labels = list(labels)
    if not labels:
        raise ValidationError("empty entity label list")
    vectors = []
    skipped = []
    for label in labels:
        try:
            vectors.append(embed_entity(table, label).vector)
        except OutOfVocabularyError:
            skipped.append(label)
    if skipped:
        logger.warning("skipped out-of-vocabulary labels: %s", skipped)
    if not vectors:
        raise OutOfVocabularyError(
            f"none of the labels {labels!r} could be embedded"
        )
    return np.stack(vectors).mean(axis=0)


def embed_entity_set_or_zero(table: WordVectorTable, labels) -> np.ndarray:
    """Pipeline fallback: the zero vector when nothing is embeddable."""
    try:
        return embed_entity_set(table, labels)
    except (ValidationError, OutOfVocabularyError):
        logger.warning(
            "falling back to the zero vector for labels %s", list(labels)
        )
        return np.zeros(table.dim, dtype=np.float64)
