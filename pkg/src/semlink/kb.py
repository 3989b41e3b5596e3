"""Closed-world knowledge base of (head, relation, tail) triples.

The KB file format is UTF-8 text, one triple per line as
``head<TAB>relation<TAB>tail``. Lines starting with ``#`` are comments,
blank lines are skipped. Labels are trimmed of surrounding whitespace but
keep internal whitespace ("tennis racket" is one entity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FileFormatError, ValidationError


@dataclass(frozen=True)
class Triple:
    head: str
    relation: str
    tail: str


class KnowledgeBase:
    """Ordered, deduplicated sets of entities, relations, and triples.

    Iteration order everywhere is first-occurrence order, which makes
    seeded holdout splits reproducible. Instances are treated as
    immutable after construction.
    """

    def __init__(self, triples=()):
        self.entities: list[str] = []
        self.relations: list[str] = []
        self.triples: list[Triple] = []
        self._entity_index: dict[str, int] = {}
        self._relation_index: dict[str, int] = {}
        self._triple_set: set[Triple] = set()
        for t in triples:
            self._add(t)

    def _add(self, t: Triple) -> None:
        if t in self._triple_set:
            return
        for label in (t.head, t.tail):
            if label not in self._entity_index:
                self._entity_index[label] = len(self.entities)
                self.entities.append(label)
        if t.relation not in self._relation_index:
            self._relation_index[t.relation] = len(self.relations)
            self.relations.append(t.relation)
        self._triple_set.add(t)
        self.triples.append(t)

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triple_set

    def contains_triple(self, t: Triple) -> bool:
        """Closed-world membership: False means the fact is false."""
        return t in self._triple_set

    def entity_index(self, label: str) -> int:
        return self._entity_index[label]

    def triples_with_relation(self, relation: str) -> list[Triple]:
        return [t for t in self.triples if t.relation == relation]

    def true_tails(self, head: str, relation: str) -> set[str]:
        """All tails t such that (head, relation, t) is in the KB."""
        return {
            t.tail
            for t in self.triples
            if t.head == head and t.relation == relation
        }


def load_kb(path) -> KnowledgeBase:
    """Parse a TSV triple file into a KnowledgeBase.

    Duplicate lines collapse to a single triple; the first occurrence
    fixes the order.
    """
    kb = KnowledgeBase()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise FileFormatError(
                    f"expected 3 tab-separated fields, got {len(fields)}",
                    path=path,
                    line=lineno,
                )
            head, relation, tail = (f.strip() for f in fields)
            if not head or not relation or not tail:
                raise FileFormatError(
                    "empty field in triple", path=path, line=lineno
                )
            kb._add(Triple(head, relation, tail))
    return kb


def save_kb(kb: KnowledgeBase, path) -> None:
    """Write triples in KB order; load_kb(save_kb(kb)) round-trips."""
    with open(path, "w", encoding="utf-8") as fh:
        for t in kb.triples:
            fh.write(f"{t.head}\t{t.relation}\t{t.tail}\n")


def split_kb(kb: KnowledgeBase, keep_fraction: float, seed: int):
    """Partition the triples into (kept, held_out) by a seeded shuffle.

    |kept| = round(keep_fraction * |H|), half-up. The two lists are an
    exact partition of the KB's triples.
    """
    if not 0.0 <= keep_fraction <= 1.0:
        raise ValidationError(
            f"keep_fraction must be in [0, 1], got {keep_fraction}"
        )
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(kb.triples))
    n_keep = int(math.floor(keep_fraction * len(kb.triples) + 0.5))
    kept = [kb.triples[i] for i in order[:n_keep]]
    held_out = [kb.triples[i] for i in order[n_keep:]]
    return kept, held_out
