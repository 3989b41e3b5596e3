"""Neural tensor layer triple scoring and tail-ranking link prediction.

The raw score of (head, relation, tail) with entity vectors h, t is

    sum_i tanh( h^T W_i t + V[i] . [h; t] + b_i ),    i = 1..k

with per-relation parameters W (d x d x k), V (k x 2d), b (k). The raw
score is oriented so that true triples score LOW; the plausibility used
for ranking and for the hinge loss is its negation, so "more plausible"
always means "ranked first". Entity vectors are frozen inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .errors import ValidationError
from .kb import KnowledgeBase, Triple
from .nn.optim import Adam
from .nn.rng import SAMPLING_SPACE, stream

INIT_SCALE = 0.1


@dataclass
class NtlRelationParams:
    W: np.ndarray  # (d, d, k)
    V: np.ndarray  # (k, 2d)
    b: np.ndarray  # (k,)

    def __post_init__(self):
        d, d2, k = self.W.shape
        if d != d2 or self.V.shape != (k, 2 * d) or self.b.shape != (k,):
            raise ValidationError(
                f"inconsistent NTL parameter shapes: W{self.W.shape}, "
                f"V{self.V.shape}, b{self.b.shape}"
            )

    @property
    def d(self) -> int:
        return self.W.shape[0]

    @property
    def k(self) -> int:
        return self.W.shape[2]

    def arrays(self):
        return [self.W, self.V, self.b]


def init_relation_params(d: int, k: int, rng) -> NtlRelationParams:
    return NtlRelationParams(
        W=rng.uniform(-INIT_SCALE, INIT_SCALE, size=(d, d, k)),
        V=rng.uniform(-INIT_SCALE, INIT_SCALE, size=(k, 2 * d)),
        b=rng.uniform(-INIT_SCALE, INIT_SCALE, size=k),
    )


def _check_pair(p: NtlRelationParams, h, t):
    h = np.asarray(h, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if h.shape != (p.d,) or t.shape != (p.d,):
        raise ValidationError(
            f"entity vectors must have shape ({p.d},), "
            f"got {h.shape} and {t.shape}"
        )
    if not (np.all(np.isfinite(h)) and np.all(np.isfinite(t))):
        raise ValidationError("non-finite entity vector")
    return h, t


def ntl_score_vector(p: NtlRelationParams, h, t) -> np.ndarray:
    """Per-slice tanh activations; every component is in (-1, 1)."""
    h, t = _check_pair(p, h, t)
    bilinear = np.einsum("i,ijk,j->k", h, p.W, t)
    z = bilinear + p.V @ np.concatenate([h, t]) + p.b
    return np.tanh(z)


def ntl_score(p: NtlRelationParams, h, t) -> float:
    """Raw scalar score: the sum over slices, in (-k, k)."""
    return float(ntl_score_vector(p, h, t).sum())


def ntl_gradients(p: NtlRelationParams, h, t):
    """Closed-form gradients of the raw scalar score.

    Returns (dW, dV, db, dh, dt). With z_i the pre-tanh slice value and
    g_i = 1 - tanh(z_i)^2:
        dW_i = g_i * h t^T
        dV_i = g_i * [h; t]
        db_i = g_i
        dh   = sum_i g_i (W_i t + V_i[:d])
        dt   = sum_i g_i (W_i^T h + V_i[d:])
    """
    h, t = _check_pair(p, h, t)
    d = p.d
    ht = np.concatenate([h, t])
    z = np.einsum("i,ijk,j->k", h, p.W, t) + p.V @ ht + p.b
    g = 1.0 - np.tanh(z) ** 2
    dW = np.einsum("k,i,j->ijk", g, h, t)
    dV = np.outer(g, ht)
    db = g
    dh = np.einsum("ijk,j,k->i", p.W, t, g) + g @ p.V[:, :d]
    dt = np.einsum("ijk,i,k->j", p.W, h, g) + g @ p.V[:, d:]
    return dW, dV, db, dh, dt


@dataclass
class NtlTrainConfig:
    k: int = 4
    margin: float = 1.0
    lr: float = 0.01
    epochs: int = 200
    negatives_per_positive: int = 1
    seed: int = 0


class NtlModel:
    """Trained scorer over a fixed entity and relation vocabulary."""

    def __init__(self, d, k, relation_params, entity_vectors, entities):
        self.d = d
        self.k = k
        self.relation_params: dict[str, NtlRelationParams] = relation_params
        self.entity_vectors: dict[str, np.ndarray] = entity_vectors
        self.entities: list[str] = list(entities)
        self.training_losses: list[float] = []

    def _vec(self, label: str) -> np.ndarray:
        if label not in self.entity_vectors:
            raise ValidationError(f"unknown entity {label!r}")
        return self.entity_vectors[label]

    def _params(self, relation: str) -> NtlRelationParams:
        if relation not in self.relation_params:
            raise ValidationError(f"unknown relation {relation!r}")
        return self.relation_params[relation]

    def raw_score(self, head: str, relation: str, tail: str) -> float:
        return ntl_score(self._params(relation), self._vec(head),
                         self._vec(tail))

    def plausibility(self, head: str, relation: str, tail: str) -> float:
        """Negated raw score; higher means more plausible."""
        return -self.raw_score(head, relation, tail)

    def rank_tails(self, head: str, relation: str):
        """All entities as (entity, plausibility), most plausible first,
        ties broken by entity index."""
        p = self._params(relation)
        h = self._vec(head)
        scores = [
            -ntl_score(p, h, self.entity_vectors[e]) for e in self.entities
        ]
        order = sorted(range(len(self.entities)),
                       key=lambda i: (-scores[i], i))
        return [(self.entities[i], scores[i]) for i in order]

    def hits_at_n(self, test_triples, n: int) -> float:
        """Fraction of triples whose true tail ranks in the top n."""
        triples = list(test_triples)
        if n < 1:
            raise ValidationError(f"n must be >= 1, got {n}")
        if not triples:
            raise ValidationError("empty test triple set")
        hits = 0
        for t in triples:
            ranked = self.rank_tails(t.head, t.relation)
            top = [entity for entity, _ in ranked[:n]]
            if t.tail in top:
                hits += 1
        return hits / len(triples)


def train_ntl(kb: KnowledgeBase, entity_vectors: dict,
              config: NtlTrainConfig) -> NtlModel:
    """Margin-ranking training with uniformly corrupted tails.

    Each epoch accumulates hinge-loss gradients
    max(0, margin - plaus(true) + plaus(corrupt)) over every positive
    triple and its sampled negatives, then takes one Adam step on the
    relation parameters. Corrupt tails are drawn uniformly from the
    entity set excluding tails that would form a true triple. Entity
    vectors stay frozen. Deterministic for a fixed seed.
    """
    if len(kb) == 0:
        raise ValidationError("cannot train on an empty knowledge base")
    if len(kb.entities) < 2:
        raise ValidationError("need at least 2 entities to sample negatives")
    missing = [e for e in kb.entities if e not in entity_vectors]
    if missing:
        raise ValidationError(f"no entity vector for {missing}")
    dims = {np.asarray(entity_vectors[e]).shape for e in kb.entities}
    if len(dims) != 1:
        raise ValidationError(f"inconsistent entity vector shapes: {dims}")
    d = next(iter(dims))[0]

    vectors = {
        e: np.asarray(entity_vectors[e], dtype=np.float64)
        for e in kb.entities
    }
    init_rng = stream(config.seed, 0, 0)
    relation_params = {
        r: init_relation_params(d, config.k, init_rng) for r in kb.relations
    }
    model = NtlModel(d, config.k, relation_params, vectors, kb.entities)

    all_params = [a for r in kb.relations
                  for a in relation_params[r].arrays()]
    optimizer = Adam(all_params, lr=config.lr)
    sample_rng = stream(config.seed, SAMPLING_SPACE)

    # closed-world filtered candidate tails per (head, relation)
    candidates = {}
    for t in kb.triples:
        key = (t.head, t.relation)
        if key not in candidates:
            true = kb.true_tails(*key)
            candidates[key] = [e for e in kb.entities if e not in true]

    for epoch in range(config.epochs):
        grad_buffers = {
            r: [np.zeros_like(a) for a in relation_params[r].arrays()]
            for r in kb.relations
        }
        order = stream(config.seed, SAMPLING_SPACE, 1 + epoch).permutation(
            len(kb.triples)
        )
        losses = []
        for idx in order:
            triple = kb.triples[idx]
            pool = candidates[(triple.head, triple.relation)]
            if not pool:
                continue
            p = relation_params[triple.relation]
            h = vectors[triple.head]
            t_true = vectors[triple.tail]
            s_true = ntl_score(p, h, t_true)
            for _ in range(config.negatives_per_positive):
                corrupt = pool[sample_rng.integers(len(pool))]
                t_neg = vectors[corrupt]
                s_neg = ntl_score(p, h, t_neg)
                # plausibility = -raw, so the hinge margin reads
                # margin + raw(true) - raw(corrupt)
                hinge = config.margin + s_true - s_neg
                losses.append(max(0.0, hinge))
                if hinge <= 0.0:
                    continue
                gW, gV, gb, _, _ = ntl_gradients(p, h, t_true)
                buf = grad_buffers[triple.relation]
                buf[0] += gW
                buf[1] += gV
                buf[2] += gb
                gW, gV, gb, _, _ = ntl_gradients(p, h, t_neg)
                buf[0] -= gW
                buf[1] -= gV
                buf[2] -= gb
        if losses:
            scale = 1.0 / len(losses)
            all_grads = [
                g * scale for r in kb.relations for g in grad_buffers[r]
            ]
            optimizer.step(all_grads)
            model.training_losses.append(float(np.mean(losses)))
        else:
            model.training_losses.append(0.0)
    return model


def hits_at_n(model: NtlModel, test_triples, n: int) -> float:
    return model.hits_at_n(test_triples, n)


class NeuralTensorLinkPredictor(BaseEstimator):
    """Estimator wrapper around train_ntl for pipeline composition.

    fit takes a KnowledgeBase plus a label -> vector map and trains the
    per-relation tensor parameters; the fitted model_ exposes scoring,
    ranking, and hits@n.
    """

    def __init__(self, slices=4, margin=1.0, learning_rate=0.01,
                 epochs=200, negatives_per_positive=1, seed=0):
        self.slices = slices
        self.margin = margin
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.negatives_per_positive = negatives_per_positive
        self.seed = seed

    def fit(self, kb: KnowledgeBase, entity_vectors: dict):
        config = NtlTrainConfig(
            k=self.slices,
            margin=self.margin,
            lr=self.learning_rate,
            epochs=self.epochs,
            negatives_per_positive=self.negatives_per_positive,
            seed=self.seed,
        )
        self.model_ = train_ntl(kb, entity_vectors, config)
        return self

    def score_triple(self, head, relation, tail):
        """(raw score, plausibility) for one triple."""
        raw = self.model_.raw_score(head, relation, tail)
        return raw, -raw

    def rank_tails(self, head, relation):
        return self.model_.rank_tails(head, relation)

    def hits_at_n(self, test_triples, n):
        return self.model_.hits_at_n(test_triples, n)
