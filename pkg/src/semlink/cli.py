"""Command-line surface.

Exit codes: 0 success, 1 validation error in input data, 2 usage error.
Every command that involves randomness takes a required --seed, and
identical invocations produce byte-identical output files.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import checkpoint
from .boxes import nms as run_nms
from .classifiers import (
    BaselineClassifier,
    FusionClassifier,
    evaluate,
    kfold_cv,
)
from .datasets import (
    LabelVocabulary,
    baseline_matrix,
    fusion_matrix,
    read_detections,
    read_features,
    write_detections,
)
from .embeddings import embed_entity, load_word_vectors
from .errors import OutOfVocabularyError, ValidationError
from .kb import Triple, load_kb
from .nn import grad_check, one_hot
from .nn.rng import stream
from .ntl import NeuralTensorLinkPredictor, NtlModel, init_relation_params


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except FileNotFoundError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)


@click.group(cls=_Group)
def main():
    """Semantic link learning over image entities."""


def _load_inputs(features, glove, labels, glove_dim):
    vocabulary = LabelVocabulary.from_file(labels)
    table = load_word_vectors(glove, expected_dim=glove_dim)
    dataset = read_features(features, vocabulary)
    return vocabulary, table, dataset


def _matrix(model_name, dataset, table):
    if model_name == "baseline":
        return baseline_matrix(dataset, table)
    return fusion_matrix(dataset, table)


def _report_paths(out):
    stem = Path(out)
    if stem.suffix == ".json":
        stem = stem.with_suffix("")
    return Path(f"{stem}.report.json"), Path(f"{stem}.curves.csv")


@main.command("ingest-check")
@click.option("--features", type=click.Path(exists=True))
@click.option("--detections", type=click.Path(exists=True))
@click.option("--labels", type=click.Path(exists=True))
@click.option("--glove", type=click.Path(exists=True))
@click.option("--glove-dim", default=100, show_default=True)
@click.option("--kb", type=click.Path(exists=True))
def ingest_check(features, detections, labels, glove, glove_dim, kb):
    """Validate data files and print what was read."""
    if labels:
        vocabulary = LabelVocabulary.from_file(labels)
        click.echo(f"labels: {len(vocabulary)} classes")
    else:
        vocabulary = LabelVocabulary()
    if features:
        dataset = read_features(features, vocabulary)
        click.echo(f"features: {len(dataset)} records")
    if detections:
        dets = read_detections(detections)
        n_boxes = sum(len(b) for b in dets.values())
        click.echo(f"detections: {len(dets)} images, {n_boxes} boxes")
    if glove:
        table = load_word_vectors(glove, expected_dim=glove_dim)
        click.echo(f"glove: {len(table)} tokens of dimension {table.dim}")
    if kb:
        base = load_kb(kb)
        click.echo(
            f"kb: {len(base)} triples, {len(base.entities)} entities, "
            f"{len(base.relations)} relations"
        )
    click.echo("ok")


@main.command()
@click.option("--model", "model_name", required=True,
              type=click.Choice(["baseline", "fusion"]))
@click.option("--features", required=True, type=click.Path(exists=True))
@click.option("--glove", required=True, type=click.Path(exists=True))
@click.option("--glove-dim", default=100, show_default=True)
@click.option("--labels", required=True, type=click.Path(exists=True))
@click.option("--seed", required=True, type=int)
@click.option("--out", required=True, type=click.Path())
@click.option("--epochs", default=200, show_default=True)
@click.option("--lr", default=0.01, show_default=True)
@click.option("--val-split", default=0.2, show_default=True)
@click.option("--batch", default=32, show_default=True)
def train(model_name, features, glove, glove_dim, labels, seed, out,
          epochs, lr, val_split, batch):
    """Train a classifier; writes checkpoint, report, and curves."""
    vocabulary, table, dataset = _load_inputs(features, glove, labels,
                                              glove_dim)
    X, y = _matrix(model_name, dataset, table)
    cls = BaselineClassifier if model_name == "baseline" else FusionClassifier
    model = cls(epochs=epochs, learning_rate=lr, val_split=val_split,
                batch_size=batch, seed=seed)
    model.fit(X, y)
    checkpoint.save_classifier(model, model_name, vocabulary.labels, out)
    report_path, curves_path = _report_paths(out)
    report_path.write_text(model.report_.to_json() + "\n")
    model.report_.write_curves_csv(curves_path)
    final = model.report_.final_val_accuracy
    if final is not None:
        click.echo(f"final validation accuracy {final:.4f}")
    click.echo(f"checkpoint written to {out}")


@main.command("eval")
@click.option("--model-ckpt", required=True, type=click.Path(exists=True))
@click.option("--features", required=True, type=click.Path(exists=True))
@click.option("--glove", required=True, type=click.Path(exists=True))
@click.option("--glove-dim", default=100, show_default=True)
@click.option("--labels", required=True, type=click.Path(exists=True))
def eval_cmd(model_ckpt, features, glove, glove_dim, labels):
    """Accuracy of a trained classifier on a feature file."""
    model, _ = checkpoint.load_classifier(model_ckpt)
    kind = "baseline" if isinstance(model, BaselineClassifier) else "fusion"
    _, table, dataset = _load_inputs(features, glove, labels, glove_dim)
    X, y = _matrix(kind, dataset, table)
    click.echo(f"accuracy {evaluate(model, X, y):.6f}")


@main.command()
@click.option("--model-ckpt", required=True, type=click.Path(exists=True))
@click.option("--features", required=True, type=click.Path(exists=True))
@click.option("--glove", required=True, type=click.Path(exists=True))
@click.option("--glove-dim", default=100, show_default=True)
@click.option("--labels", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path())
def predict(model_ckpt, features, glove, glove_dim, labels, out):
    """Predict class labels; one JSON object per record."""
    model, label_list = checkpoint.load_classifier(model_ckpt)
    kind = "baseline" if isinstance(model, BaselineClassifier) else "fusion"
    _, table, dataset = _load_inputs(features, glove, labels, glove_dim)
    X, _ = _matrix(kind, dataset, table)
    probs = model.predict_proba(X)
    lines = []
    for record, p in zip(dataset, probs):
        lines.append(json.dumps({
            "image_id": record.image_id,
            "predicted_label": label_list[int(p.argmax())],
            "probabilities": p.tolist(),
        }))
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--model", "model_name", required=True,
              type=click.Choice(["baseline", "fusion"]))
@click.option("--features", required=True, type=click.Path(exists=True))
@click.option("--glove", required=True, type=click.Path(exists=True))
@click.option("--glove-dim", default=100, show_default=True)
@click.option("--labels", required=True, type=click.Path(exists=True))
@click.option("--k", default=10, show_default=True)
@click.option("--seed", required=True, type=int)
@click.option("--epochs", default=200, show_default=True)
@click.option("--lr", default=0.01, show_default=True)
@click.option("--batch", default=32, show_default=True)
@click.option("--report", type=click.Path())
def cv(model_name, features, glove, glove_dim, labels, k, seed, epochs,
       lr, batch, report):
    """k-fold cross-validation with per-fold re-initialization."""
    _, table, dataset = _load_inputs(features, glove, labels, glove_dim)
    X, y = _matrix(model_name, dataset, table)
    cls = BaselineClassifier if model_name == "baseline" else FusionClassifier

    def build(fold_seed):
        return cls(epochs=epochs, learning_rate=lr, val_split=0.0,
                   batch_size=batch, seed=fold_seed)

    result = kfold_cv(build, X, y, k=k, seed=seed)
    for i, acc in enumerate(result.fold_accuracies, start=1):
        click.echo(f"fold {i}: {acc:.6f}")
    click.echo(f"mean {result.mean:.6f} std {result.std:.6f}")
    if report:
        Path(report).write_text(json.dumps(result.to_dict(), indent=2) + "\n")


@main.command("nms")
@click.option("--detections", required=True, type=click.Path(exists=True))
@click.option("--iou", "iou_threshold", default=0.5, show_default=True)
@click.option("--max-keep", default=5, show_default=True)
@click.option("--out", required=True, type=click.Path())
def nms_cmd(detections, iou_threshold, max_keep, out):
    """Apply greedy per-class NMS to a raw detections file."""
    raw = read_detections(detections)
    kept = {
        image_id: run_nms(boxes, iou_threshold=iou_threshold,
                          max_keep=max_keep)
        for image_id, boxes in raw.items()
    }
    write_detections(kept, out)
    n_in = sum(len(b) for b in raw.values())
    n_out = sum(len(b) for b in kept.values())
    click.echo(f"kept {n_out} of {n_in} boxes for {len(kept)} images")


@main.command("train-ntl")
@click.option("--kb", required=True, type=click.Path(exists=True))
@click.option("--glove", required=True, type=click.Path(exists=True))
@click.option("--glove-dim", default=100, show_default=True)
@click.option("--seed", required=True, type=int)
@click.option("--out", required=True, type=click.Path())
@click.option("--k", default=4, show_default=True)
@click.option("--margin", default=1.0, show_default=True)
@click.option("--lr", default=0.01, show_default=True)
@click.option("--epochs", default=200, show_default=True)
@click.option("--negatives", default=1, show_default=True)
@click.option("--report", type=click.Path())
def train_ntl_cmd(kb, glove, glove_dim, seed, out, k, margin, lr, epochs,
                  negatives, report):
    """Train the tensor-layer link predictor on a knowledge base."""
    base = load_kb(kb)
    table = load_word_vectors(glove, expected_dim=glove_dim)
    vectors = {}
    for entity in base.entities:
        try:
            vectors[entity] = embed_entity(table, entity).vector
        except OutOfVocabularyError:
            click.echo(
                f"warning: {entity!r} is out of vocabulary, "
                "using the zero vector", err=True,
            )
            vectors[entity] = np.zeros(table.dim)
    predictor = NeuralTensorLinkPredictor(
        slices=k, margin=margin, learning_rate=lr, epochs=epochs,
        negatives_per_positive=negatives, seed=seed,
    )
    predictor.fit(base, vectors)
    checkpoint.save_ntl(predictor.model_, out)
    losses = predictor.model_.training_losses
    if losses:
        click.echo(f"hinge loss first {losses[0]:.6f} last {losses[-1]:.6f}")
    if report:
        Path(report).write_text(
            json.dumps({"epoch_losses": losses}, indent=2) + "\n"
        )
    click.echo(f"checkpoint written to {out}")


@main.command("score-triple")
@click.option("--kb", type=click.Path(exists=True))
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True))
@click.option("--head", required=True)
@click.option("--rel", required=True)
@click.option("--tail", required=True)
def score_triple(kb, model_path, head, rel, tail):
    """Raw score and plausibility of one (head, relation, tail)."""
    model = checkpoint.load_ntl(model_path)
    raw = model.raw_score(head, rel, tail)
    click.echo(f"raw {raw!r}")
    click.echo(f"plausibility {-raw!r}")
    if kb:
        base = load_kb(kb)
        known = base.contains_triple(Triple(head, rel, tail))
        click.echo(f"in_kb {str(known).lower()}")


@main.command("rank-tails")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True))
@click.option("--head", required=True)
@click.option("--rel", required=True)
@click.option("--top", default=0, help="Show only the best N tails.")
def rank_tails_cmd(model_path, head, rel, top):
    """Rank every entity as the tail of (head, relation, ?)."""
    model = checkpoint.load_ntl(model_path)
    ranked = model.rank_tails(head, rel)
    if top:
        ranked = ranked[:top]
    for rank, (entity, plaus) in enumerate(ranked, start=1):
        click.echo(f"{rank}\t{entity}\t{plaus!r}")


@main.command("grad-check")
@click.option("--model", "model_name", required=True,
              type=click.Choice(["baseline", "fusion", "ntl"]))
@click.option("--seed", required=True, type=int)
@click.option("--draws", default=10, show_default=True,
              help="Random (input, coordinate-subset) probes.")
@click.option("--coords", default=8, show_default=True,
              help="Coordinates checked per parameter tensor per draw.")
@click.option("--tolerance", default=None, type=float,
              help="Exit 1 if the max relative error exceeds this.")
def grad_check_cmd(model_name, seed, draws, coords, tolerance):
    """Analytic vs central-difference gradients on random draws."""
    from .testing import ntl_grad_check_error
    from .classifiers import build_baseline_network, build_fusion_network

    rng = stream(seed, 3_000_000)
    worst = 0.0
    for draw in range(draws):
        if model_name == "ntl":
            err = ntl_grad_check_error(rng, d=6, k=3)
        else:
            if model_name == "baseline":
                net = build_baseline_network(seed + draw)
                x = rng.standard_normal((1, 100))
            else:
                net = build_fusion_network(seed + draw)
                x = rng.standard_normal((1, 4196))
            y = one_hot(np.array([rng.integers(12)]), 12)
            err = grad_check(net, x, y, max_coords_per_param=coords, rng=rng)
        worst = max(worst, err)
    click.echo(f"max relative error {worst:.3e}")
    if tolerance is not None and worst > tolerance:
        raise ValidationError(
            f"gradient check failed: {worst:.3e} > {tolerance:.3e}"
        )


if __name__ == "__main__":
    main()
