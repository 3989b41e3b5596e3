"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with the measured value and its bound.

Run with `pytest tests/test_acceptance.py -s` to see the lines.
"""

import filecmp
import time
from pathlib import Path

import numpy as np
from click.testing import CliRunner

from semlink import (
    BaselineClassifier,
    FusionClassifier,
    NtlTrainConfig,
    build_baseline_network,
    build_fusion_network,
    iou,
    kfold_cv,
    load_kb,
    load_word_vectors,
    nms,
    train_ntl,
)
from semlink.boxes import DetBox
from semlink.cli import main as cli_main
from semlink.embeddings import embed_entity
from semlink.nn import cross_entropy, grad_check, one_hot, softmax
from semlink.nn.rng import stream
from semlink.testing import ntl_grad_check_error

from conftest import make_embedding_clusters, make_fusion_clusters
from test_boxes import iou_reference, nms_reference, random_boxes

FIXTURES = Path(__file__).parent / "fixtures"


def report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'}: {name} ({detail})")
    assert ok, f"{name}: {detail}"


# ---------------------------------------------------------------------
# gradient correctness
# ---------------------------------------------------------------------

def test_gradient_correctness():
    start = time.time()
    rng = stream(0, 12345)

    ntl_worst = max(ntl_grad_check_error(rng, d=6, k=3) for _ in range(100))

    baseline_worst = 0.0
    for draw in range(100):
        net = build_baseline_network(seed=1000 + draw)
        x = rng.standard_normal((1, 100))
        y = one_hot(np.array([rng.integers(12)]), 12)
        baseline_worst = max(
            baseline_worst,
            grad_check(net, x, y, max_coords_per_param=4, rng=rng),
        )

    fusion_worst = 0.0
    for draw in range(100):
        net = build_fusion_network(seed=2000 + draw)
        x = rng.standard_normal((1, 4196))
        y = one_hot(np.array([rng.integers(12)]), 12)
        fusion_worst = max(
            fusion_worst,
            grad_check(net, x, y, max_coords_per_param=1, rng=rng),
        )

    elapsed = time.time() - start
    worst = max(ntl_worst, baseline_worst, fusion_worst)
    report(
        "gradient correctness (scorer/baseline/fusion, 100 draws each)",
        worst <= 1e-4 and elapsed < 30.0,
        f"max rel err {worst:.3e} vs 1e-4 (target 1e-5), "
        f"{elapsed:.1f}s vs 30s",
    )


# ---------------------------------------------------------------------
# architecture shape locks
# ---------------------------------------------------------------------

def test_architecture_shape_locks():
    baseline = build_baseline_network(seed=0)
    fusion = build_fusion_network(seed=0)

    count = baseline.parameter_count()
    shape = (1, 4096)
    for layer in fusion.image_stack.layers:
        shape = layer.output_shape(shape)
    flat_width = shape[0]
    spatial = flat_width // 8
    concat_width = fusion.head.layers[0].in_dim
    out_width = fusion.head.layers[-2].out_dim

    ok = (count == 26_124 and spatial == 128 and concat_width == 1_124
          and out_width == 12)
    report(
        "architecture shape locks",
        ok,
        f"params {count}==26124, spatial {spatial}==128, "
        f"concat {concat_width}==1124, output {out_width}==12",
    )


# ---------------------------------------------------------------------
# synthetic convergence
# ---------------------------------------------------------------------

def test_synthetic_convergence_baseline():
    X, y = make_embedding_clusters(123, n=600)
    start = time.time()
    model = BaselineClassifier(epochs=200, learning_rate=0.01,
                               val_split=0.2, seed=5)
    model.fit(X, y)
    elapsed = time.time() - start
    acc = model.report_.final_val_accuracy
    report(
        "synthetic convergence, baseline",
        acc >= 0.95 and elapsed < 60.0,
        f"val acc {acc:.4f} vs 0.95 after 200 epochs, "
        f"{elapsed:.1f}s vs 60s",
    )


def test_synthetic_convergence_fusion():
    X, y = make_fusion_clusters(123, n=600)
    model = FusionClassifier(epochs=5, learning_rate=0.01,
                             val_split=0.2, seed=5)
    model.fit(X, y)
    acc = model.report_.final_val_accuracy
    report(
        "synthetic convergence, fusion",
        acc >= 0.90,
        f"val acc {acc:.4f} vs 0.90 within 200 epochs (ran 5)",
    )


# ---------------------------------------------------------------------
# link prediction on the toy knowledge base
# ---------------------------------------------------------------------

def test_link_prediction_toy_kb():
    kb = load_kb(FIXTURES / "toy_kb.tsv")
    table = load_word_vectors(FIXTURES / "toy_glove_16d.txt", 16)
    vectors = {e: embed_entity(table, e).vector for e in kb.entities}
    start = time.time()
    model = train_ntl(kb, vectors, NtlTrainConfig(k=4, epochs=200, seed=0))
    elapsed = time.time() - start
    hits = model.hits_at_n(kb.triples, 1)
    first, last = model.training_losses[0], model.training_losses[-1]
    report(
        "link prediction on the toy KB",
        hits >= 0.8 and last <= first and elapsed < 30.0,
        f"hits@1 {hits:.2f} vs 0.8, loss {first:.4f}->{last:.4f}, "
        f"{elapsed:.1f}s vs 30s",
    )


# ---------------------------------------------------------------------
# NMS oracle equivalence and IoU invariants
# ---------------------------------------------------------------------

def test_nms_oracle_equivalence():
    rng = np.random.default_rng(777)
    mismatches = 0
    for _ in range(200):
        boxes = random_boxes(rng, 30)
        threshold = float(rng.uniform(0.1, 0.9))
        keep = int(rng.integers(1, 8))
        if nms(boxes, threshold, keep) != nms_reference(boxes, threshold,
                                                        keep):
            mismatches += 1

    exact_err = max(
        abs(iou(DetBox(0, 0, 2, 2, 0.5, "a"), DetBox(0, 0, 2, 2, 0.5, "a"))
            - 1.0),
        abs(iou(DetBox(0, 0, 1, 1, 0.5, "a"), DetBox(5, 5, 6, 6, 0.5, "a"))
            - 0.0),
        abs(iou(DetBox(0, 0, 2, 2, 0.5, "a"), DetBox(1, 1, 3, 3, 0.5, "a"))
            - 1.0 / 7.0),
    )

    invariance_err = 0.0
    for _ in range(10_000):
        a, b = random_boxes(rng, 2)
        invariance_err = max(invariance_err, abs(iou(a, b) - iou(b, a)))
        dx, dy = rng.uniform(-100, 100, 2)
        shifted = [
            DetBox(c.x_min + dx, c.y_min + dy, c.x_max + dx, c.y_max + dy,
                   c.score, c.class_label) for c in (a, b)
        ]
        invariance_err = max(
            invariance_err, abs(iou(a, b) - iou(*shifted))
        )

    ok = mismatches == 0 and exact_err <= 1e-12 and invariance_err <= 1e-12
    report(
        "NMS oracle equivalence and IoU invariants",
        ok,
        f"{mismatches}/200 mismatches, analytic err {exact_err:.1e}, "
        f"invariance err {invariance_err:.1e} vs 1e-12",
    )


# ---------------------------------------------------------------------
# numeric invariants
# ---------------------------------------------------------------------

def test_numeric_invariants():
    rng = np.random.default_rng(31)
    z = rng.uniform(-1e3, 1e3, size=(10_000, 12))
    softmax_err = np.abs(softmax(z).sum(axis=1) - 1.0).max()

    target = one_hot(np.array([3]), 12)[0]
    perfect = cross_entropy(target, target)
    uniform_err = abs(
        cross_entropy(target, np.full(12, 1.0 / 12.0)) - np.log(12)
    )

    ok = softmax_err <= 1e-9 and perfect == 0.0 and uniform_err <= 1e-12
    report(
        "numeric invariants (softmax sum, cross-entropy values)",
        ok,
        f"softmax err {softmax_err:.1e} vs 1e-9, perfect CE {perfect}, "
        f"uniform CE err {uniform_err:.1e} vs 1e-12",
    )


# ---------------------------------------------------------------------
# CLI determinism
# ---------------------------------------------------------------------

def _run_cli_batch(base: Path) -> list[Path]:
    runner = CliRunner()
    base.mkdir(parents=True, exist_ok=True)
    commands = [
        ["train", "--model", "baseline",
         "--features", str(FIXTURES / "features_small.jsonl"),
         "--glove", str(FIXTURES / "toy_glove_100d.txt"),
         "--labels", str(FIXTURES / "labels.txt"),
         "--seed", "11", "--epochs", "2", "--out", str(base / "ckpt.json")],
        ["train-ntl", "--kb", str(FIXTURES / "toy_kb.tsv"),
         "--glove", str(FIXTURES / "toy_glove_16d.txt"),
         "--glove-dim", "16", "--seed", "11", "--epochs", "5",
         "--out", str(base / "ntl.json"),
         "--report", str(base / "ntl.report.json")],
        ["nms", "--detections", str(FIXTURES / "detections_small.jsonl"),
         "--iou", "0.5", "--max-keep", "5",
         "--out", str(base / "kept.jsonl")],
    ]
    for argv in commands:
        result = runner.invoke(cli_main, argv)
        assert result.exit_code == 0, result.output
    return sorted(p for p in base.iterdir() if p.is_file())


def test_cli_determinism(tmp_path):
    first = _run_cli_batch(tmp_path / "run1")
    second = _run_cli_batch(tmp_path / "run2")
    names_match = [p.name for p in first] == [p.name for p in second]
    diffs = [
        a.name for a, b in zip(first, second)
        if not filecmp.cmp(a, b, shallow=False)
    ]
    ok = names_match and not diffs and len(first) >= 5
    report(
        "CLI determinism (byte-identical outputs)",
        ok,
        f"{len(first)} files compared, differing: {diffs or 'none'}",
    )


# ---------------------------------------------------------------------
# k-fold harness
# ---------------------------------------------------------------------

class _Recording:
    def __init__(self):
        self.folds = []

    def fit(self, X, y):
        return self

    def predict(self, X):
        ids = X[:, 0].astype(int)
        self.folds.append(ids)
        return np.where(ids % 2 == 0, X[:, 1], -1.0)


def test_kfold_harness():
    n = 12
    X = np.column_stack([np.arange(n), np.arange(n) % 12]).astype(float)
    y = (np.arange(n) % 12).astype(int)
    recorders = []

    def builder(seed):
        model = _Recording()
        recorders.append(model)
        return model

    result = kfold_cv(builder, X, y, k=10, seed=3)
    sizes = sorted(result.fold_sizes, reverse=True)
    fold_ids = [m.folds[0] for m in recorders]
    union = np.concatenate(fold_ids)
    partition_ok = sorted(union.tolist()) == list(range(n))
    disjoint_ok = len(set(union.tolist())) == n
    mean_err = abs(result.mean - float(np.mean(result.fold_accuracies)))

    ok = (sizes == [2, 2] + [1] * 8 and partition_ok and disjoint_ok
          and mean_err <= 1e-12)
    report(
        "k-fold harness (partition, sizes, mean)",
        ok,
        f"sizes {sizes}, partition {partition_ok}, "
        f"mean err {mean_err:.1e} vs 1e-12",
    )
