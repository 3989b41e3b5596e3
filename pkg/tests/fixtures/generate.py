"""Regenerates the checked-in fixture files. Run from the repo root:

    python tests/fixtures/generate.py

Outputs are deterministic, so reruns leave git clean.
"""

import json
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent

LABELS = [
    "Human with animals",
    "Tennis racket",
    "Baseball",
    "Sportsball",
    "Person snowboarding",
    "Kitchen electronics",
    "Living room",
    "Traffic",
    "Utencils",
    "Person with bags",
    "Animals",
    "Human with Umbrella",
]

KB_TRIPLES = [
    ("person", "uses", "racket"),
    ("person", "with", "umbrella"),
    ("dog", "with", "person"),
    ("racket", "uses", "ball"),
    ("snowboard", "with", "person"),
    ("ball", "uses", "racket"),
    ("umbrella", "with", "person"),
    ("dog", "uses", "ball"),
]

GLOVE_TOKENS = [
    "person", "dog", "racket", "ball", "snowboard", "umbrella",
    "tennis", "kitchen", "room", "car", "bag", "animal",
]


def write_labels():
    (HERE / "labels.txt").write_text("\n".join(LABELS) + "\n")


def write_kb():
    lines = ["# toy knowledge base: 6 entities, 2 relations, 8 triples"]
    lines += ["\t".join(t) for t in KB_TRIPLES]
    (HERE / "toy_kb.tsv").write_text("\n".join(lines) + "\n")


def write_glove(path, dim, seed):
    rng = np.random.default_rng(seed)
    lines = []
    for token in GLOVE_TOKENS:
        vec = np.round(rng.uniform(-1, 1, dim), 4)
        lines.append(token + " " + " ".join(repr(float(v)) for v in vec))
    path.write_text("\n".join(lines) + "\n")


def write_features():
    rng = np.random.default_rng(20240101)
    entity_pool = [
        ["person", "racket"],
        ["person", "tennis racket"],
        ["dog", "animal"],
        ["person", "snowboard"],
        ["kitchen"],
        ["room"],
        ["car"],
        ["person", "bag"],
        ["animal"],
        ["person", "umbrella"],
        ["ball"],
        ["zzqx unknownword"],  # exercises the zero-vector fallback
    ]
    lines = []
    for i in range(12):
        vgg = np.round(rng.uniform(0, 1, 4096), 3)
        record = {
            "image_id": f"img{i:03d}",
            "label": LABELS[i % 12],
            "entities": entity_pool[i % len(entity_pool)],
            "vgg": vgg.tolist(),
        }
        lines.append(json.dumps(record))
    (HERE / "features_small.jsonl").write_text("\n".join(lines) + "\n")


def write_detections():
    rng = np.random.default_rng(42)
    lines = []
    for i in range(4):
        boxes = []
        for _ in range(6):
            x0, y0 = rng.uniform(0, 300, 2)
            w, h = rng.uniform(20, 120, 2)
            boxes.append({
                "x_min": round(float(x0), 2),
                "y_min": round(float(y0), 2),
                "x_max": round(float(x0 + w), 2),
                "y_max": round(float(y0 + h), 2),
                "score": round(float(rng.uniform(0.2, 0.99)), 3),
                "label": ["person", "dog", "car"][int(rng.integers(3))],
            })
        lines.append(json.dumps({"image_id": f"img{i:03d}", "boxes": boxes}))
    (HERE / "detections_small.jsonl").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    write_labels()
    write_kb()
    write_glove(HERE / "toy_glove_16d.txt", 16, seed=7)
    write_glove(HERE / "toy_glove_100d.txt", 100, seed=11)
    write_features()
    write_detections()
    print("fixtures written to", HERE)
