import numpy as np
import pytest

from semlink import DetBox, ValidationError, entities_from_boxes, iou, nms


def box(x0, y0, x1, y1, score=0.5, label="person"):
    return DetBox(x0, y0, x1, y1, score, label)


# ---------------------------------------------------------------------
# independent references, kept deliberately different in structure from
# the library implementation
# ---------------------------------------------------------------------

def iou_reference(a, b):
    ax = max(0.0, min(a.x_max, b.x_max) - max(a.x_min, b.x_min))
    ay = max(0.0, min(a.y_max, b.y_max) - max(a.y_min, b.y_min))
    inter = ax * ay
    area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min)
    area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min)
    union = area_a + area_b - inter
    return inter / union if union > 0 else 0.0


def nms_reference(boxes, threshold, max_keep):
    """O(n^2) by repeated max scan over surviving indices."""
    alive = set(range(len(boxes)))
    kept = []
    while alive:
        best = min(alive, key=lambda i: (-boxes[i].score, i))
        kept.append(best)
        alive.discard(best)
        for j in sorted(alive):
            same_class = boxes[j].class_label == boxes[best].class_label
            if same_class and iou_reference(boxes[best], boxes[j]) > threshold:
                alive.discard(j)
    return [boxes[i] for i in kept[:max_keep]]


def random_boxes(rng, n, n_classes=3):
    out = []
    for _ in range(n):
        x0, y0 = rng.uniform(0, 80, 2)
        w, h = rng.uniform(1, 50, 2)
        out.append(DetBox(
            float(x0), float(y0), float(x0 + w), float(y0 + h),
            float(rng.uniform(0, 1)),
            f"class{rng.integers(n_classes)}",
        ))
    return out


# ---------------------------------------------------------------------
# iou
# ---------------------------------------------------------------------

def test_iou_identical():
    a = box(0, 0, 2, 3)
    assert iou(a, a) == 1.0


def test_iou_disjoint():
    assert iou(box(0, 0, 1, 1), box(5, 5, 6, 6)) == 0.0


def test_iou_one_seventh():
    got = iou(box(0, 0, 2, 2), box(1, 1, 3, 3))
    assert abs(got - 1.0 / 7.0) <= 1e-12


def test_iou_degenerate_self():
    point = box(1, 1, 1, 1)
    assert iou(point, point) == 0.0


def test_invalid_box_rejected():
    with pytest.raises(ValidationError):
        DetBox(2, 0, 1, 1, 0.5, "person")
    with pytest.raises(ValidationError):
        DetBox(0, 0, 1, 1, 1.5, "person")


def test_iou_symmetry_and_translation():
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        a, b = random_boxes(rng, 2)
        assert abs(iou(a, b) - iou(b, a)) <= 1e-12
        dx, dy = rng.uniform(-50, 50, 2)
        a2 = DetBox(a.x_min + dx, a.y_min + dy, a.x_max + dx, a.y_max + dy,
                    a.score, a.class_label)
        b2 = DetBox(b.x_min + dx, b.y_min + dy, b.x_max + dx, b.y_max + dy,
                    b.score, b.class_label)
        assert abs(iou(a, b) - iou(a2, b2)) <= 1e-12


def test_iou_matches_reference():
    rng = np.random.default_rng(3)
    for _ in range(500):
        a, b = random_boxes(rng, 2)
        assert abs(iou(a, b) - iou_reference(a, b)) <= 1e-12


# ---------------------------------------------------------------------
# nms
# ---------------------------------------------------------------------

def test_nms_single_box():
    a = box(0, 0, 1, 1, score=0.9)
    assert nms([a]) == [a]


def test_nms_suppresses_duplicate():
    high = box(0, 0, 2, 2, score=0.9)
    low = box(0, 0, 2, 2, score=0.7)
    assert nms([low, high], iou_threshold=0.5) == [high]


def test_nms_keeps_disjoint():
    a = box(0, 0, 1, 1, score=0.6)
    b = box(5, 5, 6, 6, score=0.8)
    assert nms([a, b]) == [b, a]


def test_nms_classes_do_not_suppress_each_other():
    a = box(0, 0, 2, 2, score=0.9, label="person")
    b = box(0, 0, 2, 2, score=0.5, label="dog")
    assert nms([a, b]) == [a, b]


def test_nms_boundary_iou_survives():
    # IoU exactly at the threshold is kept (suppression is strict >)
    a = box(0, 0, 2, 2, score=0.9)
    b = box(1, 0, 3, 2, score=0.8)  # IoU = 2/6 = 1/3
    assert nms([a, b], iou_threshold=1.0 / 3.0) == [a, b]
    assert nms([a, b], iou_threshold=1.0 / 3.0 - 1e-9) == [a]


def test_nms_max_keep_truncates():
    boxes = [box(10 * i, 0, 10 * i + 5, 5, score=0.1 * (i + 1))
             for i in range(8)]
    kept = nms(boxes, max_keep=3)
    assert len(kept) == 3
    assert [b.score for b in kept] == sorted(
        (b.score for b in boxes), reverse=True
    )[:3]


def test_nms_rejects_bad_threshold():
    with pytest.raises(ValidationError):
        nms([box(0, 0, 1, 1)], iou_threshold=1.5)


def test_nms_matches_bruteforce_reference():
    rng = np.random.default_rng(2024)
    for trial in range(200):
        boxes = random_boxes(rng, 30)
        threshold = float(rng.uniform(0.1, 0.9))
        max_keep = int(rng.integers(1, 10))
        got = nms(boxes, iou_threshold=threshold, max_keep=max_keep)
        want = nms_reference(boxes, threshold, max_keep)
        assert got == want, f"trial {trial} diverged"


def test_nms_output_properties():
    rng = np.random.default_rng(17)
    for _ in range(50):
        boxes = random_boxes(rng, 25)
        kept = nms(boxes, iou_threshold=0.4, max_keep=5)
        assert len(kept) <= 5
        assert all(k in boxes for k in kept)
        scores = [k.score for k in kept]
        assert scores == sorted(scores, reverse=True)


# ---------------------------------------------------------------------
# entities_from_boxes
# ---------------------------------------------------------------------

def test_entities_dedup_and_order():
    boxes = [
        box(0, 0, 1, 1, score=0.5, label="person"),
        box(0, 0, 1, 1, score=0.9, label="person"),
        box(0, 0, 1, 1, score=0.7, label="dog"),
    ]
    assert entities_from_boxes(boxes) == ["person", "dog"]


def test_entities_order_follows_best_score():
    boxes = [
        box(0, 0, 1, 1, score=0.2, label="person"),
        box(0, 0, 1, 1, score=0.7, label="dog"),
    ]
    assert entities_from_boxes(boxes) == ["dog", "person"]


def test_entities_empty_and_single():
    assert entities_from_boxes([]) == []
    assert entities_from_boxes([box(0, 0, 1, 1, label="cat")]) == ["cat"]
