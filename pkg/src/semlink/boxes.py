"""Detector post-processing: IoU, greedy NMS, and box-to-entity lists.

Boxes are axis-aligned in corner form (x_min, y_min, x_max, y_max); any
detector-native center/size format is converted upstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class DetBox:
    x_min: float
    y_min: float
    x_max: float
    y_max: float
    score: float
    class_label: str

    def __post_init__(self):
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValidationError(
                f"invalid box: ({self.x_min}, {self.y_min}, "
                f"{self.x_max}, {self.y_max})"
            )
        if not 0.0 <= self.score <= 1.0:
            raise ValidationError(f"score {self.score} outside [0, 1]")

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)


def iou(a: DetBox, b: DetBox) -> float:
    """Intersection over union; 0 when the union has zero area."""
    ix = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    iy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    inter = max(0.0, ix) * max(0.0, iy)
    union = a.area + b.area - inter
    if union == 0.0:
        return 0.0
    return inter / union


def nms(boxes, iou_threshold: float = 0.5, max_keep: int = 5) -> list[DetBox]:
    """Greedy per-class non-max suppression.

    Boxes are visited by descending score (ties by input index). A kept
    box suppresses remaining boxes of the same class whose IoU with it
    is strictly above the threshold; boxes exactly at the threshold
    survive. The kept list is finally truncated to max_keep.
    """
    if not 0.0 <= iou_threshold <= 1.0:
        raise ValidationError(
            f"iou_threshold must be in [0, 1], got {iou_threshold}"
        )
    if max_keep < 1:
        raise ValidationError(f"max_keep must be >= 1, got {max_keep}")
    order = sorted(range(len(boxes)), key=lambda i: (-boxes[i].score, i))
    suppressed = [False] * len(boxes)
    kept: list[DetBox] = []
    for i in order:
        if suppressed[i]:
            continue
        kept.append(boxes[i])
        for j in order:
            if suppressed[j] or j == i:
                continue
            if boxes[j].class_label != boxes[i].class_label:
                continue
            if iou(boxes[i], boxes[j]) > iou_threshold:
                suppressed[j] = True
    return kept[:max_keep]


def entities_from_boxes(boxes) -> list[str]:
    """Deduplicated class labels, ordered by each label's best score."""
    best: dict[str, float] = {}
    for box in boxes:
        if box.class_label not in best or box.score > best[box.class_label]:
            best[box.class_label] = box.score
    return sorted(best, key=lambda label: -best[label])
