"""Semantic link learning between image entities.

Combines a closed-world knowledge base of entity triples, averaged
word-vector entity embeddings, a neural-tensor-layer triple scorer for
link prediction, and two multiclass relation classifiers (an
embedding-only baseline and an image-feature fusion model), all on a
small deterministic fp64 neural kernel.
"""

from .boxes import DetBox, entities_from_boxes, iou, nms
from .classifiers import (
    BaselineClassifier,
    CvReport,
    FusionClassifier,
    TrainConfig,
    TrainReport,
    build_baseline_network,
    build_fusion_network,
    evaluate,
    kfold_cv,
    train_network,
)
from .datasets import (
    DEFAULT_LABELS,
    Dataset,
    FeatureRecord,
    LabelVocabulary,
    baseline_matrix,
    fusion_matrix,
    read_detections,
    read_features,
    write_detections,
)
from .embeddings import (
    EntityEmbedding,
    WordVectorTable,
    embed_entity,
    embed_entity_set,
    embed_entity_set_or_zero,
    load_word_vectors,
)
from .errors import FileFormatError, OutOfVocabularyError, ValidationError
from .kb import KnowledgeBase, Triple, load_kb, save_kb, split_kb
from .ntl import (
    NeuralTensorLinkPredictor,
    NtlModel,
    NtlRelationParams,
    NtlTrainConfig,
    hits_at_n,
    ntl_gradients,
    ntl_score,
    ntl_score_vector,
    train_ntl,
)

__version__ = "0.1.0"
