from mcse.harness.bleu import bleu, bleu_tokenize, bleu_variant
from mcse.harness.recall import AnnotationRecord, RecallReport, entity_recall, load_annotations
from mcse.harness.separation import (
    DEFAULT_THRESHOLD,
    LABEL_NAMES,
    LabelVector,
    SeparationPoint,
    SeparationReport,
    evaluate_separation,
    load_labels,
    select_pairs,
)

__all__ = [
    "AnnotationRecord",
    "DEFAULT_THRESHOLD",
    "LABEL_NAMES",
    "LabelVector",
    "RecallReport",
    "SeparationPoint",
    "SeparationReport",
    "bleu",
    "bleu_tokenize",
    "bleu_variant",
    "entity_recall",
    "evaluate_separation",
    "load_annotations",
    "load_labels",
    "select_pairs",
]
