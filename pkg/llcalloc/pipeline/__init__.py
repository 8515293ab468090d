"""End-to-end pipeline: labels, classifier, benchmark and stage runner."""

from .benchmark import BenchmarkReport, ReportRow, evaluate_policies, standard_policies
from .labels import (
    ClassifierDataset,
    TrainedClassifier,
    build_classifier_dataset,
    label_agreement,
    train_classifier,
)
from .runner import STAGE_RUNNERS, STAGES, run_full_pipeline

__all__ = [
    "BenchmarkReport",
    "ClassifierDataset",
    "ReportRow",
    "STAGES",
    "STAGE_RUNNERS",
    "TrainedClassifier",
    "build_classifier_dataset",
    "evaluate_policies",
    "label_agreement",
    "run_full_pipeline",
    "standard_policies",
]
