"""Evolutionary search over cascading stacked-classifier pipelines."""

from stackevo.dataset import Dataset, SplitSpec, load_csv, shuffle_split
from stackevo.genome import PipelineGenome, SearchBounds, crossover, mutate, random_genome
from stackevo.cascade import TrainedPipeline, fit_pipeline, predict_pipeline
from stackevo.metrics import FitnessRecord, balanced_accuracy, cross_validate
from stackevo.evolution import EAConfig, GenerationReport, run

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "SplitSpec",
    "load_csv",
    "shuffle_split",
    "PipelineGenome",
    "SearchBounds",
    "random_genome",
    "mutate",
    "crossover",
    "TrainedPipeline",
    "fit_pipeline",
    "predict_pipeline",
    "FitnessRecord",
    "balanced_accuracy",
    "cross_validate",
    "EAConfig",
    "GenerationReport",
    "run",
]
