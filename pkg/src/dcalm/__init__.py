"""Clustering-based active learning with error-adaptive batch allocation.

The library side is pure numpy: corpora and splits (:mod:`dcalm.dataset`),
tf-idf character n-grams (:mod:`dcalm.featurizer`), seeded KMeans
(:mod:`dcalm.clustering`), linear learners (:mod:`dcalm.learner`),
uncertainty scores (:mod:`dcalm.acquisition`), the selection strategies and
run loop (:mod:`dcalm.strategies`), metrics (:mod:`dcalm.metrics`) and the
experiment harness (:mod:`dcalm.harness`).  The annotation HTTP service
lives in :mod:`dcalm.service`; ``dcalm`` on the command line wraps it all.
"""

from .acquisition import UncertaintyMeasure, most_informative, score
from .clustering import ClusterModel, kmeans, partition_by_centroids, subcluster
from .dataset import (
    Corpus,
    CorpusError,
    FeatureStore,
    HumanOracle,
    Instance,
    LabeledSet,
    OracleError,
    SimulatedOracle,
    SyntheticConfig,
    generate_synthetic,
    load_corpus,
    query_oracle,
    save_corpus,
)
from .featurizer import TfidfModel, fit_tfidf, transform
from .harness import (
    CurvePoint,
    ExperimentConfig,
    compare,
    featurize_corpus,
    load_experiment_config,
    run_experiment,
)
from .learner import EvalResult, LinearModel, TrainConfig, evaluate, predict_proba, train
from .metrics import DistributionReport, distribution_report, error_counts, macro_f1
from .strategies import (
    ActiveLearningLoop,
    RoundPlan,
    RunLog,
    StrategyConfig,
    bootstrap,
    dcalm_allocations,
    largest_remainder_allocate,
    run_active_learning,
    select_cluster_topn,
    select_dcalm,
    select_random,
    select_topn,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveLearningLoop",
    "ClusterModel",
    "Corpus",
    "CorpusError",
    "CurvePoint",
    "DistributionReport",
    "EvalResult",
    "ExperimentConfig",
    "FeatureStore",
    "HumanOracle",
    "Instance",
    "LabeledSet",
    "LinearModel",
    "OracleError",
    "RoundPlan",
    "RunLog",
    "SimulatedOracle",
    "StrategyConfig",
    "SyntheticConfig",
    "TfidfModel",
    "TrainConfig",
    "UncertaintyMeasure",
    "bootstrap",
    "compare",
    "dcalm_allocations",
    "distribution_report",
    "error_counts",
    "evaluate",
    "featurize_corpus",
    "fit_tfidf",
    "generate_synthetic",
    "kmeans",
    "largest_remainder_allocate",
    "load_corpus",
    "load_experiment_config",
    "macro_f1",
    "most_informative",
    "partition_by_centroids",
    "predict_proba",
    "query_oracle",
    "run_active_learning",
    "run_experiment",
    "save_corpus",
    "score",
    "select_cluster_topn",
    "select_dcalm",
    "select_random",
    "select_topn",
    "subcluster",
    "train",
    "transform",
]
