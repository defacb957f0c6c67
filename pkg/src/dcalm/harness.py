"""Experiment driver: strategy x budget x seed grids, curves, comparisons.

Emits one CSV row per grid cell plus seed-averaged curves, and a JSON
report file per cell with the per-round distribution diagnostics.  Output
is deterministic byte-for-byte given the config.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dataset import Corpus, FeatureStore, Instance, SyntheticConfig, \
    generate_synthetic, load_corpus
from .featurizer import fit_tfidf, transform_many
from .learner import TrainConfig
from .strategies import DCALM, RunLog, StrategyConfig, run_active_learning

CURVE_COLUMNS = ("strategy", "budget", "seed", "macro_f1", "accuracy")
MEAN_CURVE_COLUMNS = ("strategy", "budget", "macro_f1", "accuracy")
COMPARE_THRESHOLDS = (0, 1, 3, 5, 10)

PRECOMPUTED = "precomputed"
TFIDF = "tfidf"


@dataclass(frozen=True)
class CurvePoint:
    strategy: str
    budget: int
    seed: int
    macro_f1: float
    accuracy: float


@dataclass
class ExperimentConfig:
    corpus_path: str | None = None
    synthetic: SyntheticConfig | None = None
    synthetic_seed: int = 0
    featurization: str = PRECOMPUTED
    tfidf_n_range: tuple[int, int] = (2, 5)
    tfidf_max_features: int | None = None
    learner: TrainConfig = field(default_factory=TrainConfig)
    strategies: list[StrategyConfig] = field(default_factory=list)
    budgets: list[int] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    output_dir: str = "out"

    def __post_init__(self):
        if (self.corpus_path is None) == (self.synthetic is None):
            raise ValueError("config needs exactly one corpus source (file or synthetic)")
        if not self.strategies or not self.budgets or not self.seeds:
            raise ValueError("strategies, budgets and seeds must all be non-empty")
        if self.featurization not in (PRECOMPUTED, TFIDF):
            raise ValueError(f"unknown featurization {self.featurization!r}")


def load_experiment_config(path) -> ExperimentConfig:
    """Parse one self-describing experiment document (JSON)."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    corpus = doc.get("corpus", {})
    synthetic = None
    if "synthetic" in corpus:
        spec = dict(corpus["synthetic"])
        spec.pop("seed", None)
        synthetic = SyntheticConfig(**spec)
    learner = TrainConfig(**doc.get("learner", {}))
    strategies = [StrategyConfig(**entry) for entry in doc.get("strategies", [])]
    tfidf_opts = doc.get("tfidf", {})
    return ExperimentConfig(
        corpus_path=corpus.get("path"),
        synthetic=synthetic,
        synthetic_seed=corpus.get("synthetic", {}).get("seed", 0),
        featurization=doc.get("featurization", PRECOMPUTED),
        tfidf_n_range=tuple(tfidf_opts.get("n_range", (2, 5))),
        tfidf_max_features=tfidf_opts.get("max_features"),
        learner=learner,
        strategies=strategies,
        budgets=list(doc["budgets"]),
        seeds=list(doc["seeds"]),
        output_dir=doc.get("output_dir", "out"),
    )


def build_corpus(config: ExperimentConfig) -> Corpus:
    if config.synthetic is not None:
        return generate_synthetic(config.synthetic, config.synthetic_seed)
    return load_corpus(config.corpus_path)


def featurize_corpus(corpus: Corpus, n_range: tuple[int, int] = (2, 5),
                     max_features: int | None = None) -> Corpus:
    """Replace instance vectors with tf-idf features fitted on pool text.

    The vocabulary is learned from the unlabeled pool only; dev and test
    text is transformed, never fitted on.
    """
    pool_texts = [corpus.instance(i).text for i in corpus.split_ids("pool")]
    if any(t is None for t in pool_texts):
        raise ValueError("tfidf featurization needs text on every pool instance")
    model = fit_tfidf(pool_texts, n_range=n_range, max_features=max_features)
    instances = []
    for inst in corpus.instances:
        if inst.text is None:
            raise ValueError(f"instance {inst.id} has no text")
        vec = transform_many(model, [inst.text])[0]
        instances.append(Instance(id=inst.id, text=inst.text, features=vec,
                                  label=inst.label))
    return Corpus(instances=instances, num_classes=corpus.num_classes,
                  class_names=list(corpus.class_names), splits=dict(corpus.splits),
                  feature_dim=model.dim)


def prepare_features(corpus: Corpus, config: ExperimentConfig) -> Corpus:
    if config.featurization == TFIDF:
        return featurize_corpus(corpus, config.tfidf_n_range, config.tfidf_max_features)
    return corpus


def _cell_name(strategy: str, budget: int, seed: int) -> str:
    return f"{strategy}_b{budget}_s{seed}"


def run_experiment(config: ExperimentConfig) -> list[CurvePoint]:
    """Execute the full strategy x budget x seed cross product.

    Writes ``curves.csv`` (one row per cell), ``curves_mean.csv`` (seed
    averages) and ``reports/<cell>.json`` under the output directory, and
    returns the curve points.
    """
    corpus = prepare_features(build_corpus(config), config)
    store = FeatureStore.from_corpus(corpus)

    out_dir = Path(config.output_dir)
    report_dir = out_dir / "reports"
    report_dir.mkdir(parents=True, exist_ok=True)

    points: list[CurvePoint] = []
    for strategy in config.strategies:
        for budget in config.budgets:
            for seed in config.seeds:
                cell = replace(strategy, budget=budget, seed=seed)
                log = run_active_learning(corpus, cell, config.learner, store=store)
                final = log.final
                points.append(CurvePoint(strategy=strategy.kind, budget=budget,
                                         seed=seed, macro_f1=final.test_macro_f1,
                                         accuracy=final.test_accuracy))
                _write_report(report_dir / f"{_cell_name(strategy.kind, budget, seed)}.json",
                              log)

    write_curves(out_dir / "curves.csv", points)
    write_mean_curves(out_dir / "curves_mean.csv", points)
    return points


def _write_report(path: Path, log: RunLog) -> None:
    rounds = [log.report(record).to_json() for record in log.rounds]
    doc = {
        "strategy": log.strategy,
        "seed": log.seed,
        "budget": log.budget,
        "rounds": rounds,
        "curve": [{"round": r.round_index, "labeled": int(sum(r.label_counts)),
                   "macro_f1": r.test_macro_f1, "accuracy": r.test_accuracy}
                  for r in log.rounds],
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_curves(path, points: Sequence[CurvePoint]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CURVE_COLUMNS)
        for p in sorted(points, key=lambda p: (p.strategy, p.budget, p.seed)):
            writer.writerow([p.strategy, p.budget, p.seed,
                             repr(p.macro_f1), repr(p.accuracy)])


def write_mean_curves(path, points: Sequence[CurvePoint]) -> None:
    grouped: dict[tuple[str, int], list[CurvePoint]] = {}
    for p in points:
        grouped.setdefault((p.strategy, p.budget), []).append(p)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MEAN_CURVE_COLUMNS)
        for (strategy, budget), cell in sorted(grouped.items()):
            writer.writerow([strategy, budget,
                             repr(float(np.mean([p.macro_f1 for p in cell]))),
                             repr(float(np.mean([p.accuracy for p in cell])))])


def read_curves(paths: Iterable) -> list[CurvePoint]:
    points = []
    for path in paths:
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                points.append(CurvePoint(strategy=row["strategy"],
                                         budget=int(row["budget"]),
                                         seed=int(row["seed"]),
                                         macro_f1=float(row["macro_f1"]),
                                         accuracy=float(row["accuracy"])))
    return points


def compare(points: Sequence[CurvePoint], target: str = DCALM,
            thresholds: Sequence[int] = COMPARE_THRESHOLDS) -> dict:
    """Count budgets where the target beats each baseline by more than each
    threshold, in F1 percentage points, on seed-averaged curves.
    """
    strategies = sorted({p.strategy for p in points})
    if len(strategies) < 2:
        raise ValueError("compare needs curve points for at least 2 strategies")
    if target not in strategies:
        raise ValueError(f"no curve points for target strategy {target!r}")

    mean_f1: dict[str, dict[int, float]] = {}
    for name in strategies:
        per_budget: dict[int, list[float]] = {}
        for p in points:
            if p.strategy == name:
                per_budget.setdefault(p.budget, []).append(p.macro_f1)
        mean_f1[name] = {b: float(np.mean(v)) for b, v in per_budget.items()}

    target_budgets = sorted(mean_f1[target])
    result: dict = {"target": target, "budgets": target_budgets, "baselines": {}}
    for name in strategies:
        if name == target:
            continue
        if sorted(mean_f1[name]) != target_budgets:
            raise ValueError(f"budget grid of {name!r} does not match {target!r}")
        diffs = [100.0 * (mean_f1[target][b] - mean_f1[name][b]) for b in target_budgets]
        result["baselines"][name] = {
            f">{t}": sum(1 for d in diffs if d > t) for t in thresholds
        }
    return result
