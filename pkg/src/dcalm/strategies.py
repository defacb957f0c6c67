"""Batch-selection strategies and the active-learning run loop.

Four strategies share one loop: uniform random, top-N by uncertainty,
cluster-stratified top-N, and the adaptive strategy (``dcalm``) that
estimates the classifier's error rate per pool cluster on the dev split,
allocates the batch proportionally, and re-splits each cluster into as
many fresh subclusters as it was allocated samples, taking the most
informative instance from each.

Integer allocations use largest-remainder (Hamilton) rounding with ties
to the lowest cluster index, clamped to each cluster's unlabeled count;
surplus is redistributed in remainder order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .acquisition import UncertaintyMeasure, most_informative, score_matrix
from .clustering import ClusterModel, kmeans, partition_by_centroids, subcluster
from .dataset import Corpus, FeatureStore, LabeledSet, SimulatedOracle, query_oracle
from .learner import LinearModel, TrainConfig, evaluate, predict_proba, train
from .metrics import DistributionReport, accuracy as confusion_accuracy, \
    error_counts, macro_f1

RANDOM = "random"
TOPN = "topn"
CLUSTER_TOPN = "cluster_topn"
DCALM = "dcalm"
STRATEGY_KINDS = (RANDOM, TOPN, CLUSTER_TOPN, DCALM)

ERROR_RATE = "error_rate"
FALSE_NEGATIVE_RATE = "false_negative_rate"
ALLOCATION_METRICS = (ERROR_RATE, FALSE_NEGATIVE_RATE)

# Stream tags so one run seed drives independent generator streams.
_STREAM_BOOTSTRAP = 0
_STREAM_CLUSTER = 1
_STREAM_TRAIN = 2
_STREAM_SUBCLUSTER = 3
_STREAM_RANDOM = 4


def derive_seed(*parts: int) -> int:
    """Stable child seed from a tuple of non-negative integers."""
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


@dataclass
class StrategyConfig:
    kind: str = DCALM
    measure: UncertaintyMeasure = UncertaintyMeasure.ENTROPY
    num_clusters: int = 10
    bootstrap_size: int = 50
    batch_size: int = 50
    budget: int = 300
    allocation_metric: str = ERROR_RATE
    positive_class: int | None = None
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.measure, str):
            self.measure = UncertaintyMeasure(self.measure)
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.allocation_metric not in ALLOCATION_METRICS:
            raise ValueError(f"unknown allocation metric {self.allocation_metric!r}")
        if self.allocation_metric == FALSE_NEGATIVE_RATE and self.positive_class is None:
            raise ValueError("false_negative_rate needs a positive_class")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")
        if self.num_clusters < 1:
            raise ValueError("cluster count must be >= 1")
        if self.bootstrap_size > self.budget:
            raise ValueError("bootstrap size exceeds budget")


@dataclass
class RoundPlan:
    """One planned batch with its allocation bookkeeping."""

    round_index: int
    selected: list[int]
    allocations: list[int] = field(default_factory=list)
    cluster_accuracies: list[float | None] = field(default_factory=list)
    provenance: dict[int, tuple[int, int]] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Allocation arithmetic
# ---------------------------------------------------------------------------

def largest_remainder_allocate(weights: Sequence[float], total: int) -> np.ndarray:
    """Round real shares total*w_i/sum(w) to integers summing to ``total``.

    Floors first, then hands the leftover units out by descending fractional
    remainder; remainder ties go to the lowest index.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.shape[0] == 0:
        raise ValueError("weights must be a non-empty vector")
    if (w < 0).any() or w.sum() <= 0:
        raise ValueError("weights must be non-negative with positive sum")
    quotas = total * w / w.sum()
    alloc = np.floor(quotas).astype(np.int64)
    remainders = quotas - alloc
    order = np.lexsort((np.arange(len(w)), -remainders))
    leftover = int(total - alloc.sum())
    alloc[order[:leftover]] += 1
    return alloc


def _remainder_order(weights: np.ndarray, total: int) -> np.ndarray:
    quotas = total * weights / weights.sum()
    remainders = quotas - np.floor(quotas)
    return np.lexsort((np.arange(len(weights)), -remainders))


def allocate_with_capacities(weights: Sequence[float], total: int,
                             capacities: Sequence[int]) -> np.ndarray:
    """Largest-remainder allocation clamped to per-cluster capacity.

    Surplus freed by clamping cycles back in over the remaining capacity,
    visiting clusters in remainder order.  When capacity runs out entirely
    the result sums to the total capacity instead of ``total``.
    """
    w = np.asarray(weights, dtype=np.float64)
    cap = np.asarray(capacities, dtype=np.int64)
    if cap.shape != w.shape:
        raise ValueError("capacities must align with weights")
    alloc = np.minimum(largest_remainder_allocate(w, total), cap)
    surplus = int(total - alloc.sum())
    order = _remainder_order(w, total)
    while surplus > 0:
        open_slots = alloc < cap
        if not open_slots.any():
            break
        for i in order:
            if surplus == 0:
                break
            if alloc[i] < cap[i]:
                alloc[i] += 1
                surplus -= 1
    return alloc


def impute_weights(raw: Sequence[float | None]) -> np.ndarray:
    """Fill undefined per-cluster weights with the mean of the defined ones.

    All-undefined and all-zero inputs both fall back to uniform weights.
    """
    defined = [v for v in raw if v is not None]
    if not defined:
        return np.ones(len(raw))
    mean = float(sum(defined)) / len(defined)
    w = np.asarray([mean if v is None else float(v) for v in raw])
    if w.sum() <= 0.0:
        return np.ones(len(raw))
    return w


def dcalm_allocations(cluster_accuracies: Sequence[float | None], batch_size: int,
                      capacities: Sequence[int] | None = None) -> np.ndarray:
    """The allocation step of the adaptive strategy.

    Weights are the per-cluster error rates 1 - A_i; clusters with no dev
    points get the mean weight, and a perfectly-accurate board falls back
    to uniform.  With capacities given, allocations are clamped and the
    surplus redistributed.
    """
    raw = [None if a is None else 1.0 - float(a) for a in cluster_accuracies]
    weights = impute_weights(raw)
    if capacities is None:
        return largest_remainder_allocate(weights, batch_size)
    return allocate_with_capacities(weights, batch_size, capacities)


# ---------------------------------------------------------------------------
# Per-strategy batch selection
# ---------------------------------------------------------------------------

def bootstrap(pool_ids: Sequence[int], size: int, seed: int) -> list[int]:
    """Uniform seed batch, drawn without replacement."""
    ids = sorted(pool_ids)
    if size > len(ids):
        raise ValueError(f"bootstrap size {size} exceeds pool size {len(ids)}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(ids), size=size, replace=False)
    return sorted(ids[i] for i in chosen)


def select_random(unlabeled_ids: Sequence[int], batch_size: int, seed: int) -> list[int]:
    return bootstrap(unlabeled_ids, batch_size, seed)


def _ranked_ids(candidate_ids: Sequence[int], probs: Mapping[int, np.ndarray],
                measure: UncertaintyMeasure) -> list[int]:
    ids = sorted(candidate_ids)
    scores = score_matrix(np.vstack([probs[i] for i in ids]), measure)
    order = np.argsort(-scores, kind="stable")  # stable keeps id ties ascending
    return [ids[i] for i in order]


def select_topn(unlabeled_ids: Sequence[int], probs: Mapping[int, np.ndarray],
                measure: UncertaintyMeasure, batch_size: int) -> list[int]:
    """The N most informative instances; asks for more than exist, gets all."""
    if len(unlabeled_ids) == 0:
        raise ValueError("no unlabeled instances")
    ranked = _ranked_ids(unlabeled_ids, probs, measure)
    return sorted(ranked[:batch_size])


def plan_cluster_topn(model: ClusterModel, unlabeled_ids: Sequence[int],
                      probs: Mapping[int, np.ndarray], measure: UncertaintyMeasure,
                      batch_size: int, round_index: int = 0) -> RoundPlan:
    """Equal per-cluster quotas, top-quota by informativeness inside each."""
    unlabeled = set(unlabeled_ids)
    members = {c: sorted(i for i in model.members(c) if i in unlabeled)
               for c in range(model.k)}
    capacities = [len(members[c]) for c in range(model.k)]
    total_capacity = sum(capacities)
    if total_capacity == 0:
        raise ValueError("all clusters are out of unlabeled members")
    quotas = allocate_with_capacities(np.ones(model.k),
                                      min(batch_size, total_capacity), capacities)
    selected: list[int] = []
    provenance: dict[int, tuple[int, int]] = {}
    for c in range(model.k):
        if quotas[c] == 0:
            continue
        for rank, instance_id in enumerate(_ranked_ids(members[c], probs, measure)[:quotas[c]]):
            selected.append(instance_id)
            provenance[instance_id] = (c, rank)
    return RoundPlan(round_index=round_index, selected=sorted(selected),
                     allocations=[int(q) for q in quotas], provenance=provenance)


def select_cluster_topn(model: ClusterModel, unlabeled_ids: Sequence[int],
                        probs: Mapping[int, np.ndarray], measure: UncertaintyMeasure,
                        batch_size: int) -> list[int]:
    return plan_cluster_topn(model, unlabeled_ids, probs, measure, batch_size).selected


def _cluster_weight(confusion: np.ndarray, metric: str,
                    positive_class: int | None) -> float | None:
    total = confusion.sum()
    if total == 0:
        return None
    if metric == ERROR_RATE:
        return 1.0 - confusion_accuracy(confusion)
    row = confusion[positive_class]
    tp = row[positive_class]
    fn = row.sum() - tp
    if tp + fn == 0:
        return None  # no positives in this dev partition
    return float(fn / (tp + fn))


def select_dcalm(model: ClusterModel, dev_partition: Mapping[int, set[int]],
                 classifier: LinearModel, corpus: Corpus, store: FeatureStore,
                 unlabeled_ids: Sequence[int], measure: UncertaintyMeasure,
                 batch_size: int, allocation_metric: str = ERROR_RATE,
                 positive_class: int | None = None, seed: int = 0,
                 round_index: int = 0) -> RoundPlan:
    """Plan one adaptive batch.

    Per cluster: estimate the classifier's dev accuracy, weight by error
    rate (or the substitute metric), allocate by largest remainder clamped
    to the unlabeled count, split the cluster's unlabeled members into that
    many fresh subclusters, and take the most informative instance from
    each subcluster.
    """
    unlabeled = set(unlabeled_ids)
    members = {c: sorted(i for i in model.members(c) if i in unlabeled)
               for c in range(model.k)}
    capacities = [len(members[c]) for c in range(model.k)]
    total_capacity = sum(capacities)
    if total_capacity == 0:
        raise ValueError("no unlabeled instances in any cluster")

    accuracies: list[float | None] = []
    weights: list[float | None] = []
    for c in range(model.k):
        dev_ids = sorted(dev_partition.get(c, ()))
        if not dev_ids:
            accuracies.append(None)
            weights.append(None)
            continue
        result = evaluate(classifier, store.matrix(dev_ids), corpus.labels(dev_ids),
                          corpus.num_classes)
        accuracies.append(result.accuracy)
        weights.append(_cluster_weight(result.confusion, allocation_metric, positive_class))

    if allocation_metric == ERROR_RATE:
        allocations = dcalm_allocations(accuracies, min(batch_size, total_capacity),
                                        capacities)
    else:
        allocations = allocate_with_capacities(impute_weights(weights),
                                               min(batch_size, total_capacity), capacities)

    selected: list[int] = []
    provenance: dict[int, tuple[int, int]] = {}
    for c in range(model.k):
        quota = int(allocations[c])
        if quota == 0:
            continue
        member_ids = members[c]
        X = store.matrix(member_ids)
        probs = {i: p for i, p in zip(member_ids, np.atleast_2d(predict_proba(classifier, X)))}
        submodel = subcluster(member_ids, X, quota, derive_seed(seed, _STREAM_SUBCLUSTER,
                                                                round_index, c))
        for j in range(submodel.k):
            pick = most_informative(submodel.members(j), probs, measure)
            selected.append(pick)
            provenance[pick] = (c, j)

    return RoundPlan(round_index=round_index, selected=sorted(selected),
                     allocations=[int(a) for a in allocations],
                     cluster_accuracies=accuracies, provenance=provenance)


# ---------------------------------------------------------------------------
# The run loop
# ---------------------------------------------------------------------------

@dataclass
class RoundRecord:
    round_index: int
    selected_ids: list[int]
    allocations: list[int]
    cluster_accuracies: list[float | None]
    test_macro_f1: float
    test_accuracy: float
    dev_macro_f1: float
    label_counts: list[int]
    test_error_counts: list[int]


@dataclass
class RunLog:
    strategy: str
    seed: int
    budget: int
    batch_size: int
    bootstrap_size: int
    class_names: list[str]
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def final(self) -> RoundRecord:
        return self.rounds[-1]

    def report(self, record: RoundRecord) -> DistributionReport:
        return DistributionReport(
            strategy=self.strategy, round_index=record.round_index,
            class_names=self.class_names, label_counts=record.label_counts,
            test_error_counts=record.test_error_counts,
            allocations=record.allocations, cluster_accuracies=record.cluster_accuracies,
        )


class ActiveLearningLoop:
    """Stepwise driver: plan a batch, ingest its labels, retrain, repeat.

    The loop is oracle-agnostic (batches come out as pending id lists and
    labels come back through :meth:`submit`), so the simulated runner and
    the human annotation service share every code path.
    """

    def __init__(self, corpus: Corpus, strategy: StrategyConfig,
                 learner_config: TrainConfig | None = None,
                 store: FeatureStore | None = None):
        pool = corpus.split_ids("pool")
        if strategy.budget > len(pool):
            raise ValueError(f"budget {strategy.budget} exceeds pool size {len(pool)}")
        self.corpus = corpus
        self.strategy = strategy
        self.learner_config = learner_config or TrainConfig()
        self.store = store if store is not None else FeatureStore.from_corpus(corpus)
        self.labeled = LabeledSet()
        self.unlabeled: set[int] = set(pool)
        self.model: LinearModel | None = None
        self.pending: list[int] | None = None
        self.current_plan: RoundPlan | None = None
        self.round_index = 0
        self.log = RunLog(strategy=strategy.kind, seed=strategy.seed,
                          budget=strategy.budget, batch_size=strategy.batch_size,
                          bootstrap_size=strategy.bootstrap_size,
                          class_names=list(corpus.class_names))
        self._cluster_model: ClusterModel | None = None
        self._dev_partition: dict[int, set[int]] | None = None
        self._test_ids = corpus.split_ids("test")
        self._dev_ids = corpus.split_ids("dev")

    @property
    def finished(self) -> bool:
        return self.pending is None and self.round_index > 0 and \
            (len(self.labeled) >= self.strategy.budget or not self.unlabeled)

    def start(self) -> list[int]:
        """Issue the bootstrap batch as the first pending query set."""
        if self.round_index != 0 or self.pending is not None:
            raise RuntimeError("loop already started")
        size = min(self.strategy.bootstrap_size, self.strategy.budget)
        self.pending = bootstrap(sorted(self.unlabeled), size,
                                 derive_seed(self.strategy.seed, _STREAM_BOOTSTRAP))
        self.current_plan = RoundPlan(round_index=0, selected=list(self.pending))
        return list(self.pending)

    def submit(self, labels: Mapping[int, int]) -> None:
        """Ingest labels for exactly the pending batch, retrain, evaluate.

        Atomic: any mismatch or invalid label raises before state changes.
        """
        if self.pending is None:
            raise RuntimeError("no pending batch")
        if set(labels) != set(self.pending):
            raise ValueError("submitted ids must exactly cover the pending batch")
        for instance_id, label in labels.items():
            if not 0 <= label < self.corpus.num_classes:
                raise ValueError(f"label {label} out of range for instance {instance_id}")

        for instance_id in self.pending:
            self.labeled.add(instance_id, labels[instance_id], self.round_index)
            self.unlabeled.discard(instance_id)
        self._retrain()
        self._record()
        self.pending = None
        self.current_plan = None
        self.round_index += 1

    def next_batch(self) -> list[int] | None:
        """Plan the next batch, or return None when the budget is spent."""
        if self.pending is not None:
            return list(self.pending)
        if self.round_index == 0:
            return self.start()
        remaining = self.strategy.budget - len(self.labeled)
        batch = min(self.strategy.batch_size, remaining, len(self.unlabeled))
        if batch <= 0:
            return None
        plan = self._plan(batch)
        self.current_plan = plan
        self.pending = list(plan.selected)
        return list(self.pending)

    # -- internals --------------------------------------------------------

    def _plan(self, batch: int) -> RoundPlan:
        cfg = self.strategy
        if cfg.kind == RANDOM:
            chosen = select_random(sorted(self.unlabeled), batch,
                                   derive_seed(cfg.seed, _STREAM_RANDOM, self.round_index))
            return RoundPlan(round_index=self.round_index, selected=chosen)
        if cfg.kind == TOPN:
            probs = self._pool_probs(sorted(self.unlabeled))
            chosen = select_topn(sorted(self.unlabeled), probs, cfg.measure, batch)
            return RoundPlan(round_index=self.round_index, selected=chosen)
        model = self._ensure_clusters()
        probs = self._pool_probs(sorted(self.unlabeled))
        if cfg.kind == CLUSTER_TOPN:
            return plan_cluster_topn(model, sorted(self.unlabeled), probs, cfg.measure,
                                     batch, round_index=self.round_index)
        return select_dcalm(model, self._dev_partition, self.model, self.corpus,
                            self.store, sorted(self.unlabeled), cfg.measure, batch,
                            allocation_metric=cfg.allocation_metric,
                            positive_class=cfg.positive_class, seed=cfg.seed,
                            round_index=self.round_index)

    def _pool_probs(self, ids: list[int]) -> dict[int, np.ndarray]:
        P = np.atleast_2d(predict_proba(self.model, self.store.matrix(ids)))
        return {i: p for i, p in zip(ids, P)}

    def _ensure_clusters(self) -> ClusterModel:
        # Top-level clustering happens once per run, over the pool as it
        # stands after bootstrap; only subclusters refresh each round.
        if self._cluster_model is None:
            ids = sorted(self.unlabeled)
            k = min(self.strategy.num_clusters, len(ids))
            self._cluster_model = kmeans(ids, self.store.matrix(ids), k,
                                         derive_seed(self.strategy.seed, _STREAM_CLUSTER))
            self._dev_partition = partition_by_centroids(
                self._cluster_model, self._dev_ids, self.store.matrix(self._dev_ids))
        return self._cluster_model

    def _retrain(self):
        X, y = self.labeled.as_arrays(self.store)
        config = replace(self.learner_config,
                         seed=derive_seed(self.strategy.seed, _STREAM_TRAIN,
                                          self.round_index, self.learner_config.seed))
        self.model = train(X, y, self.corpus.num_classes, config)

    def _record(self):
        test_result = evaluate(self.model, self.store.matrix(self._test_ids),
                               self.corpus.labels(self._test_ids), self.corpus.num_classes)
        dev_result = evaluate(self.model, self.store.matrix(self._dev_ids),
                              self.corpus.labels(self._dev_ids), self.corpus.num_classes)
        plan = self.current_plan
        self.log.rounds.append(RoundRecord(
            round_index=self.round_index,
            selected_ids=list(plan.selected),
            allocations=list(plan.allocations),
            cluster_accuracies=list(plan.cluster_accuracies),
            test_macro_f1=macro_f1(test_result.confusion),
            test_accuracy=test_result.accuracy,
            dev_macro_f1=macro_f1(dev_result.confusion),
            label_counts=[int(c) for c in self.labeled.class_counts(self.corpus.num_classes)],
            test_error_counts=[int(c) for c in error_counts(test_result.confusion)],
        ))


def run_active_learning(corpus: Corpus, strategy: StrategyConfig,
                        learner_config: TrainConfig | None = None,
                        oracle=None, store: FeatureStore | None = None) -> RunLog:
    """Drive a full run against an oracle (simulated by default)."""
    oracle = oracle if oracle is not None else SimulatedOracle(corpus)
    loop = ActiveLearningLoop(corpus, strategy, learner_config, store=store)
    pending = loop.start()
    while pending is not None:
        answers = {i: query_oracle(corpus, loop.labeled, oracle, i) for i in pending}
        loop.submit(answers)
        pending = loop.next_batch()
    return loop.log
