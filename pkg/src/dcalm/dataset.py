"""Corpora, pool/dev/test splits, labeled-set bookkeeping, and label oracles.

A corpus is immutable once loaded: the splits are fixed, instance ids never
change, and hidden pool labels are only reachable through an oracle.  The
growing labeled set is the single mutable piece of run state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

SPLIT_NAMES = ("pool", "dev", "test")
DEFAULT_SPLIT_FRACTIONS = (0.7, 0.1, 0.2)


class CorpusError(ValueError):
    """Raised for malformed corpus files or invariant violations."""


class OracleError(RuntimeError):
    """Raised when a label query cannot be answered."""


@dataclass(frozen=True)
class Instance:
    """One pool/dev/test item: text and/or a dense feature vector.

    ``label`` is the hidden ground truth (class index); it is None for
    unlabeled pool instances in human-annotation mode.
    """

    id: int
    text: str | None = None
    features: np.ndarray | None = None
    label: int | None = None

    def __post_init__(self):
        if self.id < 0:
            raise CorpusError(f"instance id must be non-negative, got {self.id}")
        if self.text is None and self.features is None:
            raise CorpusError(f"instance {self.id} has neither text nor features")


@dataclass
class Corpus:
    """Instances plus the fixed pool/dev/test partition.

    ``feature_dim`` is None only for text-only corpora that have not been
    featurized yet.
    """

    instances: list[Instance]
    num_classes: int
    class_names: list[str]
    splits: dict[str, frozenset[int]]
    feature_dim: int | None = None
    _by_id: dict[int, Instance] = field(init=False, repr=False)

    def __post_init__(self):
        self._by_id = {inst.id: inst for inst in self.instances}
        if len(self._by_id) != len(self.instances):
            raise CorpusError("duplicate instance ids")
        if self.num_classes < 1:
            raise CorpusError("num_classes must be positive")
        if len(self.class_names) != self.num_classes:
            raise CorpusError("class_names length must equal num_classes")
        self._validate_splits()
        self._validate_instances()

    def _validate_splits(self):
        seen: set[int] = set()
        for name in SPLIT_NAMES:
            ids = self.splits.setdefault(name, frozenset())
            unknown = ids - self._by_id.keys()
            if unknown:
                raise CorpusError(f"split '{name}' references unknown ids {sorted(unknown)[:5]}")
            if ids & seen:
                raise CorpusError("splits are not disjoint")
            seen |= ids

    def _validate_instances(self):
        for inst in self.instances:
            if inst.features is not None:
                if self.feature_dim is None:
                    raise CorpusError("corpus has no feature_dim but instances carry features")
                if inst.features.shape != (self.feature_dim,):
                    raise CorpusError(
                        f"instance {inst.id} has feature dimension "
                        f"{inst.features.shape}, expected ({self.feature_dim},)"
                    )
            if inst.label is not None and not 0 <= inst.label < self.num_classes:
                raise CorpusError(f"instance {inst.id} label {inst.label} out of range")
        for name in ("dev", "test"):
            for i in self.splits[name]:
                if self._by_id[i].label is None:
                    raise CorpusError(f"{name} instance {i} is unlabeled")

    def instance(self, instance_id: int) -> Instance:
        try:
            return self._by_id[instance_id]
        except KeyError:
            raise CorpusError(f"unknown instance id {instance_id}") from None

    def split_ids(self, name: str) -> list[int]:
        """Ids of one split in ascending order."""
        return sorted(self.splits[name])

    def labels(self, ids: Iterable[int]) -> np.ndarray:
        out = []
        for i in ids:
            label = self.instance(i).label
            if label is None:
                raise CorpusError(f"instance {i} has no label")
            out.append(label)
        return np.asarray(out, dtype=np.int64)

    def class_index(self, name: str) -> int:
        try:
            return self.class_names.index(name)
        except ValueError:
            raise CorpusError(f"unknown class name {name!r}") from None

    def has_text(self, ids: Iterable[int]) -> bool:
        return all(self.instance(i).text is not None for i in ids)


class FeatureStore:
    """Row-indexed view of the corpus feature vectors.

    Built once per run; selection and training code pulls contiguous
    matrices out of it instead of touching Instance objects.
    """

    def __init__(self, ids: Sequence[int], matrix: np.ndarray):
        if matrix.ndim != 2 or len(ids) != matrix.shape[0]:
            raise CorpusError("feature matrix shape does not match ids")
        self._row = {i: r for r, i in enumerate(ids)}
        self._matrix = np.ascontiguousarray(matrix, dtype=np.float64)

    @property
    def dim(self) -> int:
        return self._matrix.shape[1]

    def vector(self, instance_id: int) -> np.ndarray:
        return self._matrix[self._row[instance_id]]

    def matrix(self, ids: Sequence[int]) -> np.ndarray:
        rows = [self._row[i] for i in ids]
        return self._matrix[rows]

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "FeatureStore":
        ids, rows = [], []
        for inst in corpus.instances:
            if inst.features is None:
                raise CorpusError(f"instance {inst.id} has no features; featurize first")
            ids.append(inst.id)
            rows.append(inst.features)
        return cls(ids, np.vstack(rows))


@dataclass(frozen=True)
class LabeledExample:
    instance_id: int
    label: int
    round_index: int  # 0 = bootstrap


class LabeledSet:
    """Ordered record of acquired labels. Single writer per run."""

    def __init__(self):
        self.entries: list[LabeledExample] = []
        self._ids: set[int] = set()

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, instance_id: int) -> bool:
        return instance_id in self._ids

    @property
    def ids(self) -> set[int]:
        return set(self._ids)

    def add(self, instance_id: int, label: int, round_index: int) -> None:
        if instance_id in self._ids:
            raise ValueError(f"instance {instance_id} already labeled")
        self.entries.append(LabeledExample(instance_id, label, round_index))
        self._ids.add(instance_id)

    def class_counts(self, num_classes: int) -> np.ndarray:
        counts = np.zeros(num_classes, dtype=np.int64)
        for e in self.entries:
            counts[e.label] += 1
        return counts

    def as_arrays(self, store: FeatureStore) -> tuple[np.ndarray, np.ndarray]:
        ids = [e.instance_id for e in self.entries]
        y = np.asarray([e.label for e in self.entries], dtype=np.int64)
        return store.matrix(ids), y


class SimulatedOracle:
    """Answers queries from the corpus' hidden labels."""

    def __init__(self, corpus: Corpus):
        self._corpus = corpus

    def query(self, instance_id: int) -> int:
        label = self._corpus.instance(instance_id).label
        if label is None:
            raise OracleError(f"no hidden label for instance {instance_id}")
        return label


class HumanOracle:
    """Holds answers submitted by a human annotator until they are consumed."""

    def __init__(self):
        self._pending: dict[int, int] = {}

    def submit(self, instance_id: int, label: int) -> None:
        self._pending[instance_id] = label

    def query(self, instance_id: int) -> int:
        try:
            return self._pending.pop(instance_id)
        except KeyError:
            raise OracleError(f"no pending answer for instance {instance_id}") from None


def query_oracle(corpus: Corpus, labeled: LabeledSet, oracle, instance_id: int) -> int:
    """Fetch the true label for a pool instance.

    The caller appends the result to the labeled set; this function only
    enforces that the query is legal (pool member, not already labeled).
    """
    if instance_id not in corpus.splits["pool"]:
        raise OracleError(f"instance {instance_id} is not in the pool split")
    if instance_id in labeled:
        raise OracleError(f"instance {instance_id} is already labeled")
    return oracle.query(instance_id)


def _default_splits(ids: Sequence[int], seed: int,
                    fractions: tuple[float, float, float]) -> dict[str, frozenset[int]]:
    # Seeded shuffle, then contiguous cuts: floor(0.7 n) / floor(0.1 n) / rest.
    rng = np.random.default_rng(seed)
    order = np.array(sorted(ids))
    rng.shuffle(order)
    n = len(order)
    n_pool = int(np.floor(fractions[0] * n))
    n_dev = int(np.floor(fractions[1] * n))
    return {
        "pool": frozenset(int(i) for i in order[:n_pool]),
        "dev": frozenset(int(i) for i in order[n_pool:n_pool + n_dev]),
        "test": frozenset(int(i) for i in order[n_pool + n_dev:]),
    }


def load_corpus(path, class_names: list[str] | None = None, split_seed: int = 0,
                split_fractions: tuple[float, float, float] = DEFAULT_SPLIT_FRACTIONS) -> Corpus:
    """Read a JSONL corpus file.

    One object per line: ``{"id": int, "text": str?, "vector": [float]?,
    "label": str?, "split": "pool"|"dev"|"test"?}``.  When no line carries a
    split field, a seeded 70-10-20 pool/dev/test shuffle split is applied.
    """
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if "id" not in obj:
                raise CorpusError(f"{path}:{lineno}: missing 'id'")
            records.append((lineno, obj))

    if not records:
        raise CorpusError(f"{path}: empty corpus")

    if class_names is None:
        seen = sorted({obj["label"] for _, obj in records if obj.get("label") is not None})
        if not seen:
            raise CorpusError(f"{path}: no labels and no class_names given")
        class_names = [str(s) for s in seen]
    class_to_index = {name: idx for idx, name in enumerate(class_names)}

    instances = []
    explicit_splits: dict[str, set[int]] = {name: set() for name in SPLIT_NAMES}
    any_split = False
    feature_dim = None
    for lineno, obj in records:
        vector = None
        if obj.get("vector") is not None:
            vector = np.asarray(obj["vector"], dtype=np.float64)
            if vector.ndim != 1:
                raise CorpusError(f"{path}:{lineno}: vector must be flat")
            if feature_dim is None:
                feature_dim = vector.shape[0]
            elif vector.shape[0] != feature_dim:
                raise CorpusError(
                    f"{path}:{lineno}: vector length {vector.shape[0]} != {feature_dim}")
        label = None
        if obj.get("label") is not None:
            name = str(obj["label"])
            if name not in class_to_index:
                raise CorpusError(f"{path}:{lineno}: unknown class name {name!r}")
            label = class_to_index[name]
        try:
            inst = Instance(id=int(obj["id"]), text=obj.get("text"),
                            features=vector, label=label)
        except CorpusError as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from None
        instances.append(inst)
        split = obj.get("split")
        if split is not None:
            if split not in SPLIT_NAMES:
                raise CorpusError(f"{path}:{lineno}: unknown split {split!r}")
            explicit_splits[split].add(inst.id)
            any_split = True

    if any_split:
        splits = {name: frozenset(ids) for name, ids in explicit_splits.items()}
    else:
        splits = _default_splits([inst.id for inst in instances], split_seed, split_fractions)

    return Corpus(instances=instances, num_classes=len(class_names),
                  class_names=list(class_names), splits=splits, feature_dim=feature_dim)


def save_corpus(corpus: Corpus, path) -> None:
    """Write a corpus back to JSONL, including split membership."""
    split_of: dict[int, str] = {}
    for name in SPLIT_NAMES:
        for i in corpus.splits[name]:
            split_of[i] = name
    with open(path, "w", encoding="utf-8") as fh:
        for inst in corpus.instances:
            obj: dict = {"id": inst.id}
            if inst.text is not None:
                obj["text"] = inst.text
            if inst.features is not None:
                obj["vector"] = [float(v) for v in inst.features]
            if inst.label is not None:
                obj["label"] = corpus.class_names[inst.label]
            if inst.id in split_of:
                obj["split"] = split_of[inst.id]
            fh.write(json.dumps(obj) + "\n")


@dataclass
class SyntheticConfig:
    """Gaussian-blob corpus generator settings.

    ``class_counts`` controls deliberate imbalance; ``center_scale`` pushes
    individual class centers further out (or closer in) than the rest, and
    ``with_text`` attaches synthetic token text so the corpus can exercise
    the text featurizer and the annotation UI.
    """

    class_counts: Sequence[int]
    dim: int = 16
    separation: float = 6.0
    stds: float | Sequence[float] = 1.0
    center_scale: float | Sequence[float] = 1.0
    with_text: bool = False
    class_names: Sequence[str] | None = None
    split_fractions: tuple[float, float, float] = DEFAULT_SPLIT_FRACTIONS

    def __post_init__(self):
        if len(self.class_counts) < 1 or any(c < 1 for c in self.class_counts):
            raise ValueError("per-class counts must all be >= 1")
        if self.dim < 2:
            raise ValueError("dimension must be >= 2")

    def _per_class(self, value) -> np.ndarray:
        k = len(self.class_counts)
        arr = np.broadcast_to(np.asarray(value, dtype=np.float64), (k,))
        return arr.copy()


def _synthetic_text(rng: np.random.Generator, class_index: int, num_tokens: int = 8) -> str:
    # Class-flavored tokens mixed with shared filler so character n-grams
    # carry signal without being trivial.
    tokens = []
    for _ in range(num_tokens):
        if rng.random() < 0.6:
            tokens.append(f"cls{class_index}tok{rng.integers(5)}")
        else:
            tokens.append(f"shared{rng.integers(20)}")
    return " ".join(tokens)


def generate_synthetic(config: SyntheticConfig, seed: int) -> Corpus:
    """Deterministic Gaussian-blob corpus with per-class counts."""
    rng = np.random.default_rng(seed)
    k = len(config.class_counts)
    stds = config._per_class(config.stds)
    scales = config._per_class(config.center_scale)

    directions = rng.normal(size=(k, config.dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    centers = directions * config.separation * scales[:, None]

    names = list(config.class_names) if config.class_names is not None \
        else [f"class_{c}" for c in range(k)]
    if len(names) != k:
        raise ValueError("class_names length must match class_counts")

    instances = []
    next_id = 0
    for c, count in enumerate(config.class_counts):
        points = centers[c] + rng.normal(size=(count, config.dim)) * stds[c]
        for row in points:
            text = _synthetic_text(rng, c) if config.with_text else None
            instances.append(Instance(id=next_id, text=text, features=row, label=c))
            next_id += 1

    splits = _default_splits([inst.id for inst in instances], seed, config.split_fractions)
    return Corpus(instances=instances, num_classes=k, class_names=names,
                  splits=splits, feature_dim=config.dim)
