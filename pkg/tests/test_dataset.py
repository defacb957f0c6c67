"""Corpus ingestion, splits, synthetic generation and oracle plumbing."""

import json

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from dcalm.dataset import (
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

from conftest import blob_corpus


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def ten_rows():
    rows = []
    for i in range(10):
        split = "pool" if i < 7 else ("dev" if i < 8 else "test")
        row = {"id": i, "vector": [float(i), 1.0], "split": split}
        if split != "pool":
            row["label"] = "pos" if i % 2 else "neg"
        rows.append(row)
    return rows


class TestLoadCorpus:
    def test_explicit_splits_round_trip(self, tmp_path):
        path = tmp_path / "ten.jsonl"
        write_jsonl(path, ten_rows())
        corpus = load_corpus(path)
        assert corpus.split_ids("pool") == list(range(7))
        assert corpus.split_ids("dev") == [7]
        assert corpus.split_ids("test") == [8, 9]
        assert corpus.feature_dim == 2

    def test_save_then_load_is_identity(self, tmp_path):
        corpus = blob_corpus(counts=(20, 10))
        path = tmp_path / "out.jsonl"
        save_corpus(corpus, path)
        again = load_corpus(path, class_names=list(corpus.class_names))
        assert again.splits == corpus.splits
        assert [i.id for i in again.instances] == [i.id for i in corpus.instances]
        assert_array_equal(
            np.array([i.label if i.label is not None else -1 for i in again.instances]),
            np.array([i.label if i.label is not None else -1 for i in corpus.instances]))
        for a, b in zip(again.instances, corpus.instances):
            np.testing.assert_allclose(a.features, b.features, rtol=0, atol=1e-12)

    def test_default_splits_are_70_10_20(self, tmp_path):
        rows = [{"id": i, "vector": [0.5 * i, -1.0], "label": "a" if i % 3 else "b"}
                for i in range(100)]
        path = tmp_path / "hundred.jsonl"
        write_jsonl(path, rows)
        corpus = load_corpus(path)
        assert len(corpus.split_ids("pool")) == 70
        assert len(corpus.split_ids("dev")) == 10
        assert len(corpus.split_ids("test")) == 20

    def test_wrong_vector_length_fails(self, tmp_path):
        rows = ten_rows()
        rows[3]["vector"] = [1.0, 2.0, 3.0]
        path = tmp_path / "bad.jsonl"
        write_jsonl(path, rows)
        with pytest.raises(CorpusError, match="dimension|length"):
            load_corpus(path)

    def test_unlabeled_dev_fails(self, tmp_path):
        rows = ten_rows()
        del rows[7]["label"]
        path = tmp_path / "bad.jsonl"
        write_jsonl(path, rows)
        with pytest.raises(CorpusError):
            load_corpus(path)

    def test_duplicate_id_fails(self, tmp_path):
        rows = ten_rows()
        rows[1]["id"] = 0
        path = tmp_path / "bad.jsonl"
        write_jsonl(path, rows)
        with pytest.raises(CorpusError):
            load_corpus(path)

    def test_error_message_carries_line_number(self, tmp_path):
        rows = ten_rows()
        rows[3]["vector"] = [1.0]
        path = tmp_path / "bad.jsonl"
        write_jsonl(path, rows)
        with pytest.raises(CorpusError, match=r"bad\.jsonl:4"):
            load_corpus(path)


class TestSyntheticCorpus:
    def test_counts_and_class_frequency(self):
        corpus = generate_synthetic(SyntheticConfig(class_counts=(500, 50), dim=16), 7)
        assert len(corpus.instances) == 550
        labels = [inst.label for inst in corpus.instances]
        assert labels.count(1) == 50

    def test_same_seed_bitwise_identical(self):
        config = SyntheticConfig(class_counts=(40, 30), dim=8)
        a = generate_synthetic(config, 7)
        b = generate_synthetic(config, 7)
        assert a.splits == b.splits
        for x, y in zip(a.instances, b.instances):
            assert x.id == y.id and x.label == y.label
            assert_array_equal(x.features, y.features)

    def test_zero_count_rejected(self):
        with pytest.raises(ValueError):
            SyntheticConfig(class_counts=(0, 10))

    def test_splits_cover_everything_disjointly(self):
        corpus = blob_corpus(counts=(33, 44, 23))
        pool = set(corpus.split_ids("pool"))
        dev = set(corpus.split_ids("dev"))
        test = set(corpus.split_ids("test"))
        assert not (pool & dev) and not (pool & test) and not (dev & test)
        assert pool | dev | test == {inst.id for inst in corpus.instances}

    def test_with_text_attaches_tokens(self):
        corpus = blob_corpus(counts=(10, 10), with_text=True)
        assert all(isinstance(inst.text, str) and inst.text for inst in corpus.instances)


class TestInstancesAndStore:
    def test_instance_requires_text_or_features(self):
        with pytest.raises(ValueError):
            Instance(id=1, text=None, features=None)

    def test_negative_id_rejected(self):
        with pytest.raises(ValueError):
            Instance(id=-1, features=np.zeros(2))

    def test_store_round_trips_vectors(self, small_corpus):
        store = FeatureStore.from_corpus(small_corpus)
        some = small_corpus.split_ids("pool")[:5]
        M = store.matrix(some)
        for row, instance_id in zip(M, some):
            assert_array_equal(row, small_corpus.instance(instance_id).features)


class TestOracles:
    def test_simulated_oracle_returns_hidden_label(self, small_corpus):
        labeled = LabeledSet()
        oracle = SimulatedOracle(small_corpus)
        instance_id = small_corpus.split_ids("pool")[0]
        answer = query_oracle(small_corpus, labeled, oracle, instance_id)
        assert answer == small_corpus.instance(instance_id).label

    def test_already_labeled_rejected(self, small_corpus):
        labeled = LabeledSet()
        oracle = SimulatedOracle(small_corpus)
        instance_id = small_corpus.split_ids("pool")[0]
        labeled.add(instance_id, 0, 0)
        with pytest.raises(OracleError, match="already labeled"):
            query_oracle(small_corpus, labeled, oracle, instance_id)

    def test_non_pool_instance_rejected(self, small_corpus):
        labeled = LabeledSet()
        oracle = SimulatedOracle(small_corpus)
        dev_id = small_corpus.split_ids("dev")[0]
        with pytest.raises(OracleError, match="pool"):
            query_oracle(small_corpus, labeled, oracle, dev_id)

    def test_human_oracle_replays_submitted_answer(self, small_corpus):
        labeled = LabeledSet()
        oracle = HumanOracle()
        instance_id = small_corpus.split_ids("pool")[3]
        oracle.submit(instance_id, 2)
        assert query_oracle(small_corpus, labeled, oracle, instance_id) == 2

    def test_human_oracle_without_answer_fails(self, small_corpus):
        oracle = HumanOracle()
        with pytest.raises(OracleError, match="pending"):
            query_oracle(small_corpus, LabeledSet(),
                         oracle, small_corpus.split_ids("pool")[0])


class TestLabeledSet:
    def test_duplicate_add_rejected(self):
        labeled = LabeledSet()
        labeled.add(5, 1, 0)
        with pytest.raises(ValueError):
            labeled.add(5, 0, 1)

    def test_class_counts(self):
        labeled = LabeledSet()
        for instance_id, label in [(1, 0), (2, 0), (3, 1)]:
            labeled.add(instance_id, label, 0)
        assert_array_equal(labeled.class_counts(3), np.array([2, 1, 0]))
