"""HTTP facade that turns the run loop's label queries into a human task.

One session = one active-learning run whose oracle is the annotator on the
other side of the wire.  Submissions are atomic (the whole pending batch or
nothing), retraining happens synchronously inside the submit request, and
test-set metrics stay sealed until the budget is spent.  Every session is
persisted as an append-only event log so a crashed service replays its
sessions deterministically.
"""

from __future__ import annotations

import json
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .dataset import Corpus, CorpusError, HumanOracle, SyntheticConfig, \
    generate_synthetic, load_corpus, query_oracle
from .harness import PRECOMPUTED, TFIDF, featurize_corpus
from .learner import TrainConfig
from .strategies import ActiveLearningLoop, StrategyConfig

AWAITING_LABELS = "awaiting_labels"
TRAINING = "training"
FINISHED = "finished"


def _build_corpus(doc: dict) -> Corpus:
    source = doc.get("corpus", {})
    if "path" in source:
        return load_corpus(source["path"])
    if "synthetic" in source:
        spec = dict(source["synthetic"])
        seed = spec.pop("seed", 0)
        return generate_synthetic(SyntheticConfig(**spec), seed)
    raise ValueError("session config needs corpus.path or corpus.synthetic")


class AnnotationSession:
    """Single-writer state machine for one human-labeled run."""

    def __init__(self, session_id: str, config: dict):
        self.session_id = session_id
        self.config = config

        corpus = _build_corpus(config)
        featurization = config.get("featurization", PRECOMPUTED)
        if featurization == TFIDF:
            tfidf = config.get("tfidf", {})
            corpus = featurize_corpus(corpus, tuple(tfidf.get("n_range", (2, 5))),
                                      tfidf.get("max_features"))
        elif featurization != PRECOMPUTED:
            raise ValueError(f"unknown featurization {featurization!r}")

        pool_ids = corpus.split_ids("pool")
        if not corpus.has_text(pool_ids):
            raise ValueError("corpus has no text for pool instances; "
                             "humans annotate text, not vectors")

        strategy = StrategyConfig(**config.get("strategy", {}))
        learner = TrainConfig(**config.get("learner", {}))
        self.corpus = corpus
        self.loop = ActiveLearningLoop(corpus, strategy, learner)
        self.oracle = HumanOracle()
        self.pending: list[int] | None = self.loop.start()

    @property
    def state(self) -> str:
        return AWAITING_LABELS if self.pending is not None else FINISHED

    def pending_items(self) -> list[dict]:
        if self.pending is None:
            return []
        return [{"id": i, "text": self.corpus.instance(i).text} for i in self.pending]

    def submit(self, labels: dict) -> None:
        """Record one full batch of answers; rejects partial input untouched."""
        if self.pending is None:
            raise ValueError("session is finished; nothing to label")
        try:
            by_id = {int(key): value for key, value in labels.items()}
        except (TypeError, ValueError):
            raise ValueError("label keys must be instance ids") from None
        pending = set(self.pending)
        if set(by_id) != pending:
            missing = sorted(pending - set(by_id))
            extra = sorted(set(by_id) - pending)
            raise ValueError(f"submission must cover the pending batch exactly "
                             f"(missing {missing[:5]}, unexpected {extra[:5]})")
        answers = {i: self.corpus.class_index(str(name)) for i, name in by_id.items()}

        for instance_id, label in answers.items():
            self.oracle.submit(instance_id, label)
        resolved = {i: query_oracle(self.corpus, self.loop.labeled, self.oracle, i)
                    for i in self.pending}
        self.loop.submit(resolved)
        self.pending = self.loop.next_batch()

    def latest_report(self) -> dict:
        """Distribution report for the last completed round.

        Test-derived error counts are withheld until the session finishes.
        """
        if not self.loop.log.rounds:
            return {}
        record = self.loop.log.rounds[-1]
        doc = self.loop.log.report(record).to_json()
        if self.state != FINISHED:
            doc["test_error_counts"] = {}
        return doc

    def dev_macro_f1(self) -> float | None:
        if not self.loop.log.rounds:
            return None
        return self.loop.log.rounds[-1].dev_macro_f1

    def snapshot(self) -> dict:
        """Read-only view; never carries test labels or hidden pool labels."""
        return {
            "session_id": self.session_id,
            "state": self.state,
            "class_names": list(self.corpus.class_names),
            "progress": {
                "labeled": len(self.loop.labeled),
                "budget": self.loop.strategy.budget,
            },
            "round": self.loop.round_index,
            "pending": self.pending_items(),
            "dev_macro_f1": self.dev_macro_f1(),
            "report": self.latest_report(),
        }


class SessionStore:
    """In-memory sessions backed by per-session append-only event logs."""

    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory else None
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
        self.sessions: dict[str, AnnotationSession] = {}

    def _log_path(self, session_id: str) -> Path | None:
        return self.directory / f"{session_id}.jsonl" if self.directory else None

    def _append(self, session_id: str, event: dict) -> None:
        path = self._log_path(session_id)
        if path:
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    def create(self, config: dict, session_id: str | None = None,
               persist: bool = True) -> AnnotationSession:
        session_id = session_id or uuid.uuid4().hex
        session = AnnotationSession(session_id, config)
        self.sessions[session_id] = session
        if persist:
            self._append(session_id, {"event": "created", "config": config})
        return session

    def get(self, session_id: str) -> AnnotationSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise KeyError(f"unknown session {session_id}") from None

    def submit(self, session_id: str, labels: dict) -> AnnotationSession:
        session = self.get(session_id)
        session.submit(labels)
        self._append(session_id, {"event": "labels", "labels": labels})
        return session

    def replay(self) -> int:
        """Rebuild sessions from their event logs (e.g. after a crash)."""
        if not self.directory:
            return 0
        count = 0
        for path in sorted(self.directory.glob("*.jsonl")):
            session_id = path.stem
            if session_id in self.sessions:
                continue
            session = None
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    event = json.loads(line)
                    if event["event"] == "created":
                        session = self.create(event["config"], session_id=session_id,
                                              persist=False)
                    elif event["event"] == "labels":
                        session.submit(event["labels"])
            if session is not None:
                count += 1
        return count


def create_app(store_dir: str | Path | None = None,
               frontend_dir: str | Path | None = None) -> FastAPI:
    """Assemble the annotation service (optionally serving the browser UI)."""
    store = SessionStore(store_dir)
    store.replay()
    app = FastAPI(title="annotation service")
    app.state.store = store

    def _get_or_404(session_id: str) -> AnnotationSession:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")

    @app.post("/sessions")
    def create_session(config: dict):
        try:
            session = store.create(config)
        except (ValueError, CorpusError, FileNotFoundError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return JSONResponse(status_code=201, content={
            "session_id": session.session_id,
            "state": session.state,
            "pending": session.pending_items(),
            "class_names": list(session.corpus.class_names),
            "progress": session.snapshot()["progress"],
        })

    @app.post("/sessions/{session_id}/labels")
    def submit_labels(session_id: str, labels: dict):
        session = _get_or_404(session_id)
        try:
            store.submit(session_id, labels)
        except (ValueError, CorpusError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        response = {
            "state": session.state,
            "dev_macro_f1": session.dev_macro_f1(),
            "progress": session.snapshot()["progress"],
            "report": session.latest_report(),
        }
        if session.state == AWAITING_LABELS:
            response["pending"] = session.pending_items()
        return response

    @app.get("/sessions/{session_id}")
    def get_status(session_id: str):
        return _get_or_404(session_id).snapshot()

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        return _get_or_404(session_id).latest_report()

    if frontend_dir and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app
