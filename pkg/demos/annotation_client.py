"""
Driving the annotation service over HTTP
========================================

Start the service in a background thread, create a session, and play
annotator from the command line: fetch pending items, submit labels,
repeat until the budget is spent, then read the final report.  The
"annotator" here cheats by regenerating the corpus client-side and
answering with the true labels.
"""

import json
import tempfile
import threading
import time
import urllib.request

import uvicorn

from dcalm.dataset import SyntheticConfig, generate_synthetic
from dcalm.service import create_app

HOST, PORT = "127.0.0.1", 8731
BASE = f"http://{HOST}:{PORT}"


def call(method, path, payload=None):
    data = None if payload is None else json.dumps(payload).encode()
    req = urllib.request.Request(f"{BASE}{path}", data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


store = tempfile.mkdtemp(prefix="dcalm_sessions_")
server = uvicorn.Server(uvicorn.Config(create_app(store_dir=store),
                                       host=HOST, port=PORT, log_level="warning"))
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.05)
print(f"service up at {BASE}, session log in {store}")

COUNTS = (90, 90, 60)
CORPUS_SEED = 3
session_config = {
    "corpus": {"synthetic": {"class_counts": list(COUNTS), "dim": 8,
                             "separation": 2.5, "with_text": True,
                             "seed": CORPUS_SEED}},
    "strategy": {"kind": "dcalm", "num_clusters": 5, "bootstrap_size": 25,
                 "batch_size": 25, "budget": 100, "seed": 1},
    "learner": {"epochs": 25},
}

# The client-side oracle: same generator, same seed, same corpus.
oracle = generate_synthetic(
    SyntheticConfig(class_counts=COUNTS, dim=8, separation=2.5, with_text=True),
    CORPUS_SEED)

doc = call("POST", "/sessions", session_config)
session = doc["session_id"]
print(f"session {session}: {len(doc['pending'])} items await labels")

round_index = 0
while doc["state"] == "awaiting_labels":
    pending = doc["pending"]
    labels = {str(item["id"]): oracle.class_names[oracle.instance(item["id"]).label]
              for item in pending}
    doc = call("POST", f"/sessions/{session}/labels", labels)
    round_index += 1
    progress = doc["progress"]
    f1 = doc["dev_macro_f1"]
    print(f"round {round_index}: labeled {progress['labeled']}/{progress['budget']}"
          f", dev macro-F1 {f1:.4f}" if f1 is not None else f"round {round_index}")

report = call("GET", f"/sessions/{session}/report")
print("\nfinal report")
print(json.dumps(report, indent=2, sort_keys=True))

server.should_exit = True
