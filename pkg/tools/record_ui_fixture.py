"""Record the web client's replay fixture from the real CLI and service.

Trains the bundled corpus, captures the ``shonachat chat --verbose``
transcript for the bundled dialogue script, then replays the same turns
through the HTTP service and stores the raw JSON bodies. The web client's
test suite replays these responses through the page and checks that the
rendered transcript matches the CLI one.

Run from the repository root:

    python3 tools/record_ui_fixture.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from shonachat.cli import main as cli_main
from shonachat.service import ServiceConfig, build_service, create_app

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "shonachat" / "data"
OUT = ROOT / "frontend" / "tests" / "fixtures" / "replay.json"

RAG_QUERY = "mune ma program api pa Pace"


def build_artifacts(workdir: Path) -> tuple[Path, Path]:
    model = workdir / "model.json"
    kb = workdir / "kb.json"
    rc = cli_main(
        [
            "train",
            str(DATA / "mini_corpus.jsonl"),
            "--lexicon",
            str(DATA / "slang_lexicon.tsv"),
            "--model-out",
            str(model),
        ]
    )
    if rc != 0:
        raise SystemExit(f"train failed with exit code {rc}")
    rc = cli_main(["ingest", str(DATA / "kb"), "--kb-out", str(kb)])
    if rc != 0:
        raise SystemExit(f"ingest failed with exit code {rc}")
    return model, kb


def record_cli_transcript(model: Path, kb: Path) -> str:
    script = (DATA / "dialogue_script.txt").read_text(encoding="utf-8")
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "shonachat.cli",
            "chat",
            "--model",
            str(model),
            "--policy",
            str(DATA / "policy.json"),
            "--kb",
            str(kb),
            "--verbose",
        ],
        input=script,
        capture_output=True,
        text=True,
        check=True,
        cwd=ROOT,
    )
    return proc.stdout


def record_service_turns(model: Path, kb: Path) -> dict:
    config = ServiceConfig(
        model_path=str(model), policy_path=str(DATA / "policy.json"), kb_path=str(kb)
    )
    service = build_service(config)
    client = TestClient(create_app(service))

    health = client.get("/health").json()
    created = client.post("/sessions").json()
    session_id = created["session_id"]

    turns = []
    script = (DATA / "dialogue_script.txt").read_text(encoding="utf-8")
    for text in [ln for ln in script.splitlines() if ln.strip()]:
        body = client.post("/chat", json={"session_id": session_id, "text": text}).json()
        turns.append({"text": text, "response": body})

    rag_session = client.post("/sessions").json()["session_id"]
    rag_body = client.post(
        "/chat", json={"session_id": rag_session, "text": RAG_QUERY}
    ).json()
    return {
        "health": health,
        "session_create": created,
        "turns": turns,
        "rag_turn": {"text": RAG_QUERY, "response": rag_body},
    }


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        model, kb = build_artifacts(workdir)
        transcript = record_cli_transcript(model, kb)
        recorded = record_service_turns(model, kb)

    recorded["chat_transcript"] = transcript
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(recorded, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")
    rag_trace = recorded["rag_turn"]["response"].get("retrieval_trace") or []
    print(f"transcript turns: {len(recorded['turns'])}, rag trace rows: {len(rag_trace)}")


if __name__ == "__main__":
    main()
