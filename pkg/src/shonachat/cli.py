"""Operator command line: prepare, train, eval, ingest, chat, serve, compare.

Exit codes: 0 success, 1 validation problem (bad records, bad config, corrupt
artifacts), 2 I/O problem (missing or unreadable files).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import __version__
from .classifier import (
    ModelIOError,
    TrainingConfig,
    TrainingError,
    evaluate,
    load_model,
    save_model,
    train,
)
from .corpus import (
    CorpusError,
    SplitSpec,
    class_histogram,
    load_corpus,
    load_lexicon,
    rebalance,
    save_corpus,
    split,
)
from .rag import KBError, ingest, load_documents, load_kb, save_kb
from .router import PolicyError, Route, Session, load_policy, route_turn
from .service import ServiceConfig, build_service, create_app

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

_ENV_PREFIX = "SHONACHAT_"


def _resolve(flag, env_name: str, file_value, default):
    """CLI flag > environment variable > config file > default."""
    if flag is not None:
        return flag
    env = os.environ.get(_ENV_PREFIX + env_name)
    if env is not None:
        return env
    if file_value is not None:
        return file_value
    return default


def cmd_prepare(args) -> int:
    lexicon = load_lexicon(args.lexicon) if args.lexicon else {}
    corpus, errors = load_corpus(args.corpus, lexicon=lexicon, collect_errors=True)
    for err in errors:
        print(f"error: {err}", file=sys.stderr)
    if len(corpus) == 0 and not errors:
        print("warning: corpus is empty", file=sys.stderr)
    save_corpus(corpus, args.out)
    hist = class_histogram(corpus)
    print(f"records: {len(corpus)}")
    print(f"labels: {list(corpus.labels)}")
    for label in sorted(hist):
        print(f"  {label}: {hist[label]}")
    return EXIT_VALIDATION if errors else EXIT_OK


def _training_config(args) -> TrainingConfig:
    return TrainingConfig(
        learning_rate=args.lr,
        batch_size=args.batch_size,
        epochs=args.epochs,
        weight_decay=args.weight_decay,
        early_stop_patience=args.patience,
        seed=args.seed,
        max_sequence_length=args.max_sequence_length,
    )


def cmd_train(args) -> int:
    lexicon = load_lexicon(args.lexicon) if args.lexicon else {}
    corpus = load_corpus(args.corpus, lexicon=lexicon)
    if len(corpus) == 0:
        print("error: corpus is empty", file=sys.stderr)
        return EXIT_VALIDATION
    config = _training_config(args)
    header = {
        "learning_rate": config.resolved_learning_rate("reference"),
        "batch_size": config.batch_size,
        "epochs": config.epochs,
        "weight_decay": config.weight_decay,
        "early_stop_patience": config.early_stop_patience,
        "seed": config.seed,
        "train_fraction": args.train_fraction,
    }
    print("run config: " + json.dumps(header, sort_keys=True))
    train_part, val_part = split(corpus, SplitSpec(train_fraction=args.train_fraction, seed=args.seed))
    train_part = rebalance(train_part, seed=args.seed)
    model, logs = train(train_part, val_part, config)
    save_model(model, args.model_out)
    log_path = args.log_out or str(args.model_out) + ".log.jsonl"
    Path(log_path).write_text("".join(entry.to_json() + "\n" for entry in logs), encoding="utf-8")
    report = evaluate(model, val_part)
    best = min(logs, key=lambda e: e.val_loss)
    print(f"epochs run: {len(logs)}; best checkpoint: epoch {best.epoch} (val_loss {best.val_loss:.4f})")
    print(f"validation accuracy: {report.accuracy:.4f}  weighted_f1: {report.weighted_f1:.4f}")
    print(f"model written to {args.model_out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    model = load_model(args.model)
    lexicon = load_lexicon(args.lexicon) if args.lexicon else {}
    corpus = load_corpus(args.corpus, lexicon=lexicon)
    report = evaluate(model, corpus)
    print(f"{'label':<24}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}")
    for label in report.labels:
        row = report.per_class[label]
        print(
            f"{label:<24}{row['precision']:>10.4f}{row['recall']:>10.4f}"
            f"{row['f1']:>10.4f}{int(row['support']):>10d}"
        )
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_ingest(args) -> int:
    docs = load_documents(args.docs)
    if not docs:
        print("warning: no documents found", file=sys.stderr)
    kb = ingest(docs, max_chunk_words=args.max_chunk_words)
    save_kb(kb, args.kb_out)
    print(f"documents: {len(docs)}")
    print(f"chunks: {len(kb)}")
    print(f"knowledge base written to {args.kb_out}")
    return EXIT_OK


def _load_runtime(args):
    model = load_model(args.model)
    policy = load_policy(args.policy)
    kb = load_kb(args.kb)
    if args.threshold is not None:
        policy = dataclasses.replace(policy, confidence_threshold=args.threshold)
    if args.k is not None:
        policy = dataclasses.replace(policy, retrieval_k=args.k)
    return model, policy, kb


def cmd_chat(args) -> int:
    model, policy, kb = _load_runtime(args)
    session = Session(id="repl")
    interactive = sys.stdin.isatty()
    if interactive:
        print("shonachat ready; type 'exit' to leave.", file=sys.stderr)
    while True:
        if interactive:
            print("you> ", end="", file=sys.stderr, flush=True)
        line = sys.stdin.readline()
        if not line:
            return EXIT_OK
        text = line.rstrip("\n")
        plan = route_turn(session, text, model, policy, kb)
        if args.verbose:
            conf = f" confidence={plan.confidence:.2f}" if plan.confidence is not None else ""
            intent = f" intent={plan.intent}" if plan.intent is not None else ""
            print(f"[route={plan.route.value}{intent}{conf}]")
        print(f"bot> {plan.reply}")
        if plan.session_terminated:
            return EXIT_OK


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def cmd_compare(args) -> int:
    model, policy, kb = _load_runtime(args)
    lines = [ln.rstrip("\n") for ln in Path(args.script).read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    session = Session(id="compare-hybrid")
    rows = []
    for i, text in enumerate(lines, start=1):
        plan = route_turn(session, text, model, policy, kb)
        rag_answer = kb.answer(text, policy.retrieval_k)
        rows.append(
            {
                "turn": i,
                "input": text,
                "hybrid": {"route": plan.route.value, "reply": plan.reply},
                "rag_only": {"route": Route.RAG.value, "reply": rag_answer.text},
                "differs": plan.reply != rag_answer.text,
            }
        )
        if plan.session_terminated:
            session = Session(id=f"compare-hybrid-{i}")
    out = ["| # | input | hybrid route | hybrid reply | RAG-only reply | differs |", "|---|---|---|---|---|---|"]
    for row in rows:
        out.append(
            "| {turn} | {inp} | {route} | {hreply} | {rreply} | {diff} |".format(
                turn=row["turn"],
                inp=_md_cell(row["input"]),
                route=row["hybrid"]["route"],
                hreply=_md_cell(row["hybrid"]["reply"]),
                rreply=_md_cell(row["rag_only"]["reply"]),
                diff="yes" if row["differs"] else "no",
            )
        )
    transcript = "\n".join(out) + "\n"
    if args.out:
        Path(args.out).write_text(transcript, encoding="utf-8")
    else:
        print(transcript, end="")
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(rows, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_serve(args) -> int:
    file_cfg = {}
    if args.config:
        file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
    config = ServiceConfig(
        host=_resolve(args.host, "HOST", file_cfg.get("host"), "127.0.0.1"),
        port=int(_resolve(args.port, "PORT", file_cfg.get("port"), 8000)),
        model_path=_resolve(args.model, "MODEL", file_cfg.get("model"), None),
        policy_path=_resolve(args.policy, "POLICY", file_cfg.get("policy"), None),
        kb_path=_resolve(args.kb, "KB", file_cfg.get("kb"), None),
        session_ttl_seconds=float(_resolve(args.ttl, "TTL", file_cfg.get("session_ttl_seconds"), 1800.0)),
        max_request_bytes=int(_resolve(None, "MAX_BYTES", file_cfg.get("max_request_bytes"), 65536)),
        log_path=_resolve(args.log, "LOG", file_cfg.get("log"), None),
    )
    service = build_service(config)
    app = create_app(service)
    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shonachat", description=__doc__)
    parser.add_argument("--version", action="version", version=f"shonachat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="validate and normalize a corpus file")
    p.add_argument("corpus")
    p.add_argument("--lexicon", help="slang<TAB>standard lexicon file")
    p.add_argument("--out", required=True, help="normalized corpus output path")
    p.set_defaults(fn=cmd_prepare)

    p = sub.add_parser("train", help="split, rebalance, and train the intent classifier")
    p.add_argument("corpus")
    p.add_argument("--model-out", required=True)
    p.add_argument("--log-out", help="training log path (default: <model-out>.log.jsonl)")
    p.add_argument("--lexicon")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--lr", type=float, default=None, help="default 0.1 for the reference backend")
    p.add_argument("--batch-size", type=int, default=4)
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--weight-decay", type=float, default=0.1)
    p.add_argument("--patience", type=int, default=2)
    p.add_argument("--max-sequence-length", type=int, default=512)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="score a model on a labeled corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--lexicon")
    p.add_argument("corpus")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("ingest", help="build the retrieval knowledge base")
    p.add_argument("docs", help="directory of .md/.txt files or one JSON file")
    p.add_argument("--kb-out", required=True)
    p.add_argument("--max-chunk-words", type=int, default=120)
    p.set_defaults(fn=cmd_ingest)

    def add_runtime_flags(p):
        p.add_argument("--model", required=True)
        p.add_argument("--policy", required=True)
        p.add_argument("--kb", required=True)
        p.add_argument("--threshold", type=float, default=None, help="override the policy confidence gate")
        p.add_argument("--k", type=int, default=None, help="override retrieval depth")

    p = sub.add_parser("chat", help="interactive terminal chat")
    add_runtime_flags(p)
    p.add_argument("--verbose", action="store_true", help="show route and confidence for each turn")
    p.set_defaults(fn=cmd_chat)

    p = sub.add_parser("compare", help="hybrid router vs a RAG-only baseline over a script")
    add_runtime_flags(p)
    p.add_argument("script", help="one user turn per line")
    p.add_argument("--out", help="write the Markdown transcript here instead of stdout")
    p.add_argument("--json-out", help="also write machine-readable rows")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("serve", help="run the HTTP chat service")
    p.add_argument("--model")
    p.add_argument("--policy")
    p.add_argument("--kb")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--ttl", type=float, help="session TTL in seconds")
    p.add_argument("--log", help="append-only turn log path")
    p.add_argument("--config", help="JSON config file (flags and env vars win over it)")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CorpusError, PolicyError, KBError, ModelIOError, TrainingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
