"""Command line behavior: exit codes, output formats, determinism."""

import json

import pytest

from shonachat.cli import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory, data_dir):
    """Model and KB built once through the CLI itself."""
    root = tmp_path_factory.mktemp("cli")
    model = root / "model.json"
    kbfile = root / "kb.json"
    rc = main(
        [
            "train",
            str(data_dir / "mini_corpus.jsonl"),
            "--lexicon",
            str(data_dir / "slang_lexicon.tsv"),
            "--model-out",
            str(model),
        ]
    )
    assert rc == EXIT_OK
    rc = main(["ingest", str(data_dir / "kb"), "--kb-out", str(kbfile)])
    assert rc == EXIT_OK
    return {"model": model, "kb": kbfile, "policy": data_dir / "policy.json"}


def runtime_flags(artifacts):
    return [
        "--model", str(artifacts["model"]),
        "--policy", str(artifacts["policy"]),
        "--kb", str(artifacts["kb"]),
    ]


# ---------------------------------------------------------------- exit codes

def test_missing_file_is_io_error(tmp_path, capsys):
    rc = main(["prepare", str(tmp_path / "absent.jsonl"), "--out", str(tmp_path / "o.jsonl")])
    assert rc == EXIT_IO
    assert "error:" in capsys.readouterr().err


def test_invalid_records_are_validation_errors(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x", "raw_text": "hi", "intent": "greeting"}\n')  # missing enums
    rc = main(["prepare", str(bad), "--out", str(tmp_path / "o.jsonl")])
    assert rc == EXIT_VALIDATION
    err = capsys.readouterr().err
    assert "error:" in err


def test_corrupt_model_is_validation_error(tmp_path, capsys, data_dir, artifacts):
    broken = tmp_path / "broken.json"
    broken.write_text("{}")
    rc = main(
        ["eval", str(data_dir / "mini_corpus.jsonl"), "--model", str(broken)]
    )
    assert rc == EXIT_VALIDATION


# ---------------------------------------------------------------- prepare

def test_prepare_writes_normalized_copy_and_histogram(tmp_path, capsys, data_dir):
    out = tmp_path / "prep.jsonl"
    rc = main(
        [
            "prepare",
            str(data_dir / "mini_corpus.jsonl"),
            "--lexicon",
            str(data_dir / "slang_lexicon.tsv"),
            "--out",
            str(out),
        ]
    )
    assert rc == EXIT_OK
    stdout = capsys.readouterr().out
    for label in ("greeting", "education", "farewell"):
        assert label in stdout
    assert out.exists()
    first = json.loads(out.read_text().splitlines()[0])
    assert set(first) == {"labels"}


def test_prepare_reports_each_bad_record(tmp_path, capsys):
    mixed = tmp_path / "mixed.jsonl"
    good = {
        "id": "g1", "raw_text": "mhoro", "intent": "greeting",
        "sentiment": "positive", "dialogue_act": "statement", "tone": "friendly",
    }
    mixed.write_text(json.dumps(good) + "\nnot json\n" + json.dumps({**good, "id": "g2", "sentiment": "bad"}) + "\n")
    rc = main(["prepare", str(mixed), "--out", str(tmp_path / "o.jsonl")])
    assert rc == EXIT_VALIDATION
    err = capsys.readouterr().err
    assert err.count("error:") == 2


# ---------------------------------------------------------------- train

def test_train_prints_run_config_header(tmp_path, capsys, data_dir):
    model = tmp_path / "m.json"
    rc = main(
        [
            "train",
            str(data_dir / "mini_corpus.jsonl"),
            "--lexicon",
            str(data_dir / "slang_lexicon.tsv"),
            "--model-out",
            str(model),
        ]
    )
    assert rc == EXIT_OK
    stdout = capsys.readouterr().out
    header_line = next(l for l in stdout.splitlines() if l.startswith("run config: "))
    header = json.loads(header_line[len("run config: "):])
    assert header == {
        "batch_size": 4,
        "early_stop_patience": 2,
        "epochs": 3,
        "learning_rate": 0.1,
        "seed": 42,
        "train_fraction": 0.8,
        "weight_decay": 0.1,
    }
    assert "validation accuracy:" in stdout


def test_train_writes_model_and_epoch_log(tmp_path, data_dir):
    model = tmp_path / "m.json"
    rc = main(
        [
            "train",
            str(data_dir / "mini_corpus.jsonl"),
            "--lexicon",
            str(data_dir / "slang_lexicon.tsv"),
            "--model-out",
            str(model),
        ]
    )
    assert rc == EXIT_OK
    assert model.exists()
    log = model.parent / (model.name + ".log.jsonl")
    entries = [json.loads(l) for l in log.read_text().splitlines()]
    assert 1 <= len(entries) <= 3
    assert all(set(e) == {"epoch", "train_loss", "val_loss", "stopped"} for e in entries)


def test_train_twice_is_byte_identical(tmp_path, data_dir):
    corpus = str(data_dir / "mini_corpus.jsonl")
    lex = str(data_dir / "slang_lexicon.tsv")
    m1, m2 = tmp_path / "m1.json", tmp_path / "m2.json"
    assert main(["train", corpus, "--lexicon", lex, "--model-out", str(m1)]) == EXIT_OK
    assert main(["train", corpus, "--lexicon", lex, "--model-out", str(m2)]) == EXIT_OK
    assert m1.read_bytes() == m2.read_bytes()


# ---------------------------------------------------------------- eval

def test_eval_prints_table_and_json(capsys, data_dir, artifacts):
    rc = main(
        [
            "eval",
            str(data_dir / "mini_corpus.jsonl"),
            "--lexicon",
            str(data_dir / "slang_lexicon.tsv"),
            "--model",
            str(artifacts["model"]),
        ]
    )
    assert rc == EXIT_OK
    stdout = capsys.readouterr().out
    assert "precision" in stdout and "recall" in stdout
    summary = json.loads(stdout.splitlines()[-1])
    assert set(summary) == {"accuracy", "loss", "weighted_f1", "weighted_precision", "weighted_recall"}
    assert summary["accuracy"] >= 0.9


# ---------------------------------------------------------------- ingest

def test_ingest_reports_counts(tmp_path, capsys, data_dir):
    out = tmp_path / "kb.json"
    rc = main(["ingest", str(data_dir / "kb"), "--kb-out", str(out)])
    assert rc == EXIT_OK
    stdout = capsys.readouterr().out
    assert "documents: 4" in stdout
    assert "chunks:" in stdout
    assert out.exists()


def test_ingest_empty_directory_warns(tmp_path, capsys):
    empty = tmp_path / "docs"
    empty.mkdir()
    rc = main(["ingest", str(empty), "--kb-out", str(tmp_path / "kb.json")])
    assert rc == EXIT_OK
    assert "warning" in capsys.readouterr().err


# ---------------------------------------------------------------- chat

def test_chat_replays_piped_script(monkeypatch, capsys, artifacts):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("wadii\nexit\n"))
    rc = main(["chat", *runtime_flags(artifacts)])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "bot> Hesi shamwari! Uri sei hako?" in out
    assert "bot> Zvakanaka, tichaonana zvakare!" in out


def test_chat_verbose_shows_route_and_confidence(monkeypatch, capsys, artifacts):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("wadii\n"))
    rc = main(["chat", "--verbose", *runtime_flags(artifacts)])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "[route=RULE intent=greeting confidence=" in out


def test_chat_threshold_override(monkeypatch, capsys, artifacts):
    import io

    # an impossible gate forces FALLBACK on every classified turn
    monkeypatch.setattr("sys.stdin", io.StringIO("wadii\n"))
    rc = main(["chat", "--threshold", "0.999", "--verbose", *runtime_flags(artifacts)])
    assert rc == EXIT_OK
    assert "[route=FALLBACK" in capsys.readouterr().out


# ---------------------------------------------------------------- compare

def test_compare_writes_diffing_transcript(tmp_path, capsys, data_dir, artifacts):
    json_out = tmp_path / "rows.json"
    rc = main(
        [
            "compare",
            str(data_dir / "dialogue_script.txt"),
            *runtime_flags(artifacts),
            "--json-out",
            str(json_out),
        ]
    )
    assert rc == EXIT_OK
    table = capsys.readouterr().out
    assert table.splitlines()[0].startswith("| # | input |")
    rows = json.loads(json_out.read_text())
    assert len(rows) == 5
    assert [r["hybrid"]["route"] for r in rows] == ["RULE", "RULE", "FALLBACK", "WORKFLOW", "EXIT"]
    assert all(r["rag_only"]["route"] == "RAG" for r in rows)
    assert any(r["differs"] for r in rows)


def test_compare_empty_script_emits_header_only(tmp_path, capsys, artifacts):
    script = tmp_path / "empty.txt"
    script.write_text("")
    rc = main(["compare", str(script), *runtime_flags(artifacts)])
    assert rc == EXIT_OK
    lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    assert len(lines) == 2  # header + separator


# ---------------------------------------------------------------- version

def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
