"""Shared fixtures: bundled data files and one model trained per test run."""

import importlib.resources
from pathlib import Path

import pytest

from shonachat.classifier import train
from shonachat.corpus import (
    Corpus,
    DialogueAct,
    Sentiment,
    SplitSpec,
    Tone,
    Utterance,
    load_corpus,
    load_lexicon,
    rebalance,
    split,
)
from shonachat.rag import ingest, load_documents
from shonachat.router import load_policy


def data_path() -> Path:
    return Path(str(importlib.resources.files("shonachat").joinpath("data")))


def make_utterance(text: str, intent: str, uid: str = None) -> Utterance:
    """Minimal valid utterance for in-memory corpora."""
    return Utterance(
        id=uid or f"u-{abs(hash((text, intent))) % 10**8}",
        raw_text=text,
        normalized_text=text.lower().strip(),
        intent=intent,
        sentiment=Sentiment.NEUTRAL,
        dialogue_act=DialogueAct.STATEMENT,
        code_mix=(),
        tone=Tone.FRIENDLY,
    )


def make_corpus(items, labels=None) -> Corpus:
    utts = [make_utterance(t, i, uid=f"u{k}") for k, (t, i) in enumerate(items)]
    if labels is None:
        seen = []
        for u in utts:
            if u.intent not in seen:
                seen.append(u.intent)
        labels = tuple(seen)
    return Corpus(utterances=utts, labels=tuple(labels))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return data_path()


@pytest.fixture(scope="session")
def lexicon(data_dir):
    return load_lexicon(data_dir / "slang_lexicon.tsv")


@pytest.fixture(scope="session")
def mini_corpus(data_dir, lexicon):
    return load_corpus(data_dir / "mini_corpus.jsonl", lexicon=lexicon)


@pytest.fixture(scope="session")
def corpus_parts(mini_corpus):
    return split(mini_corpus, SplitSpec())


@pytest.fixture(scope="session")
def trained(corpus_parts):
    """(model, logs) trained once on the bundled corpus with defaults."""
    train_part, val_part = corpus_parts
    return train(rebalance(train_part, seed=42), val_part)


@pytest.fixture(scope="session")
def trained_model(trained):
    return trained[0]


@pytest.fixture(scope="session")
def policy(data_dir):
    return load_policy(data_dir / "policy.json")


@pytest.fixture(scope="session")
def kb(data_dir):
    return ingest(load_documents(data_dir / "kb"))
