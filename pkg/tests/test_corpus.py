"""Corpus loading, normalization, splitting, and rebalancing."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shonachat.corpus import (
    Corpus,
    CorpusError,
    ParseError,
    SplitSpec,
    ValidationError,
    class_histogram,
    load_corpus,
    load_lexicon,
    normalize_text,
    rebalance,
    save_corpus,
    split,
)

from conftest import make_corpus, make_utterance


# ---------------------------------------------------------------- normalize

def test_normalize_lowercases_and_collapses_whitespace():
    assert normalize_text("  Mhoro   SHAMWARI \t nhasi ") == "mhoro shamwari nhasi"


def test_normalize_applies_nfc():
    # e + combining acute composes to the single code point
    assert normalize_text("café") == "café"


def test_normalize_lexicon_whole_tokens_only():
    lex = {"u": "you"}
    assert normalize_text("u uri", lex) == "you uri"  # 'u' inside 'uri' untouched


def test_normalize_lexicon_chain_reaches_fixed_point():
    lex = {"thx": "thanx", "thanx": "thanks"}
    assert normalize_text("thx", lex) == "thanks"


def test_normalize_lexicon_cycle_terminates():
    lex = {"a": "b", "b": "a"}
    out = normalize_text("a", lex)
    assert out in {"a", "b"}


def test_normalize_idempotent_on_bundled_lexicon(lexicon):
    text = "Hie swit mom, thanx 4 evrything"
    once = normalize_text(text, lexicon)
    assert normalize_text(once, lexicon) == once


# ---------------------------------------------------------------- lexicon file

def test_load_lexicon_rejects_multiword_keys(tmp_path):
    p = tmp_path / "lex.tsv"
    p.write_text("two words\tstandard\n")
    with pytest.raises(ValidationError):
        load_lexicon(p)


def test_load_lexicon_skips_comments_and_blanks(tmp_path):
    p = tmp_path / "lex.tsv"
    p.write_text("# comment\n\nu\tyou\n")
    assert load_lexicon(p) == {"u": "you"}


# ---------------------------------------------------------------- loading

def _write_jsonl(path, records, labels=None):
    lines = []
    if labels is not None:
        lines.append(json.dumps({"labels": labels}))
    lines += [json.dumps(r) for r in records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _record(uid="r1", raw="mhoro", intent="greeting", **overrides):
    rec = {
        "id": uid,
        "raw_text": raw,
        "intent": intent,
        "sentiment": "positive",
        "dialogue_act": "statement",
        "tone": "friendly",
        "code_mix": [],
    }
    rec.update(overrides)
    return rec


def test_load_corpus_reads_header_labels(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(p, [_record()], labels=["greeting", "farewell"])
    corpus = load_corpus(p)
    assert corpus.labels == ("greeting", "farewell")
    assert len(corpus) == 1
    assert corpus.utterances[0].normalized_text == "mhoro"


def test_load_corpus_without_header_sorts_observed_labels(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(p, [_record("a", intent="zeta"), _record("b", intent="alpha")])
    assert load_corpus(p).labels == ("alpha", "zeta")


def test_load_corpus_rejects_intent_outside_header(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(p, [_record(intent="other")], labels=["greeting"])
    with pytest.raises(ValidationError):
        load_corpus(p)


def test_load_corpus_rejects_bad_json(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"labels": ["greeting"]}\n{not json\n')
    with pytest.raises(ParseError):
        load_corpus(p)


def test_load_corpus_rejects_duplicate_ids(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(p, [_record("same"), _record("same", raw="hesi")])
    with pytest.raises(ValidationError):
        load_corpus(p)


def test_load_corpus_rejects_bad_enums(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(p, [_record(sentiment="angry")])
    with pytest.raises(ValidationError):
        load_corpus(p)


def test_load_corpus_collect_errors_keeps_good_records(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(
        p,
        [_record("ok1"), _record("bad", sentiment="angry"), _record("ok2", raw="hesi")],
    )
    corpus, errors = load_corpus(p, collect_errors=True)
    assert [u.id for u in corpus.utterances] == ["ok1", "ok2"]
    assert len(errors) == 1
    assert isinstance(errors[0], CorpusError)


def test_load_corpus_applies_lexicon(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(p, [_record(raw="thanx sha")])
    corpus = load_corpus(p, lexicon={"thanx": "thanks", "sha": "shamwari"})
    assert corpus.utterances[0].normalized_text == "thanks shamwari"
    assert corpus.utterances[0].raw_text == "thanx sha"


# ---------------------------------------------------------------- code-mix spans

def test_spans_must_stay_inside_text(tmp_path):
    p = tmp_path / "c.jsonl"
    span = {"start": 0, "end": 99, "language": "shona", "unit": "word"}
    _write_jsonl(p, [_record(code_mix=[span])])
    with pytest.raises(ValidationError):
        load_corpus(p)


def test_spans_must_not_overlap(tmp_path):
    p = tmp_path / "c.jsonl"
    spans = [
        {"start": 0, "end": 4, "language": "shona", "unit": "word"},
        {"start": 2, "end": 5, "language": "english", "unit": "word"},
    ]
    _write_jsonl(p, [_record(code_mix=spans)])
    with pytest.raises(ValidationError):
        load_corpus(p)


def test_spans_rejects_empty_interval(tmp_path):
    p = tmp_path / "c.jsonl"
    span = {"start": 2, "end": 2, "language": "shona", "unit": "word"}
    _write_jsonl(p, [_record(code_mix=[span])])
    with pytest.raises(ValidationError):
        load_corpus(p)


def test_bundled_corpus_spans_are_valid(mini_corpus):
    for u in mini_corpus:
        for s in u.code_mix:
            assert 0 <= s.start < s.end <= len(u.raw_text)
        for a, b in zip(u.code_mix, u.code_mix[1:]):
            assert a.end <= b.start


# ---------------------------------------------------------------- round trip

def test_save_load_round_trip(tmp_path, mini_corpus):
    p = tmp_path / "copy.jsonl"
    save_corpus(mini_corpus, p)
    again = load_corpus(p)
    assert again.labels == mini_corpus.labels
    assert again.utterances == mini_corpus.utterances


# ---------------------------------------------------------------- split

def test_split_fraction_rounding():
    # 0.8 * 7 = 5.6 -> floor(5.6 + 0.5) = 6
    corpus = make_corpus([(f"t{i}", "a") for i in range(7)] + [(f"u{i}", "b") for i in range(7)])
    tr, va = split(corpus, SplitSpec(train_fraction=0.8))
    hist = class_histogram(tr)
    assert hist == {"a": 6, "b": 6}
    assert class_histogram(va) == {"a": 1, "b": 1}


def test_split_clamps_to_keep_both_sides_nonempty():
    corpus = make_corpus([("x1", "a"), ("x2", "a")])
    tr, va = split(corpus, SplitSpec(train_fraction=0.99))
    assert len(tr) == 1 and len(va) == 1


def test_split_is_deterministic(mini_corpus):
    a_tr, a_va = split(mini_corpus, SplitSpec())
    b_tr, b_va = split(mini_corpus, SplitSpec())
    assert [u.id for u in a_tr] == [u.id for u in b_tr]
    assert [u.id for u in a_va] == [u.id for u in b_va]


def test_split_partitions_disjoint_and_complete(mini_corpus):
    tr, va = split(mini_corpus, SplitSpec())
    tr_ids = {u.id for u in tr}
    va_ids = {u.id for u in va}
    assert not tr_ids & va_ids
    assert tr_ids | va_ids == {u.id for u in mini_corpus}


def test_split_preserves_corpus_order_within_partitions(mini_corpus):
    order = {u.id: i for i, u in enumerate(mini_corpus)}
    tr, va = split(mini_corpus, SplitSpec())
    for part in (tr, va):
        positions = [order[u.id] for u in part]
        assert positions == sorted(positions)


def test_split_rejects_singleton_class():
    corpus = make_corpus([("only", "a"), ("x1", "b"), ("x2", "b")])
    with pytest.raises(ValidationError):
        split(corpus, SplitSpec())


def test_split_rejects_bad_fraction(mini_corpus):
    with pytest.raises(ValidationError):
        split(mini_corpus, SplitSpec(train_fraction=1.0))


@given(
    sizes=st.lists(st.integers(min_value=2, max_value=40), min_size=2, max_size=6),
    frac=st.floats(min_value=0.05, max_value=0.95),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
@settings(max_examples=60, deadline=None)
def test_split_per_class_sizes_match_rounding_rule(sizes, frac, seed):
    items = []
    for ci, size in enumerate(sizes):
        items += [(f"c{ci}t{k}", f"c{ci}") for k in range(size)]
    corpus = make_corpus(items)
    tr, _ = split(corpus, SplitSpec(train_fraction=frac, seed=seed))
    hist = class_histogram(tr)
    for ci, size in enumerate(sizes):
        want = int(np.floor(frac * size + 0.5))
        want = min(max(want, 1), size - 1)
        assert hist[f"c{ci}"] == want


# ---------------------------------------------------------------- rebalance

def test_rebalance_equalizes_at_median():
    items = (
        [(f"a{i}", "a") for i in range(3)]
        + [(f"b{i}", "b") for i in range(7)]
        + [(f"c{i}", "c") for i in range(5)]
    )
    out = rebalance(make_corpus(items), seed=0)
    assert class_histogram(out) == {"a": 5, "b": 5, "c": 5}


def test_rebalance_median_rounds_half_up():
    # counts 3 and 4: median 3.5, target 4
    items = [(f"a{i}", "a") for i in range(3)] + [(f"b{i}", "b") for i in range(4)]
    out = rebalance(make_corpus(items), seed=0)
    assert class_histogram(out) == {"a": 4, "b": 4}


def test_rebalance_upsampled_class_keeps_all_originals():
    items = [(f"a{i}", "a") for i in range(2)] + [(f"b{i}", "b") for i in range(8)]
    out = rebalance(make_corpus(items), seed=1)
    a_texts = [u.raw_text for u in out if u.intent == "a"]
    assert a_texts[:2] == ["a0", "a1"]  # originals first, duplicates appended
    assert set(a_texts) <= {"a0", "a1"}
    assert len(a_texts) == 5


def test_rebalance_downsample_preserves_input_order():
    items = [(f"a{i}", "a") for i in range(9)] + [(f"b{i}", "b") for i in range(3)]
    out = rebalance(make_corpus(items), seed=2)
    a_nums = [int(u.raw_text[1:]) for u in out if u.intent == "a"]
    assert a_nums == sorted(a_nums)
    assert len(a_nums) == len(set(a_nums)) == 6


def test_rebalance_deterministic_for_seed():
    items = [(f"a{i}", "a") for i in range(12)] + [(f"b{i}", "b") for i in range(4)]
    corpus = make_corpus(items)
    one = [u.id for u in rebalance(corpus, seed=9)]
    two = [u.id for u in rebalance(corpus, seed=9)]
    other = [u.id for u in rebalance(corpus, seed=10)]
    assert one == two
    assert one != other  # overwhelmingly likely with these sizes


def test_rebalance_empty_corpus_is_an_error():
    with pytest.raises(ValidationError):
        rebalance(Corpus(utterances=[], labels=()), seed=0)


@given(
    counts=st.lists(st.integers(min_value=1, max_value=30), min_size=1, max_size=7),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
@settings(max_examples=60, deadline=None)
def test_rebalance_histogram_uniform_at_median(counts, seed):
    items = []
    for ci, size in enumerate(counts):
        items += [(f"c{ci}t{k}", f"c{ci}") for k in range(size)]
    out = rebalance(make_corpus(items), seed=seed)
    target = int(np.floor(np.median(counts) + 0.5))
    hist = class_histogram(out)
    assert set(hist.values()) == {target}
    assert set(hist) == {f"c{ci}" for ci in range(len(counts))}
