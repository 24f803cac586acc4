"""Annotated Shona-English slang corpus: loading, normalization, resampling, splitting.

A corpus file is UTF-8 line-delimited JSON, one utterance per line, with an
optional first line ``{"labels": [...]}`` pinning the intent label set. Each
record carries the annotation layers used downstream: intent, sentiment,
dialogue act, code-mix spans, and tone.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "Sentiment",
    "DialogueAct",
    "Tone",
    "SpanLanguage",
    "SpanUnit",
    "CodeMixSpan",
    "Utterance",
    "Corpus",
    "SplitSpec",
    "CorpusError",
    "ParseError",
    "ValidationError",
    "normalize_text",
    "load_lexicon",
    "load_corpus",
    "save_corpus",
    "class_histogram",
    "rebalance",
    "split",
]


class CorpusError(Exception):
    """Base for corpus file problems."""


class ParseError(CorpusError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(CorpusError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class Sentiment(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


class DialogueAct(str, Enum):
    QUESTION = "question"
    STATEMENT = "statement"
    COMMAND = "command"


class Tone(str, Enum):
    FRIENDLY = "friendly"
    FORMAL = "formal"
    HUMOROUS = "humorous"


class SpanLanguage(str, Enum):
    SHONA = "shona"
    ENGLISH = "english"


class SpanUnit(str, Enum):
    WORD = "word"
    PHRASE = "phrase"


@dataclass(frozen=True)
class CodeMixSpan:
    """Character span of ``raw_text`` attributed to one language."""

    start: int
    end: int
    language: SpanLanguage
    unit: SpanUnit


@dataclass(frozen=True)
class Utterance:
    id: str
    raw_text: str
    normalized_text: str
    intent: str
    sentiment: Sentiment
    dialogue_act: DialogueAct
    code_mix: tuple[CodeMixSpan, ...]
    tone: Tone


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 42
    stratified: bool = True


@dataclass
class Corpus:
    """Validated utterances plus the closed intent label set."""

    utterances: list[Utterance] = field(default_factory=list)
    labels: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[Utterance]:
        return iter(self.utterances)


_WS_RE = re.compile(r"\s+")


def _basic_clean(text: str) -> str:
    # canonical composition, casefold to lowercase, collapse runs of whitespace
    text = unicodedata.normalize("NFC", text)
    text = text.lower()
    return _WS_RE.sub(" ", text).strip()


def normalize_text(raw: str, lexicon: Mapping[str, str] | None = None) -> str:
    """Clean ``raw`` and rewrite slang tokens to their standard forms.

    Pipeline per pass: NFC composition, lowercase, whitespace collapse, then
    whole-token lexicon substitution. Passes repeat until the text stops
    changing, so the result is a fixed point and the function is idempotent
    even when lexicon values are themselves slang keys. A revisited state
    (cycle in the lexicon) terminates the loop.
    """
    lexicon = lexicon or {}
    state = _basic_clean(raw)
    seen = {state}
    while True:
        tokens = state.split()
        nxt = _basic_clean(" ".join(lexicon.get(tok, tok) for tok in tokens))
        if nxt == state or nxt in seen:
            # fixed point, or re-entry into a substitution cycle; either way nxt
            # maps to itself under repeated passes
            return nxt
        seen.add(nxt)
        state = nxt


def load_lexicon(path: str | Path) -> dict[str, str]:
    """Read a ``slang<TAB>standard`` lexicon file."""
    lexicon: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise ParseError(lineno, f"expected slang<TAB>standard, got {line!r}")
        slang, standard = line.split("\t", 1)
        slang = slang.strip()
        if slang != slang.lower() or " " in slang:
            raise ValidationError(f"lexicon key must be a lowercase single token: {slang!r}", lineno)
        lexicon[slang] = standard.strip()
    return lexicon


def _parse_spans(raw_text: str, spans_json: object, line: int) -> tuple[CodeMixSpan, ...]:
    if spans_json is None:
        return ()
    if not isinstance(spans_json, list):
        raise ValidationError("code_mix must be a list", line)
    spans = []
    for item in spans_json:
        try:
            span = CodeMixSpan(
                start=int(item["start"]),
                end=int(item["end"]),
                language=SpanLanguage(item["language"]),
                unit=SpanUnit(item["unit"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad code_mix entry {item!r}: {exc}", line) from exc
        except ValueError as exc:
            raise ValidationError(str(exc), line) from exc
        if not (0 <= span.start < span.end <= len(raw_text)):
            raise ValidationError(
                f"code_mix span [{span.start}, {span.end}) outside text of length {len(raw_text)}",
                line,
            )
        spans.append(span)
    spans.sort(key=lambda s: (s.start, s.end))
    for prev, cur in zip(spans, spans[1:]):
        if cur.start < prev.end:
            raise ValidationError(
                f"code_mix spans overlap: [{prev.start},{prev.end}) and [{cur.start},{cur.end})",
                line,
            )
    return tuple(spans)


def _parse_record(
    obj: dict,
    line: int,
    labels: tuple[str, ...] | None,
    lexicon: Mapping[str, str] | None,
) -> Utterance:
    try:
        uid = str(obj["id"])
        raw_text = str(obj["raw_text"])
        intent = str(obj["intent"])
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}", line) from exc
    try:
        sentiment = Sentiment(obj["sentiment"])
        dialogue_act = DialogueAct(obj["dialogue_act"])
        tone = Tone(obj["tone"])
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}", line) from exc
    except ValueError as exc:
        raise ValidationError(str(exc), line) from exc
    if labels is not None and intent not in labels:
        raise ValidationError(f"intent {intent!r} not in corpus label set {list(labels)}", line)
    normalized = obj.get("normalized_text")
    if normalized is None:
        normalized = normalize_text(raw_text, lexicon)
    if raw_text and not normalized:
        raise ValidationError("normalized_text is empty for non-empty raw_text", line)
    spans = _parse_spans(raw_text, obj.get("code_mix", []), line)
    return Utterance(
        id=uid,
        raw_text=raw_text,
        normalized_text=str(normalized),
        intent=intent,
        sentiment=sentiment,
        dialogue_act=dialogue_act,
        code_mix=spans,
        tone=tone,
    )


def load_corpus(
    path: str | Path,
    lexicon: Mapping[str, str] | None = None,
    collect_errors: bool = False,
) -> Corpus | tuple[Corpus, list[CorpusError]]:
    """Load and validate a line-delimited corpus file.

    With ``collect_errors=True`` the loader skips bad records and returns
    ``(corpus, errors)`` instead of raising on the first problem.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    utterances: list[Utterance] = []
    errors: list[CorpusError] = []
    labels: tuple[str, ...] | None = None
    seen_ids: set[str] = set()
    start = 0
    if lines:
        first = lines[0].strip()
        if first:
            try:
                header = json.loads(first)
            except json.JSONDecodeError:
                header = None
            if isinstance(header, dict) and set(header) == {"labels"}:
                labels = tuple(str(x) for x in header["labels"])
                if len(set(labels)) != len(labels):
                    raise ValidationError("duplicate labels in header", 1)
                start = 1
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        try:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(lineno, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ParseError(lineno, "record is not a JSON object")
            utt = _parse_record(obj, lineno, labels, lexicon)
            if utt.id in seen_ids:
                raise ValidationError(f"duplicate id {utt.id!r}", lineno)
        except CorpusError as exc:
            if not collect_errors:
                raise
            errors.append(exc)
            continue
        seen_ids.add(utt.id)
        utterances.append(utt)
    if labels is None:
        labels = tuple(sorted({u.intent for u in utterances}))
    corpus = Corpus(utterances=utterances, labels=labels)
    if collect_errors:
        return corpus, errors
    return corpus


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back out, header line first. Round-trips with load_corpus."""
    out = [json.dumps({"labels": list(corpus.labels)}, ensure_ascii=False)]
    for u in corpus:
        out.append(
            json.dumps(
                {
                    "id": u.id,
                    "raw_text": u.raw_text,
                    "normalized_text": u.normalized_text,
                    "intent": u.intent,
                    "sentiment": u.sentiment.value,
                    "dialogue_act": u.dialogue_act.value,
                    "code_mix": [
                        {"start": s.start, "end": s.end, "language": s.language.value, "unit": s.unit.value}
                        for s in u.code_mix
                    ],
                    "tone": u.tone.value,
                },
                ensure_ascii=False,
            )
        )
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def class_histogram(corpus: Corpus | Iterable[Utterance]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for u in corpus:
        counts[u.intent] = counts.get(u.intent, 0) + 1
    return counts


def _median_target(counts: list[int]) -> int:
    # statistical median, rounded half up so the target is always an integer
    return int(np.floor(np.median(counts) + 0.5))


def rebalance(corpus: Corpus, seed: int) -> Corpus:
    """Equalize class sizes at the median count via hybrid resampling.

    Classes above the target are downsampled without replacement; classes
    below it keep all their records and gain duplicates drawn with
    replacement. Deterministic for a fixed seed. Output ids may repeat.
    """
    if len(corpus) == 0:
        raise ValidationError("cannot rebalance an empty corpus")
    by_label: dict[str, list[Utterance]] = {}
    for u in corpus:
        by_label.setdefault(u.intent, []).append(u)
    target = _median_target([len(v) for v in by_label.values()])
    rng = np.random.default_rng(seed)
    out: list[Utterance] = []
    label_order = [lab for lab in corpus.labels if lab in by_label]
    label_order += sorted(set(by_label) - set(label_order))
    for label in label_order:
        records = by_label[label]
        n = len(records)
        if n == target:
            out.extend(records)
        elif n > target:
            keep = np.sort(rng.choice(n, size=target, replace=False))
            out.extend(records[i] for i in keep)
        else:
            extra = rng.choice(n, size=target - n, replace=True)
            out.extend(records)
            out.extend(records[i] for i in extra)
    return Corpus(utterances=out, labels=corpus.labels)


def split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus]:
    """Partition a corpus into train/validation sets.

    Stratified mode shuffles within each intent class and rounds the per-class
    train size to the nearest record, clamped so both partitions stay
    non-empty for every represented class. Record order within each partition
    follows the input corpus.
    """
    if not 0.0 < spec.train_fraction < 1.0:
        raise ValidationError(f"train_fraction must be in (0,1), got {spec.train_fraction}")
    n = len(corpus)
    if n == 0:
        raise ValidationError("cannot split an empty corpus")
    rng = np.random.default_rng(spec.seed)
    train_idx: list[int] = []
    if spec.stratified:
        by_label: dict[str, list[int]] = {}
        for i, u in enumerate(corpus):
            by_label.setdefault(u.intent, []).append(i)
        if n < len(by_label):
            raise ValidationError("corpus smaller than its class count")
        label_order = [lab for lab in corpus.labels if lab in by_label]
        label_order += sorted(set(by_label) - set(label_order))
        for label in label_order:
            idx = by_label[label]
            if len(idx) < 2:
                raise ValidationError(
                    f"class {label!r} has {len(idx)} record(s); stratified split needs at least 2"
                )
            n_train = int(np.floor(spec.train_fraction * len(idx) + 0.5))
            n_train = min(max(n_train, 1), len(idx) - 1)
            perm = rng.permutation(len(idx))
            train_idx.extend(idx[j] for j in perm[:n_train])
    else:
        if n < 2:
            raise ValidationError("need at least 2 records to split")
        n_train = int(np.floor(spec.train_fraction * n + 0.5))
        n_train = min(max(n_train, 1), n - 1)
        perm = rng.permutation(n)
        train_idx.extend(int(i) for i in perm[:n_train])
    train_set = set(train_idx)
    train = [corpus.utterances[i] for i in range(n) if i in train_set]
    val = [corpus.utterances[i] for i in range(n) if i not in train_set]
    return (
        Corpus(utterances=train, labels=corpus.labels),
        Corpus(utterances=val, labels=corpus.labels),
    )
