"""Intent classification behind a backend-agnostic interface.

The default ``reference`` backend is a multinomial logistic regression over
hashed character n-gram and word features, trained with seeded mini-batch
gradient descent and early stopping on validation loss. It is deterministic,
CPU-only, and fast enough for the bundled corpus. A ``transformer`` backend
that fine-tunes a pretrained multilingual encoder can be registered through
the same interface (see ``transformer_backend``); it needs optional heavy
dependencies and pretrained weights on disk.
"""

from __future__ import annotations

import base64
import hashlib
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import hashing
from .corpus import Corpus, normalize_text

__all__ = [
    "FeatureSpec",
    "LabelCodec",
    "TrainingConfig",
    "IntentPrediction",
    "EvalReport",
    "IntentModel",
    "EpochLog",
    "EarlyStopper",
    "TrainingError",
    "ModelIOError",
    "BackendUnavailableError",
    "featurize",
    "train",
    "evaluate",
    "compute_metrics",
    "training_objective",
    "save_model",
    "load_model",
]

MODEL_FORMAT_VERSION = 1
REFERENCE_BACKEND = "reference"
TRANSFORMER_BACKEND = "transformer"

_WORD_RE = re.compile(r"\S+")


class TrainingError(Exception):
    pass


class ModelIOError(Exception):
    pass


class BackendUnavailableError(Exception):
    pass


@dataclass(frozen=True)
class FeatureSpec:
    """Hashed feature layout for the reference backend."""

    dimension: int = 4096
    char_orders: tuple[int, ...] = (2, 3, 4)
    include_words: bool = True
    max_features: int = 512

    def __post_init__(self):
        if not hashing.is_power_of_two(self.dimension):
            raise ValueError(f"feature dimension must be a power of two, got {self.dimension}")
        if not self.char_orders or any(n < 1 for n in self.char_orders):
            raise ValueError(f"char n-gram orders must be positive, got {self.char_orders}")
        if self.max_features < 1:
            raise ValueError("max_features must be >= 1")

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "char_orders": list(self.char_orders),
            "include_words": self.include_words,
            "max_features": self.max_features,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "FeatureSpec":
        return cls(
            dimension=int(obj["dimension"]),
            char_orders=tuple(int(n) for n in obj["char_orders"]),
            include_words=bool(obj["include_words"]),
            max_features=int(obj["max_features"]),
        )


def featurize(text: str, spec: FeatureSpec) -> np.ndarray:
    """Hashed count vector of a single text.

    Character n-grams (one bucket stream per order) and optional whole-word
    features are emitted in reading order: features are keyed by their start
    offset in the normalized text, shorter n-grams first at equal offsets and
    the whole word last. Only the first ``spec.max_features`` features in that
    order are counted, mirroring fixed-length input truncation.
    """
    norm = normalize_text(text)
    cp = hashing.codepoints(norm)
    buckets: list[np.ndarray] = []
    starts: list[np.ndarray] = []
    keys: list[np.ndarray] = []
    for order in spec.char_orders:
        b = hashing.ngram_buckets(cp, order, spec.dimension, hashing.family_salt(hashing.CHAR_FAMILY, order))
        buckets.append(b)
        starts.append(np.arange(b.size, dtype=np.int64))
        keys.append(np.full(b.size, order, dtype=np.int64))
    if spec.include_words:
        word_key = max(spec.char_orders) + 1
        salt = hashing.family_salt(hashing.WORD_FAMILY, 1)
        wb, ws = [], []
        for m in _WORD_RE.finditer(norm):
            wb.append(hashing.token_bucket(m.group(), spec.dimension, salt))
            ws.append(m.start())
        buckets.append(np.asarray(wb, dtype=np.int64))
        starts.append(np.asarray(ws, dtype=np.int64))
        keys.append(np.full(len(wb), word_key, dtype=np.int64))
    all_buckets = np.concatenate(buckets) if buckets else np.empty(0, dtype=np.int64)
    vec = np.zeros(spec.dimension, dtype=np.float64)
    if all_buckets.size == 0:
        return vec
    if all_buckets.size > spec.max_features:
        all_starts = np.concatenate(starts)
        all_keys = np.concatenate(keys)
        order = np.lexsort((all_keys, all_starts))
        all_buckets = all_buckets[order[: spec.max_features]]
    np.add.at(vec, all_buckets, 1.0)
    return vec


@dataclass(frozen=True)
class LabelCodec:
    """Bijection between intent labels and contiguous class indices."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels in codec")
        if not self.labels:
            raise ValueError("codec needs at least one label")

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown label {label!r}") from None

    def label_of(self, index: int) -> str:
        return self.labels[index]

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class TrainingConfig:
    """Knobs shared by both backends.

    ``learning_rate=None`` resolves to the backend default: 0.1 for the
    reference backend, 2e-5 for the transformer backend.
    """

    learning_rate: float | None = None
    batch_size: int = 4
    epochs: int = 3
    weight_decay: float = 0.1
    early_stop_patience: int = 2
    seed: int = 42
    max_sequence_length: int = 512

    def __post_init__(self):
        if self.learning_rate is not None and self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1 or self.epochs < 1 or self.max_sequence_length < 1:
            raise ValueError("batch_size, epochs, and max_sequence_length must be positive")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be non-negative")
        if self.early_stop_patience < 1:
            raise ValueError("early_stop_patience must be >= 1")

    def resolved_learning_rate(self, backend: str) -> float:
        if self.learning_rate is not None:
            return self.learning_rate
        return 0.1 if backend == REFERENCE_BACKEND else 2e-5


@dataclass(frozen=True)
class IntentPrediction:
    label: str
    confidence: float
    distribution: tuple[float, ...]


@dataclass(frozen=True)
class EpochLog:
    epoch: int
    train_loss: float
    val_loss: float
    stopped: bool

    def to_json(self) -> str:
        return json.dumps(
            {"epoch": self.epoch, "train_loss": self.train_loss, "val_loss": self.val_loss, "stopped": self.stopped}
        )


@dataclass
class EvalReport:
    accuracy: float
    weighted_f1: float
    weighted_precision: float
    weighted_recall: float
    loss: float
    confusion_matrix: np.ndarray  # gold rows x predicted columns
    per_class: dict[str, dict[str, float]]
    labels: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "weighted_f1": self.weighted_f1,
            "weighted_precision": self.weighted_precision,
            "weighted_recall": self.weighted_recall,
            "loss": self.loss,
        }


class EarlyStopper:
    """Minimum-validation-loss checkpointing with a patience budget.

    ``update`` returns True once the loss has failed to improve for
    ``patience`` consecutive evaluations. Ties count as no improvement, so the
    earliest checkpoint at the minimum is kept.
    """

    def __init__(self, patience: int):
        if patience < 1:
            raise ValueError("patience must be >= 1")
        self.patience = patience
        self.best_loss = math.inf
        self.best_epoch: int | None = None
        self.best_snapshot = None
        self.evaluations = 0
        self._bad = 0

    def update(self, loss: float, epoch: int, snapshot) -> bool:
        self.evaluations += 1
        if loss < self.best_loss:
            self.best_loss = loss
            self.best_epoch = epoch
            self.best_snapshot = snapshot
            self._bad = 0
            return False
        self._bad += 1
        return self._bad >= self.patience


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    m = logits.max(axis=-1, keepdims=True)
    shifted = logits - m
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(_log_softmax(logits))


def cross_entropy(weights: np.ndarray, bias: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    """Mean negative log-likelihood of the gold classes, no penalty term."""
    logp = _log_softmax(X @ weights + bias)
    return float(-logp[np.arange(len(y)), y].mean())


def training_objective(
    weights: np.ndarray,
    bias: np.ndarray,
    X: np.ndarray,
    y: np.ndarray,
    weight_decay: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Penalized loss and its analytic gradient for one batch.

    Objective: mean cross-entropy plus ``weight_decay/2 * ||W||^2`` (the bias
    is not penalized). Returns (loss, grad_weights, grad_bias).
    """
    n = len(y)
    logits = X @ weights + bias
    logp = _log_softmax(logits)
    loss = float(-logp[np.arange(n), y].mean()) + 0.5 * weight_decay * float((weights**2).sum())
    delta = np.exp(logp)
    delta[np.arange(n), y] -= 1.0
    grad_w = X.T @ delta / n + weight_decay * weights
    grad_b = delta.mean(axis=0)
    return loss, grad_w, grad_b


@dataclass
class IntentModel:
    """A trained classifier: label codec plus backend parameters."""

    codec: LabelCodec
    backend_id: str
    feature_spec: FeatureSpec
    weights: np.ndarray | None = None
    bias: np.ndarray | None = None
    extra: dict = field(default_factory=dict)  # non-reference backend payload

    def predict_logits(self, text: str) -> np.ndarray:
        if self.backend_id == REFERENCE_BACKEND:
            vec = featurize(text, self.feature_spec)
            return vec @ self.weights + self.bias
        predict_fn = _BACKEND_PREDICT.get(self.backend_id)
        if predict_fn is None:
            raise BackendUnavailableError(f"no predict function registered for backend {self.backend_id!r}")
        return predict_fn(self, text)

    def predict_proba(self, text: str) -> np.ndarray:
        return softmax(self.predict_logits(text))

    def predict(self, text: str) -> IntentPrediction:
        dist = self.predict_proba(text)
        idx = int(np.argmax(dist))  # argmax takes the lowest index on ties
        return IntentPrediction(
            label=self.codec.label_of(idx),
            confidence=float(dist[idx]),
            distribution=tuple(float(p) for p in dist),
        )


# backend registries; the transformer backend registers itself on import
_BACKEND_TRAIN: dict[str, Callable] = {}
_BACKEND_PREDICT: dict[str, Callable] = {}


def register_backend(backend_id: str, train_fn: Callable, predict_fn: Callable) -> None:
    _BACKEND_TRAIN[backend_id] = train_fn
    _BACKEND_PREDICT[backend_id] = predict_fn


def _design_matrix(data: Corpus, codec: LabelCodec, spec: FeatureSpec) -> tuple[np.ndarray, np.ndarray]:
    X = np.stack([featurize(u.normalized_text, spec) for u in data])
    y = np.array([codec.index_of(u.intent) for u in data], dtype=np.int64)
    return X, y


def train(
    train_corpus: Corpus,
    val_corpus: Corpus,
    config: TrainingConfig | None = None,
    feature_spec: FeatureSpec | None = None,
    backend: str = REFERENCE_BACKEND,
) -> tuple[IntentModel, list[EpochLog]]:
    """Train an intent classifier; returns the best checkpoint and the epoch log.

    The model returned is the checkpoint with minimum validation loss;
    training halts early once validation loss has not improved for
    ``config.early_stop_patience`` consecutive epochs.
    """
    config = config or TrainingConfig()
    if len(train_corpus) == 0 or len(val_corpus) == 0:
        raise TrainingError("train and validation corpora must be non-empty")
    train_labels = set(u.intent for u in train_corpus)
    extra = set(u.intent for u in val_corpus) - train_labels
    if extra:
        raise TrainingError(f"validation labels absent from training data: {sorted(extra)}")
    if backend != REFERENCE_BACKEND:
        train_fn = _BACKEND_TRAIN.get(backend)
        if train_fn is None:
            raise BackendUnavailableError(
                f"backend {backend!r} is not registered; import its module or install its extras"
            )
        return train_fn(train_corpus, val_corpus, config)

    codec = LabelCodec(tuple(lab for lab in train_corpus.labels if lab in train_labels) or tuple(sorted(train_labels)))
    spec = feature_spec or FeatureSpec(max_features=config.max_sequence_length)
    X, y = _design_matrix(train_corpus, codec, spec)
    Xv, yv = _design_matrix(val_corpus, codec, spec)
    n, d = X.shape
    n_classes = len(codec)
    lr = config.resolved_learning_rate(REFERENCE_BACKEND)
    rng = np.random.default_rng(config.seed)
    weights = np.zeros((d, n_classes), dtype=np.float64)
    bias = np.zeros(n_classes, dtype=np.float64)
    stopper = EarlyStopper(config.early_stop_patience)
    logs: list[EpochLog] = []
    for epoch in range(1, config.epochs + 1):
        perm = rng.permutation(n)
        for lo in range(0, n, config.batch_size):
            batch = perm[lo : lo + config.batch_size]
            _, grad_w, grad_b = training_objective(weights, bias, X[batch], y[batch], config.weight_decay)
            weights -= lr * grad_w
            bias -= lr * grad_b
        train_loss = cross_entropy(weights, bias, X, y)
        val_loss = cross_entropy(weights, bias, Xv, yv)
        if not (math.isfinite(train_loss) and math.isfinite(val_loss)):
            raise TrainingError(f"non-finite loss at epoch {epoch} (train={train_loss}, val={val_loss})")
        stop = stopper.update(val_loss, epoch, (weights.copy(), bias.copy()))
        logs.append(EpochLog(epoch=epoch, train_loss=train_loss, val_loss=val_loss, stopped=stop))
        if stop:
            break
    best_w, best_b = stopper.best_snapshot
    model = IntentModel(codec=codec, backend_id=REFERENCE_BACKEND, feature_spec=spec, weights=best_w, bias=best_b)
    return model, logs


def compute_metrics(
    golds: Sequence[str], preds: Sequence[str], labels: Sequence[str]
) -> tuple[np.ndarray, dict[str, dict[str, float]], dict[str, float]]:
    """Confusion matrix and per-class / weighted scores from label pairs.

    Per-class precision is TP/(TP+FP) and recall TP/(TP+FN), both 0 when the
    denominator is 0; F1 is their harmonic mean. Weighted averages use gold
    support as weights. Returns (confusion, per_class, overall).
    """
    if len(golds) != len(preds):
        raise ValueError("golds and preds must have equal length")
    index = {lab: i for i, lab in enumerate(labels)}
    confusion = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for g, p in zip(golds, preds):
        confusion[index[g], index[p]] += 1
    per_class: dict[str, dict[str, float]] = {}
    total = int(confusion.sum())
    weighted_p = weighted_r = weighted_f1 = 0.0
    for lab, i in index.items():
        tp = int(confusion[i, i])
        fp = int(confusion[:, i].sum()) - tp
        fn = int(confusion[i, :].sum()) - tp
        support = tp + fn
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class[lab] = {"precision": precision, "recall": recall, "f1": f1, "support": float(support)}
        weighted_p += support * precision
        weighted_r += support * recall
        weighted_f1 += support * f1
    if total > 0:
        weighted_p /= total
        weighted_r /= total
        weighted_f1 /= total
    accuracy = float(np.trace(confusion)) / total if total > 0 else 0.0
    overall = {
        "accuracy": accuracy,
        "weighted_precision": weighted_p,
        "weighted_recall": weighted_r,
        "weighted_f1": weighted_f1,
    }
    return confusion, per_class, overall


def evaluate(model: IntentModel, data: Corpus) -> EvalReport:
    """Score a model on labeled data: confusion-matrix metrics plus mean cross-entropy."""
    if len(data) == 0:
        raise ValueError("evaluation data must be non-empty")
    labels = model.codec.labels
    golds, preds = [], []
    nll = 0.0
    for u in data:
        logp = _log_softmax(model.predict_logits(u.normalized_text))
        idx = int(np.argmax(logp))
        preds.append(model.codec.label_of(idx))
        golds.append(u.intent)
        nll -= float(logp[model.codec.index_of(u.intent)])
    confusion, per_class, overall = compute_metrics(golds, preds, labels)
    return EvalReport(
        accuracy=overall["accuracy"],
        weighted_f1=overall["weighted_f1"],
        weighted_precision=overall["weighted_precision"],
        weighted_recall=overall["weighted_recall"],
        loss=nll / len(data),
        confusion_matrix=confusion,
        per_class=per_class,
        labels=labels,
    )


def _b64(arr: np.ndarray) -> str:
    return base64.b64encode(np.ascontiguousarray(arr, dtype=np.float64).tobytes()).decode("ascii")


def _payload_checksum(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def save_model(model: IntentModel, path: str | Path) -> None:
    """Persist a model as a JSON container with a checksummed parameter payload."""
    if model.backend_id == REFERENCE_BACKEND:
        payload = {
            "dtype": "float64",
            "shape": list(model.weights.shape),
            "weights": _b64(model.weights),
            "bias": _b64(model.bias),
        }
    else:
        payload = dict(model.extra)
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "backend_id": model.backend_id,
        "labels": list(model.codec.labels),
        "feature_spec": model.feature_spec.to_dict(),
        "checksum": _payload_checksum(payload),
        "payload": payload,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> IntentModel:
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        raise ModelIOError(f"{path}: empty model file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelIOError(f"{path}: truncated or not a model file: {exc.msg}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise ModelIOError(f"{path}: missing format_version header")
    if doc["format_version"] != MODEL_FORMAT_VERSION:
        raise ModelIOError(
            f"{path}: format_version {doc['format_version']} unsupported (expected {MODEL_FORMAT_VERSION})"
        )
    try:
        payload = doc["payload"]
        if _payload_checksum(payload) != doc["checksum"]:
            raise ModelIOError(f"{path}: payload checksum mismatch; file corrupt")
        codec = LabelCodec(tuple(doc["labels"]))
        spec = FeatureSpec.from_dict(doc["feature_spec"])
        backend_id = doc["backend_id"]
        if backend_id == REFERENCE_BACKEND:
            d, c = (int(x) for x in payload["shape"])
            weights = np.frombuffer(base64.b64decode(payload["weights"]), dtype=np.float64).reshape(d, c).copy()
            bias = np.frombuffer(base64.b64decode(payload["bias"]), dtype=np.float64).copy()
            if bias.shape != (c,) or len(codec) != c:
                raise ModelIOError(f"{path}: parameter shapes inconsistent with label count")
            return IntentModel(codec=codec, backend_id=backend_id, feature_spec=spec, weights=weights, bias=bias)
        return IntentModel(codec=codec, backend_id=backend_id, feature_spec=spec, extra=dict(payload))
    except ModelIOError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelIOError(f"{path}: malformed model file: {exc}") from exc
