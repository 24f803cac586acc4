"""Optional fine-tuned transformer backend for intent classification.

Importing this module registers a "transformer" backend with the classifier
registry. It needs the `transformers` and `torch` packages (install the
package with the [transformer] extra); nothing here is imported by the rest
of the package at module load time, so the reference backend keeps working
on machines without GPU-sized dependencies.

The fine-tuned network is saved with `save_pretrained` into a directory next
to the model file; the model file itself records only that directory, the
label codec, and the checkpoint name.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .classifier import (
    TRANSFORMER_BACKEND,
    BackendUnavailableError,
    EarlyStopper,
    EpochLog,
    FeatureSpec,
    IntentModel,
    LabelCodec,
    TrainingConfig,
    TrainingError,
    register_backend,
)
from .corpus import Corpus

DEFAULT_CHECKPOINT = "bert-base-multilingual-cased"


def _load_stack():
    try:
        import torch
        import transformers
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise BackendUnavailableError(
            "the transformer backend needs the 'transformers' and 'torch' "
            "packages; install shonachat[transformer]"
        ) from exc
    return torch, transformers


def _train(train_corpus: Corpus, val_corpus: Corpus, config: TrainingConfig):
    """Fine-tune a sequence classifier; returns (IntentModel, epoch logs)."""
    torch, transformers = _load_stack()
    torch.manual_seed(config.seed)

    present = set(u.intent for u in train_corpus)
    codec = LabelCodec(tuple(lab for lab in train_corpus.labels if lab in present) or tuple(sorted(present)))
    try:
        tokenizer = transformers.AutoTokenizer.from_pretrained(DEFAULT_CHECKPOINT)
        net = transformers.AutoModelForSequenceClassification.from_pretrained(
            DEFAULT_CHECKPOINT, num_labels=len(codec)
        )
    except OSError as exc:
        raise TrainingError(
            f"could not load checkpoint {DEFAULT_CHECKPOINT!r}; it must be "
            "downloaded or cached before training"
        ) from exc

    def encode(corpus):
        texts = [u.normalized_text for u in corpus]
        ys = torch.tensor([codec.index_of(u.intent) for u in corpus])
        enc = tokenizer(
            texts,
            truncation=True,
            max_length=config.max_sequence_length,
            padding=True,
            return_tensors="pt",
        )
        return enc, ys

    lr = config.resolved_learning_rate(TRANSFORMER_BACKEND)
    optimizer = torch.optim.AdamW(net.parameters(), lr=lr, weight_decay=config.weight_decay)
    train_enc, train_y = encode(train_corpus)
    val_enc, val_y = encode(val_corpus)
    n = len(train_y)

    def full_loss(enc, ys) -> float:
        net.eval()
        with torch.no_grad():
            out = net(**enc, labels=ys)
        return float(out.loss)

    stopper = EarlyStopper(config.early_stop_patience)
    logs: list[EpochLog] = []
    rng = np.random.default_rng(config.seed)
    for epoch in range(1, config.epochs + 1):
        net.train()
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = torch.from_numpy(order[start : start + config.batch_size].copy())
            batch = {k: v[idx] for k, v in train_enc.items()}
            out = net(**batch, labels=train_y[idx])
            out.loss.backward()
            optimizer.step()
            optimizer.zero_grad()
        train_loss = full_loss(train_enc, train_y)
        val_loss = full_loss(val_enc, val_y)
        snapshot = {k: v.detach().clone() for k, v in net.state_dict().items()}
        stop = stopper.update(val_loss, epoch, snapshot)
        logs.append(EpochLog(epoch=epoch, train_loss=train_loss, val_loss=val_loss, stopped=stop))
        if stop:
            break

    net.load_state_dict(stopper.best_snapshot)
    model = IntentModel(
        codec=codec,
        backend_id=TRANSFORMER_BACKEND,
        feature_spec=FeatureSpec(),
        extra={"checkpoint": DEFAULT_CHECKPOINT, "net": net, "tokenizer": tokenizer},
    )
    return model, logs


def _restore(model: IntentModel):
    _, transformers = _load_stack()
    model_dir = model.extra.get("model_dir")
    if not model_dir or not Path(model_dir).is_dir():
        raise TrainingError(f"transformer model directory not found: {model_dir!r}")
    tokenizer = transformers.AutoTokenizer.from_pretrained(model_dir)
    net = transformers.AutoModelForSequenceClassification.from_pretrained(model_dir)
    model.extra["net"] = net
    model.extra["tokenizer"] = tokenizer
    return net, tokenizer


def _predict_logits(model: IntentModel, text: str) -> np.ndarray:
    torch, _ = _load_stack()
    net = model.extra.get("net")
    tokenizer = model.extra.get("tokenizer")
    if net is None or tokenizer is None:
        net, tokenizer = _restore(model)
    enc = tokenizer([text], truncation=True, padding=True, return_tensors="pt")
    net.eval()
    with torch.no_grad():
        out = net(**enc)
    return out.logits.numpy().astype(np.float64)[0]


def save_network(model: IntentModel, model_dir: str | Path) -> None:
    """Write the fine-tuned network, leaving `extra` JSON-safe for save_model.

    After this call `model.extra` holds only the checkpoint name and the
    directory reference, so the regular model container can be written.
    """
    net = model.extra.get("net")
    tokenizer = model.extra.get("tokenizer")
    if net is None or tokenizer is None:
        raise TrainingError("model holds no in-memory network to save")
    net.save_pretrained(model_dir)
    tokenizer.save_pretrained(model_dir)
    model.extra = {"checkpoint": model.extra.get("checkpoint", DEFAULT_CHECKPOINT), "model_dir": str(model_dir)}


register_backend(TRANSFORMER_BACKEND, _train, _predict_logits)
