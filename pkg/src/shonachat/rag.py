"""Domain knowledge base: chunking, hashed-n-gram embeddings, exact top-k retrieval.

Documents are split on blank-line paragraphs, oversized paragraphs at sentence
boundaries, and pathological sentences at word boundaries, so every chunk
holds at most ``max_chunk_words`` words and the chunks jointly cover the
document text. Retrieval is an exhaustive cosine scan (the knowledge base is
small); an approximate index could be swapped in behind the same interface.

The embedder is a deterministic stand-in for a neural sentence encoder:
L2-normalized term frequencies of hashed character n-grams (orders 3 to 5).
A neural embedder can be plugged in by constructing the KnowledgeBase with a
different embedding function, but the bundled one keeps every retrieval result
reproducible bit for bit.
"""

from __future__ import annotations

import base64
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import hashing
from .corpus import normalize_text

__all__ = [
    "Document",
    "Chunk",
    "RetrievalResult",
    "AnswerResult",
    "EmbedderSpec",
    "KnowledgeBase",
    "KBError",
    "embed",
    "ingest",
    "retrieve",
    "generate_answer",
    "load_documents",
    "save_kb",
    "load_kb",
]

KB_FORMAT_VERSION = 1

NO_INFORMATION_REPLY = (
    "Handina ruzivo rwakakwana panyaya iyi. I could not find anything about that "
    "in the program knowledge base; please ask about graduate programs, admissions, or tuition."
)


class KBError(Exception):
    pass


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    body: str
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.body:
            raise KBError(f"document {self.id!r} has an empty body")


@dataclass(frozen=True)
class Chunk:
    doc_id: str
    chunk_index: int
    text: str

    @property
    def chunk_id(self) -> str:
        return f"{self.doc_id}#{self.chunk_index}"


@dataclass(frozen=True)
class RetrievalResult:
    chunk: Chunk
    score: float
    title: str = ""


@dataclass(frozen=True)
class AnswerResult:
    text: str
    trace: tuple[str, ...]  # contributing chunk ids, best first


@dataclass(frozen=True)
class EmbedderSpec:
    dimension: int = 2**14
    char_orders: tuple[int, ...] = (3, 4, 5)

    def __post_init__(self):
        if not hashing.is_power_of_two(self.dimension):
            raise ValueError(f"embedding dimension must be a power of two, got {self.dimension}")

    def to_dict(self) -> dict:
        return {"dimension": self.dimension, "char_orders": list(self.char_orders)}

    @classmethod
    def from_dict(cls, obj: dict) -> "EmbedderSpec":
        return cls(dimension=int(obj["dimension"]), char_orders=tuple(int(n) for n in obj["char_orders"]))


DEFAULT_EMBEDDER = EmbedderSpec()


def embed(text: str, spec: EmbedderSpec = DEFAULT_EMBEDDER) -> np.ndarray:
    """L2-normalized hashed character n-gram term-frequency vector.

    Empty or n-gram-free text embeds to the zero vector, whose cosine against
    anything is 0 by convention.
    """
    cp = hashing.codepoints(normalize_text(text))
    vec = np.zeros(spec.dimension, dtype=np.float64)
    for order in spec.char_orders:
        b = hashing.ngram_buckets(cp, order, spec.dimension, hashing.family_salt(hashing.CHAR_FAMILY, order))
        if b.size:
            np.add.at(vec, b, 1.0)
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


_SENTENCE_RE = re.compile(r"(?<=[.!?])\s+")


def split_sentences(text: str) -> list[str]:
    parts = [p.strip() for p in _SENTENCE_RE.split(text)]
    return [p for p in parts if p]


def _chunk_document(doc: Document, max_chunk_words: int) -> list[Chunk]:
    chunks: list[Chunk] = []

    def emit(words: list[str]):
        chunks.append(Chunk(doc_id=doc.id, chunk_index=len(chunks), text=" ".join(words)))

    for para in re.split(r"\n\s*\n", doc.body):
        words = para.split()
        if not words:
            continue
        if len(words) <= max_chunk_words:
            emit(words)
            continue
        pending: list[str] = []
        for sentence in split_sentences(para):
            s_words = sentence.split()
            if len(pending) + len(s_words) > max_chunk_words and pending:
                emit(pending)
                pending = []
            while len(s_words) > max_chunk_words:  # single oversized sentence: hard split
                emit(s_words[:max_chunk_words])
                s_words = s_words[max_chunk_words:]
            pending.extend(s_words)
            if len(pending) >= max_chunk_words:
                emit(pending)
                pending = []
        if pending:
            emit(pending)
    return chunks


@dataclass
class KnowledgeBase:
    """Immutable after ingest: chunks, their vectors, and document titles."""

    chunks: list[Chunk]
    vectors: np.ndarray  # (n_chunks, dimension)
    titles: dict[str, str]
    embedder: EmbedderSpec = DEFAULT_EMBEDDER

    def __len__(self) -> int:
        return len(self.chunks)

    def answer(self, query: str, k: int = 5) -> AnswerResult:
        return generate_answer(query, retrieve(self, query, k))


def ingest(documents: Sequence[Document], max_chunk_words: int = 120) -> KnowledgeBase:
    """Chunk, embed, and index documents into a knowledge base."""
    if max_chunk_words < 1:
        raise KBError("max_chunk_words must be >= 1")
    seen: set[str] = set()
    for doc in documents:
        if doc.id in seen:
            raise KBError(f"duplicate document id {doc.id!r}")
        seen.add(doc.id)
    chunks: list[Chunk] = []
    for doc in documents:
        chunks.extend(_chunk_document(doc, max_chunk_words))
    spec = DEFAULT_EMBEDDER
    if chunks:
        vectors = np.stack([embed(c.text, spec) for c in chunks])
    else:
        vectors = np.zeros((0, spec.dimension), dtype=np.float64)
    titles = {doc.id: doc.title for doc in documents}
    return KnowledgeBase(chunks=chunks, vectors=vectors, titles=titles, embedder=spec)


def retrieve(kb: KnowledgeBase, query: str, k: int = 5) -> list[RetrievalResult]:
    """Exhaustive cosine top-k. Ties break on (doc_id, chunk_index)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(kb) == 0:
        return []
    q = embed(query, kb.embedder)
    scores = kb.vectors @ q
    ranked = sorted(
        range(len(kb.chunks)),
        key=lambda i: (-scores[i], kb.chunks[i].doc_id, kb.chunks[i].chunk_index),
    )
    return [
        RetrievalResult(chunk=kb.chunks[i], score=float(scores[i]), title=kb.titles.get(kb.chunks[i].doc_id, ""))
        for i in ranked[:k]
    ]


def generate_answer(query: str, results: Sequence[RetrievalResult]) -> AnswerResult:
    """Extractive answer assembly from retrieved chunks.

    Sentences from the retrieved chunks are ranked by how many normalized
    tokens they share with the query; up to three matching sentences are
    stitched into the reply, attributed to their source documents. Every
    sentence in the answer appears verbatim in some retrieved chunk.
    """
    if not results:
        return AnswerResult(text=NO_INFORMATION_REPLY, trace=())
    query_tokens = set(normalize_text(query).split())
    candidates = []  # (negative overlap, result rank, sentence index, sentence, result)
    for rank, res in enumerate(results):
        for si, sentence in enumerate(split_sentences(res.chunk.text)):
            overlap = len(query_tokens & set(normalize_text(sentence).split()))
            candidates.append((-overlap, rank, si, sentence, res))
    candidates.sort(key=lambda c: (c[0], c[1], c[2]))
    picked = [c for c in candidates if -c[0] >= 1][:3]
    if not picked:
        picked = candidates[:1]  # nothing overlaps; fall back to the best chunk's lead sentence
    picked.sort(key=lambda c: (c[1], c[2]))
    titles: list[str] = []
    trace: list[str] = []
    for c in picked:
        title = c[4].title or c[4].chunk.doc_id
        if title not in titles:
            titles.append(title)
        if c[4].chunk.chunk_id not in trace:
            trace.append(c[4].chunk.chunk_id)
    body = " ".join(c[3] for c in picked)
    return AnswerResult(text=f"Based on {', '.join(titles)}: {body}", trace=tuple(trace))


_HEADING_RE = re.compile(r"^#+\s*(.+)$", re.MULTILINE)


def load_documents(path: str | Path) -> list[Document]:
    """Load documents from a directory of .md/.txt files or a single JSON file.

    Directory mode: the filename stem is the id; the first Markdown heading,
    if any, is the title (and is dropped from the body).
    """
    path = Path(path)
    docs: list[Document] = []
    if path.is_dir():
        for file in sorted(path.iterdir()):
            if file.suffix.lower() not in {".md", ".txt"} or not file.is_file():
                continue
            text = file.read_text(encoding="utf-8")
            title = file.stem
            m = _HEADING_RE.search(text)
            body = text
            if m:
                title = m.group(1).strip()
                body = (text[: m.start()] + text[m.end() :]).strip()
            body = body.strip()
            if not body:
                continue
            docs.append(Document(id=file.stem, title=title, body=body))
        return docs
    try:
        items = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise KBError(f"{path}: invalid document JSON: {exc.msg}") from exc
    if not isinstance(items, list):
        raise KBError(f"{path}: expected a JSON array of documents")
    for item in items:
        docs.append(
            Document(
                id=str(item["id"]),
                title=str(item.get("title", item["id"])),
                body=str(item["body"]),
                metadata={str(k): str(v) for k, v in item.get("metadata", {}).items()},
            )
        )
    return docs


def save_kb(kb: KnowledgeBase, path: str | Path) -> None:
    """Persist the knowledge base; vectors are stored sparse (indices + values)."""
    vec_rows = []
    for row in kb.vectors:
        (nz,) = np.nonzero(row)
        vec_rows.append(
            {
                "indices": base64.b64encode(nz.astype(np.uint32).tobytes()).decode("ascii"),
                "values": base64.b64encode(row[nz].astype(np.float64).tobytes()).decode("ascii"),
            }
        )
    doc = {
        "format_version": KB_FORMAT_VERSION,
        "embedder": kb.embedder.to_dict(),
        "titles": kb.titles,
        "chunks": [{"doc_id": c.doc_id, "chunk_index": c.chunk_index, "text": c.text} for c in kb.chunks],
        "vectors": vec_rows,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8")


def load_kb(path: str | Path) -> KnowledgeBase:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise KBError(f"{path}: truncated or not a knowledge base file: {exc.msg}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != KB_FORMAT_VERSION:
        raise KBError(f"{path}: unsupported knowledge base format")
    spec = EmbedderSpec.from_dict(doc["embedder"])
    chunks = [Chunk(doc_id=c["doc_id"], chunk_index=int(c["chunk_index"]), text=c["text"]) for c in doc["chunks"]]
    vectors = np.zeros((len(chunks), spec.dimension), dtype=np.float64)
    for i, row in enumerate(doc["vectors"]):
        idx = np.frombuffer(base64.b64decode(row["indices"]), dtype=np.uint32).astype(np.int64)
        vals = np.frombuffer(base64.b64decode(row["values"]), dtype=np.float64)
        vectors[i, idx] = vals
    return KnowledgeBase(chunks=chunks, vectors=vectors, titles=dict(doc["titles"]), embedder=spec)
