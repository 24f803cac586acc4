"""Slang-aware Shona/English chatbot: corpus tools, intent classifier,
retrieval, dialogue routing, and an HTTP service.
"""

__version__ = "0.1.0"

from .classifier import (
    FeatureSpec,
    IntentModel,
    TrainingConfig,
    evaluate,
    featurize,
    load_model,
    save_model,
    train,
)
from .corpus import Corpus, SplitSpec, Utterance, load_corpus, normalize_text, rebalance, split
from .rag import KnowledgeBase, ingest, load_kb, retrieve, save_kb
from .router import DialoguePolicy, Route, Session, load_policy, route_turn
from .service import ChatService, ServiceConfig, build_service, create_app

__all__ = [
    "ChatService",
    "Corpus",
    "DialoguePolicy",
    "FeatureSpec",
    "IntentModel",
    "KnowledgeBase",
    "Route",
    "ServiceConfig",
    "Session",
    "SplitSpec",
    "TrainingConfig",
    "Utterance",
    "build_service",
    "create_app",
    "evaluate",
    "featurize",
    "ingest",
    "load_corpus",
    "load_kb",
    "load_model",
    "load_policy",
    "normalize_text",
    "rebalance",
    "retrieve",
    "route_turn",
    "save_kb",
    "save_model",
    "split",
    "train",
]
