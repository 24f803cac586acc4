"""Per-turn dialogue routing.

Decision order for every turn, checked in exactly this sequence:

1. exit command (normalized, exact match) -> EXIT with the farewell reply
2. active application workflow -> WORKFLOW (consume the turn as a slot value)
3. empty input -> FALLBACK with a clarification prompt
4. classify; confidence below the policy threshold -> FALLBACK
5. education intent plus an application trigger -> start the workflow
6. intent with rule templates -> RULE (deterministic template rotation)
7. anything else -> retrieval-augmented answer

Every turn is appended to the session history, whatever the route.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .classifier import IntentModel
from .corpus import normalize_text
from .rag import KnowledgeBase, generate_answer, retrieve

__all__ = [
    "Route",
    "RuleTable",
    "WorkflowSlot",
    "WorkflowSpec",
    "DialoguePolicy",
    "Turn",
    "Session",
    "ResponsePlan",
    "PolicyError",
    "route_turn",
    "advance_workflow",
    "select_template",
    "export_log",
    "parse_log",
    "load_policy",
]

EDUCATION_INTENT = "education"
FAREWELL_INTENT = "farewell"
GREETING_INTENT = "greeting"


class PolicyError(Exception):
    pass


class Route(str, Enum):
    EXIT = "EXIT"
    RULE = "RULE"
    RAG = "RAG"
    WORKFLOW = "WORKFLOW"
    FALLBACK = "FALLBACK"


@dataclass(frozen=True)
class RuleTable:
    rules: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        for intent, templates in self.rules.items():
            if not templates or any(not t for t in templates):
                raise PolicyError(f"rule table for {intent!r} has an empty template list or template")
        for required in (GREETING_INTENT, FAREWELL_INTENT):
            if required not in self.rules:
                raise PolicyError(f"rule table must cover the {required!r} intent")

    def __contains__(self, intent: str) -> bool:
        return intent in self.rules

    def __getitem__(self, intent: str) -> tuple[str, ...]:
        return self.rules[intent]


@dataclass(frozen=True)
class WorkflowSlot:
    name: str
    prompt: str


@dataclass(frozen=True)
class WorkflowSpec:
    slots: tuple[WorkflowSlot, ...]
    completion_template: str

    def __post_init__(self):
        if not self.slots:
            raise PolicyError("workflow needs at least one slot")
        names = [s.name for s in self.slots]
        if len(set(names)) != len(names):
            raise PolicyError(f"duplicate workflow slot names: {names}")


@dataclass(frozen=True)
class DialoguePolicy:
    rules: RuleTable
    workflow: WorkflowSpec
    confidence_threshold: float = 0.5
    exit_commands: frozenset[str] = frozenset({"exit"})
    fallback_reply: str = "Sorry, I did not understand that."
    clarification_reply: str | None = None
    application_triggers: frozenset[str] = frozenset({"apply", "application", "kunyoresa"})
    retrieval_k: int = 5

    def __post_init__(self):
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise PolicyError(f"confidence_threshold must be in [0,1], got {self.confidence_threshold}")
        if not self.exit_commands:
            raise PolicyError("exit_commands must be non-empty")

    @property
    def clarification(self) -> str:
        return self.clarification_reply or self.fallback_reply


@dataclass(frozen=True)
class Turn:
    user_text: str
    intent: str | None
    confidence: float | None
    route: Route
    reply: str
    timestamp: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "user_text": self.user_text,
                "intent": self.intent,
                "confidence": self.confidence,
                "route": self.route.value,
                "reply": self.reply,
                "timestamp": self.timestamp,
            },
            ensure_ascii=False,
        )


def turn_from_json(line: str) -> Turn:
    obj = json.loads(line)
    return Turn(
        user_text=obj["user_text"],
        intent=obj["intent"],
        confidence=obj["confidence"],
        route=Route(obj["route"]),
        reply=obj["reply"],
        timestamp=obj["timestamp"],
    )


@dataclass
class WorkflowState:
    next_slot_index: int = 0
    filled: dict[str, str] = field(default_factory=dict)


@dataclass
class Session:
    id: str
    history: list[Turn] = field(default_factory=list)
    workflow: WorkflowState | None = None
    created_at: float = 0.0
    last_active: float = 0.0

    @property
    def in_workflow(self) -> bool:
        return self.workflow is not None

    def append_turn(self, turn: Turn) -> None:
        self.history.append(turn)
        self.last_active = turn.timestamp


@dataclass(frozen=True)
class ResponsePlan:
    route: Route
    reply: str
    intent: str | None = None
    confidence: float | None = None
    retrieval_trace: tuple[dict, ...] | None = None
    session_terminated: bool = False


def select_template(templates: Sequence[str], session: Session, intent: str) -> str:
    """Rotate through templates: index = prior RULE turns with this intent, mod len."""
    if not templates:
        raise PolicyError("template list is empty")
    prior = sum(1 for t in session.history if t.route is Route.RULE and t.intent == intent)
    return templates[prior % len(templates)]


def advance_workflow(session: Session, text: str, spec: WorkflowSpec) -> ResponsePlan:
    """Consume one workflow turn: store the slot value and prompt for the next.

    A blank value re-prompts the same slot without advancing. Filling the last
    slot renders the completion template and returns the session to idle.
    """
    if not session.in_workflow:
        raise PolicyError("advance_workflow called outside a workflow")
    state = session.workflow
    value = text.strip()
    if not value:
        return ResponsePlan(route=Route.WORKFLOW, reply=spec.slots[state.next_slot_index].prompt)
    state.filled[spec.slots[state.next_slot_index].name] = value
    if state.next_slot_index + 1 < len(spec.slots):
        state.next_slot_index += 1
        return ResponsePlan(route=Route.WORKFLOW, reply=spec.slots[state.next_slot_index].prompt)
    reply = spec.completion_template.format(**state.filled)
    session.workflow = None
    return ResponsePlan(route=Route.WORKFLOW, reply=reply)


def route_turn(
    session: Session,
    text: str,
    model: IntentModel,
    policy: DialoguePolicy,
    kb: KnowledgeBase,
    clock: Callable[[], float] = time.time,
) -> ResponsePlan:
    """Decide one turn and append it to the session history."""
    normalized = normalize_text(text)
    if normalized in policy.exit_commands:
        plan = ResponsePlan(
            route=Route.EXIT,
            reply=policy.rules[FAREWELL_INTENT][0],
            session_terminated=True,
        )
    elif session.in_workflow:
        plan = advance_workflow(session, text, policy.workflow)
    elif not normalized:
        plan = ResponsePlan(route=Route.FALLBACK, reply=policy.clarification)
    else:
        pred = model.predict(text)
        if pred.confidence < policy.confidence_threshold:
            plan = ResponsePlan(
                route=Route.FALLBACK,
                reply=policy.fallback_reply,
                intent=pred.label,
                confidence=pred.confidence,
            )
        elif pred.label == EDUCATION_INTENT and any(trig in normalized for trig in policy.application_triggers):
            session.workflow = WorkflowState()
            plan = ResponsePlan(
                route=Route.WORKFLOW,
                reply=policy.workflow.slots[0].prompt,
                intent=pred.label,
                confidence=pred.confidence,
            )
        elif pred.label in policy.rules:
            plan = ResponsePlan(
                route=Route.RULE,
                reply=select_template(policy.rules[pred.label], session, pred.label),
                intent=pred.label,
                confidence=pred.confidence,
            )
        else:
            try:
                results = retrieve(kb, text, policy.retrieval_k)
                answer = generate_answer(text, results)
                trace = tuple({"chunk_id": r.chunk.chunk_id, "score": r.score} for r in results)
                plan = ResponsePlan(
                    route=Route.RAG,
                    reply=answer.text,
                    intent=pred.label,
                    confidence=pred.confidence,
                    retrieval_trace=trace,
                )
            except Exception as exc:  # retrieval failure degrades to fallback
                plan = ResponsePlan(
                    route=Route.FALLBACK,
                    reply=policy.fallback_reply,
                    intent=pred.label,
                    confidence=pred.confidence,
                    retrieval_trace=({"error": str(exc)},),
                )
    now = clock()
    session.append_turn(
        Turn(
            user_text=text,
            intent=plan.intent,
            confidence=plan.confidence,
            route=plan.route,
            reply=plan.reply,
            timestamp=now,
        )
    )
    return plan


def export_log(session: Session) -> str:
    """History as line-delimited JSON; one line per turn, append order preserved."""
    return "".join(t.to_json() + "\n" for t in session.history)


def parse_log(text: str) -> list[Turn]:
    return [turn_from_json(line) for line in text.splitlines() if line.strip()]


def load_policy(path: str | Path) -> DialoguePolicy:
    """Parse the bundled policy document: gate, rules, triggers, and workflow."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PolicyError(f"{path}: invalid policy JSON: {exc.msg}") from exc
    try:
        rules = RuleTable({intent: tuple(ts) for intent, ts in doc["rules"].items()})
        workflow = WorkflowSpec(
            slots=tuple(WorkflowSlot(name=s["name"], prompt=s["prompt"]) for s in doc["workflow"]["slots"]),
            completion_template=doc["workflow"]["completion"],
        )
        return DialoguePolicy(
            rules=rules,
            workflow=workflow,
            confidence_threshold=float(doc.get("threshold", 0.5)),
            exit_commands=frozenset(doc.get("exit_commands", ["exit"])),
            fallback_reply=doc["fallback_reply"],
            clarification_reply=doc.get("clarification_reply"),
            application_triggers=frozenset(doc.get("triggers", [])),
            retrieval_k=int(doc.get("k", 5)),
        )
    except PolicyError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise PolicyError(f"{path}: malformed policy document: {exc}") from exc
